#include "robustgame/manipulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "robustgame/errors.hpp"

namespace robustgame {

double grid_value(double base_value, int offset, double tau) {
  return std::clamp(base_value + offset * tau, 0.0, 1.0);
}

ManipulationState::ManipulationState(std::shared_ptr<const Tensor> base, double tau)
    : base_(std::move(base)), tau_(tau) {
  if (!base_) throw InputError("manipulation state needs a base input");
  if (!(tau_ > 0.0)) throw InputError("tau must be positive");
  offsets_.assign(base_->size(), 0);
}

ManipulationState::ManipulationState(std::shared_ptr<const Tensor> base, double tau, Offsets offsets)
    : base_(std::move(base)), tau_(tau), offsets_(std::move(offsets)) {
  if (!base_) throw InputError("manipulation state needs a base input");
  if (!(tau_ > 0.0)) throw InputError("tau must be positive");
  if (offsets_.size() != base_->size()) throw InputError("offset vector length differs from input size");
}

double ManipulationState::value(std::size_t i) const {
  return grid_value((*base_)[i], offsets_[i], tau_);
}

Tensor ManipulationState::reconstruct() const {
  Tensor out = *base_;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (offsets_[i] != 0) out[i] = value(i);
  }
  return out;
}

ManipulationState ManipulationState::apply(AtomicManipulation a) const {
  if (a.dim >= offsets_.size()) throw InputError("manipulated dimension out of range");
  if (a.sign != 1 && a.sign != -1) throw InputError("manipulation sign must be -1 or +1");
  ManipulationState next = *this;
  next.offsets_[a.dim] += a.sign;
  return next;
}

ManipulationState ManipulationState::apply_set(std::span<const std::size_t> dims,
                                               std::span<const int> psi) const {
  if (dims.size() != psi.size()) throw InputError("one sign per manipulated dimension required");
  std::vector<std::size_t> order(dims.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dims[a] < dims[b]; });
  ManipulationState s = *this;
  for (std::size_t j : order) s = s.apply({dims[j], psi[j]});
  return s;
}

bool ManipulationState::changes(AtomicManipulation a) const {
  if (a.dim >= offsets_.size()) throw InputError("manipulated dimension out of range");
  const double before = value(a.dim);
  const double after = grid_value((*base_)[a.dim], offsets_[a.dim] + a.sign, tau_);
  return before != after;
}

bool ManipulationState::is_forward(AtomicManipulation a) const {
  const int o = offsets_.at(a.dim);
  return o == 0 || (o > 0) == (a.sign > 0);
}

std::size_t ManipulationState::depth() const {
  std::size_t total = 0;
  for (int o : offsets_) total += static_cast<std::size_t>(std::abs(o));
  return total;
}

double ManipulationState::distance_from_base(Metric m) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (offsets_[i] == 0) continue;
    const double diff = std::abs(value(i) - (*base_)[i]);
    switch (m) {
      case Metric::kL0: acc += diff != 0.0 ? 1.0 : 0.0; break;
      case Metric::kL1: acc += diff; break;
      case Metric::kL2: acc += diff * diff; break;
      case Metric::kLInf: acc = std::max(acc, diff); break;
    }
  }
  return m == Metric::kL2 ? std::sqrt(acc) : acc;
}

std::size_t OffsetsHash::operator()(const Offsets& o) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ o.size();
  for (int v : o) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool is_in_budget(const ManipulationState& s, Metric m, double d) {
  return s.distance_from_base(m) <= d + kRadiusSlack;
}

std::vector<int> dimension_offsets(double base_value, double tau, double d) {
  std::vector<int> pos;
  std::vector<int> neg;
  for (int dir : {+1, -1}) {
    auto& out = dir > 0 ? pos : neg;
    double prev = base_value;
    for (int o = dir;; o += dir) {
      const double v = grid_value(base_value, o, tau);
      if (v == prev || std::abs(v - base_value) > d + kRadiusSlack) break;
      out.push_back(o);
      prev = v;
    }
  }
  std::vector<int> result{0};
  for (std::size_t i = 0; i < std::max(pos.size(), neg.size()); ++i) {
    if (i < pos.size()) result.push_back(pos[i]);
    if (i < neg.size()) result.push_back(neg[i]);
  }
  return result;
}

namespace {

struct GridWalker {
  const Tensor& base;
  double tau;
  Metric metric;
  double d;
  const std::function<bool(const Offsets&)>& visit;
  std::vector<std::vector<int>> choices;
  Offsets current;
  std::size_t visited = 0;
  bool stopped = false;

  // `acc` is the partial L1 sum, L2 sum of squares or Linf max.
  void walk(std::size_t i, double acc) {
    if (stopped) return;
    if (i == choices.size()) {
      ++visited;
      if (!visit(current)) stopped = true;
      return;
    }
    for (int o : choices[i]) {
      const double diff = std::abs(grid_value(base[i], o, tau) - base[i]);
      double next = acc;
      switch (metric) {
        case Metric::kL0: next += diff != 0.0 ? 1.0 : 0.0; break;
        case Metric::kL1: next += diff; break;
        case Metric::kL2: next += diff * diff; break;
        case Metric::kLInf: next = std::max(next, diff); break;
      }
      const double dist = metric == Metric::kL2 ? std::sqrt(next) : next;
      if (dist > d + kRadiusSlack) continue;
      current[i] = o;
      walk(i + 1, next);
      current[i] = 0;
      if (stopped) return;
    }
  }
};

}  // namespace

std::size_t for_each_grid_point(const Tensor& base, double tau, Metric m, double d,
                                const std::function<bool(const Offsets&)>& visit) {
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  GridWalker walker{base, tau, m, d, visit, {}, Offsets(base.size(), 0)};
  walker.choices.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) walker.choices.push_back(dimension_offsets(base[i], tau, d));
  walker.walk(0, 0.0);
  return walker.visited;
}

std::size_t count_grid_points(const Tensor& base, double tau, Metric m, double d, std::size_t cap) {
  std::size_t count = 0;
  for_each_grid_point(base, tau, m, d, [&](const Offsets&) { return ++count <= cap; });
  return count;
}

}  // namespace robustgame
