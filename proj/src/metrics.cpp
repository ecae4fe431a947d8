#include "robustgame/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "robustgame/errors.hpp"

namespace robustgame {

Metric parse_metric(std::string_view text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "l0") return Metric::kL0;
  if (lower == "l1") return Metric::kL1;
  if (lower == "l2") return Metric::kL2;
  if (lower == "linf" || lower == "inf" || lower == "l_inf") return Metric::kLInf;
  throw InputError("unknown metric '" + std::string(text) + "' (expected L1, L2 or Linf)");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kL0: return "L0";
    case Metric::kL1: return "L1";
    case Metric::kL2: return "L2";
    case Metric::kLInf: return "Linf";
  }
  return "?";
}

void require_guarantee_metric(Metric m) {
  if (m == Metric::kL0) throw UnsupportedMetricError("L0 carries no guarantee; use L1, L2 or Linf");
}

double distance(Metric m, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("distance between tensors of different sizes");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    switch (m) {
      case Metric::kL0: acc += diff != 0.0 ? 1.0 : 0.0; break;
      case Metric::kL1: acc += diff; break;
      case Metric::kL2: acc += diff * diff; break;
      case Metric::kLInf: acc = std::max(acc, diff); break;
    }
  }
  return m == Metric::kL2 ? std::sqrt(acc) : acc;
}

double distance(Metric m, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw InputError("distance between tensors of different shapes");
  return distance(m, a.data(), b.data());
}

bool in_neighborhood(Metric m, const Tensor& center, const Tensor& x, double radius) {
  if (radius < 0.0) throw InputError("neighborhood radius must be non-negative");
  return distance(m, center, x) <= radius + kRadiusSlack;
}

double grid_cell_radius(Metric m, std::size_t n_dims, double tau) {
  require_guarantee_metric(m);
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  const double n = static_cast<double>(n_dims);
  switch (m) {
    case Metric::kL1: return n * tau;
    case Metric::kL2: return std::sqrt(n * tau * tau);
    default: return tau;
  }
}

}  // namespace robustgame
