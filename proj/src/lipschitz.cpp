#include "robustgame/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "robustgame/errors.hpp"

namespace robustgame {

LipschitzConstants::LipschitzConstants(std::map<std::size_t, double> per_class)
    : per_class_(std::move(per_class)) {
  if (per_class_.empty()) throw ConfigError("no Lipschitz constants given");
  for (const auto& [c, v] : per_class_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("Lipschitz constant for class " + std::to_string(c) + " must be positive");
    }
  }
}

LipschitzConstants LipschitzConstants::uniform(std::size_t num_classes, double value) {
  std::map<std::size_t, double> m;
  for (std::size_t c = 0; c < num_classes; ++c) m[c] = value;
  return LipschitzConstants(std::move(m));
}

double LipschitzConstants::operator[](std::size_t c) const {
  auto it = per_class_.find(c);
  if (it == per_class_.end()) throw ConfigError("no Lipschitz constant for class " + std::to_string(c));
  return it->second;
}

double LipschitzConstants::pair_bound(std::size_t c) const {
  const double own = (*this)[c];
  double best = 0.0;
  for (const auto& [other, v] : per_class_) {
    if (other != c) best = std::max(best, own + v);
  }
  if (best == 0.0) throw ConfigError("Lipschitz constants cover only one class");
  return best;
}

void LipschitzConstants::require_covers(std::size_t num_classes) const {
  for (std::size_t c = 0; c < num_classes; ++c) (void)(*this)[c];
}

LipschitzConstants LipschitzConstants::scaled(double factor) const {
  std::map<std::size_t, double> m = per_class_;
  for (auto& [c, v] : m) v *= factor;
  return LipschitzConstants(std::move(m));
}

LipschitzConstants parse_lipschitz(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("Lipschitz file must be a JSON object {class: constant}");
  std::map<std::size_t, double> m;
  for (const auto& [key, value] : doc.items()) {
    std::size_t pos = 0;
    unsigned long cls = 0;
    try {
      cls = std::stoul(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != key.size() || key.empty()) throw ParseError("Lipschitz key '" + key + "' is not a class index");
    if (!value.is_number()) throw ParseError("Lipschitz constant for class " + key + " is not a number");
    m[cls] = value.get<double>();
  }
  return LipschitzConstants(std::move(m));
}

LipschitzConstants load_lipschitz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open Lipschitz file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("Lipschitz file " + path.string() + ": " + e.what());
  }
  return parse_lipschitz(doc);
}

std::optional<LipschitzViolation> check_lipschitz_sample(const Network& net,
                                                         const LipschitzConstants& lip,
                                                         Metric metric, std::size_t pairs,
                                                         std::uint64_t seed) {
  require_guarantee_metric(metric);
  lip.require_covers(net.num_classes());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  constexpr double kScales[] = {1.0, 0.1, 0.01, 0.001};

  const std::size_t n = net.input_size();
  for (std::size_t p = 0; p < pairs; ++p) {
    Tensor a(net.input_shape());
    Tensor b(net.input_shape());
    const double scale = kScales[p % std::size(kScales)];
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = unit(rng);
      b[i] = std::clamp(a[i] + scale * sym(rng), 0.0, 1.0);
    }
    const double dist = distance(metric, a, b);
    const std::vector<double> pa = net.forward(a);
    const std::vector<double> pb = net.forward(b);
    for (std::size_t c = 0; c < pa.size(); ++c) {
      const double change = std::abs(pa[c] - pb[c]);
      const double allowed = lip[c] * dist;
      // Tolerate round-off in the forward pass itself.
      if (change > allowed + 1e-12) return LipschitzViolation{c, change, allowed, a, b};
    }
  }
  return std::nullopt;
}

}  // namespace robustgame
