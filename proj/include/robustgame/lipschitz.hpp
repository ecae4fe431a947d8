#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>

#include "json.hpp"
#include "robustgame/metrics.hpp"
#include "robustgame/network.hpp"

namespace robustgame {

// Per-class Lipschitz constants: |N(x,c) - N(x',c)| <= h_c * L_k(x - x').
// The constants are supplied by the user; they are never estimated here.
class LipschitzConstants {
 public:
  explicit LipschitzConstants(std::map<std::size_t, double> per_class);

  // Same constant for every class.
  static LipschitzConstants uniform(std::size_t num_classes, double value);

  double operator[](std::size_t c) const;
  std::size_t size() const { return per_class_.size(); }
  const std::map<std::size_t, double>& per_class() const { return per_class_; }

  // max over c' != c of (h_c + h_c'): the denominator shared by the grid
  // condition and the admissible heuristic.
  double pair_bound(std::size_t c) const;

  // Every class of a network with `num_classes` outputs has a constant.
  void require_covers(std::size_t num_classes) const;

  LipschitzConstants scaled(double factor) const;

 private:
  std::map<std::size_t, double> per_class_;
};

// JSON object mapping class index (as a string key) to constant, e.g. {"0": 1.5, "1": 2}.
LipschitzConstants parse_lipschitz(const nlohmann::json& doc);
LipschitzConstants load_lipschitz(const std::filesystem::path& path);

struct LipschitzViolation {
  std::size_t cls = 0;
  double confidence_change = 0.0;
  double allowed_change = 0.0;
  Tensor a;
  Tensor b;
};

// Samples `pairs` input pairs (uniform points plus nearby perturbations at
// several scales) and returns the first pair where the per-class bound fails.
// A violation means the constants are too small for this network.
std::optional<LipschitzViolation> check_lipschitz_sample(const Network& net,
                                                         const LipschitzConstants& lip,
                                                         Metric metric, std::size_t pairs,
                                                         std::uint64_t seed);

}  // namespace robustgame
