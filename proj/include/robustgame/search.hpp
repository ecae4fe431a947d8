#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>

#include "robustgame/bound.hpp"
#include "robustgame/game.hpp"

namespace robustgame {

// Budget for an anytime search; the first limit reached stops it.
// `epsilon` stops after ceil(1/epsilon) consecutive iterations without
// improvement.
struct TerminationCondition {
  std::optional<std::size_t> max_iterations;
  std::optional<double> max_seconds;
  std::optional<double> epsilon;

  bool unbounded() const { return !max_iterations && !max_seconds && !epsilon; }
  // Throws ConfigError for non-positive limits.
  void validate() const;
  std::optional<std::size_t> patience() const;
};

// Wall clock shared by searches that run side by side.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// One point of an upper-bound trace. `witness` is the input realizing the
// bound (absent while the bound is ExceedsBudget).
struct UpperPoint {
  std::size_t iteration = 0;
  double elapsed = 0.0;
  Bound upper = Bound::exceeds(0.0);
  std::shared_ptr<const Witness> witness;
};

struct LowerPoint {
  std::size_t phase = 0;
  double elapsed = 0.0;
  Bound lower = Bound::value(0.0);
  bool converged = false;
};

struct FeaturePoint {
  std::size_t feature_id = 0;
  double elapsed = 0.0;
  Bound feature_beta = Bound::value(0.0);
  Bound root_alpha = Bound::value(0.0);
  bool pruned = false;
};

}  // namespace robustgame
