#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robustgame/game.hpp"
#include "robustgame/lipschitz.hpp"
#include "robustgame/search.hpp"

namespace robustgame {

enum class GridStatus { kCertified, kViolated, kExhausted, kUnchecked };
std::string grid_status_name(GridStatus s);

struct GridCheckResult {
  GridStatus status = GridStatus::kUnchecked;
  // Grid point where the inequality fails.
  std::optional<Offsets> witness;
  std::size_t points_checked = 0;
};

// Checks d(k,tau) <= 2 g(x', N(x')) / max_{c'}(h_N(x') + h_c') at the grid
// points within the radius: all of them when there are at most
// `sample_budget`, otherwise `sample_budget` points drawn uniformly (a clean
// sample yields kExhausted, which carries no guarantee).
GridCheckResult check_grid_condition(const Network& net, const GameConfig& cfg, const Tensor& base,
                                     const LipschitzConstants& lip, std::size_t sample_budget,
                                     std::uint64_t seed = 0);

enum class Problem { kMsr, kFr };
std::string problem_name(Problem p);

struct RunOptions {
  TerminationCondition tc;
  std::uint64_t seed = 0;
  // Grid points examined by the certification check.
  std::size_t sample_budget = 100000;
};

struct BoundReport {
  Problem problem = Problem::kMsr;
  std::optional<Bound> lower;
  std::optional<Bound> upper;
  // Half the grid-cell diameter, set only when the grid condition holds.
  std::optional<double> error_bound;
  GridCheckResult grid;
  bool converged = false;
  // Input realizing the upper bound.
  std::shared_ptr<const Witness> witness;
  std::vector<UpperPoint> upper_trace;
  std::vector<LowerPoint> lower_trace;
  std::vector<FeaturePoint> feature_trace;
  std::vector<std::string> diagnostics;
};

// Upper bounds by MCTS and lower bounds by A* run side by side on a shared
// clock. Without Lipschitz constants the lower-bound search is uniform-cost
// and the grid check is skipped.
BoundReport run_msr(const Game& game, const RunOptions& options);

// Competitive MCTS for upper bounds and alpha-beta for lower bounds.
BoundReport run_fr(const Game& game, const RunOptions& options);

enum class VerdictKind { kSafe, kControllable, kAllFragile, kUndetermined };
std::string verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::kUndetermined;
  double budget = 0.0;
  std::optional<Bound> safe_radius_certified;
  std::optional<Bound> nearest_adversarial_distance;
  bool controllable = false;
};

// Classifies a perturbation budget d' against the safe radius and feature
// robustness: below the radius nothing is adversarial; between the two an
// adversary exists but some feature restriction stops it; at or above the
// feature robustness every feature is fragile.
Verdict budget_verdict(const BoundReport& msr, const BoundReport& fr, double budget);

}  // namespace robustgame
