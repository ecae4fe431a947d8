#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stop_token>
#include <vector>

#include "robustgame/game.hpp"
#include "robustgame/lipschitz.hpp"
#include "robustgame/search.hpp"

namespace robustgame {

// Lower bound on the distance from x to any input of another class:
// g(x, N(x)) / max_{c' != N(x)} (h_N(x) + h_c'), floored at 0.
double admissible_heuristic(const Network& net, const Tensor& x, const LipschitzConstants& lip);
double admissible_heuristic(std::span<const double> probs, const LipschitzConstants& lip);

// Frontier priority: distance so far plus heuristic.
double estimate(Metric m, const Tensor& base, const Tensor& x, double h);

// Lower bound on |y - base| for any y beyond x (same direction from base on
// every dimension) with |y - x| >= h: dist + h under L1,
// sqrt(dist^2 + h^2) under L2, max(dist, h) under Linf.
double certified_combination(Metric m, double dist, double h);

struct AstarOptions {
  // max_iterations counts expansions; an unbounded condition runs to the end.
  TerminationCondition tc;
  // Values above 1 inflate the heuristic and turn the search into an
  // adversarial-example search that reports no lower bounds.
  double inadmissible_factor = 1.0;
  // Without it the search is uniform-cost and needs no Lipschitz constants.
  bool use_heuristic = true;
  Stopwatch clock;
  std::stop_token stop;
  std::function<void(const ManipulationState&, double)> on_expand;
};

struct AstarResult {
  // Certified lower bound, exact when converged. In attack mode: the
  // distance of the adversarial input found, or ExceedsBudget.
  Bound value = Bound::value(0.0);
  bool converged = false;
  std::shared_ptr<const Witness> witness;
  std::vector<LowerPoint> trace;
  std::size_t expansions = 0;
};

// Best-first search for the grid safe radius of a cooperative game.
// Throws ConfigError in competitive mode, or when an admissible run lacks
// Lipschitz constants.
AstarResult astar_run(const Game& game, const AstarOptions& options);

}  // namespace robustgame
