#pragma once

#include <cstddef>
#include <memory>
#include <stop_token>
#include <vector>

#include "robustgame/game.hpp"
#include "robustgame/search.hpp"

namespace robustgame {

struct AlphaBetaOptions {
  // max_iterations counts expansions over all features; unbounded runs to the end.
  TerminationCondition tc;
  Stopwatch clock;
  std::stop_token stop;
};

struct AlphaBetaResult {
  // Root alpha: a certified lower bound on grid feature robustness, exact
  // when converged.
  Bound value = Bound::value(0.0);
  bool converged = false;
  // Minimal adversarial input of the feature attaining the root value.
  std::shared_ptr<const Witness> witness;
  std::vector<FeaturePoint> trace;
  std::size_t expansions = 0;
};

// Features are taken in partition order. Each feature's minimal adversarial
// distance comes from a uniform-cost search over its dimensions; a feature
// is abandoned as soon as it holds an adversarial input no farther than the
// current root alpha. Throws ConfigError in cooperative mode.
AlphaBetaResult alphabeta_run(const Game& game, const AlphaBetaOptions& options);

// Unpruned max over features of min over forward move sequences inside the
// feature. Throws OracleTooLargeError beyond `state_budget` visited states.
Bound minimax_reference(const Game& game, std::size_t state_budget);

}  // namespace robustgame
