#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stop_token>
#include <vector>

#include "robustgame/game.hpp"
#include "robustgame/search.hpp"

namespace robustgame {

// Selection weight of a child: d * n'/r' + sqrt(2 ln n / n'). Unvisited
// children and visited children with zero accumulated reward weigh +inf.
double ucb_weight(std::size_t parent_n, double child_r, std::size_t child_n, double d);

struct MctsOptions {
  TerminationCondition tc;
  std::uint64_t seed = 0;
  Stopwatch clock;
  std::stop_token stop;
};

struct MctsResult {
  Bound upper = Bound::exceeds(0.0);
  std::shared_ptr<const Witness> witness;
  // The whole game tree was explored, so `upper` is the game value.
  bool exact = false;
  std::size_t iterations = 0;
  std::size_t nodes = 0;
  std::vector<UpperPoint> trace;
};

// Anytime upper bounds by Monte Carlo tree search. Cooperative games bound
// the grid safe radius, competitive games the grid feature robustness.
// The tree only contains moves that never shrink an offset, which keeps it
// finite without changing the game value. Throws ConfigError when the
// termination condition is unbounded.
MctsResult mcts_run(const Game& game, const MctsOptions& options);

}  // namespace robustgame
