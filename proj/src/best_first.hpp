#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stop_token>
#include <vector>

#include "robustgame/game.hpp"
#include "robustgame/search.hpp"

namespace robustgame::detail {

// Best-first search over the grid points reachable by moving `dims`.
// Frontier order is distance + factor * h, ties first-in first-out; a state
// is visited once. The certified lower bound is the smallest norm-consistent
// combination of distance and h over the frontier.
struct BestFirstParams {
  std::vector<std::size_t> dims;
  // Heuristic from the class confidences of a state; empty means 0.
  std::function<double(std::span<const double>)> heuristic;
  double factor = 1.0;
  // Stop at the first adversarial state popped; no certified bounds.
  bool attack = false;
  // Stop as soon as an adversarial state at distance <= cutoff is known.
  std::optional<Bound> cutoff;
  std::optional<std::size_t> max_expansions;
  std::optional<double> max_seconds;
  const Stopwatch* clock = nullptr;
  std::stop_token stop;
  std::function<void(const ManipulationState&, double)> on_expand;
  // Called whenever every state with fewer than `phase` manipulations has
  // been expanded, with the running certified lower bound.
  std::function<void(std::size_t, const Bound&)> on_phase;
};

struct BestFirstOutcome {
  // Certified lower bound; the exact value when converged.
  Bound lower = Bound::value(0.0);
  bool converged = false;
  bool cut = false;
  bool truncated = false;
  std::size_t phases = 0;
  std::shared_ptr<const Witness> best;
  std::size_t expansions = 0;
};

BestFirstOutcome best_first_search(const Game& game, const BestFirstParams& params);

}  // namespace robustgame::detail
