#include "robustgame/astar.hpp"

#include <algorithm>
#include <cmath>

#include "best_first.hpp"
#include "robustgame/errors.hpp"

namespace robustgame {

double admissible_heuristic(std::span<const double> probs, const LipschitzConstants& lip) {
  const std::size_t c = argmax(probs);
  const double g = confidence_margin(probs, c);
  if (g <= 0.0) return 0.0;
  return g / lip.pair_bound(c);
}

double admissible_heuristic(const Network& net, const Tensor& x, const LipschitzConstants& lip) {
  return admissible_heuristic(net.forward(x), lip);
}

double estimate(Metric m, const Tensor& base, const Tensor& x, double h) { return distance(m, base, x) + h; }

double certified_combination(Metric m, double dist, double h) {
  switch (m) {
    case Metric::kL2: return std::sqrt(dist * dist + h * h);
    case Metric::kLInf: return std::max(dist, h);
    default: return dist + h;
  }
}

AstarResult astar_run(const Game& game, const AstarOptions& options) {
  const GameConfig& cfg = game.config();
  if (cfg.mode != GameMode::kCooperative) throw ConfigError("A* search needs a cooperative game");
  options.tc.validate();
  if (!(options.inadmissible_factor >= 1.0)) throw ConfigError("inadmissible factor must be at least 1");
  const bool attack = options.inadmissible_factor > 1.0;

  AstarResult result;
  if (game.base_degenerate()) {
    result.converged = true;
    result.trace.push_back({0, options.clock.seconds(), result.value, true});
    return result;
  }

  detail::BestFirstParams params;
  for (const auto& feature : game.partition().features) params.dims.insert(params.dims.end(), feature.begin(), feature.end());
  if (options.use_heuristic || attack) {
    if (!cfg.lipschitz && !attack) throw ConfigError("admissible A* needs Lipschitz constants");
    const LipschitzConstants lip =
        cfg.lipschitz ? *cfg.lipschitz : LipschitzConstants::uniform(game.net().num_classes(), 1.0);
    params.heuristic = [lip](std::span<const double> probs) { return admissible_heuristic(probs, lip); };
  }
  params.factor = options.inadmissible_factor;
  params.attack = attack;
  params.max_expansions = options.tc.max_iterations;
  params.max_seconds = options.tc.max_seconds;
  params.clock = &options.clock;
  params.stop = options.stop;
  params.on_expand = options.on_expand;
  params.on_phase = [&](std::size_t phase, const Bound& lower) {
    result.trace.push_back({phase, options.clock.seconds(), lower, false});
  };

  const detail::BestFirstOutcome out = detail::best_first_search(game, params);
  result.value = attack && !out.best ? Bound::exceeds(cfg.radius) : out.lower;
  result.converged = out.converged;
  result.witness = out.best;
  result.expansions = out.expansions;
  if (!attack) result.trace.push_back({out.phases, options.clock.seconds(), out.lower, out.converged});
  return result;
}

}  // namespace robustgame
