#include "robustgame/alphabeta.hpp"

#include <algorithm>

#include "best_first.hpp"
#include "robustgame/errors.hpp"

namespace robustgame {

AlphaBetaResult alphabeta_run(const Game& game, const AlphaBetaOptions& options) {
  const GameConfig& cfg = game.config();
  if (cfg.mode != GameMode::kCompetitive) throw ConfigError("alpha-beta search needs a competitive game");
  options.tc.validate();

  AlphaBetaResult result;
  if (game.base_degenerate()) {
    result.converged = true;
    return result;
  }

  std::optional<Bound> alpha;
  bool truncated = false;
  for (std::size_t f = 0; f < game.partition().size(); ++f) {
    FeaturePoint point{f};
    if (truncated) break;
    if (alpha && alpha->exceeds_budget()) {
      point.elapsed = options.clock.seconds();
      point.feature_beta = Bound::value(0.0);
      point.root_alpha = *alpha;
      point.pruned = true;
      result.trace.push_back(point);
      continue;
    }
    detail::BestFirstParams params;
    params.dims = game.partition()[f];
    params.cutoff = alpha;
    if (options.tc.max_iterations) {
      params.max_expansions = *options.tc.max_iterations - std::min(*options.tc.max_iterations, result.expansions);
    }
    params.max_seconds = options.tc.max_seconds;
    params.clock = &options.clock;
    params.stop = options.stop;
    const detail::BestFirstOutcome out = detail::best_first_search(game, params);
    result.expansions += out.expansions;
    truncated = out.truncated;

    point.feature_beta = out.lower;
    point.pruned = out.cut;
    if (!out.cut && (!alpha || out.lower > *alpha)) {
      alpha = out.lower;
      result.witness = out.converged ? out.best : nullptr;
    }
    point.root_alpha = *alpha;
    point.elapsed = options.clock.seconds();
    result.trace.push_back(point);
  }
  result.value = alpha.value_or(Bound::value(0.0));
  result.converged = !truncated;
  if (!result.converged) result.witness = nullptr;
  return result;
}

namespace {

class MinimaxReference {
 public:
  MinimaxReference(const Game& game, std::size_t budget) : game_(game), budget_(budget) {}

  Bound feature_value(const ManipulationState& s, std::size_t feature) {
    if (++visited_ > budget_) throw OracleTooLargeError("minimax reference exceeded its state budget");
    const double dist = game_.distance(s);
    const double radius = game_.config().radius;
    if (dist > radius + kRadiusSlack) return Bound::exceeds(radius);
    if (game_.misclassified(game_.net().classify(s.reconstruct()))) return Bound::value(dist);
    Bound best = Bound::exceeds(radius);
    for (const AtomicManipulation& a : game_.forward_moves(s, feature)) {
      best = std::min(best, feature_value(s.apply(a), feature));
    }
    return best;
  }

 private:
  const Game& game_;
  std::size_t budget_;
  std::size_t visited_ = 0;
};

}  // namespace

Bound minimax_reference(const Game& game, std::size_t state_budget) {
  if (game.base_degenerate()) return Bound::value(0.0);
  MinimaxReference ref(game, state_budget);
  const ManipulationState root = game.initial_state();
  std::optional<Bound> value;
  for (std::size_t f = 0; f < game.partition().size(); ++f) {
    const Bound beta = ref.feature_value(root, f);
    if (!value || beta > *value) value = beta;
  }
  return *value;
}

}  // namespace robustgame
