#include "robustgame/verify.hpp"

#include <exception>
#include <random>
#include <thread>

#include "robustgame/alphabeta.hpp"
#include "robustgame/astar.hpp"
#include "robustgame/errors.hpp"
#include "robustgame/mcts.hpp"

namespace robustgame {

std::string grid_status_name(GridStatus s) {
  switch (s) {
    case GridStatus::kCertified: return "certified";
    case GridStatus::kViolated: return "violated";
    case GridStatus::kExhausted: return "exhausted";
    case GridStatus::kUnchecked: return "unchecked";
  }
  return "?";
}

std::string problem_name(Problem p) { return p == Problem::kMsr ? "MSR" : "FR"; }

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::kSafe: return "safe";
    case VerdictKind::kControllable: return "controllable";
    case VerdictKind::kAllFragile: return "all_features_fragile";
    case VerdictKind::kUndetermined: return "undetermined";
  }
  return "?";
}

GridCheckResult check_grid_condition(const Network& net, const GameConfig& cfg, const Tensor& base,
                                     const LipschitzConstants& lip, std::size_t sample_budget,
                                     std::uint64_t seed) {
  require_guarantee_metric(cfg.metric);
  lip.require_covers(net.num_classes());
  const double cell = grid_cell_radius(cfg.metric, base.size(), cfg.tau);
  auto shared_base = std::make_shared<const Tensor>(base);

  GridCheckResult result;
  auto violates = [&](const Offsets& o) {
    ++result.points_checked;
    const std::vector<double> probs = net.forward(ManipulationState(shared_base, cfg.tau, o).reconstruct());
    const std::size_t c = argmax(probs);
    return cell > 2.0 * confidence_margin(probs, c) / lip.pair_bound(c);
  };

  const std::size_t total = count_grid_points(base, cfg.tau, cfg.metric, cfg.radius, sample_budget);
  if (total <= sample_budget) {
    for_each_grid_point(base, cfg.tau, cfg.metric, cfg.radius, [&](const Offsets& o) {
      if (!violates(o)) return true;
      result.witness = o;
      return false;
    });
    result.status = result.witness ? GridStatus::kViolated : GridStatus::kCertified;
    return result;
  }

  std::vector<std::vector<int>> choices;
  for (std::size_t i = 0; i < base.size(); ++i) choices.push_back(dimension_offsets(base[i], cfg.tau, cfg.radius));
  std::mt19937_64 rng(seed);
  const std::size_t max_attempts = 1000 * sample_budget + 1000;
  std::size_t accepted = 0;
  Offsets o(base.size(), 0);
  for (std::size_t attempt = 0; attempt < max_attempts && accepted < sample_budget; ++attempt) {
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] = choices[i][static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * choices[i].size()) >> 64)];
    }
    if (!is_in_budget(ManipulationState(shared_base, cfg.tau, o), cfg.metric, cfg.radius)) continue;
    ++accepted;
    if (violates(o)) {
      result.witness = o;
      result.status = GridStatus::kViolated;
      return result;
    }
  }
  result.status = GridStatus::kExhausted;
  return result;
}

namespace {

BoundReport degenerate_report(Problem problem) {
  BoundReport r;
  r.problem = problem;
  r.lower = Bound::value(0.0);
  r.upper = Bound::value(0.0);
  r.converged = true;
  r.diagnostics.push_back("base input is already misclassified; the radius is 0");
  return r;
}

// Runs `lower_search` on a worker thread and `upper_search` here. With a
// wall-clock budget, whichever finishes exactly stops the other; with pure
// iteration budgets both run to their budgets so the output is reproducible.
template <typename Upper, typename Lower>
void run_side_by_side(const TerminationCondition& tc, Upper&& upper_search, Lower&& lower_search) {
  std::stop_source stop_upper;
  std::stop_source stop_lower;
  const bool cross = tc.max_seconds.has_value();
  std::exception_ptr worker_error;
  {
    std::jthread worker([&] {
      try {
        if (lower_search(stop_lower.get_token()) && cross) stop_upper.request_stop();
      } catch (...) {
        worker_error = std::current_exception();
        stop_upper.request_stop();
      }
    });
    try {
      if (upper_search(stop_upper.get_token()) && cross) stop_lower.request_stop();
    } catch (...) {
      stop_lower.request_stop();
      worker.join();
      throw;
    }
  }
  if (worker_error) std::rethrow_exception(worker_error);
}

void settle(BoundReport& r, const Bound& exact, std::shared_ptr<const Witness> witness) {
  r.lower = exact;
  r.upper = exact;
  r.converged = true;
  r.witness = exact.exceeds_budget() ? nullptr : std::move(witness);
}

}  // namespace

BoundReport run_msr(const Game& game, const RunOptions& options) {
  const GameConfig& cfg = game.config();
  if (cfg.mode != GameMode::kCooperative) throw ConfigError("MSR needs a cooperative game");
  options.tc.validate();
  if (game.base_degenerate()) return degenerate_report(Problem::kMsr);

  BoundReport r;
  r.problem = Problem::kMsr;
  Stopwatch clock;
  if (cfg.lipschitz) {
    r.grid = check_grid_condition(game.net(), cfg, game.base(), *cfg.lipschitz, options.sample_budget, options.seed);
    if (r.grid.status == GridStatus::kCertified) {
      r.error_bound = 0.5 * grid_cell_radius(cfg.metric, game.n_dims(), cfg.tau);
    } else {
      r.diagnostics.push_back("grid condition " + grid_status_name(r.grid.status) +
                              ": bounds hold on the grid only");
    }
  } else {
    r.diagnostics.push_back("no Lipschitz constants: lower bounds come from uniform-cost search and the grid "
                            "condition is not checked");
  }

  MctsResult upper;
  AstarResult lower;
  run_side_by_side(
      options.tc,
      [&](std::stop_token stop) {
        upper = mcts_run(game, MctsOptions{options.tc, options.seed, clock, stop});
        return upper.exact;
      },
      [&](std::stop_token stop) {
        AstarOptions ao;
        ao.tc = options.tc;
        ao.use_heuristic = cfg.lipschitz.has_value();
        ao.clock = clock;
        ao.stop = stop;
        lower = astar_run(game, ao);
        return lower.converged;
      });

  r.upper_trace = std::move(upper.trace);
  r.lower_trace = std::move(lower.trace);
  if (lower.converged) {
    settle(r, lower.value, lower.witness);
  } else if (upper.exact) {
    settle(r, upper.upper, upper.witness);
  } else {
    r.lower = lower.value;
    r.upper = upper.upper;
    r.witness = upper.witness;
  }
  return r;
}

BoundReport run_fr(const Game& game, const RunOptions& options) {
  if (game.config().mode != GameMode::kCompetitive) throw ConfigError("FR needs a competitive game");
  options.tc.validate();
  if (game.base_degenerate()) return degenerate_report(Problem::kFr);

  BoundReport r;
  r.problem = Problem::kFr;
  Stopwatch clock;
  MctsResult upper;
  AlphaBetaResult lower;
  run_side_by_side(
      options.tc,
      [&](std::stop_token stop) {
        upper = mcts_run(game, MctsOptions{options.tc, options.seed, clock, stop});
        return upper.exact;
      },
      [&](std::stop_token stop) {
        lower = alphabeta_run(game, AlphaBetaOptions{options.tc, clock, stop});
        return lower.converged;
      });

  r.upper_trace = std::move(upper.trace);
  r.feature_trace = std::move(lower.trace);
  if (lower.converged) {
    settle(r, lower.value, lower.witness);
  } else if (upper.exact) {
    settle(r, upper.upper, upper.witness);
  } else {
    r.lower = lower.value;
    r.upper = upper.upper;
    r.witness = upper.witness;
  }
  return r;
}

Verdict budget_verdict(const BoundReport& msr, const BoundReport& fr, double budget) {
  Verdict v;
  v.budget = budget;
  v.safe_radius_certified = msr.lower;
  v.nearest_adversarial_distance = msr.upper;
  const bool fr_fragile = fr.upper && certainly_at_most(*fr.upper, budget);
  const bool msr_reached = msr.upper && certainly_at_most(*msr.upper, budget);
  const bool below_fr = fr.lower && certainly_below(budget, *fr.lower);
  const bool below_msr = msr.lower && certainly_below(budget, *msr.lower);
  if (fr_fragile) {
    v.kind = VerdictKind::kAllFragile;
  } else if (msr_reached && below_fr) {
    v.kind = VerdictKind::kControllable;
    v.controllable = true;
  } else if (below_msr) {
    v.kind = VerdictKind::kSafe;
  }
  return v;
}

}  // namespace robustgame
