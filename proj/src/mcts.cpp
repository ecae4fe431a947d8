#include "robustgame/mcts.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "robustgame/errors.hpp"

namespace robustgame {

double ucb_weight(std::size_t parent_n, double child_r, std::size_t child_n, double d) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (child_n == 0 || child_r <= 0.0) return kInf;
  const double n = static_cast<double>(parent_n);
  const double nc = static_cast<double>(child_n);
  return d * nc / child_r + std::sqrt(2.0 * std::log(n) / nc);
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

struct Node {
  explicit Node(ManipulationState s) : state(std::move(s)) {}

  ManipulationState state;
  std::size_t parent = kNone;
  std::size_t first_child = 0;
  std::size_t num_children = 0;
  // Selected feature of a Player II node; kNone for Player I nodes.
  std::size_t feature = kNone;
  // Feature chosen at the root of a competitive game.
  std::size_t committed = kNone;
  double r = 0.0;
  std::size_t n = 0;
  std::shared_ptr<const Witness> e;
  bool expanded = false;
  bool full = false;
};

struct Playout {
  double reward = 0.0;
  std::shared_ptr<const Witness> witness;
  // The starting state was already terminal.
  bool immediate = false;
};

class Search {
 public:
  Search(const Game& game, const MctsOptions& options)
      : game_(game),
        options_(options),
        rng_(options.seed),
        competitive_(game.config().mode == GameMode::kCompetitive),
        depth_cap_(static_cast<std::size_t>(std::ceil(game.config().radius / game.config().tau)) * game.n_dims() + 1) {}

  MctsResult run();

 private:
  std::vector<std::size_t> available_features(const ManipulationState& s, std::size_t committed) const;
  Playout playout(ManipulationState s, std::size_t committed, std::size_t first_feature);
  std::size_t select();
  void expand_and_simulate(std::size_t leaf);
  void backpropagate(std::size_t node, double reward, const std::shared_ptr<const Witness>& w);
  void mark_full(std::size_t node);

  const Game& game_;
  const MctsOptions& options_;
  Rng rng_;
  bool competitive_;
  std::size_t depth_cap_;
  std::vector<Node> nodes_;
};

std::vector<std::size_t> Search::available_features(const ManipulationState& s, std::size_t committed) const {
  std::vector<std::size_t> out;
  if (committed != kNone) {
    if (game_.has_forward_move(s, committed)) out.push_back(committed);
    return out;
  }
  for (std::size_t f = 0; f < game_.partition().size(); ++f) {
    if (game_.has_forward_move(s, f)) out.push_back(f);
  }
  return out;
}

// Uniformly random forward play to a terminal state. When `first_feature`
// is set the play starts with a Player II move inside it.
Playout Search::playout(ManipulationState s, std::size_t committed, std::size_t first_feature) {
  const double radius = game_.config().radius;
  std::size_t feature = first_feature;
  for (std::size_t step = 0;; ++step) {
    if (feature == kNone) {
      const double dist = game_.distance(s);
      if (dist > radius + kRadiusSlack) {
        return {dist, std::make_shared<const Witness>(Witness{Bound::exceeds(radius), s}), step == 0};
      }
      if (game_.misclassified(game_.net().classify(s.reconstruct()))) {
        return {dist, std::make_shared<const Witness>(Witness{Bound::value(dist), s}), step == 0};
      }
      const auto features = available_features(s, committed);
      if (features.empty() || step >= depth_cap_) {
        return {game_.dead_end_reward(), std::make_shared<const Witness>(Witness{Bound::exceeds(radius), s}),
                step == 0};
      }
      feature = features[rng_.below(features.size())];
    }
    const auto moves = game_.forward_moves(s, feature);
    s = s.apply(moves[rng_.below(moves.size())]);
    feature = kNone;
  }
}

std::size_t Search::select() {
  std::size_t node = 0;
  std::vector<double> weights;
  while (nodes_[node].expanded) {
    const Node& cur = nodes_[node];
    weights.assign(cur.num_children, 0.0);
    double total = 0.0;
    std::size_t pick = kNone;
    for (std::size_t i = 0; i < cur.num_children; ++i) {
      const Node& child = nodes_[cur.first_child + i];
      if (child.full) continue;
      const double w = ucb_weight(cur.n, child.r, child.n, game_.config().radius);
      if (std::isinf(w)) {
        pick = i;
        break;
      }
      weights[i] = w;
      total += w;
    }
    if (pick == kNone) {
      double u = rng_.uniform() * total;
      for (std::size_t i = 0; i < cur.num_children; ++i) {
        if (weights[i] <= 0.0) continue;
        pick = i;
        if (u < weights[i]) break;
        u -= weights[i];
      }
    }
    node = cur.first_child + pick;
  }
  return node;
}

void Search::expand_and_simulate(std::size_t leaf) {
  const std::size_t first = nodes_.size();
  {
    Node& l = nodes_[leaf];
    l.expanded = true;
    l.first_child = first;
  }
  const Node parent = nodes_[leaf];
  if (parent.feature == kNone) {
    for (std::size_t f : available_features(parent.state, parent.committed)) {
      Node child{parent.state};
      child.parent = leaf;
      child.feature = f;
      child.committed = competitive_ ? f : kNone;
      nodes_.push_back(std::move(child));
    }
  } else {
    for (const AtomicManipulation& a : game_.forward_moves(parent.state, parent.feature)) {
      Node child{parent.state.apply(a)};
      child.parent = leaf;
      child.committed = parent.committed;
      nodes_.push_back(std::move(child));
    }
  }
  nodes_[leaf].num_children = nodes_.size() - first;

  for (std::size_t idx = first; idx < nodes_.size(); ++idx) {
    const Node& child = nodes_[idx];
    Playout p = child.feature == kNone ? playout(child.state, child.committed, kNone)
                                       : playout(child.state, child.committed, child.feature);
    if (child.feature == kNone && p.immediate) {
      nodes_[idx].expanded = true;
      nodes_[idx].full = true;
    }
    backpropagate(idx, p.reward, p.witness);
  }
  mark_full(leaf);
}

void Search::backpropagate(std::size_t node, double reward, const std::shared_ptr<const Witness>& w) {
  while (node != kNone) {
    Node& cur = nodes_[node];
    cur.r += reward;
    cur.n += 1;
    if (competitive_ && node == 0) {
      std::shared_ptr<const Witness> best;
      for (std::size_t i = 0; i < cur.num_children; ++i) {
        const auto& ce = nodes_[cur.first_child + i].e;
        if (ce && (!best || ce->bound > best->bound)) best = ce;
      }
      cur.e = best;
    } else if (!cur.e || w->bound < cur.e->bound) {
      cur.e = w;
    }
    node = cur.parent;
  }
}

void Search::mark_full(std::size_t node) {
  while (node != kNone) {
    Node& cur = nodes_[node];
    if (!cur.expanded) return;
    for (std::size_t i = 0; i < cur.num_children; ++i) {
      if (!nodes_[cur.first_child + i].full) return;
    }
    cur.full = true;
    node = cur.parent;
  }
}

MctsResult Search::run() {
  options_.tc.validate();
  if (options_.tc.unbounded()) throw ConfigError("MCTS needs an iteration, time or epsilon budget");
  MctsResult result;
  if (game_.base_degenerate()) {
    result.upper = Bound::value(0.0);
    result.exact = true;
    result.trace.push_back({0, options_.clock.seconds(), result.upper, nullptr});
    return result;
  }
  nodes_.push_back(Node{game_.initial_state()});
  const auto patience = options_.tc.patience();
  std::size_t last_improvement = 0;
  Bound best = Bound::exceeds(game_.config().radius);
  std::shared_ptr<const Witness> best_witness;

  for (std::size_t it = 1;; ++it) {
    if (nodes_[0].full) {
      result.exact = true;
      break;
    }
    if (options_.tc.max_iterations && it > *options_.tc.max_iterations) break;
    if (options_.tc.max_seconds && options_.clock.seconds() >= *options_.tc.max_seconds) break;
    if (patience && it - 1 - last_improvement >= *patience) break;
    if (options_.stop.stop_requested()) break;

    expand_and_simulate(select());
    result.iterations = it;

    const auto& e = nodes_[0].e;
    if (e && e->bound < best) {
      best = e->bound;
      best_witness = e;
      last_improvement = it;
    }
    result.trace.push_back({it, options_.clock.seconds(), best, best.exceeds_budget() ? nullptr : best_witness});
  }
  result.upper = best;
  result.witness = best.exceeds_budget() ? nullptr : best_witness;
  result.nodes = nodes_.size();
  return result;
}

}  // namespace

MctsResult mcts_run(const Game& game, const MctsOptions& options) {
  Search search(game, options);
  return search.run();
}

}  // namespace robustgame
