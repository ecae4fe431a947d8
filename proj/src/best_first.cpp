#include "best_first.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <unordered_set>

#include "robustgame/astar.hpp"

namespace robustgame::detail {

namespace {

struct Entry {
  double estimate;
  std::size_t seq;
  double certified;
  double dist;
  double h;
  bool adversarial;
  ManipulationState state;
};

struct ByEstimate {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.seq > b.seq;
  }
};

using Keyed = std::pair<double, std::size_t>;

}  // namespace

BestFirstOutcome best_first_search(const Game& game, const BestFirstParams& params) {
  const GameConfig& cfg = game.config();
  const double radius = cfg.radius;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::priority_queue<Entry, std::vector<Entry>, ByEstimate> open;
  std::priority_queue<Keyed, std::vector<Keyed>, std::greater<>> certified;
  std::vector<bool> closed;
  std::map<std::size_t, std::size_t> depth_count;
  std::unordered_set<Offsets, OffsetsHash> visited;
  std::size_t seq = 0;

  auto push = [&](ManipulationState s, double dist) {
    const std::vector<double> probs = game.net().forward(s.reconstruct());
    const bool adversarial = game.misclassified(argmax(probs));
    const double h = adversarial || !params.heuristic ? 0.0 : params.heuristic(probs);
    const double cert = certified_combination(cfg.metric, dist, h);
    certified.push({cert, seq});
    closed.push_back(false);
    ++depth_count[s.depth()];
    open.push(Entry{dist + params.factor * h, seq, cert, dist, h, adversarial, std::move(s)});
    ++seq;
  };

  auto frontier_min = [&]() {
    while (!certified.empty() && closed[certified.top().second]) certified.pop();
    return certified.empty() ? kInf : certified.top().first;
  };

  BestFirstOutcome out;
  Bound running = Bound::value(0.0);
  std::size_t next_phase = 0;

  auto emit_phases = [&]() {
    const std::size_t min_depth =
        depth_count.empty() ? std::numeric_limits<std::size_t>::max() : depth_count.begin()->first;
    while (next_phase <= min_depth && !depth_count.empty()) {
      if (params.on_phase && !params.attack) params.on_phase(next_phase, running);
      ++next_phase;
    }
  };

  ManipulationState root = game.initial_state();
  visited.insert(root.offsets());
  push(root, 0.0);

  while (true) {
    const double lb = frontier_min();
    const Bound best = out.best ? out.best->bound : Bound::exceeds(radius);
    if (!params.attack) {
      Bound current = lb == kInf ? best : std::min(best, Bound::value(lb));
      if (!out.best && lb > radius + kRadiusSlack) current = Bound::exceeds(radius);
      if (current > running) running = current;
    }
    if (open.empty() || (!params.attack && out.best && out.best->bound <= Bound::value(lb)) ||
        (!params.attack && !out.best && lb > radius + kRadiusSlack)) {
      out.converged = true;
      running = best;
      break;
    }
    emit_phases();
    if (params.cutoff && out.best && out.best->bound <= *params.cutoff) {
      out.cut = true;
      break;
    }
    if ((params.max_expansions && out.expansions >= *params.max_expansions) ||
        (params.max_seconds && params.clock && params.clock->seconds() >= *params.max_seconds) ||
        params.stop.stop_requested()) {
      out.truncated = true;
      break;
    }

    Entry top = open.top();
    open.pop();
    closed[top.seq] = true;
    auto it = depth_count.find(top.state.depth());
    if (--it->second == 0) depth_count.erase(it);

    if (top.adversarial) {
      if (!out.best || top.dist < out.best->bound.number()) {
        out.best = std::make_shared<const Witness>(Witness{Bound::value(top.dist), top.state});
      }
      if (params.attack) {
        out.converged = true;
        running = out.best->bound;
        break;
      }
      continue;
    }
    if (!params.attack && out.best && Bound::value(top.certified) >= out.best->bound) continue;

    if (params.on_expand) params.on_expand(top.state, top.h);
    ++out.expansions;
    for (std::size_t dim : params.dims) {
      for (int sign : {+1, -1}) {
        const AtomicManipulation a{dim, sign};
        if (!top.state.changes(a)) continue;
        ManipulationState child = top.state.apply(a);
        if (visited.contains(child.offsets())) continue;
        const double dist = game.distance(child);
        if (dist > radius + kRadiusSlack) continue;
        visited.insert(child.offsets());
        push(std::move(child), dist);
      }
    }
  }
  out.lower = running;
  out.phases = next_phase;
  return out;
}

}  // namespace robustgame::detail
