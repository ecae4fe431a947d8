#include "robustgame/game.hpp"

#include <algorithm>
#include <cmath>

#include "robustgame/errors.hpp"

namespace robustgame {

Target parse_target(const std::string& text) {
  if (text == "untargeted") return Target::untargeted();
  const std::string prefix = "targeted:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t pos = 0;
    unsigned long c = 0;
    try {
      c = std::stoul(num, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == num.size() && !num.empty()) return Target::targeted(c);
  }
  throw InputError("mode must be 'untargeted' or 'targeted:<class>', got '" + text + "'");
}

std::string target_name(const Target& t) {
  return t.is_targeted() ? "targeted:" + std::to_string(*t.cls) : "untargeted";
}

void GameConfig::validate() const {
  require_guarantee_metric(metric);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
}

bool is_adversarial(const Network& net, const GameConfig& cfg, const Tensor& base, const Tensor& x) {
  if (!in_neighborhood(cfg.metric, base, x, cfg.radius)) return false;
  const std::size_t reference = net.classify(base);
  const std::size_t predicted = net.classify(x);
  if (predicted == reference) return false;
  return !cfg.target.is_targeted() || predicted == *cfg.target.cls;
}

Game::Game(const Network& net, GameConfig cfg, FeaturePartition partition, Tensor base)
    : net_(net),
      cfg_(std::move(cfg)),
      partition_(std::move(partition)),
      base_(std::make_shared<const Tensor>(std::move(base))) {
  cfg_.validate();
  if (partition_.n_dims != base_->size()) throw InputError("partition does not match the input size");
  validate_partition(partition_);
  base_class_ = net_.classify(*base_);
  if (cfg_.target.is_targeted() && *cfg_.target.cls >= net_.num_classes()) {
    throw ConfigError("target class out of range");
  }
  if (cfg_.true_label && *cfg_.true_label >= net_.num_classes()) throw ConfigError("label out of range");
  if (cfg_.lipschitz) cfg_.lipschitz->require_covers(net_.num_classes());
}

bool Game::base_degenerate() const {
  if (cfg_.true_label && *cfg_.true_label != base_class_) return true;
  return cfg_.target.is_targeted() && *cfg_.target.cls == base_class_;
}

ManipulationState Game::initial_state() const { return ManipulationState(base_, cfg_.tau); }

bool Game::misclassified(std::size_t predicted) const {
  if (predicted == base_class_) return false;
  return !cfg_.target.is_targeted() || predicted == *cfg_.target.cls;
}

bool Game::is_adversarial(const ManipulationState& s) const {
  return in_budget(s) && misclassified(net_.classify(s.reconstruct()));
}

double Game::distance(const ManipulationState& s) const { return s.distance_from_base(cfg_.metric); }

bool Game::in_budget(const ManipulationState& s) const { return distance(s) <= cfg_.radius + kRadiusSlack; }

bool Game::is_terminal(const ManipulationState& s) const {
  return !in_budget(s) || misclassified(net_.classify(s.reconstruct()));
}

std::vector<std::size_t> Game::player1_moves() const {
  std::vector<std::size_t> moves(partition_.size());
  for (std::size_t i = 0; i < moves.size(); ++i) moves[i] = i;
  return moves;
}

std::vector<AtomicManipulation> Game::player2_moves(const ManipulationState& s, std::size_t feature) const {
  std::vector<AtomicManipulation> moves;
  for (std::size_t dim : partition_.features.at(feature)) {
    for (int sign : {+1, -1}) {
      if (s.changes({dim, sign})) moves.push_back({dim, sign});
    }
  }
  return moves;
}

std::vector<AtomicManipulation> Game::forward_moves(const ManipulationState& s, std::size_t feature) const {
  std::vector<AtomicManipulation> moves;
  for (std::size_t dim : partition_.features.at(feature)) {
    for (int sign : {+1, -1}) {
      const AtomicManipulation a{dim, sign};
      if (s.is_forward(a) && s.changes(a)) moves.push_back(a);
    }
  }
  return moves;
}

bool Game::has_forward_move(const ManipulationState& s, std::size_t feature) const {
  for (std::size_t dim : partition_.features.at(feature)) {
    for (int sign : {+1, -1}) {
      const AtomicManipulation a{dim, sign};
      if (s.is_forward(a) && s.changes(a)) return true;
    }
  }
  return false;
}

double Game::dead_end_reward() const {
  return cfg_.radius + grid_cell_radius(cfg_.metric, n_dims(), cfg_.tau);
}

Witness Game::witness_for(const ManipulationState& s) const {
  if (is_adversarial(s)) return {Bound::value(distance(s)), s};
  return {Bound::exceeds(cfg_.radius), s};
}

double evaluate_profile(const Game& game, const Player1Strategy& sigma1, const Player2Strategy& sigma2,
                        std::size_t depth_cap) {
  ManipulationState s = game.initial_state();
  for (std::size_t step = 0;; ++step) {
    if (game.is_terminal(s)) return game.distance(s);
    if (step == depth_cap) {
      throw NonterminationError("strategy profile did not terminate within " + std::to_string(depth_cap) + " moves");
    }
    const std::size_t feature = sigma1(s);
    if (feature >= game.partition().size()) throw InputError("Player I strategy chose an unknown feature");
    const AtomicManipulation a = sigma2(s, feature);
    const auto& dims = game.partition()[feature];
    if (std::find(dims.begin(), dims.end(), a.dim) == dims.end()) {
      throw InputError("Player II strategy left the selected feature");
    }
    s = s.apply(a);
  }
}

}  // namespace robustgame
