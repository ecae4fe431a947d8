#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robustgame/bound.hpp"
#include "robustgame/features.hpp"
#include "robustgame/lipschitz.hpp"
#include "robustgame/manipulation.hpp"
#include "robustgame/metrics.hpp"
#include "robustgame/network.hpp"

namespace robustgame {

// Cooperative play computes the safe radius, competitive play the feature
// robustness (Player I picks one feature, Player II then minimizes in it).
enum class GameMode { kCooperative, kCompetitive };

// Untargeted: any class change counts. Targeted: the new class must be `cls`.
struct Target {
  std::optional<std::size_t> cls;

  static Target untargeted() { return {}; }
  static Target targeted(std::size_t c) { return {c}; }
  bool is_targeted() const { return cls.has_value(); }
};

Target parse_target(const std::string& text);
std::string target_name(const Target& t);

struct GameConfig {
  Metric metric = Metric::kLInf;
  double radius = 0.0;
  double tau = 0.0;
  GameMode mode = GameMode::kCooperative;
  Target target;
  std::optional<LipschitzConstants> lipschitz;
  // Ground-truth label of the base input, when known.
  std::optional<std::size_t> true_label;

  // Throws ConfigError for non-positive radius/tau and for L0.
  void validate() const;
};

// A candidate adversarial input and the bound it certifies: its distance if
// adversarial, ExceedsBudget otherwise.
struct Witness {
  Bound bound;
  ManipulationState state;
};

// True iff x lies within the radius and is misclassified per target semantics.
bool is_adversarial(const Network& net, const GameConfig& cfg, const Tensor& base, const Tensor& x);

// The game over tau-grid manipulations of one base input. Player I states are
// plain manipulation states; Player II states add the selected feature.
class Game {
 public:
  Game(const Network& net, GameConfig cfg, FeaturePartition partition, Tensor base);

  const Network& net() const { return net_; }
  const GameConfig& config() const { return cfg_; }
  const FeaturePartition& partition() const { return partition_; }
  const Tensor& base() const { return *base_; }
  std::size_t base_class() const { return base_class_; }
  std::size_t n_dims() const { return base_->size(); }

  // Base is already misclassified (w.r.t. the true label) or already in the
  // target class; the safe radius is then 0.
  bool base_degenerate() const;

  ManipulationState initial_state() const;

  // Class-change test alone, ignoring the radius.
  bool misclassified(std::size_t predicted) const;
  bool is_adversarial(const ManipulationState& s) const;
  double distance(const ManipulationState& s) const;
  bool in_budget(const ManipulationState& s) const;
  // Adversarial or outside the radius.
  bool is_terminal(const ManipulationState& s) const;

  std::vector<std::size_t> player1_moves() const;
  // Atomic moves inside the feature, without clamped no-ops.
  std::vector<AtomicManipulation> player2_moves(const ManipulationState& s, std::size_t feature) const;
  // player2_moves that do not shrink any |offset|. Every grid point is
  // reachable by such moves, and only these are used when exhausting a tree.
  std::vector<AtomicManipulation> forward_moves(const ManipulationState& s, std::size_t feature) const;
  bool has_forward_move(const ManipulationState& s, std::size_t feature) const;

  // Reward of a state with no legal move left inside the radius.
  double dead_end_reward() const;

  Witness witness_for(const ManipulationState& s) const;

 private:
  const Network& net_;
  GameConfig cfg_;
  FeaturePartition partition_;
  std::shared_ptr<const Tensor> base_;
  std::size_t base_class_;
};

// Deterministic strategies: Player I picks a feature, Player II a move in it.
using Player1Strategy = std::function<std::size_t(const ManipulationState&)>;
using Player2Strategy = std::function<AtomicManipulation(const ManipulationState&, std::size_t)>;

// Replays the single path induced by the two strategies and returns the
// distance of its terminal state. Throws NonterminationError when more than
// `depth_cap` Player II moves are played without termination.
double evaluate_profile(const Game& game, const Player1Strategy& sigma1, const Player2Strategy& sigma2,
                        std::size_t depth_cap);

}  // namespace robustgame
