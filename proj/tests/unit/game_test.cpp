#include <gtest/gtest.h>

#include "oracle.hpp"
#include "robustgame/errors.hpp"
#include "robustgame/game.hpp"

namespace rg = robustgame;

namespace {

rg::GameConfig linf(double radius, double tau) {
  rg::GameConfig cfg;
  cfg.metric = rg::Metric::kLInf;
  cfg.radius = radius;
  cfg.tau = tau;
  return cfg;
}

const rg::Tensor kBase({4}, {0.6, 0.4, 0.5, 0.5});

rg::Game dense_game(const rg::Network& net, rg::GameConfig cfg, std::vector<std::vector<std::size_t>> feats) {
  return rg::Game(net, cfg, rg::explicit_partition(std::move(feats), 4), kBase);
}

}  // namespace

TEST(IsAdversarial, BaseIsNot) {
  const auto net = oracle::dense_4_2();
  EXPECT_FALSE(rg::is_adversarial(net, linf(0.3, 0.1), kBase, kBase));
}

TEST(IsAdversarial, OutsideRadiusIsNot) {
  const auto net = oracle::dense_4_2();
  const rg::Tensor far({4}, {0.0, 1.0, 0.5, 0.5});
  ASSERT_EQ(net.classify(far), 1u);
  EXPECT_FALSE(rg::is_adversarial(net, linf(0.3, 0.1), kBase, far));
}

TEST(IsAdversarial, AgreesWithOracleLabels) {
  const auto net = oracle::dense_4_2();
  const auto cfg = linf(0.3, 0.1);
  std::size_t flips = 0;
  oracle::enumerate_grid({0.6, 0.4, 0.5, 0.5}, 0.1, rg::Metric::kLInf, 0.3, {}, [&](const std::vector<double>& x) {
    const rg::Tensor t({4}, x);
    const bool expected = oracle::classify(net, kBase, x) != 0;
    EXPECT_EQ(rg::is_adversarial(net, cfg, kBase, t), expected);
    flips += expected;
  });
  EXPECT_GT(flips, 0u);
}

TEST(IsAdversarial, TargetedNeedsTheTargetClass) {
  const auto net = oracle::dense_4_2();
  auto cfg = linf(0.3, 0.1);
  const rg::Tensor x({4}, {0.5, 0.5, 0.4, 0.6});
  cfg.target = rg::Target::targeted(1);
  EXPECT_TRUE(rg::is_adversarial(net, cfg, kBase, x));
  cfg.target = rg::Target::targeted(0);
  EXPECT_FALSE(rg::is_adversarial(net, cfg, kBase, x));
}

TEST(Target, ParseAndName) {
  EXPECT_FALSE(rg::parse_target("untargeted").is_targeted());
  EXPECT_EQ(rg::parse_target("targeted:3").cls, 3u);
  EXPECT_EQ(rg::target_name(rg::Target::targeted(2)), "targeted:2");
  EXPECT_THROW(rg::parse_target("sideways"), rg::InputError);
}

TEST(Config, L0IsRejected) {
  auto cfg = linf(0.3, 0.1);
  cfg.metric = rg::Metric::kL0;
  EXPECT_THROW(cfg.validate(), rg::ConfigError);
  cfg.metric = rg::Metric::kL2;
  cfg.tau = 0;
  EXPECT_THROW(cfg.validate(), rg::ConfigError);
}

TEST(Moves, PlayerOneHasOneMovePerFeature) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.3, 0.1), {{0}, {1, 2}, {3}});
  EXPECT_EQ(g.player1_moves().size(), 3u);
}

TEST(Moves, PlayerTwoTwoSignsPerDimension) {
  rg::Network net({5}, {rg::Dense{5, 2, std::vector<double>(10, 0.0), {1, 0}}, rg::Softmax{}}, 2);
  const rg::Tensor mid({5}, {0.5, 0.5, 0.5, 0.5, 0.5});
  rg::Game g(net, linf(0.3, 0.1), rg::explicit_partition({{0, 1, 2, 3, 4}}, 5), mid);
  EXPECT_EQ(g.player2_moves(g.initial_state(), 0).size(), 10u);

  const rg::Tensor edge({5}, {1.0, 0.5, 0.5, 0.5, 0.5});
  rg::Game h(net, linf(0.3, 0.1), rg::explicit_partition({{0, 1, 2, 3, 4}}, 5), edge);
  const auto moves = h.player2_moves(h.initial_state(), 0);
  EXPECT_EQ(moves.size(), 9u);
  for (const auto& m : moves) EXPECT_FALSE(m.dim == 0 && m.sign == +1);
}

TEST(Moves, ForwardMovesNeverShrinkOffsets) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.3, 0.1), {{0, 1, 2, 3}});
  const auto s = g.initial_state().apply({0, +1}).apply({2, -1});
  const auto fwd = g.forward_moves(s, 0);
  EXPECT_EQ(fwd.size(), 6u);
  for (const auto& m : fwd) EXPECT_FALSE((m.dim == 0 && m.sign == -1) || (m.dim == 2 && m.sign == +1));
}

TEST(Terminal, Examples) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.3, 0.1), {{0, 1}, {2, 3}});
  const auto root = g.initial_state();
  EXPECT_FALSE(g.is_terminal(root));
  auto out = root;
  for (int i = 0; i < 4; ++i) out = out.apply({2, +1});
  EXPECT_GT(g.distance(out), 0.3);
  EXPECT_FALSE(g.is_adversarial(out));
  EXPECT_TRUE(g.is_terminal(out));
  const auto adv = root.apply({0, -1}).apply({1, +1}).apply({2, -1}).apply({3, +1});
  EXPECT_TRUE(g.is_adversarial(adv));
  EXPECT_TRUE(g.is_terminal(adv));
}

TEST(Profile, AdversarialPathAtTwoTau) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.3, 0.1), {{0, 1, 2, 3}});
  // Push x0 down and x1 up: after two steps each the logits cross.
  const rg::Player1Strategy s1 = [](const rg::ManipulationState&) { return std::size_t{0}; };
  const rg::Player2Strategy s2 = [](const rg::ManipulationState& s, std::size_t) {
    return s.offsets()[0] == -s.offsets()[1] ? rg::AtomicManipulation{0, -1} : rg::AtomicManipulation{1, +1};
  };
  EXPECT_NEAR(rg::evaluate_profile(g, s1, s2, 100), 0.2, 1e-12);
}

TEST(Profile, ImmediateExitReportsFirstOutsideDistance) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.05, 0.1), {{0, 1, 2, 3}});
  const rg::Player1Strategy s1 = [](const rg::ManipulationState&) { return std::size_t{0}; };
  const rg::Player2Strategy s2 = [](const rg::ManipulationState&, std::size_t) { return rg::AtomicManipulation{2, +1}; };
  EXPECT_NEAR(rg::evaluate_profile(g, s1, s2, 100), 0.1, 1e-12);
}

TEST(Profile, ZeroDepthCapIsNontermination) {
  const auto net = oracle::dense_4_2();
  const auto g = dense_game(net, linf(0.3, 0.1), {{0, 1, 2, 3}});
  const rg::Player1Strategy s1 = [](const rg::ManipulationState&) { return std::size_t{0}; };
  const rg::Player2Strategy s2 = [](const rg::ManipulationState&, std::size_t) { return rg::AtomicManipulation{2, +1}; };
  EXPECT_THROW(rg::evaluate_profile(g, s1, s2, 0), rg::NonterminationError);
}

TEST(Profile, CyclingStrategyHitsTheCap) {
  const auto net = oracle::dense_4_2();
  const rg::Tensor top({4}, {1.0, 0.0, 0.5, 0.5});
  rg::Game g(net, linf(0.3, 0.1), rg::explicit_partition({{0, 1, 2, 3}}, 4), top);
  const rg::Player1Strategy s1 = [](const rg::ManipulationState&) { return std::size_t{0}; };
  const rg::Player2Strategy s2 = [](const rg::ManipulationState&, std::size_t) { return rg::AtomicManipulation{0, +1}; };
  EXPECT_THROW(rg::evaluate_profile(g, s1, s2, 50), rg::NonterminationError);
}

TEST(Game, DegenerateBaseWithWrongTrueLabel) {
  const auto net = oracle::dense_4_2();
  auto cfg = linf(0.3, 0.1);
  cfg.true_label = 1;
  const auto g = dense_game(net, cfg, {{0, 1, 2, 3}});
  EXPECT_TRUE(g.base_degenerate());
  cfg.true_label = 0;
  EXPECT_FALSE(dense_game(net, cfg, {{0, 1, 2, 3}}).base_degenerate());
}
