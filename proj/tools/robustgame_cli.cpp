// Command-line front end: msr, fr, attack, partition and check-grid.
//
// Exit codes: 0 completed, 2 input or configuration error, 3 guarantee
// requested but not certifiable, 4 attack found no adversarial input.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustgame/astar.hpp"
#include "robustgame/errors.hpp"
#include "robustgame/features.hpp"
#include "robustgame/game.hpp"
#include "robustgame/lipschitz.hpp"
#include "robustgame/mcts.hpp"
#include "robustgame/model_io.hpp"
#include "robustgame/report.hpp"
#include "robustgame/tensor_io.hpp"
#include "robustgame/verify.hpp"

namespace rg = robustgame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUncertified = 3;
constexpr int kExitNoAdversary = 4;

struct Args {
  std::string model;
  std::string input;
  std::string metric = "Linf";
  double radius = 0.0;
  double tau = 0.0;
  // Defaults to min(10, number of dimensions or pixels).
  std::optional<std::size_t> features;
  std::string partition = "saliency";
  std::string mode = "untargeted";
  std::string lipschitz;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iters;
  std::optional<double> max_seconds;
  std::optional<double> epsilon;
  std::string out = ".";
  std::optional<double> budget;
  std::optional<std::size_t> label;
  std::optional<double> probe;
  std::size_t sample_budget = 100000;
  double factor = 2.0;
  bool require_guarantee = false;
};

nlohmann::json run_spec(const std::string& command, const Args& a) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"command", command},
          {"model", a.model},
          {"input", a.input},
          {"metric", a.metric},
          {"radius", a.radius},
          {"tau", a.tau},
          {"features", opt(a.features)},
          {"partition", a.partition},
          {"mode", a.mode},
          {"lipschitz", a.lipschitz.empty() ? nlohmann::json(nullptr) : nlohmann::json(a.lipschitz)},
          {"seed", a.seed},
          {"max_iters", opt(a.max_iters)},
          {"max_seconds", opt(a.max_seconds)},
          {"epsilon", opt(a.epsilon)},
          {"budget", opt(a.budget)},
          {"label", opt(a.label)},
          {"probe", opt(a.probe)},
          {"sample_budget", a.sample_budget},
          {"factor", a.factor}};
}

// Everything a search needs, resolved from the flags.
struct Setup {
  rg::Network net;
  rg::Tensor base;
  rg::GameConfig cfg;
  rg::FeaturePartition partition;
};

rg::Tensor load_base(const rg::Network& net, const std::string& path) {
  rg::Tensor x = rg::load_input(path);
  if (x.shape() == net.input_shape()) return x;
  if (x.size() != net.input_size()) {
    throw rg::InputError("input has " + std::to_string(x.size()) + " values, the model expects " +
                         std::to_string(net.input_size()));
  }
  return x.reshaped(net.input_shape());
}

constexpr std::size_t kDefaultFeatures = 10;
constexpr double kDefaultProbe = 0.05;

rg::FeaturePartition make_partition(const Args& a, const rg::Network& net, const rg::Tensor& base) {
  const double probe = a.probe ? *a.probe : (a.tau > 0.0 ? a.tau : kDefaultProbe);
  if (a.partition == "saliency") {
    return rg::saliency_partition(net, base, a.features.value_or(std::min(kDefaultFeatures, base.size())), probe);
  }
  if (a.partition == "blocks") {
    const auto& shape = net.input_shape();
    const std::size_t channels = shape.size() == 3 ? shape[2] : 1;
    return rg::block_partition(shape, a.features.value_or(std::min(kDefaultFeatures, base.size() / channels)));
  }
  throw rg::InputError("partition must be 'saliency' or 'blocks'");
}

Setup make_setup(const Args& a, rg::GameMode mode) {
  rg::Network net = rg::load_model(a.model);
  rg::Tensor base = load_base(net, a.input);
  rg::GameConfig cfg;
  cfg.metric = rg::parse_metric(a.metric);
  cfg.radius = a.radius;
  cfg.tau = a.tau;
  cfg.mode = mode;
  cfg.target = rg::parse_target(a.mode);
  cfg.true_label = a.label;
  if (!a.lipschitz.empty()) {
    rg::LipschitzConstants lip = rg::load_lipschitz(a.lipschitz);
    lip.require_covers(net.num_classes());
    if (auto bad = rg::check_lipschitz_sample(net, lip, cfg.metric, 200, a.seed)) {
      throw rg::ConfigError("Lipschitz constant of class " + std::to_string(bad->cls) +
                            " is too small: confidence changed by " + rg::format_double(bad->confidence_change) +
                            " where at most " + rg::format_double(bad->allowed_change) + " is allowed");
    }
    cfg.lipschitz = std::move(lip);
  }
  cfg.validate();
  rg::FeaturePartition partition = make_partition(a, net, base);
  return {std::move(net), std::move(base), std::move(cfg), std::move(partition)};
}

rg::TerminationCondition termination(const Args& a) {
  rg::TerminationCondition tc{a.max_iters, a.max_seconds, a.epsilon};
  tc.validate();
  return tc;
}

void print_report(const std::string& label, const rg::BoundReport& r, const rg::ReportPaths& paths) {
  std::cout << label << " lower " << (r.lower ? r.lower->to_string() : "none") << "\n"
            << label << " upper " << (r.upper ? r.upper->to_string() : "none") << "\n";
  if (r.error_bound) std::cout << label << " error_bound " << rg::format_double(*r.error_bound) << "\n";
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << "\n";
  std::cout << "report " << paths.report.string() << "\n";
}

int run_msr_command(const Args& a) {
  Setup s = make_setup(a, rg::GameMode::kCooperative);
  rg::Game game(s.net, s.cfg, s.partition, s.base);
  const rg::BoundReport r = rg::run_msr(game, {termination(a), a.seed, a.sample_budget});
  std::optional<rg::Verdict> verdict;
  if (a.budget) {
    rg::BoundReport unknown_fr;
    unknown_fr.problem = rg::Problem::kFr;
    verdict = rg::budget_verdict(r, unknown_fr, *a.budget);
  }
  const auto paths = rg::write_report(a.out, "msr", r, run_spec("msr", a), verdict);
  print_report("msr", r, paths);
  if (verdict) std::cout << "verdict " << rg::verdict_name(verdict->kind) << "\n";
  if (a.require_guarantee && !r.error_bound) {
    std::cerr << "guarantee requested but the grid condition is " << rg::grid_status_name(r.grid.status) << "\n";
    return kExitUncertified;
  }
  return kExitOk;
}

int run_fr_command(const Args& a) {
  Setup s = make_setup(a, rg::GameMode::kCompetitive);
  rg::Game game(s.net, s.cfg, s.partition, s.base);
  const rg::RunOptions options{termination(a), a.seed, a.sample_budget};
  const rg::BoundReport fr = rg::run_fr(game, options);
  std::optional<rg::Verdict> verdict;
  std::optional<rg::BoundReport> msr;
  if (a.budget || a.require_guarantee) {
    rg::GameConfig coop = s.cfg;
    coop.mode = rg::GameMode::kCooperative;
    rg::Game msr_game(s.net, coop, s.partition, s.base);
    msr = rg::run_msr(msr_game, options);
    const auto msr_paths = rg::write_report(a.out, "msr", *msr, run_spec("fr", a), std::nullopt);
    print_report("msr", *msr, msr_paths);
    if (a.budget) verdict = rg::budget_verdict(*msr, fr, *a.budget);
  }
  const auto paths = rg::write_report(a.out, "fr", fr, run_spec("fr", a), verdict);
  print_report("fr", fr, paths);
  if (verdict) std::cout << "verdict " << rg::verdict_name(verdict->kind) << "\n";
  if (a.require_guarantee && !(msr && msr->error_bound)) {
    std::cerr << "guarantee requested but the grid condition is not certified\n";
    return kExitUncertified;
  }
  return kExitOk;
}

int run_attack_command(const Args& a) {
  Setup s = make_setup(a, rg::GameMode::kCooperative);
  rg::Game game(s.net, s.cfg, s.partition, s.base);
  if (game.base_degenerate()) {
    std::cout << "base input is already misclassified\ndistance 0\n";
    return kExitOk;
  }
  const rg::TerminationCondition tc = termination(a);
  rg::AstarOptions ao;
  ao.tc = tc;
  ao.inadmissible_factor = a.factor;
  rg::AstarResult found = rg::astar_run(game, ao);
  std::shared_ptr<const rg::Witness> witness = found.witness;
  std::string method = "inadmissible A*";
  if (!witness && !tc.unbounded() && !found.converged) {
    const rg::MctsResult m = rg::mcts_run(game, {tc, a.seed, {}, {}});
    witness = m.witness;
    method = "MCTS";
  }
  if (!witness) {
    std::cout << "no adversarial input found within radius " << rg::format_double(a.radius) << "\n";
    return kExitNoAdversary;
  }
  std::filesystem::create_directories(a.out);
  const auto files = rg::save_witness(witness->state.reconstruct(), std::filesystem::path(a.out) / "attack_witness");
  std::cout << "method " << method << "\n"
            << "distance " << witness->bound.to_string() << "\n"
            << "class " << s.net.classify(witness->state.reconstruct()) << "\n";
  for (const auto& f : files) std::cout << "witness " << f.string() << "\n";
  return kExitOk;
}

int run_partition_command(const Args& a) {
  rg::Network net = rg::load_model(a.model);
  rg::Tensor base = load_base(net, a.input);
  const rg::FeaturePartition p = make_partition(a, net, base);
  if (a.out == "." || a.out == "-") {
    rg::write_partition_csv(std::cout, p);
  } else {
    std::ofstream out(a.out);
    if (!out) throw rg::InputError("cannot write " + a.out);
    rg::write_partition_csv(out, p);
  }
  return kExitOk;
}

int run_check_grid_command(const Args& a) {
  if (a.lipschitz.empty()) throw rg::ConfigError("check-grid needs --lipschitz");
  Setup s = make_setup(a, rg::GameMode::kCooperative);
  const rg::GridCheckResult g =
      rg::check_grid_condition(s.net, s.cfg, s.base, *s.cfg.lipschitz, a.sample_budget, a.seed);
  std::cout << "status " << rg::grid_status_name(g.status) << "\n"
            << "points_checked " << g.points_checked << "\n";
  if (g.status == rg::GridStatus::kCertified) {
    std::cout << "error_bound "
              << rg::format_double(0.5 * rg::grid_cell_radius(s.cfg.metric, s.base.size(), s.cfg.tau)) << "\n";
    return kExitOk;
  }
  if (g.witness) {
    std::cout << "violating_offsets";
    for (int o : *g.witness) std::cout << " " << o;
    std::cout << "\n";
  }
  return kExitUncertified;
}

void add_model_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--model", a.model, "Model JSON file")->required();
  cmd->add_option("--input", a.input, "Input tensor (CSV, PGM or PPM)")->required();
}

void add_game_flags(CLI::App* cmd, Args& a) {
  add_model_flags(cmd, a);
  cmd->add_option("--metric", a.metric, "L1, L2 or Linf")->capture_default_str();
  cmd->add_option("--radius", a.radius, "Neighborhood radius d")->required();
  cmd->add_option("--tau", a.tau, "Manipulation magnitude")->required();
  cmd->add_option("--features", a.features, "Number of features K (default: min(10, dimensions))");
  cmd->add_option("--partition", a.partition, "saliency or blocks")->capture_default_str();
  cmd->add_option("--probe", a.probe, "Saliency probe step (default: tau)");
  cmd->add_option("--mode", a.mode, "untargeted or targeted:<class>")->capture_default_str();
  cmd->add_option("--label", a.label, "True label of the input");
  cmd->add_option("--lipschitz", a.lipschitz, "Lipschitz constants JSON file");
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--max-iters", a.max_iters, "Iteration budget");
  cmd->add_option("--max-seconds", a.max_seconds, "Wall-clock budget");
  cmd->add_option("--epsilon", a.epsilon, "Stop after ceil(1/epsilon) iterations without improvement");
  cmd->add_option("--out", a.out, "Output directory")->capture_default_str();
  cmd->add_option("--sample-budget", a.sample_budget, "Grid points examined by the grid check")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime safe-radius and feature-robustness bounds for small classifiers"};
  app.require_subcommand(1);
  Args args;

  auto* msr = app.add_subcommand("msr", "Bounds on the maximum safe radius");
  add_game_flags(msr, args);
  msr->add_option("--budget", args.budget, "Perturbation budget d' to classify");
  msr->add_flag("--require-guarantee", args.require_guarantee, "Exit 3 unless the grid condition is certified");

  auto* fr = app.add_subcommand("fr", "Bounds on feature robustness");
  add_game_flags(fr, args);
  fr->add_option("--budget", args.budget, "Perturbation budget d' to classify (also runs msr)");
  fr->add_flag("--require-guarantee", args.require_guarantee, "Exit 3 unless the grid condition is certified");

  auto* attack = app.add_subcommand("attack", "Search for an adversarial input");
  add_game_flags(attack, args);
  attack->add_option("--factor", args.factor, "Heuristic inflation factor (> 1)")->capture_default_str();

  auto* partition = app.add_subcommand("partition", "Print the feature partition as CSV");
  add_model_flags(partition, args);
  partition->add_option("--features", args.features, "Number of features K (default: min(10, dimensions))");
  partition->add_option("--partition", args.partition, "saliency or blocks")->capture_default_str();
  partition->add_option("--probe", args.probe, "Saliency probe step (default: tau, else 0.05)");
  partition->add_option("--tau", args.tau, "Manipulation magnitude, the default probe");
  partition->add_option("--out", args.out, "CSV file (default: stdout)");

  auto* check = app.add_subcommand("check-grid", "Check the grid condition only");
  add_game_flags(check, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*msr) return run_msr_command(args);
    if (*fr) return run_fr_command(args);
    if (*attack) return run_attack_command(args);
    if (*partition) return run_partition_command(args);
    if (*check) return run_check_grid_command(args);
  } catch (const rg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
