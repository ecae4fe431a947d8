// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "robustgame/alphabeta.hpp"
#include "robustgame/astar.hpp"
#include "robustgame/errors.hpp"
#include "robustgame/mcts.hpp"
#include "robustgame/report.hpp"
#include "robustgame/verify.hpp"

namespace rg = robustgame;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 1e-9;

bool same(const rg::Bound& a, const rg::Bound& b) {
  if (a.exceeds_budget() != b.exceeds_budget()) return false;
  return a.exceeds_budget() || std::fabs(a.number() - b.number()) <= kTol;
}

// Tolerant order used for trace checks: a <= b up to kTol.
bool at_most(const rg::Bound& a, const rg::Bound& b) {
  if (b.exceeds_budget()) return true;
  if (a.exceeds_budget()) return false;
  return a.number() <= b.number() + kTol;
}

struct Criterion {
  std::string id;
  std::string title;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  std::string note;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 1000) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<double> as_vector(const rg::Tensor& t) { return {t.data().begin(), t.data().end()}; }

// Witness conditions shared by every upper bound: misclassified per target,
// inside the radius, distance equal to the bound, on the tau-grid.
void check_witness(Criterion& c, const oracle::Instance& inst, const rg::Bound& bound,
                   const std::shared_ptr<const rg::Witness>& w, const std::string& where) {
  if (bound.exceeds_budget()) return;
  if (!w) {
    c.expect(false, where + ": bound " + bound.to_string() + " has no witness");
    return;
  }
  const std::vector<double> x = as_vector(w->state.reconstruct());
  const std::vector<double> base = as_vector(inst.base);
  const std::size_t base_class = oracle::classify(inst.net, inst.base, base);
  const std::size_t cls = oracle::classify(inst.net, inst.base, x);
  const double d = oracle::dist(inst.cfg.metric, x, base);
  c.expect(oracle::adversarial_class(inst, base_class, cls), where + ": witness class " + std::to_string(cls) +
                                                                 " is not adversarial");
  c.expect(d <= inst.cfg.radius + 1e-12, where + ": witness outside the radius");
  c.expect(std::fabs(d - bound.number()) <= kTol, where + ": witness distance " + rg::format_double(d) +
                                                      " differs from bound " + bound.to_string());
  c.expect(oracle::is_grid_point(base, inst.cfg.tau, x), where + ": witness is not a grid point");
}

void check_upper_trace(Criterion& c, const std::vector<rg::UpperPoint>& t, const std::string& where) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    c.expect(at_most(t[i].upper, t[i - 1].upper), where + ": upper trace rises at point " + std::to_string(i));
  }
}

void check_lower_trace(Criterion& c, const std::vector<rg::LowerPoint>& t, const std::string& where) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    c.expect(at_most(t[i - 1].lower, t[i].lower), where + ": lower trace falls at point " + std::to_string(i));
  }
}

// At every timestamp of either trace, the latest lower bound does not exceed
// the latest upper bound.
template <class LowerPts, class LowerOf>
void check_sandwich(Criterion& c, const std::vector<rg::UpperPoint>& upper, const LowerPts& lower, LowerOf lower_of,
                    const std::string& where) {
  std::vector<double> stamps;
  for (const auto& p : upper) stamps.push_back(p.elapsed);
  for (const auto& p : lower) stamps.push_back(p.elapsed);
  for (double t : stamps) {
    const rg::UpperPoint* u = nullptr;
    for (const auto& p : upper) {
      if (p.elapsed <= t) u = &p;
    }
    const typename LowerPts::value_type* l = nullptr;
    for (const auto& p : lower) {
      if (p.elapsed <= t) l = &p;
    }
    if (!u || !l) continue;
    c.expect(at_most(lower_of(*l), u->upper), where + ": lower " + lower_of(*l).to_string() + " above upper " +
                                                  u->upper.to_string() + " at t=" + std::to_string(t));
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ROBUSTGAME_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the elapsed_seconds column of a trace CSV.
std::string without_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? a : line.find(',', a + 1);
    out += (b == std::string::npos ? line : line.substr(0, a) + line.substr(b)) + "\n";
  }
  return out;
}

std::string report_fingerprint(const rg::BoundReport& r) {
  std::ostringstream s;
  s << (r.lower ? r.lower->to_string() : "?") << "|" << (r.upper ? r.upper->to_string() : "?") << "|"
    << r.converged << "|" << rg::grid_status_name(r.grid.status) << "\n";
  for (const auto& p : r.upper_trace) s << "u" << p.iteration << ":" << p.upper.to_string() << "\n";
  for (const auto& p : r.lower_trace) s << "l" << p.phase << ":" << p.lower.to_string() << ":" << p.converged << "\n";
  for (const auto& p : r.feature_trace) {
    s << "f" << p.feature_id << ":" << p.feature_beta.to_string() << ":" << p.root_alpha.to_string() << "\n";
  }
  if (r.witness) {
    for (int o : r.witness->state.offsets()) s << o << ",";
  }
  return s.str();
}

rg::MctsOptions full_mcts() {
  rg::MctsOptions o;
  o.tc.max_iterations = 50'000'000;
  return o;
}

struct A1Run {
  oracle::Instance inst;
  rg::Bound fmsr = rg::Bound::value(0);
  rg::Bound ffr = rg::Bound::value(0);
  rg::Bound msr_value = rg::Bound::value(0);
  rg::Bound fr_value = rg::Bound::value(0);
  bool msr_converged = false;
  bool fr_converged = false;
};

}  // namespace

int main() {
  std::vector<Criterion> results;
  Criterion a1{"A1", "oracle equivalence"}, a2{"A2", "anytime monotonicity"}, a3{"A3", "heuristic admissibility"},
      a4{"A4", "grid error bound"}, a5{"A5", "pruning soundness"}, a6{"A6", "witness validity"},
      a7{"A7", "four-feature lookup classifier"}, a8{"A8", "safe radius at most feature robustness"},
      a9{"A9", "determinism"};

  // A1, with the traces and witnesses of the same runs feeding A2, A6 and A8.
  std::vector<A1Run> runs;
  {
    const auto start = std::chrono::steady_clock::now();
    double in_searches = 0.0;
    for (std::uint64_t seed = 1; runs.size() < 24; ++seed) {
      A1Run run{oracle::random_instance(seed)};
      const auto& inst = run.inst;
      const std::string tag = inst.description;
      run.fmsr = oracle::fmsr(inst);
      run.ffr = oracle::ffr(inst);
      const auto coop = inst.game(rg::GameMode::kCooperative);
      const auto comp = inst.game(rg::GameMode::kCompetitive);

      const auto t0 = std::chrono::steady_clock::now();
      const auto astar = rg::astar_run(coop, {});
      const auto ab = rg::alphabeta_run(comp, {});
      const auto mc_coop = rg::mcts_run(coop, full_mcts());
      const auto mc_comp = rg::mcts_run(comp, full_mcts());
      in_searches += seconds_since(t0);

      a1.expect(astar.converged && same(astar.value, run.fmsr),
                tag + ": A* " + astar.value.to_string() + " vs FMSR " + run.fmsr.to_string());
      a1.expect(ab.converged && same(ab.value, run.ffr),
                tag + ": alpha-beta " + ab.value.to_string() + " vs FFR " + run.ffr.to_string());
      a1.expect(mc_coop.exact && same(mc_coop.upper, run.fmsr),
                tag + ": MCTS cooperative " + mc_coop.upper.to_string() + " vs FMSR " + run.fmsr.to_string());
      a1.expect(mc_comp.exact && same(mc_comp.upper, run.ffr),
                tag + ": MCTS competitive " + mc_comp.upper.to_string() + " vs FFR " + run.ffr.to_string());

      check_lower_trace(a2, astar.trace, tag + " A*");
      check_upper_trace(a2, mc_coop.trace, tag + " MCTS cooperative");
      check_upper_trace(a2, mc_comp.trace, tag + " MCTS competitive");
      for (const auto& p : mc_coop.trace) check_witness(a6, inst, p.upper, p.witness, tag + " MCTS cooperative");
      for (const auto& p : mc_comp.trace) check_witness(a6, inst, p.upper, p.witness, tag + " MCTS competitive");

      rg::RunOptions ro;
      ro.tc.max_iterations = 2000;
      const auto msr = rg::run_msr(coop, ro);
      const auto fr = rg::run_fr(comp, ro);
      check_upper_trace(a2, msr.upper_trace, tag + " run_msr");
      check_lower_trace(a2, msr.lower_trace, tag + " run_msr");
      check_sandwich(a2, msr.upper_trace, msr.lower_trace, [](const rg::LowerPoint& p) { return p.lower; },
                     tag + " run_msr");
      check_upper_trace(a2, fr.upper_trace, tag + " run_fr");
      for (std::size_t i = 1; i < fr.feature_trace.size(); ++i) {
        a2.expect(at_most(fr.feature_trace[i - 1].root_alpha, fr.feature_trace[i].root_alpha),
                  tag + " run_fr: root alpha falls");
      }
      check_sandwich(a2, fr.upper_trace, fr.feature_trace, [](const rg::FeaturePoint& p) { return p.root_alpha; },
                     tag + " run_fr");
      a2.expect(at_most(*msr.lower, run.fmsr) && at_most(run.fmsr, *msr.upper), tag + ": run_msr misses FMSR");
      a2.expect(at_most(*fr.lower, run.ffr) && at_most(run.ffr, *fr.upper), tag + ": run_fr misses FFR");
      for (const auto& p : msr.upper_trace) check_witness(a6, inst, p.upper, p.witness, tag + " run_msr");
      for (const auto& p : fr.upper_trace) check_witness(a6, inst, p.upper, p.witness, tag + " run_fr");

      rg::AstarOptions attack;
      attack.inadmissible_factor = 2.0;
      const auto found = rg::astar_run(coop, attack);
      check_witness(a6, inst, found.value, found.witness, tag + " attack");
      a6.expect(found.value.exceeds_budget() == run.fmsr.exceeds_budget(), tag + ": attack missed a reachable adversary");

      run.msr_value = *msr.lower;
      run.msr_converged = msr.converged;
      run.fr_value = *fr.lower;
      run.fr_converged = fr.converged;
      runs.push_back(std::move(run));
    }
    const double total = seconds_since(start);
    a1.expect(in_searches <= 60.0, "search runtime " + std::to_string(in_searches) + " s exceeds 60 s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu instances, search time %.2f s (with oracles %.2f s)", runs.size(),
                  in_searches, total);
    a1.note = buf;
  }

  // A2: extra seeded MCTS runs with a fixed iteration budget.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto& inst = runs[seed % runs.size()].inst;
    for (auto mode : {rg::GameMode::kCooperative, rg::GameMode::kCompetitive}) {
      rg::MctsOptions o;
      o.tc.max_iterations = 250;
      o.seed = seed;
      const auto r = rg::mcts_run(inst.game(mode), o);
      check_upper_trace(a2, r.trace, inst.description + " seeded MCTS");
      for (const auto& p : r.trace) check_witness(a6, inst, p.upper, p.witness, inst.description + " seeded MCTS");
    }
  }
  a2.note = std::to_string(a2.checks) + " checks";

  // A3: every A* expansion against the brute-forced nearest other-class grid point.
  {
    oracle::GeneratorLimits limits;
    limits.allow_targeted = false;
    limits.max_tree = 0;
    std::size_t instances = 0;
    for (std::uint64_t seed = 1000; a3.checks < 10000 || instances < 10; ++seed) {
      const auto inst = oracle::random_instance(seed, limits);
      const auto grid = oracle::labeled_grid(inst);
      rg::AstarOptions o;
      o.on_expand = [&](const rg::ManipulationState& s, double h) {
        const std::vector<double> x = as_vector(s.reconstruct());
        const std::size_t cls = oracle::classify(inst.net, inst.base, x);
        const double nearest = oracle::nearest_other_class(inst, grid, x, cls);
        a3.expect(h <= nearest + kTol, inst.description + ": h=" + rg::format_double(h) + " exceeds " +
                                           rg::format_double(nearest));
      };
      rg::astar_run(inst.game(rg::GameMode::kCooperative), o);
      ++instances;
    }
    a3.note = std::to_string(a3.checks) + " expanded states over " + std::to_string(instances) + " instances";
  }

  // A4: refinement direction everywhere, error bound where the grid is certified.
  {
    std::size_t certified = 0, nondegenerate = 0, total = 0;
    // With `certified_only`, instances whose grid check fails are skipped
    // before the fine grid is brute-forced.
    auto check_instance = [&](const oracle::Instance& inst, bool certified_only) {
      const auto fine_size = oracle::grid_size(as_vector(inst.base), inst.cfg.tau / 8, inst.cfg.metric, inst.cfg.radius, 400000);
      if (fine_size > 400000) return;
      const auto grid = rg::check_grid_condition(inst.net, inst.cfg, inst.base, *inst.cfg.lipschitz, 1000000);
      const bool is_certified = grid.status == rg::GridStatus::kCertified;
      if (certified_only && !is_certified) return;
      ++total;
      const auto coarse = oracle::fmsr(inst);
      const auto fine = oracle::msr_fine(inst, 8);
      a4.expect(at_most(fine, coarse), inst.description + ": fine " + fine.to_string() + " above grid " +
                                           coarse.to_string());
      if (!is_certified) return;
      ++certified;
      const std::size_t n = inst.base.size();
      const double allowance = 0.5 * rg::grid_cell_radius(inst.cfg.metric, n, inst.cfg.tau) +
                               0.5 * rg::grid_cell_radius(inst.cfg.metric, n, inst.cfg.tau / 8);
      if (coarse.exceeds_budget() && fine.exceeds_budget()) return;
      ++nondegenerate;
      const double gap = coarse.number() - fine.number();
      a4.expect(!coarse.exceeds_budget() && gap >= -kTol && gap <= allowance + kTol,
                inst.description + ": gap " + rg::format_double(gap) + " outside [0, " +
                    rg::format_double(allowance) + "]");
    };
    for (const auto& r : runs) check_instance(r.inst, false);
    oracle::GeneratorLimits small;
    small.min_dims = small.max_dims = 4;
    small.taus = {0.02, 0.05};
    small.weight_scale = 1.0;
    small.max_tree = 0;
    for (std::uint64_t seed = 5000; certified < 5 && seed < 5400; ++seed) check_instance(oracle::random_instance(seed, small), true);
    a4.expect(certified >= 5, "only " + std::to_string(certified) + " certified instances found");
    a4.note = std::to_string(total) + " instances, " + std::to_string(certified) + " certified (" +
              std::to_string(nondegenerate) + " with an adversarial grid point)";
  }

  // A5: alpha-beta against the unpruned minimax.
  {
    std::size_t compared = 0;
    for (std::uint64_t seed = 9000; compared < 50; ++seed) {
      const auto inst = oracle::random_instance(seed);
      const auto g = inst.game(rg::GameMode::kCompetitive);
      rg::Bound reference = rg::Bound::value(0);
      try {
        reference = rg::minimax_reference(g, 2'000'000);
      } catch (const rg::OracleTooLargeError&) {
        continue;
      }
      const auto ab = rg::alphabeta_run(g, {});
      a5.expect(ab.converged && same(ab.value, reference),
                inst.description + ": alpha-beta " + ab.value.to_string() + " vs minimax " + reference.to_string());
      ++compared;
    }
    a5.note = std::to_string(compared) + " instances";
  }

  // A7: per-feature minima (3,4,3,5) under binary L1 counting.
  {
    rg::RunOptions ro;
    ro.tc.max_iterations = 3000;
    const auto big = oracle::lookup_classifier(10.0);
    const auto fr = rg::run_fr(big.game(rg::GameMode::kCompetitive), ro);
    const auto msr = rg::run_msr(big.game(rg::GameMode::kCooperative), ro);
    const std::vector<double> minima{3, 4, 3, 5};
    a7.expect(fr.feature_trace.size() == 4, "expected four feature trace rows");
    for (std::size_t j = 0; j < fr.feature_trace.size() && j < 4; ++j) {
      a7.expect(same(fr.feature_trace[j].feature_beta, rg::Bound::value(minima[j])),
                "feature " + std::to_string(j) + " minimum " + fr.feature_trace[j].feature_beta.to_string());
    }
    a7.expect(fr.lower && same(*fr.lower, rg::Bound::value(5.0)), "FR lower " + fr.lower->to_string());
    a7.expect(fr.upper && same(*fr.upper, rg::Bound::value(5.0)), "FR upper " + fr.upper->to_string());
    const auto fragile = rg::budget_verdict(msr, fr, 7.0);
    a7.expect(fragile.kind == rg::VerdictKind::kAllFragile, "d'=7 verdict " + rg::verdict_name(fragile.kind));
    const auto controllable = rg::budget_verdict(msr, fr, 4.0);
    a7.expect(controllable.kind == rg::VerdictKind::kControllable && controllable.controllable,
              "d'=4 verdict " + rg::verdict_name(controllable.kind));

    const auto small = oracle::lookup_classifier(4.0);
    const auto fr4 = rg::run_fr(small.game(rg::GameMode::kCompetitive), ro);
    a7.expect(fr4.lower && fr4.lower->exceeds_budget() && fr4.lower->number() == 4.0,
              "d=4 FR lower " + fr4.lower->to_string());
    a7.expect(fr4.upper && fr4.upper->exceeds_budget(), "d=4 FR upper " + fr4.upper->to_string());
    a7.note = "FR " + fr.upper->to_string() + ", d=4 gives " + fr4.upper->to_string() + ", MSR " + msr.upper->to_string();
  }

  // A8
  for (const auto& r : runs) {
    a8.expect(r.msr_converged && r.fr_converged, r.inst.description + ": run did not converge");
    a8.expect(r.msr_value <= r.fr_value,
              r.inst.description + ": MSR " + r.msr_value.to_string() + " above FR " + r.fr_value.to_string());
  }
  a8.note = std::to_string(runs.size()) + " instances";
  a6.note = std::to_string(a6.checks) + " checks";

  // A9: library runs and CLI runs, three times each.
  {
    std::vector<std::string> prints;
    for (int rep = 0; rep < 3; ++rep) {
      std::string all;
      for (std::size_t i = 0; i < 4; ++i) {
        const auto& inst = runs[i].inst;
        rg::RunOptions ro;
        ro.tc.max_iterations = 300;
        ro.seed = 17 + i;
        all += report_fingerprint(rg::run_msr(inst.game(rg::GameMode::kCooperative), ro));
        all += report_fingerprint(rg::run_fr(inst.game(rg::GameMode::kCompetitive), ro));
      }
      prints.push_back(all);
    }
    a9.expect(prints[0] == prints[1] && prints[1] == prints[2], "library reports differ between repetitions");

    const std::string data = ROBUSTGAME_DATA_DIR;
    const fs::path root = fs::temp_directory_path() / "robustgame_acceptance_a9";
    fs::remove_all(root);
    std::vector<std::vector<std::string>> outputs;
    for (int rep = 0; rep < 3; ++rep) {
      const fs::path dir = root / std::to_string(rep);
      const std::string common = " --model " + data + "/dense_4_2.json --input " + data +
                                 "/dense_4_2_input.csv --metric L2 --radius 0.4 --tau 0.05 --features 2 "
                                 "--lipschitz " + data + "/dense_4_2_lipschitz_l2.json --seed 5 --max-iters 400 --out " +
                                 dir.string();
      const int msr_code = run_cli("msr" + common);
      const int fr_code = run_cli("fr" + common);
      a9.expect(msr_code == 0 && fr_code == 0, "CLI run failed");
      std::vector<std::string> files;
      for (const char* f : {"msr_report.json", "fr_report.json"}) files.push_back(slurp(dir / f));
      for (const char* f : {"msr_upper_trace.csv", "msr_lower_trace.csv", "fr_upper_trace.csv", "fr_lower_trace.csv"}) {
        files.push_back(without_elapsed(slurp(dir / f)));
      }
      for (const auto& e : fs::recursive_directory_iterator(dir / "witnesses")) {
        files.push_back(e.path().filename().string() + ":" + slurp(e.path()));
      }
      outputs.push_back(files);
    }
    a9.expect(outputs[0] == outputs[1] && outputs[1] == outputs[2], "CLI outputs differ between repetitions");
    fs::remove_all(root);
    a9.note = "3 repetitions of 8 library runs and 2 CLI runs";
  }

  results = {a1, a2, a3, a4, a5, a6, a7, a8, a9};
  bool ok = true;
  for (const auto& c : results) {
    std::cout << c.id << " " << (c.passed() ? "PASS" : "FAIL") << " " << c.title << ": " << c.note;
    if (!c.passed()) std::cout << " (" << c.failures.size() << " of " << c.checks << " checks failed)";
    std::cout << "\n";
    for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) std::cout << "    " << c.failures[i] << "\n";
    ok = ok && c.passed();
  }
  return ok ? 0 : 1;
}
