#include "robustgame/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "robustgame/errors.hpp"
#include "robustgame/tensor_io.hpp"

namespace robustgame {

namespace {

std::string elapsed_text(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", s);
  return buf;
}

nlohmann::json optional_bound(const std::optional<Bound>& b) {
  return b ? b->to_json() : nlohmann::json(nullptr);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

}  // namespace

void write_upper_trace_csv(std::ostream& out, const std::vector<UpperPoint>& trace,
                           const std::map<std::size_t, std::string>& witness_paths) {
  out << "iteration,elapsed_seconds,upper_bound,witness_path\n";
  for (const UpperPoint& p : trace) {
    auto it = witness_paths.find(p.iteration);
    out << p.iteration << "," << elapsed_text(p.elapsed) << "," << p.upper.to_string() << ","
        << (it == witness_paths.end() ? "" : it->second) << "\n";
  }
}

void write_lower_trace_csv(std::ostream& out, const std::vector<LowerPoint>& trace) {
  out << "phase,elapsed_seconds,lower_bound,converged_flag\n";
  for (const LowerPoint& p : trace) {
    out << p.phase << "," << elapsed_text(p.elapsed) << "," << p.lower.to_string() << "," << (p.converged ? 1 : 0)
        << "\n";
  }
}

void write_feature_trace_csv(std::ostream& out, const std::vector<FeaturePoint>& trace) {
  out << "feature_id,elapsed_seconds,feature_beta,root_alpha,exceeds_budget_flag\n";
  for (const FeaturePoint& p : trace) {
    out << p.feature_id << "," << elapsed_text(p.elapsed) << "," << p.feature_beta.to_string() << ","
        << p.root_alpha.to_string() << "," << (p.root_alpha.exceeds_budget() ? 1 : 0) << "\n";
  }
}

nlohmann::json verdict_to_json(const Verdict& v) {
  return {{"budget", v.budget},
          {"kind", verdict_name(v.kind)},
          {"safe_radius_certified", optional_bound(v.safe_radius_certified)},
          {"nearest_adversarial_distance", optional_bound(v.nearest_adversarial_distance)},
          {"controllable", v.controllable}};
}

nlohmann::json report_to_json(const BoundReport& r, const nlohmann::json& config,
                              const std::optional<Verdict>& verdict, const ReportPaths& paths,
                              const std::filesystem::path& dir) {
  auto rel = [&](const std::filesystem::path& p) { return p.lexically_relative(dir).generic_string(); };
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& p : paths.witnesses) witnesses.push_back(rel(p));
  nlohmann::json diagnostics = r.diagnostics;
  return {{"problem", problem_name(r.problem)},
          {"config", config},
          {"lower", optional_bound(r.lower)},
          {"upper", optional_bound(r.upper)},
          {"error_bound", r.error_bound ? nlohmann::json(*r.error_bound) : nlohmann::json("uncertified")},
          {"certified", r.error_bound.has_value()},
          {"grid_status", grid_status_name(r.grid.status)},
          {"converged", r.converged},
          {"verdict", verdict ? verdict_to_json(*verdict) : nlohmann::json(nullptr)},
          {"trace_csv_path", {{"upper", rel(paths.upper_trace)}, {"lower", rel(paths.lower_trace)}}},
          {"witness_paths", witnesses},
          {"diagnostics", diagnostics}};
}

ReportPaths write_report(const std::filesystem::path& dir, const std::string& prefix, const BoundReport& r,
                         const nlohmann::json& config, const std::optional<Verdict>& verdict) {
  std::filesystem::create_directories(dir / "witnesses");
  ReportPaths paths;
  paths.report = dir / (prefix + "_report.json");
  paths.upper_trace = dir / (prefix + "_upper_trace.csv");
  paths.lower_trace = dir / (prefix + "_lower_trace.csv");

  std::map<std::size_t, std::string> improvement_files;
  const Witness* previous = nullptr;
  for (const UpperPoint& p : r.upper_trace) {
    if (!p.witness || p.witness.get() == previous) continue;
    previous = p.witness.get();
    const auto files = save_witness(p.witness->state.reconstruct(),
                                    dir / "witnesses" / (prefix + "_upper_" + std::to_string(p.iteration)));
    improvement_files[p.iteration] = files.front().lexically_relative(dir).generic_string();
  }
  if (r.witness) {
    const auto files = save_witness(r.witness->state.reconstruct(), dir / "witnesses" / (prefix + "_witness"));
    paths.witnesses.insert(paths.witnesses.end(), files.begin(), files.end());
  }
  {
    auto out = open_out(paths.upper_trace);
    write_upper_trace_csv(out, r.upper_trace, improvement_files);
  }
  {
    auto out = open_out(paths.lower_trace);
    if (r.problem == Problem::kMsr) {
      write_lower_trace_csv(out, r.lower_trace);
    } else {
      write_feature_trace_csv(out, r.feature_trace);
    }
  }
  auto out = open_out(paths.report);
  out << report_to_json(r, config, verdict, paths, dir).dump(2) << "\n";
  return paths;
}

}  // namespace robustgame
