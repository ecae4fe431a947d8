#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robustgame/verify.hpp"

namespace robustgame {

// CSV headers:
//   upper:   iteration,elapsed_seconds,upper_bound,witness_path
//   lower:   phase,elapsed_seconds,lower_bound,converged_flag
//   feature: feature_id,elapsed_seconds,feature_beta,root_alpha,exceeds_budget_flag
// Bounds print as decimals, ExceedsBudget as "> d".
void write_upper_trace_csv(std::ostream& out, const std::vector<UpperPoint>& trace,
                           const std::map<std::size_t, std::string>& witness_paths = {});
void write_lower_trace_csv(std::ostream& out, const std::vector<LowerPoint>& trace);
void write_feature_trace_csv(std::ostream& out, const std::vector<FeaturePoint>& trace);

nlohmann::json verdict_to_json(const Verdict& v);

struct ReportPaths {
  std::filesystem::path report;
  std::filesystem::path upper_trace;
  std::filesystem::path lower_trace;
  std::vector<std::filesystem::path> witnesses;
};

// Writes <prefix>_report.json, <prefix>_upper_trace.csv,
// <prefix>_lower_trace.csv and witness files under <dir>/witnesses. Paths
// inside the report are relative to `dir`.
ReportPaths write_report(const std::filesystem::path& dir, const std::string& prefix, const BoundReport& r,
                         const nlohmann::json& config, const std::optional<Verdict>& verdict);

nlohmann::json report_to_json(const BoundReport& r, const nlohmann::json& config,
                              const std::optional<Verdict>& verdict, const ReportPaths& paths,
                              const std::filesystem::path& dir);

}  // namespace robustgame
