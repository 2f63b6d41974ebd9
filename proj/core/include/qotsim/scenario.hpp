#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qotsim/analysis.hpp"

namespace qotsim {

enum class ReportFormat { csv, jsonl };
enum class Verdict { pass, fail, info };

const char* verdict_name(Verdict v);

// One line of a scenario report.  `margin` is the distance left before the
// row's acceptance rule would flip: positive passes, negative fails, and
// informational rows carry 0 with verdict `info`.
struct ScenarioRow {
  std::string name;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double target = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::info;
};

struct RunOptions {
  std::string scenario;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<int> n;
  std::optional<int> workers;
  std::optional<double> zeta;
  std::optional<std::string> alice;
  std::optional<std::string> bob;
};

std::vector<std::string> scenario_names();

// Runs one catalog scenario and returns its report rows.  Throws
// std::invalid_argument for unknown names or inapplicable options.
std::vector<ScenarioRow> run_scenario(const RunOptions& options);

// Renders rows as CSV (fixed header, %.10g numbers) or JSONL.
std::string emit_report(std::span<const ScenarioRow> rows, ReportFormat format);

// Full command-line entry point.  Returns 0 when every non-informational row
// passes, 1 when any fails, 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace qotsim
