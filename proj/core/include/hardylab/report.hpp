// core/include/hardylab/report.hpp
//
// Config-driven task runner and report writer. A RunConfig (flat INI-style
// text, one section per task) names symbols by expression and lists tasks;
// run() validates everything up front -- bad configs throw ConfigError
// before any work happens or any file is touched -- then executes the tasks
// and returns a Report that report_emit() persists as one CSV of sweep
// curves per task plus a structured-text report with a stable schema.
//
// Determinism contract: (config, seed) fully determines every number in the
// emitted files; wall-clock lives only in the in-memory Report and stdout.

#pragma once

#include "hardylab/diagnostics.hpp"
#include "hardylab/identities.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hardylab {

inline constexpr const char* kToolVersion = "hardylab 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// configuration / input problem: the CLI maps this to exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskConfig {
  std::string id;
  std::string type;  // identities | hartman | zheng | product | sum_product | dilation
  std::map<std::string, std::string> kv;
};

struct RunConfig {
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::string preset;  // "" or "paper-suite"
  std::vector<std::pair<std::string, std::string>> symbols;  // name -> expression
  std::vector<TaskConfig> tasks;

  static RunConfig parse_text(const std::string& text);  // throws ConfigError
  static RunConfig parse_file(const std::string& path);
};

struct TaskResult {
  std::string id;
  std::string type;
  bool ok = true;       // thresholds/expectations met (tasks without an
                        // `expect` key are informational and always ok)
  std::string detail;   // one-line human summary
  std::string expect;   // expectation from the config, if any
  std::vector<SweepCurve> curves;                    // CSV payload
  std::optional<Verdict> verdict;
  std::optional<SuiteReport> suite;
  std::vector<std::pair<double, double>> dilation_curve;  // (radius, residual)
  std::map<std::string, double> numbers;             // extra scalars for the text report
};

struct Report {
  RunConfig config;  // echo (preset tasks expanded)
  // resolved symbol table as printable text, for the config echo
  std::vector<std::pair<std::string, std::string>> symbol_echo;
  std::string tool_version;
  double wall_seconds = 0.0;  // never written to files
  std::vector<TaskResult> tasks;

  bool all_ok() const {
    for (const TaskResult& t : tasks)
      if (!t.ok) return false;
    return true;
  }
};

// Validate + execute. Throws ConfigError on any configuration problem
// (unknown task type, undefined symbol, unparsable expression, envelope that
// cannot be certified) BEFORE running anything. Never writes files.
Report run(const RunConfig& cfg);

// Write <output_dir>/<task>_curves_<stamp>.csv for every task with sweep
// curves (columns: task, angle, radius, tag, value, error_bar; complex
// quantities split into <tag>_re / <tag>_im rows) and one
// <output_dir>/run_<stamp>.txt structured-text report. Returns the paths
// written. `stamp` defaults to the current UTC time; pass one explicitly for
// reproducible filenames.
std::vector<std::string> report_emit(const Report& rep, const std::string& output_dir,
                                     std::string stamp = "");

// one line per task; the same string is produced from a Report and from a
// re-read report file (the round-trip invariant the tests pin down)
std::string report_summary(const Report& rep);

struct ReadBackReport {
  std::map<std::string, std::string> header;
  std::vector<std::pair<std::string, std::map<std::string, std::string>>> tasks;
};
ReadBackReport read_report_text(const std::string& path);
std::string report_summary(const ReadBackReport& rb);

// the curated single-command reproduction run (preset = paper-suite)
RunConfig paper_suite_config();

}  // namespace hardylab
