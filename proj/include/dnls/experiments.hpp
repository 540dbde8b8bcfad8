#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnls/config.hpp"
#include "dnls/dynamics.hpp"

namespace dnls {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kOutputRootEnv = "DNLS_LAB_OUTPUT_ROOT";

/// Table written as CSV. The first column is the independent variable
/// (t for time series, trial or dt for sweeps).
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One pass/fail item: value <relation> threshold.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=" or ">="
  double threshold = 0.0;
  bool pass = false;
};

enum class RunStatus { pass, fail, numerical_error };
std::string to_string(RunStatus s);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Check> checks;
  std::vector<std::string> caveats;
  Series series;
  /// Main trajectory for the time-stepping experiments (checkpointed on request).
  std::optional<Trajectory> trajectory;
  RunStatus status = RunStatus::fail;
  std::string error;
  double wall_seconds = 0.0;
};

/// Preflights the config (ConfigError escapes), runs the pipeline and
/// captures numerical failures into the report.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Header line then one line per row; numbers as %.17g, comma separated,
/// '\n' line ends.
std::string series_csv(const Series& s);
/// Deterministic summary (no wall-clock), two-space indented JSON.
std::string report_json(const ExperimentReport& r);

/// $DNLS_LAB_OUTPUT_ROOT if set and non-empty, else ./dnls-lab-output.
std::filesystem::path output_root();

struct WrittenFiles {
  std::filesystem::path csv, json, timing;
  std::optional<std::filesystem::path> checkpoint;
};

/// Writes <root>/<output_name>/{series.csv, report.json, timing.json} and
/// trajectory.ckpt when checkpointing was requested.
WrittenFiles write_report(const ExperimentReport& r, const std::filesystem::path& root);

/// 0 pass, 1 a check failed, 3 numerical error. (2 is reserved for
/// configuration errors, raised before a report exists.)
int exit_code(const ExperimentReport& r);

}  // namespace dnls
