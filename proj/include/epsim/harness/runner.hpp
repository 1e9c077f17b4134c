#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epsim/harness/config.hpp"

namespace epsim::harness {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Environment variable holding the worker count.
inline constexpr const char* kWorkersVariable = "EPSIM_WORKERS";

/// Workers from EPSIM_WORKERS, else the hardware concurrency (at least 1).
/// Throws ConfigError for a malformed value.
int workers_from_environment();

/// Runs fn(0..n-1) on up to `workers` threads. The first exception (by task
/// index) is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// CSV files (name, contents) of one experiment, byte-identical across runs.
using OutputFiles = std::vector<std::pair<std::string, std::string>>;
OutputFiles render_experiment(const ExperimentConfig& config, int workers);

struct ExperimentReport {
  std::string name;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

struct RunOptions {
  std::string out_dir = "results";
  int workers = 0;  // 0: workers_from_environment()
  bool include_checks = true;
};

struct RunReport {
  std::vector<ExperimentReport> experiments;
  std::string manifest_path;
  int checks_passed = 0;
  int checks_failed = 0;
};

/// Writes every experiment's CSVs and then manifest.json into out_dir.
/// On any failure the files written by this call are removed and the error rethrown.
RunReport run(const std::vector<ExperimentConfig>& configs, const RunOptions& options);

}  // namespace epsim::harness
