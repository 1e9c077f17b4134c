#include "epsim/harness/runner.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "epsim/harness/checks.hpp"

namespace epsim::harness {
namespace fs = std::filesystem;
namespace {

using json = nlohmann::json;

std::vector<std::optional<double>> sweep_points(const ExperimentConfig& c) {
  if (c.sweep.parameter == SweepParameter::none) return {std::nullopt};
  return {c.sweep.grid.begin(), c.sweep.grid.end()};
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

DensityMatrix initial_state(const ExperimentConfig& c, const SeriesSpec& s, std::optional<double> x) {
  const DensityMatrix rho = c.initial_at(s, x).build();
  return s.twirl_initial ? to_density(depolarize_to_werner(rho)) : rho;
}

OutputFiles render_trajectories(const ExperimentConfig& c, int workers) {
  const auto points = sweep_points(c);
  const std::size_t n = c.series.size() * points.size();
  std::vector<Trajectory> results(n);
  const IterationPolicy base{c.twirl_per_round, c.inter_round_hadamard, ControlSource::identical};
  parallel_for(n, workers, [&](std::size_t k) {
    const SeriesSpec& s = c.series[k / points.size()];
    const auto x = points[k % points.size()];
    IterationPolicy policy = base;
    policy.control = s.control;
    results[k] = iterate(s.variant, c.noise_at(s, x), initial_state(c, s, x), c.rounds, policy);
  });

  std::ostringstream traj;
  traj << "experiment,series,protocol,variant,sweep_parameter,sweep_value,round,fidelity,infidelity,p00,p01,p10,p11,"
          "success_prob,cumulative_yield_with_control,cumulative_yield_without_control,subroutine\n";
  std::ostringstream summary;
  summary << "experiment,series,protocol,variant,sweep_parameter,sweep_value,f_target,reached,rounds_to_target,"
             "yield_with_control,yield_without_control,final_fidelity,aborted\n";
  for (std::size_t k = 0; k < n; ++k) {
    const SeriesSpec& s = c.series[k / points.size()];
    const auto x = points[k % points.size()];
    const std::string head = csv_field(c.name) + "," + csv_field(s.label) + "," + to_string(s.variant.base) + "," +
                             csv_field(s.variant.describe()) + "," + to_string(c.sweep.parameter) + "," + opt(x);
    for (const auto& r : results[k].rounds) {
      traj << head << "," << r.round << "," << format_double(r.fidelity) << "," << format_double(1.0 - r.fidelity);
      for (double p : r.bell) traj << "," << format_double(p);
      traj << "," << format_double(r.success_probability) << "," << format_double(r.yield_with_control) << ","
           << format_double(r.yield_without_control) << "," << r.subroutine << "\n";
    }
    if (c.kind == ExperimentKind::yield) {
      const YieldResult with = yield(results[k], c.f_target, s.variant.copies_consumed());
      const YieldResult without = yield(results[k], c.f_target, s.variant.data_pairs());
      summary << head << "," << format_double(c.f_target) << "," << (with.rounds_to_target ? "true" : "false") << ","
              << (with.rounds_to_target ? std::to_string(*with.rounds_to_target) : "inf") << ","
              << format_double(with.value) << "," << format_double(without.value) << ","
              << format_double(results[k].rounds.back().fidelity) << "," << (results[k].aborted ? "true" : "false")
              << "\n";
    }
  }
  OutputFiles files{{c.name + ".csv", traj.str()}};
  if (c.kind == ExperimentKind::yield) files.emplace_back(c.name + "_yield.csv", summary.str());
  return files;
}

OutputFiles render_regimes(const ExperimentConfig& c, int workers) {
  const auto& grid = c.sweep.grid;
  const std::size_t n = c.series.size() * grid.size();
  std::vector<OperationalRegime> results(n);
  std::vector<NoiseModel> models(n);
  parallel_for(n, workers, [&](std::size_t k) {
    const SeriesSpec& s = c.series[k / grid.size()];
    const double q = grid[k % grid.size()];
    models[k] = c.noise_at(s, q);
    results[k] = operational_regime_at(s.variant, models[k], q);
  });
  std::ostringstream regime;
  regime << "experiment,series,protocol,variant,noise_family,q,q_cnot,q_cswap,p_meas,operates,f_min,f_max,"
            "fixed_point_rounds,converged,note\n";
  std::ostringstream breakdown;
  breakdown << "experiment,series,protocol,variant,noise_family,breakdown_q\n";
  for (std::size_t si = 0; si < c.series.size(); ++si) {
    const SeriesSpec& s = c.series[si];
    const std::string head = csv_field(c.name) + "," + csv_field(s.label) + "," + to_string(s.variant.base) + "," +
                             csv_field(s.variant.describe()) + "," + to_string(c.noise.family);
    std::vector<OperationalRegime> row;
    for (std::size_t qi = 0; qi < grid.size(); ++qi) {
      const std::size_t k = si * grid.size() + qi;
      const auto& r = results[k];
      row.push_back(r);
      regime << head << "," << format_double(r.q) << "," << format_double(models[k].q_cnot) << ","
             << format_double(models[k].q_cswap) << "," << format_double(models[k].p_meas) << ","
             << (r.operates ? "true" : "false") << "," << (r.operates ? format_double(r.f_min) : "") << ","
             << (r.operates ? format_double(r.f_max) : "") << "," << (r.operates ? std::to_string(r.limit.rounds) : "")
             << "," << (r.operates ? (r.limit.converged ? "true" : "false") : "") << "," << csv_field(r.limit.note)
             << "\n";
    }
    const auto b = breakdown_strength(row);
    breakdown << head << "," << opt(b) << "\n";
  }
  return {{c.name + ".csv", regime.str()}, {c.name + "_breakdown.csv", breakdown.str()}};
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int workers_from_environment() {
  if (const char* env = std::getenv(kWorkersVariable); env && *env) {
    int value = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 1) {
      throw ConfigError(kWorkersVariable, "must be a positive integer, got '" + s + "'");
    }
    return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex guard;
  std::size_t error_index = n;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t k = next++; k < n && !failed; k = next++) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(guard);
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

OutputFiles render_experiment(const ExperimentConfig& config, int workers) {
  config.validate();
  return config.kind == ExperimentKind::regime ? render_regimes(config, workers)
                                               : render_trajectories(config, workers);
}

RunReport run(const std::vector<ExperimentConfig>& configs, const RunOptions& options) {
  const int workers = options.workers > 0 ? options.workers : workers_from_environment();
  const fs::path dir(options.out_dir);
  std::vector<fs::path> written;
  RunReport report;
  try {
    fs::create_directories(dir);
    fs::remove(dir / "manifest.json");
    json experiments = json::array();
    for (const auto& c : configs) {
      const auto t0 = std::chrono::steady_clock::now();
      const OutputFiles files = render_experiment(c, workers);
      ExperimentReport er{c.name, {}, 0.0};
      for (const auto& [name, contents] : files) {
        const fs::path target = dir / name;
        const fs::path tmp = dir / (name + ".partial");
        written.push_back(tmp);
        write_file(tmp, contents);
        fs::rename(tmp, target);
        written.back() = target;
        er.files.push_back(name);
      }
      er.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      experiments.push_back({{"name", er.name}, {"files", er.files}, {"wall_time_s", er.wall_seconds}});
      report.experiments.push_back(std::move(er));
    }
    json checks = json::object();
    if (options.include_checks) {
      json failed = json::array();
      for (const auto& r : run_checks("")) {
        (r.passed ? report.checks_passed : report.checks_failed)++;
        if (!r.passed) failed.push_back(r.name);
      }
      checks = {{"passed", report.checks_passed}, {"failed", report.checks_failed}, {"failed_checks", failed}};
    }
    const json manifest{{"artifact_version", kArtifactVersion},
                        {"config", json::parse(serialize(configs))},
                        {"experiments", experiments},
                        {"invariant_checks", checks},
                        {"workers", workers}};
    const fs::path path = dir / "manifest.json";
    const fs::path tmp = dir / "manifest.json.partial";
    written.push_back(tmp);
    write_file(tmp, manifest.dump(2) + "\n");
    fs::rename(tmp, path);
    report.manifest_path = path.string();
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : written) fs::remove(p, ignored);
    throw;
  }
  return report;
}

}  // namespace epsim::harness
