// offloadsim: Monte-Carlo runs, parameter sweeps and oracle checks for the
// WiFi offloading simulator. CSV goes to --out (or stdout), a short summary
// to stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "offload/config.hpp"
#include "offload/metrics.hpp"
#include "offload/oracle.hpp"

using namespace offload;

namespace {

constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string policies;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_error;
  std::optional<double> thr_error;
  unsigned threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--policy", f.policies, "comma-separated policy list");
  cmd->add_option("--runs", f.runs, "runs per point");
  cmd->add_option("--seed", f.seed, "global seed");
  cmd->add_option("--time-error", f.time_error, "segment duration error (fraction)");
  cmd->add_option("--thr-error", f.thr_error, "throughput error (fraction)");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
}

Overrides to_overrides(const CommonFlags& f) {
  Overrides o;
  if (!f.policies.empty()) {
    std::vector<Policy> list;
    std::stringstream ss(f.policies);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        list.push_back(parse_policy(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--policy: ") + e.what());
      }
    }
    o.policies = std::move(list);
  }
  o.runs = f.runs;
  o.seed = f.seed;
  o.time_error = f.time_error;
  o.throughput_error = f.thr_error;
  return o;
}

Experiment load(const std::string& path, const CommonFlags& f) {
  auto ex = load_experiment(path);
  apply_overrides(ex, to_overrides(f));
  return ex;
}

void summarize(const AggregateResult& r, std::span<const Metric> metrics) {
  std::cerr << r.scenario_id << '\n';
  for (const auto& p : r.policies) {
    std::cerr << "  " << std::left << std::setw(14) << to_string(p.policy);
    for (Metric m : metrics) {
      const auto& s = p.at(m);
      std::cerr << "  " << to_string(m) << ' ' << std::fixed << std::setprecision(2) << s.mean
                << " +/- " << s.ci95;
    }
    if (p.infeasible_count) std::cerr << "  missed " << p.infeasible_count;
    std::cerr << '\n';
  }
}

// Everything is computed before any byte is written, so a failing point
// leaves no partial CSV behind.
int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << std::flush;
    return 0;
  }
  std::ofstream file(out, std::ios::binary);
  if (!(file << text)) {
    std::cerr << "error: cannot write " << out << '\n';
    return 1;
  }
  return 0;
}

int run_points(const Experiment& ex, const CommonFlags& f) {
  std::ostringstream csv;
  write_csv_header(csv);
  RunOptions opt;
  opt.threads = f.threads;
  for (const auto& spec : expand(ex)) {
    const auto result = run_scenario(spec, opt);
    write_csv_rows(csv, result, ex.metrics);
    summarize(result, ex.metrics);
  }
  return emit(csv.str(), f.out);
}

int oracle_check(const Experiment& ex, std::size_t seeds, double dt) {
  bool ok = true;
  for (const auto& spec : expand(ex)) {
    const auto devs = check_against_oracle(spec, seeds, dt);
    OracleDeviation worst;
    for (const auto& d : devs) {
      worst.bytes_rel = std::max(worst.bytes_rel, d.deviation.bytes_rel);
      worst.completion_s = std::max(worst.completion_s, d.deviation.completion_s);
      if (!within_oracle_tolerance(d.deviation)) {
        ok = false;
        std::cout << spec.id << " seed " << d.seed_index << ' ' << to_string(d.policy)
                  << " bytes " << std::setprecision(4) << d.deviation.bytes_rel * 100
                  << "% time " << d.deviation.completion_s << " s  FAIL\n";
      }
    }
    std::cout << spec.id << ": " << seeds << " seeds, max bytes " << std::setprecision(4)
              << worst.bytes_rel * 100 << "%, max time " << worst.completion_s << " s  "
              << (within_oracle_tolerance(worst) ? "ok" : "FAIL") << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiFi offloading simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, oracle_flags;
  std::string run_file, sweep_file, oracle_file;
  std::size_t seeds = 50;
  double dt = 0.01;

  auto* run = app.add_subcommand("run", "run a scenario (and its sweep, if any)");
  run->add_option("--scenario", run_file, "scenario JSON")->required();
  add_common(run, run_flags);
  run->add_option("--out", run_flags.out, "CSV output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "run every point of a sweep file");
  sweep->add_option("--sweep", sweep_file, "sweep JSON")->required();
  add_common(sweep, sweep_flags);
  sweep->add_option("--out", sweep_flags.out, "CSV output file (default stdout)");

  auto* oracle = app.add_subcommand("oracle-check", "compare engine with the time-stepped oracle");
  oracle->add_option("--scenario", oracle_file, "scenario JSON")->required();
  add_common(oracle, oracle_flags);
  oracle->add_option("--seeds", seeds, "number of realizations")->check(CLI::PositiveNumber);
  oracle->add_option("--dt", dt, "oracle step (s)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_points(load(run_file, run_flags), run_flags);
    if (*sweep) {
      const auto ex = load(sweep_file, sweep_flags);
      if (!ex.sweep) throw ConfigError(sweep_file + ": field 'sweep': missing");
      return run_points(ex, sweep_flags);
    }
    return oracle_check(load(oracle_file, oracle_flags), seeds, dt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
