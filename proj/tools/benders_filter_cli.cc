// Copyright 2026 The Benders Filter Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// benders-filter: generate instances, solve them with filtered multi-cut
// Benders, and run benchmark grids, count-policy sweeps and reports.
//
// `solve` exit codes: 0 Optimal, 2 TimeLimit or IterationLimit, 3 Error
// (including an oracle mismatch), 1 usage or I/O failures. Other commands
// return 0 on success and 1 on failure.

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "benders_filter.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitLimit = 2;
constexpr int kExitError = 3;

const char* const kPresets[] = {"default",   "random", "violation",
                                "diversity", "hybrid", "hybrid+"};

struct RunFlags {
  std::string strategy = "none";
  uint64_t seed = 0;
  double time_limit = 600.0;
  double gap_tol = 1e-6;
  int max_iters = 10000;
  int jobs = std::max(1u, std::thread::hardware_concurrency());
};

void AddRunFlags(CLI::App* cmd, RunFlags& f, bool with_strategy) {
  if (with_strategy) {
    cmd->add_option("--strategy", f.strategy,
                    "none|random|violation|diversity|hybrid[+][@policy:v]")
        ->capture_default_str();
  }
  cmd->add_option("--seed", f.seed, "seed of randomized strategies")
      ->capture_default_str();
  cmd->add_option("--time-limit", f.time_limit, "seconds per run")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap-tol", f.gap_tol, "relative optimality gap")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-iters", f.max_iters, "Benders iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", f.jobs, "threads for subproblem solves")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

bf_solve_options ToOptions(const RunFlags& f) {
  bf_solve_options o;
  bf_solve_options_init(&o);
  o.strategy = f.strategy.c_str();
  o.seed = f.seed;
  o.time_limit = f.time_limit;
  o.gap_tol = f.gap_tol;
  o.max_iterations = f.max_iters;
  o.jobs = f.jobs;
  return o;
}

int Fail(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, bf_last_error());
  return kExitFailure;
}

// Expands each pattern; a pattern without matches is an error.
bool ExpandGlobs(const std::vector<std::string>& patterns,
                 std::vector<std::string>& paths) {
  for (const std::string& pattern : patterns) {
    glob_t g{};
    const int rc = glob(pattern.c_str(), 0, nullptr, &g);
    if (rc != 0) {
      globfree(&g);
      std::fprintf(stderr, "error: no files match %s\n", pattern.c_str());
      return false;
    }
    for (size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    globfree(&g);
  }
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return true;
}

std::vector<const char*> CStrings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const std::string& s : v) out.push_back(s.c_str());
  return out;
}

int SolveOne(const std::string& path, const RunFlags& flags, bool check_oracle,
             bool show_iterations) {
  bf_instance* inst = nullptr;
  if (bf_instance_read(path.c_str(), &inst) != BF_OK) {
    return Fail(path.c_str());
  }
  const bf_solve_options options = ToOptions(flags);
  bf_result* result = nullptr;
  if (bf_solve(inst, &options, &result) != BF_OK) {
    bf_instance_free(inst);
    return Fail(path.c_str());
  }
  const bf_run_status status = bf_result_status(result);
  std::printf(
      "%s status=%s objective=%.10g bound=%.10g gap=%.3g "
      "iterations=%d cuts=%lld time=%.3fs\n",
      path.c_str(), bf_run_status_name(status), bf_result_objective(result),
      bf_result_lower_bound(result), bf_result_gap(result),
      bf_result_num_iterations(result),
      static_cast<long long>(bf_result_total_cuts(result)),
      bf_result_time(result));
  if (status == BF_RUN_ERROR) {
    std::fprintf(stderr, "error: %s\n", bf_result_error(result));
  }
  if (show_iterations) {
    std::printf(
        "iter,pool,violated,viol_feas,viol_opt,selected,sel_feas,"
        "sel_opt,aggregate,z_mp,z_ub\n");
    for (int i = 0; i < bf_result_num_iterations(result); ++i) {
      bf_iteration it;
      bf_result_iteration(result, i, &it);
      std::printf("%d,%d,%d,%d,%d,%d,%d,%d,%d,%.10g,%.10g\n", it.iteration,
                  it.pool_size, it.n_violated, it.n_violated_feasibility,
                  it.n_violated_optimality, it.n_selected,
                  it.n_feasibility_selected, it.n_optimality_selected,
                  it.aggregate_added, it.z_mp, it.z_ub);
    }
  }
  int code = status == BF_RUN_OPTIMAL ? kExitOk
             : status == BF_RUN_ERROR ? kExitError
                                      : kExitLimit;
  if (check_oracle && status == BF_RUN_OPTIMAL) {
    double reference = 0.0;
    if (bf_solve_extensive(inst, &reference) != BF_OK) {
      std::fprintf(stderr, "error: extensive form: %s\n", bf_last_error());
      code = kExitError;
    } else {
      const double obj = bf_result_objective(result);
      const double rel =
          std::abs(obj - reference) / std::max(1.0, std::abs(reference));
      const bool ok = rel <= 1e-6;
      std::printf("%s oracle=%.10g relative_difference=%.3g %s\n", path.c_str(),
                  reference, rel, ok ? "MATCH" : "MISMATCH");
      if (!ok) code = kExitError;
    }
  }
  bf_result_free(result);
  bf_instance_free(inst);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cut Benders decomposition with cut filtering"};
  app.require_subcommand(1);

  // generate
  bf_generate_params gen;
  bf_generate_params_init(&gen);
  int count = 1;
  std::string prefix = "inst";
  std::string gen_out = ".";
  CLI::App* generate = app.add_subcommand("generate", "write random instances");
  generate->add_option("--nodes", gen.n_nodes, "network nodes")
      ->capture_default_str();
  generate->add_option("--arcs", gen.n_arcs, "network arcs")
      ->capture_default_str();
  generate->add_option("--switchable", gen.n_switchable, "switchable arcs")
      ->capture_default_str();
  generate->add_option("--scenarios", gen.n_scenarios, "outage scenarios")
      ->capture_default_str();
  generate
      ->add_option("--outage-size", gen.outage_size,
                   "arcs lost per scenario (1 or 2)")
      ->capture_default_str();
  generate->add_option("--count", count, "number of instances")
      ->capture_default_str();
  generate->add_option("--prefix", prefix, "file name prefix")
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "base seed")->capture_default_str();
  generate->add_option("--out", gen_out, "output directory")
      ->capture_default_str();

  // solve
  RunFlags solve_flags;
  std::vector<std::string> solve_globs;
  bool check_oracle = false;
  bool show_iterations = false;
  CLI::App* solve = app.add_subcommand("solve", "solve instances");
  solve->add_option("--instances", solve_globs, "instance files (glob)")
      ->required();
  AddRunFlags(solve, solve_flags, true);
  solve->add_flag("--check-oracle", check_oracle,
                  "compare against the extensive form");
  solve->add_flag("--iterations", show_iterations,
                  "print per-iteration records");

  // benchmark
  RunFlags bench_flags;
  std::vector<std::string> bench_globs;
  std::vector<std::string> configs(std::begin(kPresets), std::end(kPresets));
  std::string baseline = "default";
  std::string bench_out = "results";
  double min_time = 50.0;
  double shift = 10.0;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "run every (instance, config) pair");
  benchmark->add_option("--instances", bench_globs, "instance files (glob)")
      ->required();
  benchmark->add_option("--configs", configs, "strategy specs or presets")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--baseline", baseline, "reference configuration")
      ->capture_default_str();
  AddRunFlags(benchmark, bench_flags, false);
  benchmark->add_option("--out", bench_out, "output directory")
      ->capture_default_str();
  benchmark
      ->add_option("--min-time-filter", min_time,
                   "drop instances every config solves faster")
      ->capture_default_str();
  benchmark->add_option("--shift", shift, "geometric-mean shift")
      ->capture_default_str();

  // sweep
  RunFlags sweep_flags;
  sweep_flags.strategy = "violation";
  std::vector<std::string> sweep_globs;
  std::string grid = "fixed:1,2,4;frac:0.05,0.1,0.25;vfrac:0.1,0.25,0.5";
  std::string sweep_out = "sweep";
  double sweep_min_time = 50.0;
  double sweep_shift = 10.0;
  CLI::App* sweep = app.add_subcommand("sweep", "count-policy grid search");
  sweep->add_option("--instances", sweep_globs, "instance files (glob)")
      ->required();
  AddRunFlags(sweep, sweep_flags, true);
  sweep
      ->add_option("--grid", grid,
                   "mode:v1,v2;mode:v1 with modes "
                   "fixed, frac, vfrac, adaptive")
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "output directory")
      ->capture_default_str();
  sweep
      ->add_option("--min-time-filter", sweep_min_time,
                   "drop instances every config solves faster")
      ->capture_default_str();
  sweep->add_option("--shift", sweep_shift, "geometric-mean shift")
      ->capture_default_str();

  // report
  std::string results_csv;
  std::string report_baseline = "default";
  std::string report_out = ".";
  double report_min_time = 50.0;
  double report_shift = 10.0;
  CLI::App* report = app.add_subcommand("report", "summarize a results CSV");
  report->add_option("--results", results_csv, "results CSV")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--baseline", report_baseline, "reference configuration")
      ->capture_default_str();
  report->add_option("--out", report_out, "output directory")
      ->capture_default_str();
  report
      ->add_option("--min-time-filter", report_min_time,
                   "drop instances every config solves faster")
      ->capture_default_str();
  report->add_option("--shift", report_shift, "geometric-mean shift")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitFailure;
  }

  if (*generate) {
    if (bf_generate_files(&gen, count, prefix.c_str(), gen_out.c_str()) !=
        BF_OK) {
      return Fail("generate");
    }
    std::printf("wrote %d instance(s) to %s\n", count, gen_out.c_str());
    return kExitOk;
  }

  if (*solve) {
    if (bf_strategy_validate(solve_flags.strategy.c_str(), nullptr, 0) !=
        BF_OK) {
      return Fail("--strategy");
    }
    std::vector<std::string> paths;
    if (!ExpandGlobs(solve_globs, paths)) return kExitFailure;
    int worst = kExitOk;
    for (const std::string& path : paths) {
      const int code =
          SolveOne(path, solve_flags, check_oracle, show_iterations);
      // Severity order: ok < limit < error < usage.
      auto rank = [](int c) {
        return c == kExitOk ? 0 : c == kExitLimit ? 1 : c == kExitError ? 2 : 3;
      };
      if (rank(code) > rank(worst)) worst = code;
    }
    return worst;
  }

  bf_benchmark_options options;
  bf_benchmark_options_init(&options);
  std::vector<std::string> paths;

  if (*benchmark) {
    if (!ExpandGlobs(bench_globs, paths)) return kExitFailure;
    const auto path_ptrs = CStrings(paths);
    const auto config_ptrs = CStrings(configs);
    options.instance_paths = path_ptrs.data();
    options.n_instances = static_cast<int>(path_ptrs.size());
    options.configs = config_ptrs.data();
    options.n_configs = static_cast<int>(config_ptrs.size());
    options.baseline = baseline.c_str();
    options.run = ToOptions(bench_flags);
    options.min_time_filter = min_time;
    options.shift = shift;
    options.out_dir = bench_out.c_str();
    if (bf_benchmark(&options) != BF_OK) return Fail("benchmark");
    std::printf("wrote results.csv, summary.csv and profile.csv to %s\n",
                bench_out.c_str());
    return kExitOk;
  }

  if (*sweep) {
    if (!ExpandGlobs(sweep_globs, paths)) return kExitFailure;
    const auto path_ptrs = CStrings(paths);
    options.instance_paths = path_ptrs.data();
    options.n_instances = static_cast<int>(path_ptrs.size());
    options.run = ToOptions(sweep_flags);
    options.min_time_filter = sweep_min_time;
    options.shift = sweep_shift;
    options.out_dir = sweep_out.c_str();
    if (bf_sweep(&options, sweep_flags.strategy.c_str(), grid.c_str()) !=
        BF_OK) {
      return Fail("sweep");
    }
    std::printf("wrote sweep.csv and sweep_results.csv to %s\n",
                sweep_out.c_str());
    return kExitOk;
  }

  if (*report) {
    if (bf_report(results_csv.c_str(), report_baseline.c_str(), report_min_time,
                  report_shift, report_out.c_str()) != BF_OK) {
      return Fail("report");
    }
    std::printf("wrote summary.csv and profile.csv to %s\n",
                report_out.c_str());
    return kExitOk;
  }
  return kExitFailure;
}
