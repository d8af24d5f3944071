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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "benders/bench.h"
#include "benders/engine.h"
#include "benders/error.h"
#include "benders/filtering.h"
#include "benders/instance.h"
#include "benders/lp.h"
#include "benders/stats.h"
#include "benders_filter.h"

struct bf_instance {
  benders::TwoStageInstance instance;
};

struct bf_result {
  benders::RunResult result;
};

namespace {

thread_local std::string last_error;

bf_status ToStatus(benders::ErrorCode code) {
  using benders::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return BF_INVALID_ARGUMENT;
    case ErrorCode::kInvalidParams:
      return BF_INVALID_PARAMS;
    case ErrorCode::kDimensionMismatch:
      return BF_DIMENSION_MISMATCH;
    case ErrorCode::kNumericalFailure:
      return BF_NUMERICAL_FAILURE;
    case ErrorCode::kNodeLimitExceeded:
      return BF_NODE_LIMIT_EXCEEDED;
    case ErrorCode::kParseError:
      return BF_PARSE_ERROR;
    case ErrorCode::kSchemaVersionMismatch:
      return BF_SCHEMA_VERSION_MISMATCH;
    case ErrorCode::kIoError:
      return BF_IO_ERROR;
    case ErrorCode::kZeroNormVector:
      return BF_ZERO_NORM_VECTOR;
    case ErrorCode::kInvalidK:
      return BF_INVALID_K;
    case ErrorCode::kEmptyViolatedPool:
      return BF_EMPTY_VIOLATED_POOL;
    case ErrorCode::kEmptyInput:
      return BF_EMPTY_INPUT;
    case ErrorCode::kInsufficientPairs:
      return BF_INSUFFICIENT_PAIRS;
    case ErrorCode::kUnknownBaseline:
      return BF_UNKNOWN_BASELINE;
  }
  return BF_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes and the thread's last
// error message.
template <class Fn>
bf_status Guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return BF_OK;
  } catch (const benders::Error& e) {
    last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return BF_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return BF_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) {
    throw benders::Error(benders::ErrorCode::kInvalidArgument,
                         std::string(what) + " must not be null");
  }
}

benders::GenerateParams ToParams(const bf_generate_params& p) {
  benders::GenerateParams out;
  out.n_nodes = p.n_nodes;
  out.n_arcs = p.n_arcs;
  out.n_switchable = p.n_switchable;
  out.n_scenarios = p.n_scenarios;
  out.outage_size = p.outage_size;
  out.seed = p.seed;
  return out;
}

benders::BendersConfig ToConfig(const bf_solve_options& o) {
  benders::BendersConfig config;
  config.strategy =
      benders::ParseStrategySpec(o.strategy != nullptr ? o.strategy : "none");
  config.strategy.seed = o.seed;
  config.gap_tol = o.gap_tol;
  config.time_limit = o.time_limit;
  config.max_iterations = o.max_iterations;
  config.jobs = std::max(1, o.jobs);
  if (!(o.gap_tol >= 0.0) || !(o.time_limit > 0.0) || o.max_iterations < 1) {
    throw benders::Error(benders::ErrorCode::kInvalidArgument,
                         "gap_tol must be >= 0, time_limit > 0 and "
                         "max_iterations >= 1");
  }
  return config;
}

std::vector<benders::NamedInstance> LoadInstances(
    const bf_benchmark_options& o) {
  Require(o.instance_paths != nullptr || o.n_instances == 0, "instance_paths");
  std::vector<std::filesystem::path> paths;
  for (int i = 0; i < o.n_instances; ++i) {
    Require(o.instance_paths[i] != nullptr, "instance path");
    paths.emplace_back(o.instance_paths[i]);
  }
  if (paths.empty()) {
    throw benders::Error(benders::ErrorCode::kInvalidArgument,
                         "no instances given");
  }
  return benders::ReadInstances(paths);
}

benders::SummaryOptions ToSummary(double min_time, double shift) {
  benders::SummaryOptions s;
  s.rules.min_time = min_time;
  s.shift = shift;
  return s;
}

}  // namespace

extern "C" {

const char* bf_last_error(void) { return last_error.c_str(); }

const char* bf_status_name(bf_status status) {
  switch (status) {
    case BF_OK:
      return "Ok";
    case BF_INVALID_ARGUMENT:
      return "InvalidArgument";
    case BF_INVALID_PARAMS:
      return "InvalidParams";
    case BF_DIMENSION_MISMATCH:
      return "DimensionMismatch";
    case BF_NUMERICAL_FAILURE:
      return "NumericalFailure";
    case BF_NODE_LIMIT_EXCEEDED:
      return "NodeLimitExceeded";
    case BF_PARSE_ERROR:
      return "ParseError";
    case BF_SCHEMA_VERSION_MISMATCH:
      return "SchemaVersionMismatch";
    case BF_IO_ERROR:
      return "IoError";
    case BF_ZERO_NORM_VECTOR:
      return "ZeroNormVector";
    case BF_INVALID_K:
      return "InvalidK";
    case BF_EMPTY_VIOLATED_POOL:
      return "EmptyViolatedPool";
    case BF_EMPTY_INPUT:
      return "EmptyInput";
    case BF_INSUFFICIENT_PAIRS:
      return "InsufficientPairs";
    case BF_UNKNOWN_BASELINE:
      return "UnknownBaseline";
    case BF_INTERNAL:
      return "Internal";
  }
  return "Unknown";
}

const char* bf_run_status_name(bf_run_status status) {
  switch (status) {
    case BF_RUN_OPTIMAL:
      return "Optimal";
    case BF_RUN_TIME_LIMIT:
      return "TimeLimit";
    case BF_RUN_ITERATION_LIMIT:
      return "IterationLimit";
    case BF_RUN_ERROR:
      return "Error";
  }
  return "Error";
}

void bf_generate_params_init(bf_generate_params* params) {
  if (params == nullptr) return;
  const benders::GenerateParams d;
  params->n_nodes = d.n_nodes;
  params->n_arcs = d.n_arcs;
  params->n_switchable = d.n_switchable;
  params->n_scenarios = d.n_scenarios;
  params->outage_size = d.outage_size;
  params->seed = d.seed;
}

bf_status bf_instance_generate(const bf_generate_params* params,
                               bf_instance** out) {
  return Guard([&] {
    Require(params != nullptr, "params");
    Require(out != nullptr, "out");
    *out = nullptr;
    auto* handle =
        new bf_instance{benders::GenerateInstance(ToParams(*params))};
    *out = handle;
  });
}

bf_status bf_generate_files(const bf_generate_params* params, int count,
                            const char* prefix, const char* out_dir) {
  return Guard([&] {
    Require(params != nullptr, "params");
    Require(out_dir != nullptr, "out_dir");
    benders::GenerateInstanceFiles(ToParams(*params), count,
                                   prefix != nullptr ? prefix : "inst",
                                   params->seed, out_dir);
  });
}

bf_status bf_instance_read(const char* path, bf_instance** out) {
  return Guard([&] {
    Require(path != nullptr, "path");
    Require(out != nullptr, "out");
    *out = nullptr;
    *out = new bf_instance{benders::ReadInstance(path)};
  });
}

bf_status bf_instance_write(const bf_instance* instance, const char* path) {
  return Guard([&] {
    Require(instance != nullptr, "instance");
    Require(path != nullptr, "path");
    benders::WriteInstance(instance->instance, path);
  });
}

void bf_instance_free(bf_instance* instance) { delete instance; }

bf_status bf_instance_dims(const bf_instance* instance, int* n_nodes,
                           int* n_arcs, int* n_switchable, int* n_scenarios) {
  return Guard([&] {
    Require(instance != nullptr, "instance");
    const benders::TwoStageInstance& inst = instance->instance;
    if (n_nodes) *n_nodes = static_cast<int>(inst.network.nodes.size());
    if (n_arcs) *n_arcs = static_cast<int>(inst.network.arcs.size());
    if (n_switchable) {
      *n_switchable = static_cast<int>(
          std::count_if(inst.network.arcs.begin(), inst.network.arcs.end(),
                        [](const benders::Arc& a) { return a.switchable; }));
    }
    if (n_scenarios) *n_scenarios = static_cast<int>(inst.scenarios.size());
  });
}

bf_status bf_strategy_validate(const char* spec, char* canonical,
                               size_t capacity) {
  return Guard([&] {
    Require(spec != nullptr, "spec");
    const benders::StrategyConfig config = benders::ParseStrategySpec(spec);
    if (canonical != nullptr && capacity > 0) {
      const std::string text = benders::FormatStrategySpec(config);
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(canonical, text.data(), n);
      canonical[n] = '\0';
    }
  });
}

void bf_solve_options_init(bf_solve_options* options) {
  if (options == nullptr) return;
  const benders::BendersConfig d;
  options->strategy = nullptr;
  options->seed = 0;
  options->gap_tol = d.gap_tol;
  options->time_limit = d.time_limit;
  options->max_iterations = d.max_iterations;
  options->jobs = d.jobs;
}

bf_status bf_solve(const bf_instance* instance, const bf_solve_options* options,
                   bf_result** out) {
  return Guard([&] {
    Require(instance != nullptr, "instance");
    Require(out != nullptr, "out");
    *out = nullptr;
    bf_solve_options defaults;
    bf_solve_options_init(&defaults);
    const benders::BendersConfig config =
        ToConfig(options != nullptr ? *options : defaults);
    *out = new bf_result{benders::RunBenders(instance->instance, config)};
  });
}

void bf_result_free(bf_result* result) { delete result; }

bf_run_status bf_result_status(const bf_result* result) {
  if (result == nullptr) return BF_RUN_ERROR;
  switch (result->result.status) {
    case benders::RunStatus::kOptimal:
      return BF_RUN_OPTIMAL;
    case benders::RunStatus::kTimeLimit:
      return BF_RUN_TIME_LIMIT;
    case benders::RunStatus::kIterationLimit:
      return BF_RUN_ITERATION_LIMIT;
    case benders::RunStatus::kError:
      return BF_RUN_ERROR;
  }
  return BF_RUN_ERROR;
}

double bf_result_objective(const bf_result* result) {
  return result ? result->result.objective : std::nan("");
}

double bf_result_lower_bound(const bf_result* result) {
  return result ? result->result.lower_bound : std::nan("");
}

double bf_result_gap(const bf_result* result) {
  return result ? result->result.gap : std::nan("");
}

double bf_result_time(const bf_result* result) {
  return result ? result->result.total_time : std::nan("");
}

int bf_result_num_iterations(const bf_result* result) {
  return result ? static_cast<int>(result->result.iterations.size()) : 0;
}

int64_t bf_result_total_cuts(const bf_result* result) {
  return result ? result->result.total_cuts_added : 0;
}

const char* bf_result_error(const bf_result* result) {
  return result ? result->result.error.c_str() : "";
}

bf_status bf_result_iteration(const bf_result* result, int index,
                              bf_iteration* out) {
  return Guard([&] {
    Require(result != nullptr, "result");
    Require(out != nullptr, "out");
    const auto& records = result->result.iterations;
    if (index < 0 || index >= static_cast<int>(records.size())) {
      throw benders::Error(
          benders::ErrorCode::kInvalidArgument,
          "iteration index " + std::to_string(index) + " out of range");
    }
    const benders::IterationRecord& r = records[index];
    out->iteration = r.iteration;
    out->pool_size = r.pool_size;
    out->n_violated = r.n_violated;
    out->n_violated_feasibility = r.n_violated_feasibility;
    out->n_violated_optimality = r.n_violated_optimality;
    out->n_selected = r.n_selected;
    out->n_feasibility_selected = r.n_feasibility_selected;
    out->n_optimality_selected = r.n_optimality_selected;
    out->aggregate_added = r.aggregate_added ? 1 : 0;
    out->repeated_assignment = r.repeated_assignment ? 1 : 0;
    out->min_selected_violation = r.min_selected_violation;
    out->z_mp = r.z_mp;
    out->z_ub = r.z_ub;
    out->master_time = r.master_time;
    out->subproblem_time = r.subproblem_time;
    out->filter_time = r.filter_time;
  });
}

bf_status bf_result_incumbent(const bf_result* result, double* values,
                              int capacity, int* length) {
  return Guard([&] {
    Require(result != nullptr, "result");
    const std::vector<double>& inc = result->result.incumbent;
    if (length != nullptr) *length = static_cast<int>(inc.size());
    if (values != nullptr) {
      const int n = std::min(capacity, static_cast<int>(inc.size()));
      std::copy(inc.begin(), inc.begin() + std::max(0, n), values);
    }
  });
}

bf_status bf_solve_extensive(const bf_instance* instance, double* objective) {
  return Guard([&] {
    Require(instance != nullptr, "instance");
    Require(objective != nullptr, "objective");
    const benders::ExtensiveForm ef =
        benders::BuildExtensiveForm(instance->instance);
    const benders::LpSolution sol = benders::SolveMip(ef.lp);
    if (sol.status != benders::LpStatus::kOptimal) {
      throw benders::Error(benders::ErrorCode::kNumericalFailure,
                           std::string("extensive form is ") +
                               benders::LpStatusName(sol.status));
    }
    *objective = sol.objective;
  });
}

void bf_benchmark_options_init(bf_benchmark_options* options) {
  if (options == nullptr) return;
  options->instance_paths = nullptr;
  options->n_instances = 0;
  options->configs = nullptr;
  options->n_configs = 0;
  options->baseline = nullptr;
  bf_solve_options_init(&options->run);
  const benders::SummaryOptions s;
  options->min_time_filter = s.rules.min_time;
  options->shift = s.shift;
  options->out_dir = nullptr;
}

bf_status bf_benchmark(const bf_benchmark_options* options) {
  return Guard([&] {
    Require(options != nullptr, "options");
    Require(options->out_dir != nullptr, "out_dir");
    Require(options->configs != nullptr || options->n_configs == 0, "configs");
    benders::BenchmarkOptions bench;
    for (int i = 0; i < options->n_configs; ++i) {
      Require(options->configs[i] != nullptr, "config");
      bench.configs.emplace_back(options->configs[i]);
    }
    if (options->baseline != nullptr) bench.baseline = options->baseline;
    bf_solve_options run = options->run;
    run.strategy = nullptr;
    bench.run = ToConfig(run);
    bench.seed = options->run.seed;
    bench.summary = ToSummary(options->min_time_filter, options->shift);
    const auto instances = LoadInstances(*options);
    const benders::BenchmarkOutput out =
        benders::RunBenchmark(instances, bench);
    benders::WriteBenchmarkOutput(out, options->out_dir);
  });
}

bf_status bf_sweep(const bf_benchmark_options* options, const char* strategy,
                   const char* grid) {
  return Guard([&] {
    Require(options != nullptr, "options");
    Require(options->out_dir != nullptr, "out_dir");
    benders::SweepOptions sweep;
    const benders::StrategyConfig base = benders::ParseStrategySpec(
        strategy != nullptr ? strategy : "violation");
    if (base.kind == benders::StrategyKind::kNoFilter) {
      throw benders::Error(benders::ErrorCode::kInvalidArgument,
                           "sweep strategy must be a filtering strategy");
    }
    sweep.kind = base.kind;
    sweep.aggregate = base.aggregate;
    sweep.grid = benders::ParseSweepGrid(grid != nullptr ? grid : "");
    bf_solve_options run = options->run;
    run.strategy = nullptr;
    sweep.run = ToConfig(run);
    sweep.seed = options->run.seed;
    sweep.summary = ToSummary(options->min_time_filter, options->shift);
    const auto instances = LoadInstances(*options);
    const benders::SweepOutput out = benders::RunSweep(instances, sweep);
    const std::filesystem::path dir(options->out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw benders::Error(benders::ErrorCode::kIoError,
                           "cannot create " + dir.string());
    }
    benders::WriteTextFile(dir / "sweep.csv", benders::SweepCsv(out.cells));
    benders::WriteTextFile(dir / "sweep_results.csv",
                           benders::ResultsCsv(out.table));
  });
}

bf_status bf_report(const char* results_csv, const char* baseline,
                    double min_time_filter, double shift, const char* out_dir) {
  return Guard([&] {
    Require(results_csv != nullptr, "results_csv");
    Require(out_dir != nullptr, "out_dir");
    const benders::ConfigRunTable table = benders::ReadResultsCsv(results_csv);
    if (table.empty()) {
      throw benders::Error(benders::ErrorCode::kEmptyInput,
                           std::string(results_csv) + " has no result rows");
    }
    const auto summary =
        benders::Summarize(table, baseline != nullptr ? baseline : "default",
                           ToSummary(min_time_filter, shift));
    const auto profile = benders::PerformanceProfile(table);
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw benders::Error(benders::ErrorCode::kIoError,
                           "cannot create " + dir.string());
    }
    benders::WriteTextFile(dir / "summary.csv", benders::SummaryCsv(summary));
    benders::WriteTextFile(dir / "profile.csv", benders::ProfileCsv(profile));
  });
}

}  // extern "C"
