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

// Experiment orchestration shared by the C API and the command-line tool:
// instance-set generation, (instance, configuration) benchmark grids, count
// policy sweeps and report generation from stored results.

#ifndef BENDERS_BENCH_H_
#define BENDERS_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "benders/engine.h"
#include "benders/instance.h"
#include "benders/stats.h"

namespace benders {

// Writes `count` instances named `<prefix>_<seed>_<i>.json` into `out_dir`;
// instance i is generated from MixSeed(seed, i). Returns the paths written.
// Throws kInvalidParams before touching the filesystem, kIoError.
std::vector<std::filesystem::path> GenerateInstanceFiles(
    const GenerateParams& params, int count, const std::string& prefix,
    uint64_t seed, const std::filesystem::path& out_dir);

struct NamedInstance {
  std::string name;
  TwoStageInstance instance;
};

// Reads instances; the name is the file stem.
std::vector<NamedInstance> ReadInstances(
    const std::vector<std::filesystem::path>& paths);

// Runs one instance under `config` and folds the outcome into a results
// row. Unsolved runs report the time limit as their time.
RunRow RunToRow(const std::string& instance_name,
                const std::string& config_name, const BendersConfig& config,
                const RunResult& result);

struct BenchmarkOptions {
  // Strategy specs or preset names; each becomes one configuration.
  std::vector<std::string> configs;
  std::string baseline = "default";
  // Limits and parallelism; the strategy field is replaced per config.
  BendersConfig run;
  uint64_t seed = 0;
  SummaryOptions summary;
};

struct BenchmarkOutput {
  ConfigRunTable table;
  std::vector<SummaryRow> summary;
  std::vector<ProfileCurve> profile;
};

// Every (instance, configuration) pair, instance-major. Run failures become
// Error rows. Throws kInvalidArgument for an empty grid or bad specs and
// kUnknownBaseline.
BenchmarkOutput RunBenchmark(const std::vector<NamedInstance>& instances,
                             const BenchmarkOptions& options);

// Writes results.csv, summary.csv and profile.csv into `out_dir`.
void WriteBenchmarkOutput(const BenchmarkOutput& output,
                          const std::filesystem::path& out_dir);

// A count-policy grid: mode is one of fixed, frac, vfrac, adaptive.
struct SweepAxis {
  std::string mode;
  std::vector<double> values;
};

// Parses "frac:0.05,1;fixed:1,2". An empty string is the empty grid. Throws
// kInvalidArgument.
std::vector<SweepAxis> ParseSweepGrid(const std::string& text);

struct SweepOptions {
  StrategyKind kind = StrategyKind::kViolation;
  bool aggregate = false;
  std::vector<SweepAxis> grid;
  BendersConfig run;
  uint64_t seed = 0;
  SummaryOptions summary;
};

struct SweepCell {
  std::string mode;  // "baseline" for the unfiltered reference
  double value = 0.0;
  std::string config;  // canonical strategy spec
  double geomean_ratio = 1.0;
  double p_value = 1.0;  // NaN when too few pairs
};

struct SweepOutput {
  ConfigRunTable table;
  std::vector<SweepCell> cells;  // baseline first
};

// Runs the unfiltered baseline plus one configuration per grid cell and
// reports each cell's shifted-geomean time ratio to the baseline.
SweepOutput RunSweep(const std::vector<NamedInstance>& instances,
                     const SweepOptions& options);

// Header `mode,value,geomean_ratio,p_value`.
std::string SweepCsv(const std::vector<SweepCell>& cells);

}  // namespace benders

#endif  // BENDERS_BENCH_H_
