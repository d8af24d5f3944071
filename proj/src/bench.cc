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

#include "benders/bench.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "benders/error.h"
#include "benders/filtering.h"
#include "benders/logging.h"
#include "benders/random.h"

namespace benders {
namespace {

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string FormatValue(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Runs every instance under one configuration, appending rows.
void RunConfig(const std::vector<NamedInstance>& instances,
               const std::string& name, const BendersConfig& config,
               ConfigRunTable& table) {
  for (const NamedInstance& item : instances) {
    RunResult result;
    try {
      result = RunBenders(item.instance, config);
    } catch (const Error& e) {
      result.status = RunStatus::kError;
      result.error = e.what();
    }
    if (result.status == RunStatus::kError) {
      Log(LogLevel::kWarn,
          item.name + " [" + name + "] failed: " + result.error);
    }
    table.push_back(RunToRow(item.name, name, config, result));
  }
}

}  // namespace

std::vector<std::filesystem::path> GenerateInstanceFiles(
    const GenerateParams& params, int count, const std::string& prefix,
    uint64_t seed, const std::filesystem::path& out_dir) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidParams, "count must be at least 1");
  }
  std::vector<TwoStageInstance> generated;
  for (int i = 0; i < count; ++i) {
    GenerateParams p = params;
    p.seed = MixSeed(seed, static_cast<uint64_t>(i));
    TwoStageInstance inst = GenerateInstance(p);
    inst.name = prefix + "_" + std::to_string(seed) + "_" + std::to_string(i);
    generated.push_back(std::move(inst));
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  std::vector<std::filesystem::path> paths;
  for (const TwoStageInstance& inst : generated) {
    const std::filesystem::path path = out_dir / (inst.name + ".json");
    WriteInstance(inst, path);
    paths.push_back(path);
  }
  return paths;
}

std::vector<NamedInstance> ReadInstances(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<NamedInstance> out;
  for (const auto& path : paths) {
    out.push_back({path.stem().string(), ReadInstance(path)});
  }
  return out;
}

RunRow RunToRow(const std::string& instance_name,
                const std::string& config_name, const BendersConfig& config,
                const RunResult& result) {
  RunRow row;
  row.instance = instance_name;
  row.config = config_name;
  row.status = RunStatusName(result.status);
  row.time_s = result.status == RunStatus::kOptimal ? result.total_time
                                                    : config.time_limit;
  row.iterations = static_cast<long long>(result.iterations.size());
  row.total_cuts = result.total_cuts_added;
  row.objective = result.objective;
  row.gap = result.gap;
  return row;
}

BenchmarkOutput RunBenchmark(const std::vector<NamedInstance>& instances,
                             const BenchmarkOptions& options) {
  if (instances.empty() || options.configs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "a benchmark needs at least one instance and one config");
  }
  std::vector<BendersConfig> configs;
  for (const std::string& spec : options.configs) {
    BendersConfig c = options.run;
    c.strategy = ParseStrategySpec(spec);
    c.strategy.seed = options.seed;
    configs.push_back(c);
  }
  bool has_baseline = false;
  for (const std::string& spec : options.configs) {
    has_baseline |= spec == options.baseline;
  }
  if (!has_baseline) {
    throw Error(ErrorCode::kUnknownBaseline,
                "baseline configuration \"" + options.baseline +
                    "\" is not among the benchmark configs");
  }

  BenchmarkOutput out;
  for (const NamedInstance& item : instances) {
    for (size_t c = 0; c < configs.size(); ++c) {
      RunConfig({item}, options.configs[c], configs[c], out.table);
    }
  }
  out.summary = Summarize(out.table, options.baseline, options.summary);
  out.profile = PerformanceProfile(out.table);
  return out;
}

void WriteBenchmarkOutput(const BenchmarkOutput& output,
                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  WriteTextFile(out_dir / "results.csv", ResultsCsv(output.table));
  WriteTextFile(out_dir / "summary.csv", SummaryCsv(output.summary));
  WriteTextFile(out_dir / "profile.csv", ProfileCsv(output.profile));
}

std::vector<SweepAxis> ParseSweepGrid(const std::string& text) {
  std::vector<SweepAxis> grid;
  for (const std::string& raw : Split(text, ';')) {
    const std::string axis_text = Trim(raw);
    if (axis_text.empty()) continue;
    const size_t colon = axis_text.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid axis \"" + axis_text + "\" must look like mode:v1,v2");
    }
    SweepAxis axis;
    axis.mode = Trim(axis_text.substr(0, colon));
    if (axis.mode != "fixed" && axis.mode != "frac" && axis.mode != "vfrac" &&
        axis.mode != "adaptive") {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown grid mode \"" + axis.mode +
                      "\" (expected fixed, frac, vfrac or adaptive)");
    }
    for (const std::string& v : Split(axis_text.substr(colon + 1), ',')) {
      const std::string value = Trim(v);
      // Each value goes through the strategy parser for validation.
      ParseStrategySpec("violation@" + axis.mode + ":" + value);
      axis.values.push_back(std::stod(value));
    }
    if (axis.values.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid mode \"" + axis.mode + "\" has no values");
    }
    grid.push_back(std::move(axis));
  }
  return grid;
}

SweepOutput RunSweep(const std::vector<NamedInstance>& instances,
                     const SweepOptions& options) {
  if (instances.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep needs instances");
  }
  SweepOutput out;
  BendersConfig baseline = options.run;
  baseline.strategy = StrategyConfig{};
  const std::string baseline_name = FormatStrategySpec(baseline.strategy);
  RunConfig(instances, baseline_name, baseline, out.table);
  out.cells.push_back({"baseline", std::nan(""), baseline_name, 1.0, 1.0});

  for (const SweepAxis& axis : options.grid) {
    for (double value : axis.values) {
      StrategyConfig strategy = ParseStrategySpec("violation@" + axis.mode +
                                                  ":" + FormatValue(value));
      strategy.kind = options.kind;
      strategy.aggregate = options.aggregate;
      strategy.seed = options.seed;
      strategy.Validate();
      BendersConfig config = options.run;
      config.strategy = strategy;
      const std::string name = FormatStrategySpec(strategy);
      RunConfig(instances, name, config, out.table);
      out.cells.push_back({axis.mode, value, name, 1.0, 1.0});
    }
  }

  const std::vector<SummaryRow> summary =
      Summarize(out.table, baseline_name, options.summary);
  double base_geomean = std::nan("");
  for (const SummaryRow& row : summary) {
    if (row.config == baseline_name) base_geomean = row.time_geomean;
  }
  for (SweepCell& cell : out.cells) {
    for (const SummaryRow& row : summary) {
      if (row.config != cell.config) continue;
      if (cell.mode == "baseline") {
        cell.geomean_ratio = 1.0;
        cell.p_value = std::nan("");
      } else {
        cell.geomean_ratio =
            base_geomean > 0.0 ? row.time_geomean / base_geomean
                               : (row.time_geomean == 0.0 ? 1.0 : std::nan(""));
        cell.p_value = row.wilcoxon_p;
      }
    }
  }
  return out;
}

std::string SweepCsv(const std::vector<SweepCell>& cells) {
  auto fixed = [](double v, int digits) {
    if (std::isnan(v)) return std::string("NA");
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << v;
    return out.str();
  };
  std::ostringstream out;
  out << "mode,value,geomean_ratio,p_value\n";
  for (const SweepCell& c : cells) {
    out << c.mode << ',' << (std::isnan(c.value) ? "NA" : FormatValue(c.value))
        << ',' << fixed(c.geomean_ratio, 4) << ',' << fixed(c.p_value, 4)
        << '\n';
  }
  return out.str();
}

}  // namespace benders
