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

// Solver-benchmark statistics: shifted geometric means, the trivial-instance
// and solved-by-all filters, Wilcoxon signed-rank tests, performance
// profiles, and the per-configuration summary table.

#ifndef BENDERS_STATS_H_
#define BENDERS_STATS_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace benders {

struct RunRow {
  std::string instance;
  std::string config;
  std::string status;  // "Optimal", "TimeLimit", "IterationLimit", "Error"
  double time_s = 0.0;
  long long iterations = 0;
  long long total_cuts = 0;
  double objective = 0.0;
  double gap = 0.0;

  bool solved() const { return status == "Optimal"; }
};

using ConfigRunTable = std::vector<RunRow>;

// (prod (t_i + s))^(1/n) - s, computed on a mantissa/exponent split so large
// products neither overflow nor lose the exact small cases. Throws
// kEmptyInput, kInvalidArgument for s <= 0 or negative entries.
double ShiftedGeomean(std::span<const double> values, double shift);

struct RowFilterRules {
  double min_time = 50.0;
  bool solved_by_all = true;
};

// Rows of the instances that enter aggregate statistics: not solved below
// `min_time` by every configuration and, with `solved_by_all`, solved by
// every configuration.
ConfigRunTable FilterRows(const ConfigRunTable& table,
                          const RowFilterRules& rules);

enum class WilcoxonMethod { kAuto, kExact, kNormal };

// Two-sided p-value of the paired signed-rank test. Zero differences are
// dropped; ties share average ranks. Exact null distribution for up to 25
// nonzero pairs under kAuto, normal approximation with continuity and tie
// correction beyond. All-zero differences give p = 1. Throws
// kInsufficientPairs for fewer than 5 nonzero pairs, kDimensionMismatch.
double WilcoxonSignedRank(std::span<const double> a, std::span<const double> b,
                          WilcoxonMethod method = WilcoxonMethod::kAuto);

// "***", "**", "*" or "" for p below 0.001, 0.01, 0.05.
std::string SignificanceStars(double p);

struct ProfilePoint {
  double tau = 1.0;
  double fraction = 0.0;
};

struct ProfileCurve {
  std::string config;
  std::vector<ProfilePoint> points;
};

// Per-configuration fraction of instances solved within tau times the best
// time, evaluated at every distinct finite ratio (and tau = 1). Unsolved runs
// have ratio +inf.
std::vector<ProfileCurve> PerformanceProfile(const ConfigRunTable& table);

struct SummaryRow {
  std::string config;
  int solved = 0;
  double time_sum = 0.0;
  double time_mean = 0.0;
  double time_geomean = 0.0;
  double iter_geomean = 0.0;
  double iter_ratio = 1.0;
  double cuts_per_iter_geomean = 0.0;
  double cuts_per_iter_ratio = 1.0;
  double wilcoxon_p = 1.0;  // NaN when too few pairs
  std::string stars;
  int aggregated_instances = 0;
};

struct SummaryOptions {
  RowFilterRules rules;
  double shift = 10.0;
};

// One row per configuration (first-appearance order). Throws
// kUnknownBaseline.
std::vector<SummaryRow> Summarize(const ConfigRunTable& table,
                                  const std::string& baseline,
                                  const SummaryOptions& options = {});

// CSV I/O. Headers:
//   results: instance,config,status,time_s,iterations,total_cuts,objective,gap
//   summary: config,solved,time_sum,time_mean,time_geomean,iter_ratio,
//            cuts_per_iter_ratio,wilcoxon_p,stars
//   profile: config,tau,fraction
std::string ResultsCsv(const ConfigRunTable& table);
std::string SummaryCsv(std::span<const SummaryRow> rows);
std::string ProfileCsv(std::span<const ProfileCurve> curves);
ConfigRunTable ParseResultsCsv(const std::string& text);
ConfigRunTable ReadResultsCsv(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace benders

#endif  // BENDERS_STATS_H_
