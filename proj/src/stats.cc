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

#include "benders/stats.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "benders/error.h"

namespace benders {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Distinct values of `field` in first-appearance order.
template <class Get>
std::vector<std::string> Ordered(const ConfigRunTable& table, Get get) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const RunRow& row : table) {
    if (seen.insert(get(row)).second) out.push_back(get(row));
  }
  return out;
}

std::vector<std::string> Instances(const ConfigRunTable& table) {
  return Ordered(table, [](const RunRow& r) { return r.instance; });
}

std::vector<std::string> Configs(const ConfigRunTable& table) {
  return Ordered(table, [](const RunRow& r) { return r.config; });
}

std::string Fixed(double v, int digits) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string Precise(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

double Ratio(double value, double base) {
  if (std::isnan(value) || std::isnan(base)) return kNaN;
  if (base == 0.0) return value == 0.0 ? 1.0 : kInfinity;
  return value / base;
}

double GeomeanOrNaN(const std::vector<double>& values, double shift) {
  return values.empty() ? kNaN : ShiftedGeomean(values, shift);
}

// Exact two-sided p from the distribution of the doubled-rank statistic.
double ExactSignedRankP(const std::vector<long long>& doubled_ranks,
                        long long w2) {
  long long total = 0;
  for (long long r : doubled_ranks) total += r;
  // counts[s] = number of sign vectors with doubled W+ equal to s.
  std::vector<double> counts(static_cast<size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  long long reach = 0;
  for (long long r : doubled_ranks) {
    for (long long s = reach; s >= 0; --s) {
      if (counts[s] != 0.0) counts[s + r] += counts[s];
    }
    reach += r;
  }
  const double all = std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
  double below = 0.0, above = 0.0;
  for (long long s = 0; s <= total; ++s) {
    if (s <= w2) below += counts[s];
    if (s >= w2) above += counts[s];
  }
  return std::min(1.0, 2.0 * std::min(below, above) / all);
}

}  // namespace

double ShiftedGeomean(std::span<const double> values, double shift) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyInput, "shifted geometric mean of no values");
  }
  if (!(shift > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "shift must be positive");
  }
  long double mantissa = 1.0L;
  long long exponent = 0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "shifted geometric mean needs finite nonnegative values");
    }
    int e = 0;
    mantissa = std::frexp(mantissa * (static_cast<long double>(v) + shift), &e);
    exponent += e;
  }
  const long double n = static_cast<long double>(values.size());
  const long double root = std::pow(mantissa, 1.0L / n) *
                           std::exp2(static_cast<long double>(exponent) / n);
  return static_cast<double>(root - shift);
}

ConfigRunTable FilterRows(const ConfigRunTable& table,
                          const RowFilterRules& rules) {
  const std::vector<std::string> configs = Configs(table);
  std::map<std::string, std::vector<const RunRow*>> by_instance;
  for (const RunRow& row : table) by_instance[row.instance].push_back(&row);

  std::set<std::string> keep;
  for (const auto& [instance, rows] : by_instance) {
    bool all_trivial = true;
    bool all_solved = true;
    std::set<std::string> seen;
    for (const RunRow* r : rows) {
      seen.insert(r->config);
      if (!(r->solved() && r->time_s < rules.min_time)) all_trivial = false;
      if (!r->solved()) all_solved = false;
    }
    if (seen.size() != configs.size()) all_solved = false;
    if (all_trivial) continue;
    if (rules.solved_by_all && !all_solved) continue;
    keep.insert(instance);
  }
  ConfigRunTable out;
  for (const RunRow& row : table) {
    if (keep.count(row.instance)) out.push_back(row);
  }
  return out;
}

double WilcoxonSignedRank(std::span<const double> a, std::span<const double> b,
                          WilcoxonMethod method) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Wilcoxon test needs paired samples of equal length");
  }
  std::vector<double> diffs;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);
  }
  if (diffs.empty()) return 1.0;
  const int n = static_cast<int>(diffs.size());
  if (n < 5) {
    throw Error(ErrorCode::kInsufficientPairs,
                "Wilcoxon test needs at least 5 nonzero differences, got " +
                    std::to_string(n));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });
  // Doubled average ranks stay integral: tie group over ranks [lo, hi] gets
  // lo + hi.
  std::vector<long long> doubled(n);
  double tie_term = 0.0;
  for (int start = 0; start < n;) {
    int end = start;
    while (end + 1 < n &&
           std::abs(diffs[order[end + 1]]) == std::abs(diffs[order[start]])) {
      ++end;
    }
    for (int k = start; k <= end; ++k)
      doubled[order[k]] = (start + 1) + (end + 1);
    const double t = end - start + 1;
    tie_term += t * t * t - t;
    start = end + 1;
  }
  long long w2 = 0;
  for (int i = 0; i < n; ++i) {
    if (diffs[i] > 0) w2 += doubled[i];
  }

  const bool exact = method == WilcoxonMethod::kExact ||
                     (method == WilcoxonMethod::kAuto && n <= 25);
  if (exact) return ExactSignedRankP(doubled, w2);

  const double w = static_cast<double>(w2) / 2.0;
  const double nn = n;
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var =
      nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double dev = std::max(0.0, std::abs(w - mean) - 0.5);
  const double z = dev / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

std::string SignificanceStars(double p) {
  if (std::isnan(p)) return "";
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<ProfileCurve> PerformanceProfile(const ConfigRunTable& table) {
  const std::vector<std::string> instances = Instances(table);
  const std::vector<std::string> configs = Configs(table);
  std::map<std::pair<std::string, std::string>, const RunRow*> cell;
  for (const RunRow& row : table) cell[{row.instance, row.config}] = &row;

  constexpr double kTimeFloor = 1e-6;
  std::vector<std::vector<double>> ratios(configs.size());
  std::set<double> taus = {1.0};
  for (const std::string& inst : instances) {
    double best = kInfinity;
    for (const std::string& cfg : configs) {
      const auto it = cell.find({inst, cfg});
      if (it != cell.end() && it->second->solved()) {
        best = std::min(best, std::max(kTimeFloor, it->second->time_s));
      }
    }
    for (size_t c = 0; c < configs.size(); ++c) {
      const auto it = cell.find({inst, configs[c]});
      double r = kInfinity;
      if (it != cell.end() && it->second->solved()) {
        r = std::max(kTimeFloor, it->second->time_s) / best;
        taus.insert(r);
      }
      ratios[c].push_back(r);
    }
  }

  std::vector<ProfileCurve> curves;
  const double total = static_cast<double>(instances.size());
  for (size_t c = 0; c < configs.size(); ++c) {
    ProfileCurve curve;
    curve.config = configs[c];
    for (double tau : taus) {
      const auto within = std::count_if(ratios[c].begin(), ratios[c].end(),
                                        [&](double r) { return r <= tau; });
      curve.points.push_back({tau, static_cast<double>(within) / total});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<SummaryRow> Summarize(const ConfigRunTable& table,
                                  const std::string& baseline,
                                  const SummaryOptions& options) {
  const std::vector<std::string> configs = Configs(table);
  if (std::find(configs.begin(), configs.end(), baseline) == configs.end()) {
    throw Error(ErrorCode::kUnknownBaseline,
                "baseline configuration \"" + baseline +
                    "\" does not appear in the results");
  }
  const ConfigRunTable kept = FilterRows(table, options.rules);
  const std::vector<std::string> kept_instances = Instances(kept);
  std::map<std::pair<std::string, std::string>, const RunRow*> cell;
  for (const RunRow& row : kept) cell[{row.instance, row.config}] = &row;

  auto column = [&](const std::string& cfg, auto get) {
    std::vector<double> out;
    for (const std::string& inst : kept_instances) {
      const auto it = cell.find({inst, cfg});
      if (it != cell.end()) out.push_back(get(*it->second));
    }
    return out;
  };
  auto time_of = [](const RunRow& r) { return r.time_s; };
  auto iters_of = [](const RunRow& r) {
    return static_cast<double>(r.iterations);
  };
  auto cpi_of = [](const RunRow& r) {
    return static_cast<double>(r.total_cuts) /
           static_cast<double>(std::max(1LL, r.iterations));
  };

  const double base_iter =
      GeomeanOrNaN(column(baseline, iters_of), options.shift);
  const double base_cpi = GeomeanOrNaN(column(baseline, cpi_of), options.shift);
  const std::vector<double> base_times = column(baseline, time_of);

  std::vector<SummaryRow> rows;
  for (const std::string& cfg : configs) {
    SummaryRow s;
    s.config = cfg;
    s.solved = static_cast<int>(std::count_if(
        table.begin(), table.end(),
        [&](const RunRow& r) { return r.config == cfg && r.solved(); }));
    const std::vector<double> times = column(cfg, time_of);
    s.aggregated_instances = static_cast<int>(times.size());
    s.time_sum = std::accumulate(times.begin(), times.end(), 0.0);
    s.time_mean = times.empty() ? kNaN : s.time_sum / times.size();
    s.time_geomean = GeomeanOrNaN(times, options.shift);
    s.iter_geomean = GeomeanOrNaN(column(cfg, iters_of), options.shift);
    s.cuts_per_iter_geomean = GeomeanOrNaN(column(cfg, cpi_of), options.shift);
    s.iter_ratio = Ratio(s.iter_geomean, base_iter);
    s.cuts_per_iter_ratio = Ratio(s.cuts_per_iter_geomean, base_cpi);
    try {
      s.wilcoxon_p = WilcoxonSignedRank(times, base_times);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientPairs) throw;
      s.wilcoxon_p = kNaN;
    }
    s.stars = SignificanceStars(s.wilcoxon_p);
    rows.push_back(std::move(s));
  }
  return rows;
}

std::string ResultsCsv(const ConfigRunTable& table) {
  std::ostringstream out;
  out << "instance,config,status,time_s,iterations,total_cuts,objective,gap\n";
  for (const RunRow& r : table) {
    out << r.instance << ',' << r.config << ',' << r.status << ','
        << Fixed(r.time_s, 6) << ',' << r.iterations << ',' << r.total_cuts
        << ',' << Precise(r.objective) << ',' << Precise(r.gap) << '\n';
  }
  return out.str();
}

std::string SummaryCsv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "config,solved,time_sum,time_mean,time_geomean,iter_ratio,"
         "cuts_per_iter_ratio,wilcoxon_p,stars\n";
  for (const SummaryRow& s : rows) {
    out << s.config << ',' << s.solved << ',' << Fixed(s.time_sum, 2) << ','
        << Fixed(s.time_mean, 2) << ',' << Fixed(s.time_geomean, 2) << ','
        << Fixed(s.iter_ratio, 4) << ',' << Fixed(s.cuts_per_iter_ratio, 4)
        << ',' << Fixed(s.wilcoxon_p, 4) << ',' << s.stars << '\n';
  }
  return out.str();
}

std::string ProfileCsv(std::span<const ProfileCurve> curves) {
  std::ostringstream out;
  out << "config,tau,fraction\n";
  for (const ProfileCurve& c : curves) {
    for (const ProfilePoint& p : c.points) {
      out << c.config << ',' << Precise(p.tau) << ',' << Fixed(p.fraction, 6)
          << '\n';
    }
  }
  return out.str();
}

ConfigRunTable ParseResultsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const std::string header =
      "instance,config,status,time_s,iterations,total_cuts,objective,gap";
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::kParseError,
                "results CSV must start with the header \"" + header + "\"");
  }
  ConfigRunTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 8) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected 8 fields");
    }
    auto number = [&](const std::string& s, const char* name) {
      if (s == "NA") return kNaN;
      if (s == "inf") return kInfinity;
      if (s == "-inf") return -kInfinity;
      try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } catch (const std::logic_error&) {
      }
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                              ": field " + name +
                                              " is not a number");
    };
    RunRow r;
    r.instance = f[0];
    r.config = f[1];
    r.status = f[2];
    r.time_s = number(f[3], "time_s");
    r.iterations = static_cast<long long>(number(f[4], "iterations"));
    r.total_cuts = static_cast<long long>(number(f[5], "total_cuts"));
    r.objective = number(f[6], "objective");
    r.gap = number(f[7], "gap");
    table.push_back(std::move(r));
  }
  return table;
}

ConfigRunTable ReadResultsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseResultsCsv(buffer.str());
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out)
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace benders
