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

#include "benders/filtering.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "benders/error.h"
#include "benders/random.h"

namespace benders {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Sorts positions by key descending, ties by cut id ascending.
void SortByKeyThenId(std::vector<int>& positions, std::span<const Cut> pool,
                     std::span<const double> key) {
  std::stable_sort(positions.begin(), positions.end(), [&](int a, int b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return pool[a].id < pool[b].id;
  });
}

std::vector<std::vector<double>> CoefficientVectors(std::span<const Cut> pool) {
  std::vector<std::vector<double>> items;
  items.reserve(pool.size());
  for (const Cut& c : pool) items.push_back(c.coeffs);
  return items;
}

std::vector<std::vector<int>> Members(const Clustering& clustering) {
  std::vector<std::vector<int>> members(clustering.medoids.size());
  for (size_t i = 0; i < clustering.assignment.size(); ++i) {
    members[clustering.assignment[i]].push_back(static_cast<int>(i));
  }
  return members;
}

// Assigns each item to its nearest medoid (lower medoid index on ties); a
// medoid always belongs to its own cluster.
std::vector<int> Assign(const std::vector<double>& dist, int n,
                        std::span<const int> medoids) {
  std::vector<int> assignment(n, 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = kInf;
    for (size_t m = 0; m < medoids.size(); ++m) {
      if (medoids[m] == i) {
        best = static_cast<int>(m);
        break;
      }
      const double d = dist[static_cast<size_t>(i) * n + medoids[m]];
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(m);
      }
    }
    assignment[i] = best;
  }
  return assignment;
}

std::vector<int> ExactMedoids(const std::vector<double>& dist, int n, int k) {
  std::vector<int> combo(k);
  std::iota(combo.begin(), combo.end(), 0);
  std::vector<int> best = combo;
  double best_obj = MedoidObjective(dist, n, combo);
  while (true) {
    // Next k-subset in lexicographic order.
    int i = k - 1;
    while (i >= 0 && combo[i] == n - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    const double obj = MedoidObjective(dist, n, combo);
    if (obj < best_obj) {
      best_obj = obj;
      best = combo;
    }
  }
  return best;
}

std::vector<int> PamMedoids(const std::vector<double>& dist, int n, int k) {
  auto d = [&](int i, int j) { return dist[static_cast<size_t>(i) * n + j]; };
  std::vector<int> medoids;
  std::vector<bool> is_medoid(n, false);
  std::vector<double> nearest(n, kInf);

  // BUILD: greedy additions, each maximizing the objective decrease.
  for (int step = 0; step < k; ++step) {
    int best = -1;
    double best_gain = -kInf;
    for (int c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (int j = 0; j < n; ++j) {
        gain += step == 0 ? -d(j, c) : std::max(0.0, nearest[j] - d(j, c));
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
    for (int j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(j, best));
  }
  std::sort(medoids.begin(), medoids.end());

  // SWAP: apply the best improving (medoid, non-medoid) exchange until none.
  double current = MedoidObjective(dist, n, medoids);
  while (true) {
    double best_obj = current;
    int best_m = -1;
    int best_o = -1;
    for (int m = 0; m < k; ++m) {
      for (int o = 0; o < n; ++o) {
        if (is_medoid[o]) continue;
        std::vector<int> trial = medoids;
        trial[m] = o;
        std::sort(trial.begin(), trial.end());
        const double obj = MedoidObjective(dist, n, trial);
        if (obj < best_obj - 1e-12) {
          best_obj = obj;
          best_m = m;
          best_o = o;
        }
      }
    }
    if (best_m < 0) break;
    is_medoid[medoids[best_m]] = false;
    is_medoid[best_o] = true;
    medoids[best_m] = best_o;
    std::sort(medoids.begin(), medoids.end());
    current = best_obj;
  }
  return medoids;
}

Clustering ClusterCuts(std::span<const Cut> pool, int k, uint64_t seed) {
  const std::vector<std::vector<double>> items = CoefficientVectors(pool);
  return KMedoids(items, std::min<int>(k, static_cast<int>(items.size())),
                  seed);
}

int CeilCount(double value) {
  // Guard against 0.05 * 40 landing a hair above 2.
  return static_cast<int>(std::ceil(value - 1e-9));
}

}  // namespace

void StrategyConfig::Validate() const {
  auto invalid = [](const std::string& m) {
    throw Error(ErrorCode::kInvalidArgument, m);
  };
  std::visit(Overloaded{
                 [&](const FixedCount& p) {
                   if (p.k < 1) invalid("fixed count k must be >= 1");
                 },
                 [&](const SubproblemFraction& p) {
                   if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
                     invalid("subproblem fraction must lie in (0, 1]");
                   }
                 },
                 [&](const ViolatedFraction& p) {
                   if (!(p.beta > 0.0 && p.beta <= 1.0)) {
                     invalid("violated fraction must lie in (0, 1]");
                   }
                 },
                 [&](const AdaptiveThreshold& p) {
                   if (!(p.rho >= 1.0)) invalid("adaptive rho must be >= 1");
                   if (kind != StrategyKind::kViolation) {
                     invalid(
                         "adaptive count policy requires the violation "
                         "strategy");
                   }
                 },
             },
             count_policy);
}

StrategyConfig ParseStrategySpec(const std::string& spec) {
  auto invalid = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid strategy spec \"" + spec + "\": " + why);
  };
  StrategyConfig config;
  std::string head = spec;
  std::string policy;
  if (const size_t at = spec.find('@'); at != std::string::npos) {
    head = spec.substr(0, at);
    policy = spec.substr(at + 1);
  }
  if (!head.empty() && head.back() == '+') {
    config.aggregate = true;
    head.pop_back();
  }
  if (head == "none" || head == "default") {
    config.kind = StrategyKind::kNoFilter;
  } else if (head == "random") {
    config.kind = StrategyKind::kRandom;
  } else if (head == "violation") {
    config.kind = StrategyKind::kViolation;
  } else if (head == "diversity") {
    config.kind = StrategyKind::kDiversity;
  } else if (head == "hybrid") {
    config.kind = StrategyKind::kHybrid;
  } else {
    invalid("unknown strategy \"" + head + "\"");
  }
  if (config.kind == StrategyKind::kNoFilter && config.aggregate) {
    invalid("none cannot aggregate");
  }
  if (!policy.empty()) {
    const size_t colon = policy.find(':');
    if (colon == std::string::npos) invalid("count policy needs a value");
    const std::string mode = policy.substr(0, colon);
    const std::string value = policy.substr(colon + 1);
    double number = 0.0;
    try {
      size_t used = 0;
      number = std::stod(value, &used);
      if (used != value.size()) invalid("trailing characters in value");
    } catch (const std::logic_error&) {
      invalid("count policy value \"" + value + "\" is not a number");
    }
    if (mode == "fixed") {
      if (number != std::floor(number)) invalid("fixed count must be integer");
      config.count_policy = FixedCount{static_cast<int>(number)};
    } else if (mode == "frac") {
      config.count_policy = SubproblemFraction{number};
    } else if (mode == "vfrac") {
      config.count_policy = ViolatedFraction{number};
    } else if (mode == "adaptive") {
      config.count_policy = AdaptiveThreshold{number};
    } else {
      invalid("unknown count policy \"" + mode + "\"");
    }
  }
  try {
    config.Validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
  return config;
}

std::string FormatStrategySpec(const StrategyConfig& config) {
  std::ostringstream out;
  switch (config.kind) {
    case StrategyKind::kNoFilter:
      out << "none";
      break;
    case StrategyKind::kRandom:
      out << "random";
      break;
    case StrategyKind::kViolation:
      out << "violation";
      break;
    case StrategyKind::kDiversity:
      out << "diversity";
      break;
    case StrategyKind::kHybrid:
      out << "hybrid";
      break;
  }
  if (config.aggregate) out << '+';
  if (config.kind == StrategyKind::kNoFilter) return out.str();
  std::visit(
      Overloaded{
          [&](const FixedCount& p) { out << "@fixed:" << p.k; },
          [&](const SubproblemFraction& p) { out << "@frac:" << p.alpha; },
          [&](const ViolatedFraction& p) { out << "@vfrac:" << p.beta; },
          [&](const AdaptiveThreshold& p) { out << "@adaptive:" << p.rho; },
      },
      config.count_policy);
  return out.str();
}

std::vector<std::string> PresetConfigNames() {
  return {"default", "random", "violation", "diversity", "hybrid", "hybrid+"};
}

double Violation(const Cut& cut, std::span<const double> x) {
  if (cut.coeffs.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cut has " + std::to_string(cut.coeffs.size()) +
                    " coefficients but the point has " +
                    std::to_string(x.size()) + " entries");
  }
  double lhs = 0.0;
  for (size_t j = 0; j < x.size(); ++j) lhs += cut.coeffs[j] * x[j];
  return std::max(0.0, lhs - cut.rhs);
}

std::vector<ScoredCut> PriorityScores(std::span<const Cut> pool,
                                      std::span<const double> x) {
  std::vector<ScoredCut> scored(pool.size());
  double max_opt = 0.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    scored[i].index = static_cast<int>(i);
    scored[i].violation = Violation(pool[i], x);
    scored[i].priority = scored[i].violation;
    if (pool[i].kind == CutKind::kOptimality) {
      max_opt = std::max(max_opt, scored[i].violation);
    }
  }
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].kind == CutKind::kFeasibility && scored[i].violation > 0.0) {
      scored[i].priority = max_opt + 1.0 + scored[i].violation;
    }
  }
  return scored;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine distance of vectors with different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  constexpr double kNormTol = 1e-12;
  if (std::sqrt(na) <= kNormTol || std::sqrt(nb) <= kNormTol) {
    throw Error(ErrorCode::kZeroNormVector,
                "cosine distance of a zero-norm vector");
  }
  const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(d, 0.0, 2.0);
}

std::vector<double> CosineDistanceMatrix(
    std::span<const std::vector<double>> items) {
  const size_t n = items.size();
  std::vector<double> dist(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d = CosineDistance(items[i], items[j]);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return dist;
}

double MedoidObjective(const std::vector<double>& distances, int n,
                       std::span<const int> medoids) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = kInf;
    for (int m : medoids) {
      best = std::min(best, distances[static_cast<size_t>(i) * n + m]);
    }
    total += best;
  }
  return total;
}

Clustering KMedoids(std::span<const std::vector<double>> items, int k,
                    uint64_t seed, int exact_threshold) {
  (void)seed;
  const int n = static_cast<int>(items.size());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidK,
                "k-medoids needs 1 <= k <= " + std::to_string(n) +
                    ", got k = " + std::to_string(k));
  }
  // Zero-norm items are rejected even when n == 1.
  for (const auto& item : items) CosineDistance(item, item);
  const std::vector<double> dist = CosineDistanceMatrix(items);
  Clustering out;
  out.medoids =
      n <= exact_threshold ? ExactMedoids(dist, n, k) : PamMedoids(dist, n, k);
  out.assignment = Assign(dist, n, out.medoids);
  out.objective = MedoidObjective(dist, n, out.medoids);
  return out;
}

int CutBudget(const CountPolicy& policy, int n_scenarios, int n_violated) {
  return std::visit(Overloaded{
                        [](const FixedCount& p) { return p.k; },
                        [&](const SubproblemFraction& p) {
                          return std::max(1, CeilCount(p.alpha * n_scenarios));
                        },
                        [&](const ViolatedFraction& p) {
                          return std::max(1, CeilCount(p.beta * n_violated));
                        },
                        [](const AdaptiveThreshold&) { return 0; },
                    },
                    policy);
}

std::vector<int> SelectViolation(std::span<const Cut> pool,
                                 std::span<const ScoredCut> scored,
                                 const CountPolicy& policy,
                                 const FilterContext& ctx) {
  std::vector<double> priority(pool.size(), 0.0);
  std::vector<double> violation(pool.size(), 0.0);
  std::vector<int> order;
  int n_violated = 0;
  for (const ScoredCut& s : scored) {
    priority[s.index] = s.priority;
    violation[s.index] = s.violation;
    order.push_back(s.index);
    if (s.violation > kCutTol) ++n_violated;
  }
  SortByKeyThenId(order, pool, priority);

  const auto* adaptive = std::get_if<AdaptiveThreshold>(&policy);
  if (adaptive != nullptr && std::isfinite(ctx.z_ub)) {
    const double threshold = adaptive->rho * (ctx.z_ub - ctx.z_mp);
    std::vector<int> taken;
    double cumulative = 0.0;
    for (int pos : order) {
      if (violation[pos] <= kCutTol) break;
      taken.push_back(pos);
      // Feasibility priorities are synthetic; they do not close theta gaps.
      if (pool[pos].kind == CutKind::kOptimality) cumulative += priority[pos];
      if (cumulative > threshold) break;
    }
    if (taken.empty() && !order.empty()) taken.push_back(order.front());
    return taken;
  }
  const CountPolicy effective =
      adaptive != nullptr ? CountPolicy{SubproblemFraction{0.05}} : policy;
  const int k = CutBudget(effective, ctx.n_scenarios, n_violated);
  order.resize(std::min<size_t>(order.size(), static_cast<size_t>(k)));
  return order;
}

std::vector<int> SelectDiversity(std::span<const Cut> pool_opt, int k,
                                 uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidK, "diversity needs k >= 1");
  if (pool_opt.empty()) return {};
  const Clustering clustering = ClusterCuts(pool_opt, k, seed);
  std::vector<int> selected;
  for (const std::vector<int>& members : Members(clustering)) {
    if (members.empty()) continue;
    const size_t dim = pool_opt[members.front()].coeffs.size();
    std::vector<double> centroid(dim, 0.0);
    for (int m : members) {
      for (size_t j = 0; j < dim; ++j) centroid[j] += pool_opt[m].coeffs[j];
    }
    for (double& c : centroid) c /= static_cast<double>(members.size());
    int best = -1;
    double best_d = kInf;
    for (int m : members) {
      double d = 0.0;
      for (size_t j = 0; j < dim; ++j) {
        const double diff = pool_opt[m].coeffs[j] - centroid[j];
        d += diff * diff;
      }
      if (d < best_d || (d == best_d && pool_opt[m].id < pool_opt[best].id)) {
        best_d = d;
        best = m;
      }
    }
    selected.push_back(best);
  }
  return selected;
}

std::vector<int> SelectHybrid(std::span<const Cut> pool_opt, int k,
                              std::span<const double> x, uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidK, "hybrid needs k >= 1");
  if (pool_opt.empty()) return {};
  const Clustering clustering = ClusterCuts(pool_opt, k, seed);
  std::vector<int> selected;
  for (const std::vector<int>& members : Members(clustering)) {
    if (members.empty()) continue;
    int best = -1;
    double best_v = -kInf;
    for (int m : members) {
      const double v = Violation(pool_opt[m], x);
      if (v > best_v || (v == best_v && pool_opt[m].id < pool_opt[best].id)) {
        best_v = v;
        best = m;
      }
    }
    selected.push_back(best);
  }
  return selected;
}

std::vector<int> SelectRandom(std::span<const Cut> pool, int k, uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidK, "random needs k >= 1");
  const int n = static_cast<int>(pool.size());
  const int take = std::min(k, n);
  std::vector<int> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  Rng rng(MixSeed(seed, 0x5E1EC7));
  for (int i = 0; i < take; ++i) {
    const int j = i + static_cast<int>(UniformIndex(rng, n - i));
    std::swap(positions[i], positions[j]);
  }
  positions.resize(take);
  std::sort(positions.begin(), positions.end());
  return positions;
}

std::optional<Cut> AggregateDiscarded(std::span<const Cut> pool,
                                      std::span<const int> selected,
                                      std::span<const double> x) {
  std::vector<bool> taken(pool.size(), false);
  for (int s : selected) taken[s] = true;
  std::vector<int> discarded;
  std::vector<double> violations;
  double total = 0.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (taken[i] || pool[i].kind != CutKind::kOptimality) continue;
    const double v = Violation(pool[i], x);
    if (v <= kCutTol) continue;
    discarded.push_back(static_cast<int>(i));
    violations.push_back(v);
    total += v;
  }
  if (discarded.empty()) return std::nullopt;
  Cut agg;
  agg.id = -1;
  agg.scenario_id = kAggregateScenario;
  agg.kind = CutKind::kOptimality;
  agg.coeffs.assign(pool[discarded.front()].coeffs.size(), 0.0);
  agg.iteration_created = pool[discarded.front()].iteration_created;
  for (size_t r = 0; r < discarded.size(); ++r) {
    const Cut& c = pool[discarded[r]];
    const double w = violations[r] / total;
    for (size_t j = 0; j < agg.coeffs.size(); ++j) {
      agg.coeffs[j] += w * c.coeffs[j];
    }
    agg.rhs += w * c.rhs;
  }
  return agg;
}

int MaxSelectionSize(const StrategyConfig& config, const FilterResult& r) {
  if (config.kind == StrategyKind::kNoFilter) return r.n_violated;
  if (r.budget == 0) {
    // Adaptive: no count bound beyond the violated pool, plus an aggregate.
    return r.n_violated + (config.aggregate ? 1 : 0);
  }
  const int originals =
      std::max(r.budget, r.n_violated_feasibility) +
      (r.n_violated_feasibility >= r.budget && r.n_violated_optimality > 0 ? 1
                                                                           : 0);
  return originals + (config.aggregate ? 1 : 0);
}

FilterResult Filter(std::span<const Cut> pool, const FilterContext& ctx,
                    const StrategyConfig& config) {
  FilterResult result;
  std::vector<Cut> feas;
  std::vector<Cut> opt;
  for (const Cut& c : pool) {
    if (Violation(c, ctx.x) <= kCutTol) continue;
    (c.kind == CutKind::kFeasibility ? feas : opt).push_back(c);
  }
  result.n_violated_feasibility = static_cast<int>(feas.size());
  result.n_violated_optimality = static_cast<int>(opt.size());
  result.n_violated =
      result.n_violated_feasibility + result.n_violated_optimality;
  if (result.n_violated == 0) {
    throw Error(ErrorCode::kEmptyViolatedPool,
                "no cut in the pool is violated by more than " +
                    std::to_string(kCutTol));
  }
  if (config.kind == StrategyKind::kNoFilter) {
    for (const Cut& c : pool) {
      if (Violation(c, ctx.x) > kCutTol) result.cuts.push_back(c);
    }
    result.n_feasibility_selected = result.n_violated_feasibility;
    result.n_optimality_selected = result.n_violated_optimality;
    return result;
  }

  // Feasibility cuts first, in priority order.
  {
    const std::vector<ScoredCut> scored = PriorityScores(feas, ctx.x);
    std::vector<double> priority(feas.size());
    for (const ScoredCut& s : scored) priority[s.index] = s.priority;
    std::vector<int> order(feas.size());
    std::iota(order.begin(), order.end(), 0);
    SortByKeyThenId(order, feas, priority);
    for (int pos : order) result.cuts.push_back(feas[pos]);
    result.n_feasibility_selected = static_cast<int>(feas.size());
  }

  CountPolicy policy = config.count_policy;
  const bool adaptive = std::holds_alternative<AdaptiveThreshold>(policy);
  if (adaptive && !std::isfinite(ctx.z_ub)) policy = SubproblemFraction{0.05};

  std::vector<int> chosen;  // positions into `opt`
  if (!opt.empty()) {
    const std::vector<ScoredCut> opt_scores = PriorityScores(opt, ctx.x);
    if (std::holds_alternative<AdaptiveThreshold>(policy)) {
      chosen = SelectViolation(opt, opt_scores, policy, ctx);
    } else {
      result.budget = CutBudget(policy, ctx.n_scenarios, result.n_violated);
      const int remaining = result.budget - result.n_feasibility_selected;
      if (remaining <= 0) {
        chosen = SelectViolation(opt, opt_scores, FixedCount{1}, ctx);
        result.forced_optimality = true;
      } else {
        const uint64_t call_seed =
            MixSeed(config.seed, static_cast<uint64_t>(ctx.iteration));
        switch (config.kind) {
          case StrategyKind::kRandom:
            chosen = SelectRandom(opt, remaining, call_seed);
            break;
          case StrategyKind::kViolation:
            chosen =
                SelectViolation(opt, opt_scores, FixedCount{remaining}, ctx);
            break;
          case StrategyKind::kDiversity:
            chosen = SelectDiversity(opt, remaining, call_seed);
            break;
          case StrategyKind::kHybrid:
            chosen = SelectHybrid(opt, remaining, ctx.x, call_seed);
            break;
          case StrategyKind::kNoFilter:
            break;
        }
      }
    }
  } else {
    result.budget = std::holds_alternative<AdaptiveThreshold>(policy)
                        ? 0
                        : CutBudget(policy, ctx.n_scenarios, result.n_violated);
  }
  for (int pos : chosen) result.cuts.push_back(opt[pos]);
  result.n_optimality_selected = static_cast<int>(chosen.size());

  if (config.aggregate) {
    if (std::optional<Cut> agg = AggregateDiscarded(opt, chosen, ctx.x)) {
      result.cuts.push_back(*std::move(agg));
      result.aggregate_added = true;
    }
  }

  const int bound = MaxSelectionSize(config, result);
  if (static_cast<int>(result.cuts.size()) > bound) {
    throw Error(ErrorCode::kInvalidArgument,
                "filter selected " + std::to_string(result.cuts.size()) +
                    " cuts, above its bound of " + std::to_string(bound));
  }
  return result;
}

}  // namespace benders
