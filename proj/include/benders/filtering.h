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

// Benders cut filtering: given the cuts produced from all scenario subproblems
// at one master candidate, decide which of them become master rows.
//
// Every strategy runs behind Filter(), which enforces the rules that keep the
// decomposition correct regardless of strategy:
//   * only cuts violated at the candidate are ever selected;
//   * violated feasibility cuts are taken first;
//   * whenever a violated optimality cut exists, at least one is taken;
//   * "+" strategies append one violation-weighted aggregate of the violated
//     optimality cuts they discarded.
// The strategies themselves only choose among violated optimality cuts.

#ifndef BENDERS_FILTERING_H_
#define BENDERS_FILTERING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "benders/cut.h"

namespace benders {

enum class StrategyKind { kNoFilter, kRandom, kViolation, kDiversity, kHybrid };

struct FixedCount {
  int k = 1;
};
struct SubproblemFraction {
  double alpha = 0.05;  // k = ceil(alpha * |C|)
};
struct ViolatedFraction {
  double beta = 0.1;  // k = ceil(beta * n_violated)
};
struct AdaptiveThreshold {
  double rho = 1.0;  // take cuts until their violations exceed rho * gap
};

using CountPolicy = std::variant<FixedCount, SubproblemFraction,
                                 ViolatedFraction, AdaptiveThreshold>;

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kNoFilter;
  bool aggregate = false;
  CountPolicy count_policy = SubproblemFraction{0.05};
  uint64_t seed = 0;

  // Throws kInvalidArgument for k < 1, fractions outside (0, 1], rho < 1, or
  // an adaptive policy on anything but the violation strategy.
  void Validate() const;
};

// Parses `none | random | violation | diversity | hybrid`, an optional `+`,
// and an optional `@fixed:K | @frac:A | @vfrac:B | @adaptive:R` suffix. The
// presets `default` (= none) and `hybrid+` are accepted as names. Throws
// kInvalidArgument.
StrategyConfig ParseStrategySpec(const std::string& spec);
// Canonical spec string, e.g. "hybrid+@frac:0.05".
std::string FormatStrategySpec(const StrategyConfig& config);

// The six benchmark configurations, by name.
std::vector<std::string> PresetConfigNames();

struct ScoredCut {
  int index = 0;  // position in the scored pool
  double violation = 0.0;
  double priority = 0.0;
};

// max(0, coeffs . x - rhs). Throws kDimensionMismatch.
double Violation(const Cut& cut, std::span<const double> x);

// Optimality cuts: priority = violation. Violated feasibility cuts: priority
// = (largest optimality violation in the pool, or 0) + 1 + own violation.
std::vector<ScoredCut> PriorityScores(std::span<const Cut> pool,
                                      std::span<const double> x);

// 1 - cos(angle), clamped to [0, 2]. Throws kZeroNormVector.
double CosineDistance(std::span<const double> a, std::span<const double> b);

struct Clustering {
  std::vector<int> medoids;     // item indices, ascending
  std::vector<int> assignment;  // cluster position (into medoids) per item
  double objective = 0.0;       // sum of item-to-medoid distances
};

// Items up to this count are clustered by exhaustive search.
inline constexpr int kExactMedoidsThreshold = 10;

// Builds the pairwise cosine-distance matrix (row-major, n x n).
std::vector<double> CosineDistanceMatrix(
    std::span<const std::vector<double>> items);

// k-medoids on cosine distance. Exhaustive (globally optimal, ties to the
// lexicographically smallest medoid set) up to `exact_threshold` items,
// BUILD + SWAP beyond. Items tie to the lower medoid index. `seed` is part of
// the interface for randomized variants; both modes here are deterministic.
// Throws kInvalidK or kZeroNormVector.
Clustering KMedoids(std::span<const std::vector<double>> items, int k,
                    uint64_t seed = 0,
                    int exact_threshold = kExactMedoidsThreshold);

// Objective of assigning every item to its nearest medoid.
double MedoidObjective(const std::vector<double>& distances, int n,
                       std::span<const int> medoids);

// Cut budget k for the fraction and fixed policies (adaptive has none).
int CutBudget(const CountPolicy& policy, int n_scenarios, int n_violated);

// Each selector returns positions into the pool it is given.

// Priority-descending, ties by cut id. Honors every count policy.
std::vector<int> SelectViolation(std::span<const Cut> pool,
                                 std::span<const ScoredCut> scored,
                                 const CountPolicy& policy,
                                 const FilterContext& ctx);

// One representative per k-medoids cluster: the member nearest (Euclidean)
// to the cluster centroid, ties by cut id.
std::vector<int> SelectDiversity(std::span<const Cut> pool_opt, int k,
                                 uint64_t seed);

// Same clusters as SelectDiversity; the most violated member of each.
std::vector<int> SelectHybrid(std::span<const Cut> pool_opt, int k,
                              std::span<const double> x, uint64_t seed);

// Uniform sample of min(k, |pool|) positions without replacement.
std::vector<int> SelectRandom(std::span<const Cut> pool, int k, uint64_t seed);

// Violation-weighted combination of the violated optimality cuts of `pool`
// that are not in `selected` (positions). Empty when there are none.
std::optional<Cut> AggregateDiscarded(std::span<const Cut> pool,
                                      std::span<const int> selected,
                                      std::span<const double> x);

struct FilterResult {
  std::vector<Cut> cuts;  // selected originals, then the aggregate if any
  int budget = 0;         // k; 0 for NoFilter and adaptive policies
  int n_violated = 0;
  int n_violated_feasibility = 0;
  int n_violated_optimality = 0;
  int n_feasibility_selected = 0;
  int n_optimality_selected = 0;
  bool forced_optimality = false;  // the at-least-one-optimality rule fired
  bool aggregate_added = false;
};

// Largest selection Filter() may return for `result`'s counters; asserted by
// Filter() and by tests.
int MaxSelectionSize(const StrategyConfig& config, const FilterResult& result);

// Single entry point. Throws kEmptyViolatedPool when no cut is violated by
// more than kCutTol.
FilterResult Filter(std::span<const Cut> pool, const FilterContext& ctx,
                    const StrategyConfig& config);

}  // namespace benders

#endif  // BENDERS_FILTERING_H_
