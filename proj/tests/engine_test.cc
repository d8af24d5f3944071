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

#include "benders/engine.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "benders/filtering.h"
#include "benders/instance.h"
#include "benders/lp.h"
#include "first_stage_oracles.h"
#include "gtest/gtest.h"

namespace benders {
namespace {

using testing::CutApplies;
using testing::EnumerateFirstStages;
using testing::EvaluatedPoint;
using testing::RelativeExcess;

double ExtensiveOptimum(const TwoStageInstance& inst) {
  const LpSolution sol = SolveMip(BuildExtensiveForm(inst).lp);
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  return sol.objective;
}

BendersConfig ConfigFor(const std::string& spec) {
  BendersConfig config;
  config.strategy = ParseStrategySpec(spec);
  return config;
}

TwoStageInstance SmallInstance(uint64_t seed, int scenarios = 4) {
  return GenerateInstance(GenerateParams{6, 8, 2, scenarios, 1, seed});
}

// Lhs minus rhs of `cut` at `x`, unclamped.
double Excess(const Cut& cut, const std::vector<double>& x) {
  double lhs = 0.0;
  for (size_t i = 0; i < x.size(); ++i) lhs += cut.coeffs[i] * x[i];
  return lhs - cut.rhs;
}

TEST(EvaluateSubproblemTest, ZeroRecourseCutIsTight) {
  TwoStageInstance inst;
  inst.overload_penalty = 5.0;
  inst.network.nodes = {0, 1};
  inst.network.arcs = {Arc{0, 1, 1.0, 5.0, false, 0.0}};
  inst.network.demands = {DemandNode{1, 5.0, 0.0, 10.0, 1.0}};
  inst.network.supplies = {SupplyNode{0, 100.0}};
  inst.scenarios = {Scenario{0, {}, 1.0}};
  const MasterLayout layout(inst);
  std::vector<double> x(layout.size(), 0.0);
  x[layout.b(0)] = 4.0;
  const SubproblemEvaluation eval = EvaluateSubproblem(inst, 0, x);
  ASSERT_TRUE(eval.recourse.has_value());
  EXPECT_NEAR(*eval.recourse, 0.0, 1e-9);
  EXPECT_EQ(eval.cut.kind, CutKind::kOptimality);
  EXPECT_EQ(eval.cut.coeffs[layout.theta(0)], -1.0);
  // theta = 0 meets the cut with equality.
  EXPECT_NEAR(Excess(eval.cut, x), 0.0, 1e-9);
  // Past the capacity the same point with theta = 0 is cut off.
  x[layout.b(0)] = 7.0;
  const SubproblemEvaluation over = EvaluateSubproblem(inst, 0, x);
  ASSERT_TRUE(over.recourse.has_value());
  EXPECT_NEAR(*over.recourse, 10.0, 1e-9);
  EXPECT_NEAR(Violation(over.cut, x), 10.0, 1e-9);
  x[layout.theta(0)] = 10.0;
  EXPECT_NEAR(Excess(over.cut, x), 0.0, 1e-9);
}

TEST(EvaluateSubproblemTest, UnsuppliedDemandGivesFeasibilityCut) {
  TwoStageInstance inst;
  inst.overload_penalty = 5.0;
  inst.network.nodes = {0, 1};
  inst.network.arcs = {Arc{0, 1, 1.0, 5.0, false, 0.0}};
  inst.network.demands = {DemandNode{1, 2.0, 1.0, 3.0, 1.0}};
  inst.network.supplies = {SupplyNode{0, 0.0}};
  inst.scenarios = {Scenario{0, {}, 1.0}};
  const MasterLayout layout(inst);
  std::vector<double> x(layout.size(), 0.0);
  x[layout.b(0)] = 2.0;
  const SubproblemEvaluation eval = EvaluateSubproblem(inst, 0, x);
  EXPECT_FALSE(eval.recourse.has_value());
  EXPECT_EQ(eval.cut.kind, CutKind::kFeasibility);
  EXPECT_EQ(eval.cut.coeffs[layout.theta(0)], 0.0);
  EXPECT_GT(Violation(eval.cut, x), kCutTol);
  // Demand 0 is the only servable level and satisfies the cut.
  x[layout.b(0)] = 0.0;
  EXPECT_LE(Excess(eval.cut, x), 1e-9);
  // The whole instance has no feasible first stage.
  BendersConfig config;
  config.max_iterations = 20;
  const RunResult run = RunBenders(inst, config);
  EXPECT_NE(run.status, RunStatus::kOptimal);
}

TEST(EvaluateSubproblemTest, CutsAreValidOverEnumeratedFirstStages) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{5, 6, 2, 3, 1, seed});
    const MasterLayout layout(inst);
    const std::vector<EvaluatedPoint> points = EnumerateFirstStages(inst, 3);
    // Cuts generated at every enumerated point, then checked at all others.
    std::vector<Cut> cuts;
    for (size_t p = 0; p < points.size(); p += 3) {
      for (int c = 0; c < layout.num_scenarios(); ++c) {
        const SubproblemEvaluation eval =
            EvaluateSubproblem(inst, c, points[p].x);
        EXPECT_EQ(eval.recourse.has_value(), points[p].recourse[c].has_value());
        if (eval.recourse) {
          EXPECT_NEAR(*eval.recourse, *points[p].recourse[c],
                      1e-7 * (1.0 + std::abs(*eval.recourse)));
          // Tight at the generating point.
          EXPECT_NEAR(RelativeExcess(eval.cut, points[p].x), 0.0, 1e-7);
        } else {
          EXPECT_GT(Violation(eval.cut, points[p].x), kCutTol);
        }
        cuts.push_back(eval.cut);
      }
    }
    for (const Cut& cut : cuts) {
      for (const EvaluatedPoint& point : points) {
        if (!CutApplies(cut, point, layout)) continue;
        EXPECT_LE(RelativeExcess(cut, point.x), 1e-7) << "seed " << seed;
      }
    }
  }
}

TEST(RunBendersTest, SingleScenarioMatchesExtensiveForm) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const TwoStageInstance inst = SmallInstance(seed, 1);
    const RunResult run = RunBenders(inst, BendersConfig{});
    ASSERT_EQ(run.status, RunStatus::kOptimal) << run.error;
    const double oracle = ExtensiveOptimum(inst);
    EXPECT_NEAR(run.objective, oracle, 1e-6 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(RunBendersTest, ZeroDemandsTerminateImmediately) {
  TwoStageInstance inst = SmallInstance(3);
  for (DemandNode& d : inst.network.demands) d.base = d.lo = d.hi = 0.0;
  const RunResult run = RunBenders(inst, BendersConfig{});
  ASSERT_EQ(run.status, RunStatus::kOptimal);
  ASSERT_EQ(run.iterations.size(), 1u);
  EXPECT_EQ(run.iterations[0].n_violated, 0);
  EXPECT_EQ(run.total_cuts_added, 0);
  EXPECT_NEAR(run.objective, 0.0, 1e-9);
  EXPECT_EQ(run.gap, 0.0);
}

TEST(RunBendersTest, NoFilterMatchesExtensiveFormSweep) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const TwoStageInstance inst = SmallInstance(seed);
    const RunResult run = RunBenders(inst, ConfigFor("none"));
    ASSERT_EQ(run.status, RunStatus::kOptimal) << "seed " << seed;
    const double oracle = ExtensiveOptimum(inst);
    EXPECT_NEAR(run.objective, oracle, 1e-6 * std::max(1.0, std::abs(oracle)))
        << "seed " << seed;
  }
}

TEST(RunBendersTest, EveryStrategyReachesTheSameOptimum) {
  const std::vector<std::string> specs = {"none",
                                          "random",
                                          "violation",
                                          "diversity",
                                          "hybrid",
                                          "hybrid+",
                                          "violation+",
                                          "random@fixed:1",
                                          "violation@vfrac:0.5",
                                          "diversity+@fixed:2",
                                          "violation@adaptive:1",
                                          "violation@adaptive:4"};
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const TwoStageInstance inst = SmallInstance(seed, 6);
    const double oracle = ExtensiveOptimum(inst);
    for (const std::string& spec : specs) {
      const RunResult run = RunBenders(inst, ConfigFor(spec));
      ASSERT_EQ(run.status, RunStatus::kOptimal) << spec << " seed " << seed;
      EXPECT_NEAR(run.objective, oracle, 1e-6 * std::max(1.0, std::abs(oracle)))
          << spec << " seed " << seed;
    }
  }
}

TEST(RunBendersTest, IterationInvariants) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TwoStageInstance inst = SmallInstance(seed, 6);
    for (const std::string& spec : PresetConfigNames()) {
      const RunResult run = RunBenders(inst, ConfigFor(spec));
      ASSERT_EQ(run.status, RunStatus::kOptimal);
      EXPECT_LE(run.gap, 1e-6);
      ASSERT_FALSE(run.iterations.empty());
      int64_t added = 0;
      for (size_t i = 0; i < run.iterations.size(); ++i) {
        const IterationRecord& rec = run.iterations[i];
        EXPECT_EQ(rec.iteration, static_cast<int>(i) + 1);
        EXPECT_LE(rec.n_selected, rec.pool_size + 1);
        EXPECT_LE(rec.n_violated, rec.pool_size);
        EXPECT_EQ(rec.n_violated,
                  rec.n_violated_feasibility + rec.n_violated_optimality);
        EXPECT_EQ(rec.n_selected, rec.n_feasibility_selected +
                                      rec.n_optimality_selected +
                                      (rec.aggregate_added ? 1 : 0));
        if (i > 0) {
          EXPECT_GE(rec.z_mp, run.iterations[i - 1].z_mp - 1e-7);
          if (std::isfinite(run.iterations[i - 1].z_ub)) {
            EXPECT_LE(rec.z_ub, run.iterations[i - 1].z_ub + 1e-9);
          }
        }
        if (std::isfinite(rec.z_ub)) EXPECT_LE(rec.z_mp, rec.z_ub + 1e-7);
        const bool last = i + 1 == run.iterations.size();
        if (!last) {
          EXPECT_GE(rec.n_selected, 1);
          EXPECT_GT(rec.min_selected_violation, kCutTol);
        }
        added += rec.n_selected;
      }
      EXPECT_EQ(added, run.total_cuts_added);
      EXPECT_EQ(static_cast<int64_t>(run.added_cuts.size()),
                run.total_cuts_added);
    }
  }
}

TEST(RunBendersTest, AddedCutsAreWellFormed) {
  const TwoStageInstance inst = SmallInstance(4, 6);
  const MasterLayout layout(inst);
  const RunResult run = RunBenders(inst, ConfigFor("hybrid+"));
  ASSERT_EQ(run.status, RunStatus::kOptimal);
  std::set<int64_t> ids;
  int last_iteration = 0;
  for (const Cut& cut : run.added_cuts) {
    EXPECT_TRUE(ids.insert(cut.id).second);
    EXPECT_GE(cut.iteration_created, last_iteration);
    last_iteration = cut.iteration_created;
    ASSERT_EQ(static_cast<int>(cut.coeffs.size()), layout.size());
    int nonzero_thetas = 0;
    for (int c = 0; c < layout.num_scenarios(); ++c) {
      const double t = cut.coeffs[layout.theta(c)];
      if (t != 0.0) ++nonzero_thetas;
      if (cut.kind == CutKind::kFeasibility) EXPECT_EQ(t, 0.0);
      if (cut.kind == CutKind::kOptimality &&
          cut.scenario_id != kAggregateScenario) {
        EXPECT_EQ(t, c == cut.scenario_id ? -1.0 : 0.0);
      }
      if (cut.scenario_id == kAggregateScenario) EXPECT_LE(t, 0.0);
    }
    if (cut.scenario_id == kAggregateScenario) {
      EXPECT_EQ(cut.kind, CutKind::kOptimality);
      EXPECT_GE(nonzero_thetas, 1);
      EXPECT_NEAR(std::abs(std::accumulate(cut.coeffs.begin() + layout.theta(0),
                                           cut.coeffs.end(), 0.0)),
                  1.0, 1e-12);
    }
  }
}

TEST(RunBendersTest, AggregateCutsAreValid) {
  int aggregates = 0;
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{5, 7, 2, 5, 1, seed});
    const MasterLayout layout(inst);
    const RunResult run = RunBenders(inst, ConfigFor("violation+@fixed:1"));
    ASSERT_EQ(run.status, RunStatus::kOptimal);
    const std::vector<EvaluatedPoint> points = EnumerateFirstStages(inst, 3);
    for (const Cut& cut : run.added_cuts) {
      aggregates += cut.scenario_id == kAggregateScenario ? 1 : 0;
      for (const EvaluatedPoint& point : points) {
        if (!CutApplies(cut, point, layout)) continue;
        EXPECT_LE(RelativeExcess(cut, point.x), 1e-7) << "seed " << seed;
      }
    }
  }
  EXPECT_GT(aggregates, 0);
}

TEST(RunBendersTest, DeterministicAndThreadIndependent) {
  const TwoStageInstance inst =
      GenerateInstance(GenerateParams{7, 10, 2, 8, 1, 9});
  for (const std::string& spec : {"random", "hybrid+"}) {
    BendersConfig one = ConfigFor(spec);
    one.strategy.seed = 17;
    BendersConfig four = one;
    four.jobs = 4;
    const RunResult a = RunBenders(inst, one);
    const RunResult b = RunBenders(inst, one);
    const RunResult c = RunBenders(inst, four);
    for (const RunResult* other : {&b, &c}) {
      EXPECT_EQ(a.objective, other->objective);
      EXPECT_EQ(a.iterations.size(), other->iterations.size());
      EXPECT_EQ(a.total_cuts_added, other->total_cuts_added);
      EXPECT_EQ(a.incumbent, other->incumbent);
      ASSERT_EQ(a.added_cuts.size(), other->added_cuts.size());
      for (size_t i = 0; i < a.added_cuts.size(); ++i) {
        EXPECT_EQ(a.added_cuts[i].coeffs, other->added_cuts[i].coeffs);
        EXPECT_EQ(a.added_cuts[i].rhs, other->added_cuts[i].rhs);
      }
    }
  }
}

TEST(RunBendersTest, LimitsAreReported) {
  const TwoStageInstance inst = SmallInstance(2, 6);
  BendersConfig config = ConfigFor("violation@fixed:1");
  config.max_iterations = 1;
  const RunResult run = RunBenders(inst, config);
  EXPECT_EQ(run.status, RunStatus::kIterationLimit);
  EXPECT_EQ(run.iterations.size(), 1u);
  EXPECT_GT(run.gap, 1e-6);
  EXPECT_STREQ(RunStatusName(RunStatus::kIterationLimit), "IterationLimit");
  config.max_iterations = 10000;
  config.time_limit = 1e-9;
  EXPECT_EQ(RunBenders(inst, config).status, RunStatus::kTimeLimit);
}

TEST(RunBendersTest, RelativeGap) {
  EXPECT_EQ(RelativeGap(10.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(RelativeGap(10.0, 8.0), 0.2);
  EXPECT_DOUBLE_EQ(RelativeGap(0.5, 0.0), 0.5);
  EXPECT_EQ(RelativeGap(1.0, 2.0), 0.0);
  EXPECT_EQ(RelativeGap(kInf, 0.0), kInf);
}

}  // namespace
}  // namespace benders
