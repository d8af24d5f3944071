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

#include "benders/instance.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "benders/error.h"
#include "benders/lp.h"
#include "gtest/gtest.h"

namespace benders {
namespace {

// Two nodes joined by one arc; supply at node 0, demand at node 1.
TwoStageInstance TwoNodeInstance(double capacity, double penalty) {
  TwoStageInstance inst;
  inst.name = "two_node";
  inst.overload_penalty = penalty;
  inst.network.nodes = {0, 1};
  inst.network.arcs = {Arc{0, 1, 1.0, capacity, false, 0.0}};
  inst.network.demands = {DemandNode{1, 5.0, 0.0, 10.0, 1.0}};
  inst.network.supplies = {SupplyNode{0, 100.0}};
  inst.scenarios = {Scenario{0, {}, 1.0}};
  return inst;
}

double SolveSubproblemAt(const TwoStageInstance& inst, double demand) {
  FirstStageAssignment fixed;
  fixed.b = {demand};
  fixed.theta = {0.0};
  const LpSolution sol =
      SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed));
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  return sol.objective;
}

// Independent structural checks of a generated instance.
void ExpectWellFormed(const TwoStageInstance& inst, const GenerateParams& p) {
  const Network& net = inst.network;
  ASSERT_EQ(static_cast<int>(net.nodes.size()), p.n_nodes);
  ASSERT_EQ(static_cast<int>(net.arcs.size()), p.n_arcs);
  ASSERT_EQ(static_cast<int>(inst.scenarios.size()), p.n_scenarios);
  int switchable = 0;
  std::set<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> adj(net.nodes.size());
  auto index = [&](int id) {
    auto it = std::find(net.nodes.begin(), net.nodes.end(), id);
    EXPECT_NE(it, net.nodes.end());
    return static_cast<int>(it - net.nodes.begin());
  };
  for (const Arc& a : net.arcs) {
    EXPECT_GT(a.susceptance, 0.0);
    EXPECT_GT(a.capacity, 0.0);
    EXPECT_GE(a.switch_cost, 0.0);
    EXPECT_NE(a.tail, a.head);
    EXPECT_TRUE(
        pairs.insert({std::min(a.tail, a.head), std::max(a.tail, a.head)})
            .second);
    adj[index(a.tail)].push_back(index(a.head));
    adj[index(a.head)].push_back(index(a.tail));
    switchable += a.switchable ? 1 : 0;
  }
  EXPECT_EQ(switchable, p.n_switchable);
  // Connectivity by breadth-first search.
  std::vector<bool> seen(net.nodes.size(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }));
  for (const DemandNode& d : net.demands) {
    EXPECT_LE(d.lo, d.hi);
    EXPECT_GE(d.base, d.lo);
    EXPECT_LE(d.base, d.hi);
    EXPECT_GE(d.value_coeff, 0.0);
  }
  for (const SupplyNode& s : net.supplies) EXPECT_GT(s.max_injection, 0.0);
  EXPECT_GT(inst.overload_penalty, 0.0);
  std::set<int> ids;
  double weight_sum = 0.0;
  std::set<std::vector<int>> outage_sets;
  for (const Scenario& s : inst.scenarios) {
    EXPECT_TRUE(ids.insert(s.id).second);
    EXPECT_GT(s.weight, 0.0);
    weight_sum += s.weight;
    EXPECT_EQ(static_cast<int>(s.outaged_arcs.size()), p.outage_size);
    for (int a : s.outaged_arcs) {
      ASSERT_GE(a, 0);
      ASSERT_LT(a, p.n_arcs);
      EXPECT_FALSE(net.arcs[a].switchable);
    }
    std::vector<int> sorted = s.outaged_arcs;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_TRUE(outage_sets.insert(sorted).second);
  }
  EXPECT_NEAR(weight_sum, 1.0, 1e-12);
}

TEST(GenerateInstanceTest, DeterministicPerSeed) {
  GenerateParams p{4, 5, 1, 3, 1, 7};
  const TwoStageInstance a = GenerateInstance(p);
  const TwoStageInstance b = GenerateInstance(p);
  EXPECT_EQ(a, b);
  EXPECT_EQ(SerializeInstance(a), SerializeInstance(b));
  p.seed = 8;
  EXPECT_NE(SerializeInstance(a), SerializeInstance(GenerateInstance(p)));
}

TEST(GenerateInstanceTest, Preconditions) {
  EXPECT_NO_THROW(GenerateInstance(GenerateParams{3, 2, 0, 1, 1, 1}));
  try {
    GenerateInstance(GenerateParams{3, 1, 0, 1, 1, 1});
    FAIL() << "expected InvalidParams";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
    EXPECT_NE(std::string(e.what()).find("n_arcs"), std::string::npos);
  }
  EXPECT_THROW(GenerateInstance(GenerateParams{4, 5, 1, 3, 3, 1}), Error);
  EXPECT_THROW(GenerateInstance(GenerateParams{4, 5, 1, 50, 1, 1}), Error);
  EXPECT_THROW(GenerateInstance(GenerateParams{4, 5, 6, 1, 1, 1}), Error);
  EXPECT_THROW(GenerateInstance(GenerateParams{4, 7, 0, 1, 1, 1}), Error);
}

TEST(GenerateInstanceTest, InvariantsHoldOverSeedSweep) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const GenerateParams p{
        3 + static_cast<int>(seed % 8), 0,
        static_cast<int>(seed % 3),     1 + static_cast<int>(seed % 5),
        1 + static_cast<int>(seed % 2), seed};
    GenerateParams q = p;
    q.n_arcs = q.n_nodes - 1 + static_cast<int>(seed % 4) + q.n_switchable +
               q.outage_size;
    const int max_pairs = q.n_nodes * (q.n_nodes - 1) / 2;
    q.n_arcs = std::min(q.n_arcs, max_pairs);
    TwoStageInstance inst;
    try {
      inst = GenerateInstance(q);
    } catch (const Error& e) {
      // Too few non-switchable arcs for the requested scenarios.
      EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
      continue;
    }
    ExpectWellFormed(inst, q);
    EXPECT_NO_THROW(inst.Validate());
    FirstStageAssignment fixed;
    const MasterLayout layout(inst);
    fixed.z.assign(layout.num_switches(), 1.0);
    for (const DemandNode& d : inst.network.demands) fixed.b.push_back(d.base);
    fixed.theta.assign(inst.scenarios.size(), 0.0);
    for (const Scenario& s : inst.scenarios) {
      const LpSolution sol = SolveLp(BuildSubproblem(inst, s, fixed));
      EXPECT_NE(sol.status, LpStatus::kUnbounded) << "seed " << seed;
      if (sol.status == LpStatus::kOptimal) EXPECT_GE(sol.objective, -1e-9);
    }
  }
}

TEST(BuildSubproblemTest, BalancedDemandWithinCapacity) {
  EXPECT_NEAR(SolveSubproblemAt(TwoNodeInstance(5.0, 5.0), 5.0), 0.0, 1e-9);
}

TEST(BuildSubproblemTest, OverloadIsPenalized) {
  EXPECT_NEAR(SolveSubproblemAt(TwoNodeInstance(5.0, 5.0), 7.0), 10.0, 1e-9);
}

TEST(BuildSubproblemTest, SwitchedOffArcCarriesNoFlow) {
  TwoStageInstance inst = TwoNodeInstance(5.0, 5.0);
  inst.network.arcs.push_back(Arc{0, 1, 1.0, 5.0, true, 1.0});
  FirstStageAssignment fixed;
  fixed.b = {8.0};
  fixed.theta = {0.0};
  fixed.z = {1.0};
  // Both arcs share the load equally: no overload.
  LpSolution on = SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed));
  ASSERT_EQ(on.status, LpStatus::kOptimal);
  EXPECT_NEAR(on.objective, 0.0, 1e-9);
  fixed.z = {0.0};
  LpSolution off = SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed));
  ASSERT_EQ(off.status, LpStatus::kOptimal);
  EXPECT_NEAR(off.objective, 15.0, 1e-9);
}

TEST(BuildSubproblemTest, OutagedArcDisconnects) {
  TwoStageInstance inst = TwoNodeInstance(5.0, 5.0);
  inst.scenarios[0].outaged_arcs = {0};
  FirstStageAssignment fixed;
  fixed.b = {1.0};
  fixed.theta = {0.0};
  EXPECT_EQ(SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed)).status,
            LpStatus::kInfeasible);
  fixed.b = {0.0};
  EXPECT_EQ(SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed)).status,
            LpStatus::kOptimal);
}

TEST(BuildSubproblemTest, PotentialDifferencesDriveFlows) {
  // Triangle with unequal susceptances: flows split by the potential law.
  TwoStageInstance inst;
  inst.overload_penalty = 1.0;
  inst.network.nodes = {0, 1, 2};
  inst.network.arcs = {Arc{0, 1, 1.0, 100.0, false, 0.0},
                       Arc{0, 2, 2.0, 100.0, false, 0.0},
                       Arc{2, 1, 2.0, 100.0, false, 0.0}};
  inst.network.demands = {DemandNode{1, 3.0, 0.0, 3.0, 1.0}};
  inst.network.supplies = {SupplyNode{0, 10.0}};
  inst.scenarios = {Scenario{0, {}, 1.0}};
  FirstStageAssignment fixed;
  fixed.b = {3.0};
  fixed.theta = {0.0};
  const SubproblemTemplate tpl =
      BuildSubproblemTemplate(inst, inst.scenarios[0]);
  const LpSolution sol =
      SolveLp(BuildSubproblem(inst, inst.scenarios[0], fixed));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  // Path 0-2-1 has series susceptance 1, equal to the direct arc.
  EXPECT_NEAR(sol.primal[tpl.flow(0)], 1.5, 1e-9);
  EXPECT_NEAR(sol.primal[tpl.flow(1)], 1.5, 1e-9);
  EXPECT_NEAR(sol.primal[tpl.flow(2)], 1.5, 1e-9);
  EXPECT_NEAR(sol.primal[tpl.potential(0)], 0.0, 1e-12);
}

TEST(BuildSubproblemTest, MatchesExtensiveFormRestriction) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{6, 9, 2, 3, 1, seed});
    const MasterLayout layout(inst);
    const ExtensiveForm ef = BuildExtensiveForm(inst);
    FirstStageAssignment fixed;
    fixed.z = {1.0, static_cast<double>(seed % 2)};
    for (const DemandNode& d : inst.network.demands) {
      fixed.b.push_back(0.5 * (d.lo + d.hi));
    }
    fixed.theta.assign(inst.scenarios.size(), 0.0);
    // Restrict the extensive form to the fixed first stage and compare each
    // scenario block with its own subproblem.
    LinearProgram restricted = ef.lp;
    for (int k = 0; k < layout.num_switches(); ++k) {
      restricted.lower[layout.z(k)] = restricted.upper[layout.z(k)] =
          fixed.z[k];
    }
    for (int k = 0; k < layout.num_demands(); ++k) {
      restricted.lower[layout.b(k)] = restricted.upper[layout.b(k)] =
          fixed.b[k];
    }
    for (auto& t : restricted.var_types) t = VarType::kContinuous;
    const LpSolution whole = SolveLp(restricted);
    double expected = FirstStageCost(inst, fixed);
    bool all_feasible = true;
    for (const Scenario& s : inst.scenarios) {
      const LpSolution sub = SolveLp(BuildSubproblem(inst, s, fixed));
      if (sub.status != LpStatus::kOptimal) {
        all_feasible = false;
        break;
      }
      expected += s.weight * sub.objective;
    }
    if (!all_feasible) {
      EXPECT_EQ(whole.status, LpStatus::kInfeasible);
      continue;
    }
    ASSERT_EQ(whole.status, LpStatus::kOptimal) << "seed " << seed;
    EXPECT_NEAR(whole.objective, expected, 1e-6 * (1.0 + std::abs(expected)));
  }
}

TEST(ExtensiveFormTest, SingleScenarioCollapse) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{5, 7, 2, 1, 1, seed});
    const MasterLayout layout(inst);
    const LpSolution ef = SolveMip(BuildExtensiveForm(inst).lp);
    ASSERT_EQ(ef.status, LpStatus::kOptimal);
    const FirstStageAssignment first =
        FirstStageAssignment::FromMasterVector(layout, ef.primal);
    const LpSolution sub =
        SolveLp(BuildSubproblem(inst, inst.scenarios[0], first));
    ASSERT_EQ(sub.status, LpStatus::kOptimal);
    EXPECT_NEAR(ef.objective, FirstStageCost(inst, first) + sub.objective,
                1e-6);
  }
}

TEST(ExtensiveFormTest, ZeroDemandsGiveZeroOptimum) {
  TwoStageInstance inst = GenerateInstance(GenerateParams{5, 7, 2, 3, 1, 3});
  for (DemandNode& d : inst.network.demands) d.base = d.lo = d.hi = 0.0;
  const LpSolution sol = SolveMip(BuildExtensiveForm(inst).lp);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  const MasterLayout layout(inst);
  // Keeping every switchable arc on avoids all switching costs.
  for (int k = 0; k < layout.num_switches(); ++k) {
    EXPECT_EQ(sol.primal[layout.z(k)], 1.0);
  }
}

TEST(ExtensiveFormTest, ReproducibleAcrossRuns) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{5, 7, 2, 3, 1, seed});
    const LinearProgram lp = BuildExtensiveForm(inst).lp;
    const LpSolution a = SolveMip(lp);
    const LpSolution b = SolveMip(lp);
    ASSERT_EQ(a.status, LpStatus::kOptimal) << "seed " << seed;
    EXPECT_TRUE(std::isfinite(a.objective));
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.primal, b.primal);
  }
}

TEST(ExtensiveFormTest, OptimumBelowHandBuiltSolutions) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{6, 9, 2, 3, 1, seed});
    const double optimum = SolveMip(BuildExtensiveForm(inst).lp).objective;
    const MasterLayout layout(inst);
    for (int mask = 0; mask < (1 << layout.num_switches()); ++mask) {
      FirstStageAssignment fixed;
      for (int k = 0; k < layout.num_switches(); ++k) {
        fixed.z.push_back((mask >> k) & 1);
      }
      for (const DemandNode& d : inst.network.demands) fixed.b.push_back(d.lo);
      fixed.theta.assign(inst.scenarios.size(), 0.0);
      double total = FirstStageCost(inst, fixed);
      for (const Scenario& s : inst.scenarios) {
        const LpSolution sub = SolveLp(BuildSubproblem(inst, s, fixed));
        ASSERT_EQ(sub.status, LpStatus::kOptimal);
        total += s.weight * sub.objective;
      }
      EXPECT_LE(optimum, total + 1e-7);
    }
  }
}

TEST(InstanceIoTest, RoundTrip) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TwoStageInstance inst =
        GenerateInstance(GenerateParams{7, 10, 2, 4, 2, seed});
    EXPECT_EQ(ParseInstance(SerializeInstance(inst)), inst);
  }
  const auto path =
      std::filesystem::temp_directory_path() / "benders_roundtrip.json";
  const TwoStageInstance inst = GenerateInstance(GenerateParams{});
  WriteInstance(inst, path);
  EXPECT_EQ(ReadInstance(path), inst);
  std::filesystem::remove(path);
}

constexpr char kTwoNodeFixture[] = R"({
  "version": 1,
  "name": "fixture",
  "seed": 11,
  "overload_penalty": 5.0,
  "network": {
    "nodes": [0, 1],
    "arcs": [{"tail": 0, "head": 1, "susceptance": 1.0, "capacity": 5.0,
              "switchable": false, "switch_cost": 0.0}],
    "demands": [{"node": 1, "base": 5.0, "lo": 0.0, "hi": 10.0,
                 "value_coeff": 1.0}],
    "supplies": [{"node": 0, "max_injection": 100.0}]
  },
  "scenarios": [{"id": 0, "outaged_arcs": [], "weight": 1.0}]
})";

TEST(InstanceIoTest, HandWrittenFixture) {
  const TwoStageInstance inst = ParseInstance(kTwoNodeFixture);
  TwoStageInstance expected = TwoNodeInstance(5.0, 5.0);
  expected.name = "fixture";
  expected.seed = 11;
  EXPECT_EQ(inst, expected);
}

TEST(InstanceIoTest, MissingFieldIsNamed) {
  std::string text = kTwoNodeFixture;
  const size_t at = text.find(",\n  \"scenarios\"");
  text = text.substr(0, at) + "\n}";
  try {
    ParseInstance(text);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("scenarios"), std::string::npos);
  }
}

TEST(InstanceIoTest, SyntaxErrorReportsLine) {
  try {
    ParseInstance("{\n  \"version\": 1,\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(InstanceIoTest, SchemaVersionMismatch) {
  std::string text = kTwoNodeFixture;
  text.replace(text.find("\"version\": 1"), 12, "\"version\": 2");
  try {
    ParseInstance(text);
    FAIL() << "expected SchemaVersionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaVersionMismatch);
  }
}

TEST(InstanceIoTest, InvalidContentIsRejected) {
  std::string text = kTwoNodeFixture;
  text.replace(text.find("\"susceptance\": 1.0"), 18, "\"susceptance\": -1");
  EXPECT_THROW(ParseInstance(text), Error);
  EXPECT_THROW(ReadInstance("/nonexistent/instance.json"), Error);
}

}  // namespace
}  // namespace benders
