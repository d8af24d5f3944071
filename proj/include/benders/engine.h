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

// Iterative multi-cut Benders decomposition.
//
// The master holds (z, b) and one recourse estimate theta_C >= 0 per scenario
// and is re-solved from scratch every iteration. At each master candidate all
// scenario subproblems are solved; their duals or Farkas rays become the cut
// pool, and the configured filter decides which cuts join the master.

#ifndef BENDERS_ENGINE_H_
#define BENDERS_ENGINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "benders/cut.h"
#include "benders/filtering.h"
#include "benders/instance.h"

namespace benders {

struct SubproblemEvaluation {
  // Set when the subproblem is feasible at the candidate.
  std::optional<double> recourse;
  Cut cut;
};

// Solves the subproblem of `scenario` (position `scenario_pos` in the
// instance) at master point `x` and derives its optimality or feasibility
// cut. The returned cut has id 0; callers number cuts. Throws
// kNumericalFailure.
SubproblemEvaluation EvaluateSubproblem(const TwoStageInstance& inst,
                                        int scenario_pos,
                                        std::span<const double> x);

// Same, reusing a prebuilt template for the scenario.
SubproblemEvaluation EvaluateSubproblem(const SubproblemTemplate& tpl,
                                        const MasterLayout& layout,
                                        int scenario_pos, int scenario_id,
                                        std::span<const double> x);

struct BendersConfig {
  StrategyConfig strategy;
  double gap_tol = 1e-6;
  double time_limit = 600.0;  // seconds
  int max_iterations = 10000;
  int jobs = 1;  // threads for subproblem evaluation
  MipOptions master_options;
};

struct IterationRecord {
  int iteration = 0;
  int pool_size = 0;
  int n_violated = 0;
  int n_violated_feasibility = 0;
  int n_violated_optimality = 0;
  int n_selected = 0;
  int n_feasibility_selected = 0;
  int n_optimality_selected = 0;
  bool aggregate_added = false;
  // Smallest violation at the candidate among the cuts added this iteration.
  double min_selected_violation = 0.0;
  // The master returned the same (z, b) as the previous iteration.
  bool repeated_assignment = false;
  double z_mp = 0.0;
  double z_ub = kInf;
  double master_time = 0.0;
  double subproblem_time = 0.0;
  double filter_time = 0.0;
};

enum class RunStatus { kOptimal, kTimeLimit, kIterationLimit, kError };

const char* RunStatusName(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::kError;
  double objective = kInf;
  double lower_bound = -kInf;
  double gap = kInf;
  double total_time = 0.0;
  std::vector<IterationRecord> iterations;
  int64_t total_cuts_added = 0;
  // Every cut added to the master, in order.
  std::vector<Cut> added_cuts;
  // Best first stage found (z, b), when an incumbent exists.
  std::vector<double> incumbent;
  std::string error;
};

// (z_ub - z_mp) / max(1, |z_ub|), clamped at zero.
double RelativeGap(double z_ub, double z_mp);

// Master MIP with the given cuts as rows.
LinearProgram BuildMaster(const TwoStageInstance& inst,
                          std::span<const Cut> cuts);

RunResult RunBenders(const TwoStageInstance& inst, const BendersConfig& config);

}  // namespace benders

#endif  // BENDERS_ENGINE_H_
