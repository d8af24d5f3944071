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

#ifndef BENDERS_CUT_H_
#define BENDERS_CUT_H_

#include <cstdint>
#include <vector>

#include "benders/lp.h"

namespace benders {

enum class CutKind { kOptimality, kFeasibility };

// Scenario id carried by aggregated cuts, which bound several thetas.
inline constexpr int kAggregateScenario = -1;

// A master constraint `coeffs . x <= rhs` over the master vector
// (z, b, theta_1 .. theta_|C|). Optimality cuts carry -1 on the theta of their
// scenario and 0 on every other theta; feasibility cuts carry no theta terms.
struct Cut {
  int64_t id = 0;
  int scenario_id = 0;
  CutKind kind = CutKind::kOptimality;
  std::vector<double> coeffs;
  double rhs = 0.0;
  int iteration_created = 0;
};

// Absolute violation threshold for "violated".
inline constexpr double kCutTol = 1e-6;

// What a selection strategy may look at besides the pool itself.
struct FilterContext {
  std::vector<double> x;  // current master solution
  double z_ub = kInf;     // incumbent objective, +inf without one
  double z_mp = -kInf;    // current master objective
  int iteration = 0;
  int n_scenarios = 0;
};

}  // namespace benders

#endif  // BENDERS_CUT_H_
