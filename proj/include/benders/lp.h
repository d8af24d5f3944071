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

// Dense linear and binary programming substrate.
//
// Everything here is minimization. A LinearProgram is a set of dense rows
// `coeffs . x (<=|=|>=) rhs` plus per-variable bounds, some of which may be
// infinite. SolveLp runs a two-phase tableau simplex and reports primal
// values, one dual multiplier per row and, for infeasible programs, a Farkas
// certificate read off the phase-1 duals. SolveMip wraps it in best-first
// branch-and-bound over the variables flagged binary.

#ifndef BENDERS_LP_H_
#define BENDERS_LP_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace benders {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr double kFeasTol = 1e-7;
inline constexpr double kIntTol = 1e-6;
inline constexpr double kPivotTol = 1e-10;

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

enum class VarType { kContinuous, kBinary };

struct Row {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  std::vector<double> objective;
  // Added to every reported objective value; lets callers carry constant
  // cost terms without a dummy variable.
  double objective_offset = 0.0;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<VarType> var_types;

  // Creates a program with `num_vars` continuous variables in [0, +inf) and
  // a zero objective.
  static LinearProgram WithVariables(int num_vars);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void AddRow(std::vector<double> coeffs, Relation relation, double rhs);

  // Throws kInvalidArgument when sizes disagree, bounds cross, or a binary
  // variable has bounds outside [0, 1].
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  // Row multipliers y with c - A^T y = reduced_costs. Sign convention for
  // minimization: y <= 0 on <= rows, y >= 0 on >= rows, free on = rows.
  std::vector<double> dual;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  // Row multipliers f with f >= 0 on <= rows, f <= 0 on >= rows. The
  // aggregated row (sum f_i a_i) x <= sum f_i b_i is implied by the rows, and
  // its left side is bounded below over the variable box by more than the
  // right side.
  std::vector<double> farkas;
  int64_t simplex_iterations = 0;
  int64_t nodes = 0;
};

struct MipOptions {
  int64_t node_limit = 200000;
};

// Solves the continuous relaxation; integrality flags are ignored.
// Throws kNumericalFailure when the simplex cannot make progress or the
// final basis fails its residual check.
LpSolution SolveLp(const LinearProgram& lp);

// Best-first branch-and-bound over binary variables. Branches on the most
// fractional binary, lowest index on ties. Throws kNodeLimitExceeded past
// `options.node_limit` nodes.
LpSolution SolveMip(const LinearProgram& lp, const MipOptions& options = {});

// Independent certificate checks, used by tests and by callers that want to
// refuse suspicious solutions.

// Largest violation of any row or bound by `x`.
double MaxPrimalViolation(const LinearProgram& lp, std::span<const double> x);

// b^T y plus the bound contributions of the reduced costs.
double DualObjective(const LinearProgram& lp, std::span<const double> dual);

// Returns the right side r of the aggregated certificate row after its left
// side has been minimized over the variable box (0 x <= r); a valid
// certificate yields r < -kFeasTol. Returns +inf when the certificate has the
// wrong signs or leaves an unbounded direction.
double FarkasResidual(const LinearProgram& lp, std::span<const double> farkas);

}  // namespace benders

#endif  // BENDERS_LP_H_
