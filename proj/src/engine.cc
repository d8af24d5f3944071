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
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "benders/error.h"
#include "benders/logging.h"

namespace benders {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// min over the box of d^T y, treating near-zero entries as exact zeros.
// Returns -inf if a nonzero entry meets an infinite bound.
double BoxMinimum(const LinearProgram& lp, std::span<const double> d,
                  double zero_tol) {
  double total = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (std::abs(d[j]) <= zero_tol) continue;
    const double bound = d[j] > 0 ? lp.lower[j] : lp.upper[j];
    if (!std::isfinite(bound)) return -kInf;
    total += d[j] * bound;
  }
  return total;
}

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The first exception
// (lowest index) is rethrown after all threads finish.
template <class Fn>
void ParallelFor(int n, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](int worker, int stride) {
    for (int i = worker; i < n; i += stride) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(jobs, 1, std::max(1, n));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w, workers);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

const char* RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kOptimal:
      return "Optimal";
    case RunStatus::kTimeLimit:
      return "TimeLimit";
    case RunStatus::kIterationLimit:
      return "IterationLimit";
    case RunStatus::kError:
      return "Error";
  }
  return "Error";
}

double RelativeGap(double z_ub, double z_mp) {
  if (!std::isfinite(z_ub) || !std::isfinite(z_mp)) return kInf;
  return std::max(0.0, (z_ub - z_mp) / std::max(1.0, std::abs(z_ub)));
}

SubproblemEvaluation EvaluateSubproblem(const SubproblemTemplate& tpl,
                                        const MasterLayout& layout,
                                        int scenario_pos, int scenario_id,
                                        std::span<const double> x) {
  const LinearProgram lp = tpl.Instantiate(x);
  const LpSolution sol = SolveLp(lp);
  SubproblemEvaluation eval;
  Cut& cut = eval.cut;
  cut.scenario_id = scenario_id;
  cut.coeffs.assign(layout.size(), 0.0);

  if (sol.status == LpStatus::kOptimal) {
    // theta_C >= sum_i y_i (r0_i + R_i x) + min_box(d^T y): valid for every
    // first stage because (y, d) stays dual feasible when only the rhs moves.
    double scale = 1.0;
    for (double d : sol.reduced_costs) scale = std::max(scale, std::abs(d));
    const double box = BoxMinimum(lp, sol.reduced_costs, 1e-9 * scale);
    if (!std::isfinite(box)) {
      throw Error(ErrorCode::kNumericalFailure,
                  "subproblem duals are not dual feasible (scenario " +
                      std::to_string(scenario_id) + ")");
    }
    double constant = box;
    for (int i = 0; i < lp.num_rows(); ++i) {
      const double y = sol.dual[i];
      if (y == 0.0) continue;
      constant += y * tpl.lp.rows[i].rhs;
      for (const RhsTerm& t : tpl.rhs_terms[i]) {
        cut.coeffs[t.master_index] += y * t.coeff;
      }
    }
    cut.kind = CutKind::kOptimality;
    cut.coeffs[layout.theta(scenario_pos)] = -1.0;
    cut.rhs = -constant;
    eval.recourse = sol.objective;
    return eval;
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericalFailure,
                "subproblem reported unbounded (scenario " +
                    std::to_string(scenario_id) + ")");
  }

  // Infeasible: the certificate row g y <= sum_i f_i r_i(x) must stay
  // satisfiable, i.e. sum_i f_i r_i(x) >= min_box(g y).
  std::vector<double> g(lp.num_vars(), 0.0);
  double fscale = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double f = sol.farkas[i];
    if (f == 0.0) continue;
    fscale = std::max(fscale, std::abs(f));
    for (int j = 0; j < lp.num_vars(); ++j) g[j] += f * lp.rows[i].coeffs[j];
  }
  const double box = BoxMinimum(lp, g, 1e-9 * std::max(1.0, fscale));
  if (!std::isfinite(box)) {
    throw Error(ErrorCode::kNumericalFailure,
                "subproblem Farkas certificate is invalid (scenario " +
                    std::to_string(scenario_id) + ")");
  }
  double rhs = -box;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double f = sol.farkas[i];
    if (f == 0.0) continue;
    rhs += f * tpl.lp.rows[i].rhs;
    for (const RhsTerm& t : tpl.rhs_terms[i]) {
      cut.coeffs[t.master_index] -= f * t.coeff;
    }
  }
  double norm = 0.0;
  for (double c : cut.coeffs) norm = std::max(norm, std::abs(c));
  if (norm > 0.0) {
    for (double& c : cut.coeffs) c /= norm;
    rhs /= norm;
  }
  cut.kind = CutKind::kFeasibility;
  cut.rhs = rhs;
  return eval;
}

SubproblemEvaluation EvaluateSubproblem(const TwoStageInstance& inst,
                                        int scenario_pos,
                                        std::span<const double> x) {
  const MasterLayout layout(inst);
  const Scenario& scenario = inst.scenarios.at(scenario_pos);
  return EvaluateSubproblem(BuildSubproblemTemplate(inst, scenario), layout,
                            scenario_pos, scenario.id, x);
}

LinearProgram BuildMaster(const TwoStageInstance& inst,
                          std::span<const Cut> cuts) {
  const MasterLayout layout(inst);
  const Network& net = inst.network;
  LinearProgram lp = LinearProgram::WithVariables(layout.size());
  for (int k = 0; k < layout.num_switches(); ++k) {
    const double cost = net.arcs[layout.switch_arc(k)].switch_cost;
    lp.objective[layout.z(k)] = -cost;
    lp.objective_offset += cost;
    lp.upper[layout.z(k)] = 1.0;
    lp.var_types[layout.z(k)] = VarType::kBinary;
  }
  for (int k = 0; k < layout.num_demands(); ++k) {
    const DemandNode& d = net.demands[k];
    lp.objective[layout.b(k)] = -d.value_coeff;
    lp.objective_offset += d.value_coeff * d.hi;
    lp.lower[layout.b(k)] = d.lo;
    lp.upper[layout.b(k)] = d.hi;
  }
  for (int c = 0; c < layout.num_scenarios(); ++c) {
    lp.objective[layout.theta(c)] = inst.scenarios[c].weight;
  }
  for (const Cut& cut : cuts) {
    lp.AddRow(cut.coeffs, Relation::kLessEqual, cut.rhs);
  }
  return lp;
}

RunResult RunBenders(const TwoStageInstance& inst,
                     const BendersConfig& config) {
  const Clock::time_point start = Clock::now();
  RunResult result;
  try {
    inst.Validate();
    config.strategy.Validate();
  } catch (const Error& e) {
    result.status = RunStatus::kError;
    result.error = e.what();
    return result;
  }

  const MasterLayout layout(inst);
  const int n_scen = layout.num_scenarios();
  std::vector<SubproblemTemplate> templates;
  templates.reserve(n_scen);
  for (const Scenario& s : inst.scenarios) {
    templates.push_back(BuildSubproblemTemplate(inst, s));
  }

  int64_t next_cut_id = 0;
  double z_ub = kInf;
  double z_mp = -kInf;
  std::vector<double> previous_first_stage;
  auto finish = [&](RunStatus status) {
    result.status = status;
    result.objective = z_ub;
    result.lower_bound = z_mp;
    result.gap = RelativeGap(z_ub, z_mp);
    result.total_time = Seconds(start);
    Log(LogLevel::kInfo,
        inst.name + " [" + FormatStrategySpec(config.strategy) + "] " +
            RunStatusName(status) + " obj=" + std::to_string(z_ub) +
            " iters=" + std::to_string(result.iterations.size()) +
            " cuts=" + std::to_string(result.total_cuts_added));
    return result;
  };

  int iteration = 0;
  try {
    while (true) {
      if (Seconds(start) > config.time_limit) {
        return finish(RunStatus::kTimeLimit);
      }
      if (iteration >= config.max_iterations) {
        return finish(RunStatus::kIterationLimit);
      }
      ++iteration;
      IterationRecord rec;
      rec.iteration = iteration;

      Clock::time_point t0 = Clock::now();
      const LpSolution master =
          SolveMip(BuildMaster(inst, result.added_cuts), config.master_options);
      rec.master_time = Seconds(t0);
      if (master.status != LpStatus::kOptimal) {
        throw Error(
            ErrorCode::kNumericalFailure,
            std::string("master problem is ") + LpStatusName(master.status));
      }
      z_mp = master.objective;
      const std::vector<double>& x = master.primal;
      const std::vector<double> first_stage(
          x.begin(), x.begin() + layout.num_first_stage());
      rec.repeated_assignment = first_stage == previous_first_stage;
      previous_first_stage = first_stage;

      t0 = Clock::now();
      std::vector<SubproblemEvaluation> evals(n_scen);
      ParallelFor(n_scen, config.jobs, [&](int c) {
        evals[c] = EvaluateSubproblem(templates[c], layout, c,
                                      inst.scenarios[c].id, x);
      });
      rec.subproblem_time = Seconds(t0);

      bool all_feasible = true;
      double recourse = 0.0;
      std::vector<Cut> pool;
      pool.reserve(n_scen);
      for (int c = 0; c < n_scen; ++c) {
        if (evals[c].recourse) {
          recourse += inst.scenarios[c].weight * *evals[c].recourse;
        } else {
          all_feasible = false;
        }
        Cut cut = std::move(evals[c].cut);
        cut.id = next_cut_id++;
        cut.iteration_created = iteration;
        pool.push_back(std::move(cut));
      }
      if (all_feasible) {
        const double candidate =
            FirstStageCost(inst,
                           FirstStageAssignment::FromMasterVector(layout, x)) +
            recourse;
        if (candidate < z_ub) {
          z_ub = candidate;
          result.incumbent = first_stage;
        }
      }
      rec.z_mp = z_mp;
      rec.z_ub = z_ub;
      rec.pool_size = static_cast<int>(pool.size());
      for (const Cut& cut : pool) {
        if (Violation(cut, x) > kCutTol) {
          ++rec.n_violated;
          ++(cut.kind == CutKind::kFeasibility ? rec.n_violated_feasibility
                                               : rec.n_violated_optimality);
        }
      }

      const bool converged =
          rec.n_violated == 0 ||
          (std::isfinite(z_ub) && RelativeGap(z_ub, z_mp) <= config.gap_tol);
      if (converged) {
        result.iterations.push_back(rec);
        if (!std::isfinite(z_ub)) {
          throw Error(ErrorCode::kNumericalFailure,
                      "no violated cut but no feasible first stage either");
        }
        return finish(RunStatus::kOptimal);
      }

      t0 = Clock::now();
      FilterContext ctx;
      ctx.x = x;
      ctx.z_ub = z_ub;
      ctx.z_mp = z_mp;
      ctx.iteration = iteration;
      ctx.n_scenarios = n_scen;
      FilterResult selection = Filter(pool, ctx, config.strategy);
      rec.filter_time = Seconds(t0);

      rec.n_selected = static_cast<int>(selection.cuts.size());
      rec.n_feasibility_selected = selection.n_feasibility_selected;
      rec.n_optimality_selected = selection.n_optimality_selected;
      rec.aggregate_added = selection.aggregate_added;
      rec.min_selected_violation = kInf;
      for (Cut& cut : selection.cuts) {
        if (cut.id < 0) cut.id = next_cut_id++;
        rec.min_selected_violation =
            std::min(rec.min_selected_violation, Violation(cut, x));
        result.added_cuts.push_back(std::move(cut));
      }
      result.total_cuts_added += rec.n_selected;
      Log(LogLevel::kDebug,
          inst.name + " it=" + std::to_string(iteration) + " z_mp=" +
              std::to_string(z_mp) + " z_ub=" + std::to_string(z_ub) +
              " violated=" + std::to_string(rec.n_violated) +
              " added=" + std::to_string(rec.n_selected) +
              (rec.repeated_assignment ? " (repeated assignment)" : ""));
      result.iterations.push_back(rec);
    }
  } catch (const std::exception& e) {
    result.error = "iteration " + std::to_string(iteration) + ": " + e.what();
    Log(LogLevel::kWarn, inst.name + ": " + result.error);
    return finish(RunStatus::kError);
  }
}

}  // namespace benders
