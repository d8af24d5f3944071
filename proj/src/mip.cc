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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "benders/error.h"
#include "benders/lp.h"

namespace benders {
namespace {

// Open node of the search tree. Bounds are stored only for the binary
// variables, in the order of `binaries`.
struct Node {
  double bound = -kInf;
  int64_t id = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  // Best bound first; ties go to the older node.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double Fractionality(double v) {
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

}  // namespace

LpSolution SolveMip(const LinearProgram& lp, const MipOptions& options) {
  lp.Validate();
  std::vector<int> binaries;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.var_types[j] == VarType::kBinary) binaries.push_back(j);
  }

  LinearProgram work = lp;
  auto solve_node = [&](const std::vector<double>& lower,
                        const std::vector<double>& upper) {
    for (size_t k = 0; k < binaries.size(); ++k) {
      work.lower[binaries[k]] = lower[k];
      work.upper[binaries[k]] = upper[k];
    }
    return SolveLp(work);
  };

  std::optional<LpSolution> incumbent;
  int64_t nodes = 0;
  int64_t simplex_iterations = 0;
  int64_t next_id = 0;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

  Node root;
  root.id = next_id++;
  for (int j : binaries) {
    root.lower.push_back(std::ceil(lp.lower[j] - kIntTol));
    root.upper.push_back(std::floor(lp.upper[j] + kIntTol));
    if (root.lower.back() > root.upper.back()) {
      LpSolution infeasible;
      infeasible.status = LpStatus::kInfeasible;
      return infeasible;
    }
  }
  open.push(std::move(root));

  auto prune_threshold = [&]() {
    if (!incumbent) return kInf;
    return incumbent->objective -
           1e-9 * std::max(1.0, std::abs(incumbent->objective));
  };

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= prune_threshold()) break;
    if (++nodes > options.node_limit) {
      throw Error(ErrorCode::kNodeLimitExceeded,
                  "branch-and-bound node limit " +
                      std::to_string(options.node_limit) + " exceeded");
    }
    LpSolution relax = solve_node(node.lower, node.upper);
    simplex_iterations += relax.simplex_iterations;
    if (relax.status == LpStatus::kInfeasible) {
      if (nodes == 1) {
        relax.nodes = nodes;
        return relax;
      }
      continue;
    }
    if (relax.status == LpStatus::kUnbounded) {
      relax.nodes = nodes;
      return relax;
    }
    if (relax.objective >= prune_threshold()) continue;

    int branch = -1;
    double worst = 0.0;
    for (size_t k = 0; k < binaries.size(); ++k) {
      const double f = Fractionality(relax.primal[binaries[k]]);
      if (f > kIntTol && f > worst) {
        worst = f;
        branch = static_cast<int>(k);
      }
    }

    if (branch < 0) {
      // Integral within tolerance: re-solve with the binaries pinned so the
      // reported point is exactly integral and internally consistent.
      std::vector<double> fixed(binaries.size());
      for (size_t k = 0; k < binaries.size(); ++k) {
        fixed[k] = std::round(relax.primal[binaries[k]]);
      }
      bool exact = true;
      for (size_t k = 0; k < binaries.size(); ++k) {
        if (relax.primal[binaries[k]] != fixed[k]) exact = false;
      }
      LpSolution candidate =
          exact ? std::move(relax) : solve_node(fixed, fixed);
      if (!exact) simplex_iterations += candidate.simplex_iterations;
      if (candidate.status != LpStatus::kOptimal) {
        // The rounded point is not feasible after all; fall back to
        // branching on the least integral binary.
        double best_frac = -1.0;
        for (size_t k = 0; k < binaries.size(); ++k) {
          if (node.lower[k] == node.upper[k]) continue;
          const double f = Fractionality(relax.primal[binaries[k]]);
          if (f > best_frac) {
            best_frac = f;
            branch = static_cast<int>(k);
          }
        }
        if (branch < 0) continue;
      } else {
        for (size_t k = 0; k < binaries.size(); ++k) {
          candidate.primal[binaries[k]] = fixed[k];
        }
        if (!incumbent || candidate.objective < incumbent->objective) {
          incumbent = std::move(candidate);
        }
        continue;
      }
    }

    for (double value : {0.0, 1.0}) {
      Node child;
      child.bound = relax.objective;
      child.id = next_id++;
      child.lower = node.lower;
      child.upper = node.upper;
      child.lower[branch] = value;
      child.upper[branch] = value;
      open.push(std::move(child));
    }
  }

  if (!incumbent) {
    LpSolution infeasible;
    infeasible.status = LpStatus::kInfeasible;
    infeasible.nodes = nodes;
    infeasible.simplex_iterations = simplex_iterations;
    return infeasible;
  }
  incumbent->nodes = nodes;
  incumbent->simplex_iterations = simplex_iterations;
  return *std::move(incumbent);
}

}  // namespace benders
