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

// Two-stage potential-based flow problems with topology switching.
//
// First stage: binary z_a for every switchable arc (1 = in service) and a
// served demand level b_k in [lo_k, hi_k] for every demand entry. Second stage,
// per outage scenario: node potentials, arc flows tied to potential
// differences on active arcs, supply injections, and overload slacks priced at
// `overload_penalty`. First-stage values only ever appear on constraint right
// hand sides of the second stage, which is what makes Benders cuts affine in
// (z, b).

#ifndef BENDERS_INSTANCE_H_
#define BENDERS_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "benders/lp.h"

namespace benders {

struct Arc {
  int tail = 0;  // node id
  int head = 0;  // node id
  double susceptance = 1.0;
  double capacity = 1.0;
  bool switchable = false;
  double switch_cost = 0.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct DemandNode {
  int node = 0;
  double base = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double value_coeff = 0.0;

  friend bool operator==(const DemandNode&, const DemandNode&) = default;
};

struct SupplyNode {
  int node = 0;
  double max_injection = 0.0;

  friend bool operator==(const SupplyNode&, const SupplyNode&) = default;
};

struct Network {
  std::vector<int> nodes;
  std::vector<Arc> arcs;
  std::vector<DemandNode> demands;
  std::vector<SupplyNode> supplies;

  // Position of `node_id` in `nodes`; throws kInvalidArgument if absent.
  int NodeIndex(int node_id) const;
  // Throws kInvalidArgument naming the first broken invariant: unknown node
  // references, nonpositive susceptance or capacity, crossed demand ranges,
  // or a disconnected graph.
  void Validate() const;

  friend bool operator==(const Network&, const Network&) = default;
};

struct Scenario {
  int id = 0;
  std::vector<int> outaged_arcs;  // indices into Network::arcs
  double weight = 1.0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct TwoStageInstance {
  Network network;
  std::vector<Scenario> scenarios;
  double overload_penalty = 1.0;
  std::string name;
  uint64_t seed = 0;

  void Validate() const;

  friend bool operator==(const TwoStageInstance&,
                         const TwoStageInstance&) = default;
};

// Index layout of the master variable vector (z, b, theta).
class MasterLayout {
 public:
  explicit MasterLayout(const TwoStageInstance& inst);

  int num_switches() const { return static_cast<int>(switch_arcs_.size()); }
  int num_demands() const { return num_demands_; }
  int num_scenarios() const { return num_scenarios_; }
  int num_first_stage() const { return num_switches() + num_demands_; }
  int size() const { return num_first_stage() + num_scenarios_; }

  int z(int k) const { return k; }
  int b(int k) const { return num_switches() + k; }
  int theta(int scenario_pos) const { return num_first_stage() + scenario_pos; }

  // Arc index of the k-th switch variable.
  int switch_arc(int k) const { return switch_arcs_[k]; }
  // Switch variable of arc `a`, or -1 when the arc is not switchable.
  int switch_of_arc(int a) const { return arc_switch_[a]; }

 private:
  std::vector<int> switch_arcs_;
  std::vector<int> arc_switch_;
  int num_demands_ = 0;
  int num_scenarios_ = 0;
};

struct FirstStageAssignment {
  std::vector<double> z;
  std::vector<double> b;
  std::vector<double> theta;

  // Packs into the master layout; theta may be empty (treated as zeros).
  std::vector<double> ToMasterVector(const MasterLayout& layout) const;
  static FirstStageAssignment FromMasterVector(const MasterLayout& layout,
                                               std::span<const double> x);
};

// Checks the binary, range and nonnegativity invariants; throws
// kInvalidArgument.
void ValidateAssignment(const TwoStageInstance& inst,
                        const FirstStageAssignment& fixed);

// switch_cost * (1 - z) summed over switchable arcs plus
// value_coeff * (hi - b) summed over demand entries.
double FirstStageCost(const TwoStageInstance& inst,
                      const FirstStageAssignment& fixed);

// A term `coeff * x[master_index]` of an affine right-hand side.
struct RhsTerm {
  int master_index = 0;
  double coeff = 0.0;
};

// Per-scenario second-stage LP with right-hand sides kept affine in the
// master variables: row i reads `lp.rows[i].coeffs . y (rel) lp.rows[i].rhs +
// sum(rhs_terms[i])`. `lp.rows[i].rhs` holds the constant part.
struct SubproblemTemplate {
  LinearProgram lp;
  std::vector<std::vector<RhsTerm>> rhs_terms;

  // Variable positions inside `lp`.
  int num_nodes = 0;
  int num_arcs = 0;
  int num_supplies = 0;
  int potential(int v) const { return v; }
  int flow(int a) const { return num_nodes + a; }
  int slack(int a) const { return num_nodes + num_arcs + a; }
  int injection(int s) const { return num_nodes + 2 * num_arcs + s; }

  // The template with right-hand sides evaluated at master vector `x`.
  LinearProgram Instantiate(std::span<const double> x) const;
  // Right-hand side of row i at `x`.
  double Rhs(int i, std::span<const double> x) const;
};

SubproblemTemplate BuildSubproblemTemplate(const TwoStageInstance& inst,
                                           const Scenario& scenario);

// Second-stage LP of `scenario` with the first stage fixed; theta is ignored.
LinearProgram BuildSubproblem(const TwoStageInstance& inst,
                              const Scenario& scenario,
                              const FirstStageAssignment& fixed);

// Deterministic equivalent: first-stage variables (z, b) followed by one
// second-stage block per scenario.
struct ExtensiveForm {
  LinearProgram lp;
  int num_first_stage = 0;
  int block_size = 0;
};

ExtensiveForm BuildExtensiveForm(const TwoStageInstance& inst);

struct GenerateParams {
  int n_nodes = 6;
  int n_arcs = 8;
  int n_switchable = 2;
  int n_scenarios = 4;
  int outage_size = 1;
  uint64_t seed = 0;
};

// Random connected network (random spanning tree plus extra arcs) with
// scenarios sampled without replacement among outages of non-switchable
// arcs. Fully determined by `params`. Throws kInvalidParams.
TwoStageInstance GenerateInstance(const GenerateParams& params);

inline constexpr int kInstanceSchemaVersion = 1;

// JSON instance files. Reading throws kParseError (with line and field) or
// kSchemaVersionMismatch; writing throws kIoError.
TwoStageInstance ReadInstance(const std::filesystem::path& path);
TwoStageInstance ParseInstance(const std::string& text);
void WriteInstance(const TwoStageInstance& inst,
                   const std::filesystem::path& path);
std::string SerializeInstance(const TwoStageInstance& inst);

}  // namespace benders

#endif  // BENDERS_INSTANCE_H_
