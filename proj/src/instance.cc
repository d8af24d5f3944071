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
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "benders/error.h"
#include "benders/random.h"

namespace benders {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

// Upper bound on any arc flow: potential-driven flows are acyclic, so no arc
// carries more than the total demand served.
double FlowBound(const Network& net) {
  double total = 1.0;
  for (const DemandNode& d : net.demands) total += std::max(0.0, d.hi);
  return total;
}

// Bound on beta_a * |pi_tail - pi_head| across a switched-off arc: align each
// component at one node, then every difference is a sum of flow/beta over
// disjoint paths.
double PotentialBound(const Network& net, const Arc& arc, double flow_bound) {
  double resistance = 0.0;
  for (const Arc& a : net.arcs) resistance += 1.0 / a.susceptance;
  return arc.susceptance * flow_bound * resistance;
}

}  // namespace

int Network::NodeIndex(int node_id) const {
  const auto it = std::find(nodes.begin(), nodes.end(), node_id);
  if (it == nodes.end()) Invalid("unknown node id " + std::to_string(node_id));
  return static_cast<int>(it - nodes.begin());
}

void Network::Validate() const {
  if (nodes.empty()) Invalid("network has no nodes");
  if (std::set<int>(nodes.begin(), nodes.end()).size() != nodes.size()) {
    Invalid("duplicate node ids");
  }
  const int n = static_cast<int>(nodes.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];
    const std::string where = "arc " + std::to_string(a);
    const int t = NodeIndex(arc.tail);
    const int h = NodeIndex(arc.head);
    if (t == h) Invalid(where + " is a self-loop");
    if (!(arc.susceptance > 0.0)) Invalid(where + " susceptance must be > 0");
    if (!(arc.capacity > 0.0)) Invalid(where + " capacity must be > 0");
    if (!(arc.switch_cost >= 0.0)) Invalid(where + " switch_cost must be >= 0");
    parent[find(t)] = find(h);
  }
  for (int v = 0; v < n; ++v) {
    if (find(v) != find(0)) Invalid("network is not connected");
  }
  for (size_t k = 0; k < demands.size(); ++k) {
    const DemandNode& d = demands[k];
    NodeIndex(d.node);
    if (!(d.lo <= d.hi)) {
      Invalid("demand " + std::to_string(k) + " has lo > hi");
    }
    if (!std::isfinite(d.base) || !std::isfinite(d.value_coeff)) {
      Invalid("demand " + std::to_string(k) + " has non-finite data");
    }
  }
  for (size_t k = 0; k < supplies.size(); ++k) {
    NodeIndex(supplies[k].node);
    if (!(supplies[k].max_injection >= 0.0)) {
      Invalid("supply " + std::to_string(k) + " max_injection must be >= 0");
    }
  }
}

void TwoStageInstance::Validate() const {
  network.Validate();
  if (scenarios.empty()) Invalid("instance has no scenarios");
  if (!(overload_penalty > 0.0)) Invalid("overload_penalty must be > 0");
  std::set<int> ids;
  for (const Scenario& s : scenarios) {
    if (!ids.insert(s.id).second) {
      Invalid("duplicate scenario id " + std::to_string(s.id));
    }
    if (!(s.weight > 0.0)) {
      Invalid("scenario " + std::to_string(s.id) + " weight must be > 0");
    }
    for (int a : s.outaged_arcs) {
      if (a < 0 || a >= static_cast<int>(network.arcs.size())) {
        Invalid("scenario " + std::to_string(s.id) + " outages unknown arc " +
                std::to_string(a));
      }
    }
  }
}

MasterLayout::MasterLayout(const TwoStageInstance& inst)
    : arc_switch_(inst.network.arcs.size(), -1),
      num_demands_(static_cast<int>(inst.network.demands.size())),
      num_scenarios_(static_cast<int>(inst.scenarios.size())) {
  for (size_t a = 0; a < inst.network.arcs.size(); ++a) {
    if (inst.network.arcs[a].switchable) {
      arc_switch_[a] = static_cast<int>(switch_arcs_.size());
      switch_arcs_.push_back(static_cast<int>(a));
    }
  }
}

std::vector<double> FirstStageAssignment::ToMasterVector(
    const MasterLayout& layout) const {
  std::vector<double> x(layout.size(), 0.0);
  for (int k = 0; k < layout.num_switches(); ++k) x[layout.z(k)] = z.at(k);
  for (int k = 0; k < layout.num_demands(); ++k) x[layout.b(k)] = b.at(k);
  for (size_t c = 0; c < theta.size(); ++c) {
    x[layout.theta(static_cast<int>(c))] = theta[c];
  }
  return x;
}

FirstStageAssignment FirstStageAssignment::FromMasterVector(
    const MasterLayout& layout, std::span<const double> x) {
  FirstStageAssignment out;
  for (int k = 0; k < layout.num_switches(); ++k)
    out.z.push_back(x[layout.z(k)]);
  for (int k = 0; k < layout.num_demands(); ++k)
    out.b.push_back(x[layout.b(k)]);
  if (static_cast<int>(x.size()) >= layout.size()) {
    for (int c = 0; c < layout.num_scenarios(); ++c) {
      out.theta.push_back(x[layout.theta(c)]);
    }
  }
  return out;
}

void ValidateAssignment(const TwoStageInstance& inst,
                        const FirstStageAssignment& fixed) {
  const MasterLayout layout(inst);
  if (static_cast<int>(fixed.z.size()) != layout.num_switches() ||
      static_cast<int>(fixed.b.size()) != layout.num_demands()) {
    Invalid("first-stage assignment has the wrong dimensions");
  }
  for (double z : fixed.z) {
    if (z != 0.0 && z != 1.0) Invalid("switch values must be 0 or 1");
  }
  for (int k = 0; k < layout.num_demands(); ++k) {
    const DemandNode& d = inst.network.demands[k];
    if (fixed.b[k] < d.lo - kFeasTol || fixed.b[k] > d.hi + kFeasTol) {
      Invalid("demand " + std::to_string(k) + " outside its range");
    }
  }
  for (double t : fixed.theta) {
    if (t < -kFeasTol) Invalid("theta must be nonnegative");
  }
}

double FirstStageCost(const TwoStageInstance& inst,
                      const FirstStageAssignment& fixed) {
  const MasterLayout layout(inst);
  double cost = 0.0;
  for (int k = 0; k < layout.num_switches(); ++k) {
    cost += inst.network.arcs[layout.switch_arc(k)].switch_cost *
            (1.0 - fixed.z.at(k));
  }
  for (int k = 0; k < layout.num_demands(); ++k) {
    const DemandNode& d = inst.network.demands[k];
    cost += d.value_coeff * (d.hi - fixed.b.at(k));
  }
  return cost;
}

LinearProgram SubproblemTemplate::Instantiate(std::span<const double> x) const {
  LinearProgram out = lp;
  for (int i = 0; i < out.num_rows(); ++i) out.rows[i].rhs = Rhs(i, x);
  return out;
}

double SubproblemTemplate::Rhs(int i, std::span<const double> x) const {
  double r = lp.rows[i].rhs;
  for (const RhsTerm& t : rhs_terms[i]) r += t.coeff * x[t.master_index];
  return r;
}

SubproblemTemplate BuildSubproblemTemplate(const TwoStageInstance& inst,
                                           const Scenario& scenario) {
  const Network& net = inst.network;
  const MasterLayout layout(inst);
  SubproblemTemplate tpl;
  tpl.num_nodes = static_cast<int>(net.nodes.size());
  tpl.num_arcs = static_cast<int>(net.arcs.size());
  tpl.num_supplies = static_cast<int>(net.supplies.size());
  const int n = tpl.num_nodes + 2 * tpl.num_arcs + tpl.num_supplies;
  LinearProgram& lp = tpl.lp;
  lp = LinearProgram::WithVariables(n);

  // Potentials and flows are free; the lowest-index node is the reference.
  for (int v = 0; v < tpl.num_nodes; ++v) {
    lp.lower[tpl.potential(v)] = v == 0 ? 0.0 : -kInf;
    lp.upper[tpl.potential(v)] = v == 0 ? 0.0 : kInf;
  }
  std::vector<bool> outaged(tpl.num_arcs, false);
  for (int a : scenario.outaged_arcs) outaged[a] = true;
  for (int a = 0; a < tpl.num_arcs; ++a) {
    lp.lower[tpl.flow(a)] = outaged[a] ? 0.0 : -kInf;
    lp.upper[tpl.flow(a)] = outaged[a] ? 0.0 : kInf;
    lp.objective[tpl.slack(a)] = inst.overload_penalty;
  }
  for (int s = 0; s < tpl.num_supplies; ++s) {
    lp.upper[tpl.injection(s)] = net.supplies[s].max_injection;
  }

  auto add_row = [&](std::vector<double> coeffs, Relation rel, double rhs,
                     std::vector<RhsTerm> terms) {
    lp.AddRow(std::move(coeffs), rel, rhs);
    tpl.rhs_terms.push_back(std::move(terms));
  };

  // Flow balance: inflow - outflow + injection = served demand.
  for (int v = 0; v < tpl.num_nodes; ++v) {
    std::vector<double> coeffs(n, 0.0);
    for (int a = 0; a < tpl.num_arcs; ++a) {
      if (net.NodeIndex(net.arcs[a].head) == v) coeffs[tpl.flow(a)] += 1.0;
      if (net.NodeIndex(net.arcs[a].tail) == v) coeffs[tpl.flow(a)] -= 1.0;
    }
    for (int s = 0; s < tpl.num_supplies; ++s) {
      if (net.NodeIndex(net.supplies[s].node) == v) {
        coeffs[tpl.injection(s)] += 1.0;
      }
    }
    std::vector<RhsTerm> terms;
    for (int k = 0; k < layout.num_demands(); ++k) {
      if (net.NodeIndex(net.demands[k].node) == v) {
        terms.push_back({layout.b(k), 1.0});
      }
    }
    add_row(std::move(coeffs), Relation::kEqual, 0.0, std::move(terms));
  }

  const double flow_bound = FlowBound(net);
  for (int a = 0; a < tpl.num_arcs; ++a) {
    if (outaged[a]) continue;
    const Arc& arc = net.arcs[a];
    const int t = net.NodeIndex(arc.tail);
    const int h = net.NodeIndex(arc.head);
    // coupling = f_a - beta (pi_t - pi_h)
    std::vector<double> coupling(n, 0.0);
    coupling[tpl.flow(a)] = 1.0;
    coupling[tpl.potential(t)] -= arc.susceptance;
    coupling[tpl.potential(h)] += arc.susceptance;
    const int sw = layout.switch_of_arc(a);
    if (sw < 0) {
      add_row(coupling, Relation::kEqual, 0.0, {});
    } else {
      const double big_m = PotentialBound(net, arc, flow_bound);
      std::vector<double> negated(coupling);
      for (double& c : negated) c = -c;
      add_row(coupling, Relation::kLessEqual, big_m, {{layout.z(sw), -big_m}});
      add_row(negated, Relation::kLessEqual, big_m, {{layout.z(sw), -big_m}});
      std::vector<double> pos(n, 0.0), neg(n, 0.0);
      pos[tpl.flow(a)] = 1.0;
      neg[tpl.flow(a)] = -1.0;
      add_row(pos, Relation::kLessEqual, 0.0, {{layout.z(sw), flow_bound}});
      add_row(neg, Relation::kLessEqual, 0.0, {{layout.z(sw), flow_bound}});
    }
    // |f_a| <= cap_a + s_a as two rows.
    std::vector<double> over(n, 0.0), under(n, 0.0);
    over[tpl.flow(a)] = 1.0;
    over[tpl.slack(a)] = -1.0;
    under[tpl.flow(a)] = -1.0;
    under[tpl.slack(a)] = -1.0;
    add_row(std::move(over), Relation::kLessEqual, arc.capacity, {});
    add_row(std::move(under), Relation::kLessEqual, arc.capacity, {});
  }
  return tpl;
}

LinearProgram BuildSubproblem(const TwoStageInstance& inst,
                              const Scenario& scenario,
                              const FirstStageAssignment& fixed) {
  ValidateAssignment(inst, fixed);
  const MasterLayout layout(inst);
  FirstStageAssignment first = fixed;
  first.theta.clear();
  return BuildSubproblemTemplate(inst, scenario)
      .Instantiate(first.ToMasterVector(layout));
}

ExtensiveForm BuildExtensiveForm(const TwoStageInstance& inst) {
  inst.Validate();
  const MasterLayout layout(inst);
  const Network& net = inst.network;
  const int nf = layout.num_first_stage();

  std::vector<SubproblemTemplate> blocks;
  for (const Scenario& s : inst.scenarios) {
    blocks.push_back(BuildSubproblemTemplate(inst, s));
  }
  const int block = blocks.front().lp.num_vars();
  const int n = nf + block * static_cast<int>(blocks.size());

  ExtensiveForm ef;
  ef.num_first_stage = nf;
  ef.block_size = block;
  LinearProgram& lp = ef.lp;
  lp = LinearProgram::WithVariables(n);
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
  for (size_t c = 0; c < blocks.size(); ++c) {
    const SubproblemTemplate& tpl = blocks[c];
    const int base = nf + block * static_cast<int>(c);
    const double weight = inst.scenarios[c].weight;
    for (int j = 0; j < block; ++j) {
      lp.objective[base + j] = weight * tpl.lp.objective[j];
      lp.lower[base + j] = tpl.lp.lower[j];
      lp.upper[base + j] = tpl.lp.upper[j];
    }
    for (int i = 0; i < tpl.lp.num_rows(); ++i) {
      std::vector<double> coeffs(n, 0.0);
      const Row& row = tpl.lp.rows[i];
      for (int j = 0; j < block; ++j) coeffs[base + j] = row.coeffs[j];
      for (const RhsTerm& t : tpl.rhs_terms[i]) {
        coeffs[t.master_index] -= t.coeff;
      }
      lp.AddRow(std::move(coeffs), row.relation, row.rhs);
    }
  }
  return ef;
}

TwoStageInstance GenerateInstance(const GenerateParams& p) {
  auto reject = [](const std::string& message) {
    throw Error(ErrorCode::kInvalidParams, message);
  };
  if (p.n_nodes < 2) reject("n_nodes must be at least 2");
  if (p.n_arcs < p.n_nodes - 1) reject("n_arcs must be at least n_nodes - 1");
  if (p.n_arcs > p.n_nodes * (p.n_nodes - 1) / 2) {
    reject("n_arcs exceeds the number of node pairs");
  }
  if (p.n_switchable < 0 || p.n_switchable > p.n_arcs) {
    reject("n_switchable must lie in [0, n_arcs]");
  }
  if (p.outage_size != 1 && p.outage_size != 2) {
    reject("outage_size must be 1 or 2");
  }
  const int fixed_arcs = p.n_arcs - p.n_switchable;
  const long long max_scenarios =
      p.outage_size == 1
          ? fixed_arcs
          : static_cast<long long>(fixed_arcs) * (fixed_arcs - 1) / 2;
  if (p.n_scenarios < 1 || p.n_scenarios > max_scenarios) {
    reject("n_scenarios must lie in [1, " + std::to_string(max_scenarios) +
           "] (non-switchable arcs choose outage_size)");
  }

  Rng rng(MixSeed(p.seed, 0x1157));
  TwoStageInstance inst;
  inst.seed = p.seed;
  inst.name = "gen_" + std::to_string(p.seed);
  Network& net = inst.network;
  for (int v = 0; v < p.n_nodes; ++v) net.nodes.push_back(v);

  // Random spanning tree: each node in a shuffled order attaches to an
  // earlier one; then extra arcs between unconnected pairs.
  std::vector<int> order(p.n_nodes);
  std::iota(order.begin(), order.end(), 0);
  for (int i = p.n_nodes - 1; i > 0; --i) {
    std::swap(order[i], order[UniformIndex(rng, i + 1)]);
  }
  std::set<std::pair<int, int>> used;
  auto add_arc = [&](int u, int v) {
    if (UniformIndex(rng, 2) == 1) std::swap(u, v);
    used.insert({std::min(u, v), std::max(u, v)});
    Arc arc;
    arc.tail = u;
    arc.head = v;
    net.arcs.push_back(arc);
  };
  for (int i = 1; i < p.n_nodes; ++i) {
    add_arc(order[i], order[UniformIndex(rng, i)]);
  }
  std::vector<std::pair<int, int>> free_pairs;
  for (int u = 0; u < p.n_nodes; ++u) {
    for (int v = u + 1; v < p.n_nodes; ++v) {
      if (!used.count({u, v})) free_pairs.push_back({u, v});
    }
  }
  for (int k = static_cast<int>(net.arcs.size()); k < p.n_arcs; ++k) {
    const size_t pick = UniformIndex(rng, free_pairs.size());
    const auto [u, v] = free_pairs[pick];
    free_pairs.erase(free_pairs.begin() + static_cast<long>(pick));
    add_arc(u, v);
  }

  // Supplies at roughly a quarter of the nodes, demands at the rest.
  std::vector<int> roles(p.n_nodes);
  std::iota(roles.begin(), roles.end(), 0);
  for (int i = p.n_nodes - 1; i > 0; --i) {
    std::swap(roles[i], roles[UniformIndex(rng, i + 1)]);
  }
  const int n_supply = std::max(1, p.n_nodes / 4);
  double total_hi = 0.0;
  for (int i = n_supply; i < p.n_nodes; ++i) {
    DemandNode d;
    d.node = roles[i];
    d.base = UniformReal(rng, 1.0, 5.0);
    d.lo = 0.0;
    d.hi = d.base * UniformReal(rng, 1.0, 1.5);
    d.value_coeff = UniformReal(rng, 2.0, 6.0);
    total_hi += d.hi;
    net.demands.push_back(d);
  }
  std::sort(
      net.demands.begin(), net.demands.end(),
      [](const DemandNode& a, const DemandNode& b) { return a.node < b.node; });
  for (int i = 0; i < n_supply; ++i) {
    SupplyNode s;
    s.node = roles[i];
    s.max_injection = 1.2 * total_hi / n_supply * UniformReal(rng, 0.8, 1.2);
    net.supplies.push_back(s);
  }
  std::sort(
      net.supplies.begin(), net.supplies.end(),
      [](const SupplyNode& a, const SupplyNode& b) { return a.node < b.node; });

  for (Arc& arc : net.arcs) {
    arc.susceptance = UniformReal(rng, 1.0, 10.0);
    arc.capacity = total_hi * UniformReal(rng, 0.15, 0.6);
  }
  std::vector<int> arc_ids(p.n_arcs);
  std::iota(arc_ids.begin(), arc_ids.end(), 0);
  for (int i = p.n_arcs - 1; i > 0; --i) {
    std::swap(arc_ids[i], arc_ids[UniformIndex(rng, i + 1)]);
  }
  for (int k = 0; k < p.n_switchable; ++k) {
    Arc& arc = net.arcs[arc_ids[k]];
    arc.switchable = true;
    arc.switch_cost = UniformReal(rng, 0.5, 2.0);
  }
  inst.overload_penalty = UniformReal(rng, 5.0, 15.0);

  // Outage sets drawn without replacement from non-switchable arcs.
  std::vector<int> fixed;
  for (int a = 0; a < p.n_arcs; ++a) {
    if (!net.arcs[a].switchable) fixed.push_back(a);
  }
  std::vector<std::vector<int>> candidates;
  for (size_t i = 0; i < fixed.size(); ++i) {
    if (p.outage_size == 1) {
      candidates.push_back({fixed[i]});
      continue;
    }
    for (size_t j = i + 1; j < fixed.size(); ++j) {
      candidates.push_back({fixed[i], fixed[j]});
    }
  }
  for (size_t i = candidates.size() - 1; i > 0; --i) {
    std::swap(candidates[i], candidates[UniformIndex(rng, i + 1)]);
  }
  for (int c = 0; c < p.n_scenarios; ++c) {
    Scenario s;
    s.id = c;
    s.outaged_arcs = candidates[c];
    s.weight = 1.0 / p.n_scenarios;
    inst.scenarios.push_back(std::move(s));
  }
  inst.Validate();
  return inst;
}

}  // namespace benders
