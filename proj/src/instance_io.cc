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

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "benders/error.h"
#include "benders/instance.h"
#include "json.hpp"

namespace benders {
namespace {

using nlohmann::json;

// Line of byte offset `pos` (1-based) in `text`.
size_t LineOf(const std::string& text, size_t pos) {
  size_t line = 1;
  for (size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

[[noreturn]] void ParseFail(const std::string& message) {
  throw Error(ErrorCode::kParseError, message);
}

const json& Field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) ParseFail(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    ParseFail("missing field \"" + std::string(key) + "\" in " + path);
  }
  return *it;
}

double Number(const json& obj, const char* key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_number()) {
    ParseFail("field \"" + std::string(key) + "\" in " + path +
              " must be a number");
  }
  return v.get<double>();
}

long long Integer(const json& obj, const char* key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_number_integer()) {
    ParseFail("field \"" + std::string(key) + "\" in " + path +
              " must be an integer");
  }
  return v.get<long long>();
}

const json& Array(const json& obj, const char* key, const std::string& path) {
  const json& v = Field(obj, key, path);
  if (!v.is_array()) {
    ParseFail("field \"" + std::string(key) + "\" in " + path +
              " must be an array");
  }
  return v;
}

std::string Item(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace

TwoStageInstance ParseInstance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    ParseFail("line " + std::to_string(LineOf(text, e.byte)) + ": " + e.what());
  }
  const std::string root = "document";
  const long long version = Integer(doc, "version", root);
  if (version != kInstanceSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "instance schema version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kInstanceSchemaVersion) + ")");
  }

  TwoStageInstance inst;
  const json& name = Field(doc, "name", root);
  if (!name.is_string()) ParseFail("field \"name\" must be a string");
  inst.name = name.get<std::string>();
  const json& seed = Field(doc, "seed", root);
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    ParseFail("field \"seed\" must be a nonnegative integer");
  }
  inst.seed = seed.get<uint64_t>();
  inst.overload_penalty = Number(doc, "overload_penalty", root);

  const json& network = Field(doc, "network", root);
  const std::string np = "network";
  const json& nodes = Array(network, "nodes", np);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_number_integer()) {
      ParseFail(Item("network.nodes", i) + " must be an integer");
    }
    inst.network.nodes.push_back(nodes[i].get<int>());
  }
  const json& arcs = Array(network, "arcs", np);
  for (size_t i = 0; i < arcs.size(); ++i) {
    const std::string p = Item("network.arcs", i);
    Arc arc;
    arc.tail = static_cast<int>(Integer(arcs[i], "tail", p));
    arc.head = static_cast<int>(Integer(arcs[i], "head", p));
    arc.susceptance = Number(arcs[i], "susceptance", p);
    arc.capacity = Number(arcs[i], "capacity", p);
    const json& sw = Field(arcs[i], "switchable", p);
    if (!sw.is_boolean()) ParseFail(p + ".switchable must be a boolean");
    arc.switchable = sw.get<bool>();
    arc.switch_cost = Number(arcs[i], "switch_cost", p);
    inst.network.arcs.push_back(arc);
  }
  const json& demands = Array(network, "demands", np);
  for (size_t i = 0; i < demands.size(); ++i) {
    const std::string p = Item("network.demands", i);
    DemandNode d;
    d.node = static_cast<int>(Integer(demands[i], "node", p));
    d.base = Number(demands[i], "base", p);
    d.lo = Number(demands[i], "lo", p);
    d.hi = Number(demands[i], "hi", p);
    d.value_coeff = Number(demands[i], "value_coeff", p);
    inst.network.demands.push_back(d);
  }
  const json& supplies = Array(network, "supplies", np);
  for (size_t i = 0; i < supplies.size(); ++i) {
    const std::string p = Item("network.supplies", i);
    SupplyNode s;
    s.node = static_cast<int>(Integer(supplies[i], "node", p));
    s.max_injection = Number(supplies[i], "max_injection", p);
    inst.network.supplies.push_back(s);
  }

  const json& scenarios = Array(doc, "scenarios", root);
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const std::string p = Item("scenarios", i);
    Scenario s;
    s.id = static_cast<int>(Integer(scenarios[i], "id", p));
    const json& out = Array(scenarios[i], "outaged_arcs", p);
    for (size_t k = 0; k < out.size(); ++k) {
      if (!out[k].is_number_integer()) {
        ParseFail(Item(p + ".outaged_arcs", k) + " must be an integer");
      }
      s.outaged_arcs.push_back(out[k].get<int>());
    }
    s.weight = Number(scenarios[i], "weight", p);
    inst.scenarios.push_back(std::move(s));
  }

  try {
    inst.Validate();
  } catch (const Error& e) {
    ParseFail(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

std::string SerializeInstance(const TwoStageInstance& inst) {
  json doc;
  doc["version"] = kInstanceSchemaVersion;
  doc["name"] = inst.name;
  doc["seed"] = inst.seed;
  doc["overload_penalty"] = inst.overload_penalty;
  json network;
  network["nodes"] = inst.network.nodes;
  network["arcs"] = json::array();
  for (const Arc& a : inst.network.arcs) {
    network["arcs"].push_back({{"tail", a.tail},
                               {"head", a.head},
                               {"susceptance", a.susceptance},
                               {"capacity", a.capacity},
                               {"switchable", a.switchable},
                               {"switch_cost", a.switch_cost}});
  }
  network["demands"] = json::array();
  for (const DemandNode& d : inst.network.demands) {
    network["demands"].push_back({{"node", d.node},
                                  {"base", d.base},
                                  {"lo", d.lo},
                                  {"hi", d.hi},
                                  {"value_coeff", d.value_coeff}});
  }
  network["supplies"] = json::array();
  for (const SupplyNode& s : inst.network.supplies) {
    network["supplies"].push_back(
        {{"node", s.node}, {"max_injection", s.max_injection}});
  }
  doc["network"] = std::move(network);
  doc["scenarios"] = json::array();
  for (const Scenario& s : inst.scenarios) {
    doc["scenarios"].push_back(
        {{"id", s.id}, {"outaged_arcs", s.outaged_arcs}, {"weight", s.weight}});
  }
  return doc.dump(2) + "\n";
}

TwoStageInstance ReadInstance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseInstance(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteInstance(const TwoStageInstance& inst,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  out << SerializeInstance(inst);
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

}  // namespace benders
