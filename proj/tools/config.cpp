// Copyright 2026 The xtalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include <yaml-cpp/yaml.h>

namespace xtalk::cli {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <typename T>
T as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "' has the wrong type", line_of(node));
  }
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) throw ConfigError(where + " must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
  }
}

double positive(const YAML::Node& node, const std::string& key) {
  const double v = as<double>(node, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be positive", line_of(node));
  return v;
}

SchemeConfig parse_scheme(const YAML::Node& node) {
  check_keys(node, {"type", "segments", "cycles", "gamma_mhz", "functional", "corner_average", "width_ns"},
             "scheme");
  SchemeConfig s;
  if (!node["type"]) throw ConfigError("scheme needs a 'type' (cd, fm, dd)", line_of(node));
  s.type = as<std::string>(node["type"], "type");
  if (s.type != "cd" && s.type != "fm" && s.type != "dd") {
    throw ConfigError("unknown scheme type '" + s.type + "' (expected cd, fm, dd)", line_of(node["type"]));
  }
  if (s.type == "dd") s.segments = 4;
  if (node["segments"]) s.segments = as<int>(node["segments"], "segments");
  if (node["cycles"]) s.cycles = as<int>(node["cycles"], "cycles");
  if (s.type == "fm" && s.cycles < 1) throw ConfigError("'cycles' must be >= 1", line_of(node["cycles"]));
  if (const auto g = node["gamma_mhz"]) {
    if (g.IsScalar() && g.Scalar() == "optimize") {
      s.gamma_choice = GammaChoice::Optimize;
    } else {
      s.gamma_choice = GammaChoice::Fixed;
      s.gamma_mhz = as<double>(g, "gamma_mhz");
      if (!(s.gamma_mhz >= 0.0)) throw ConfigError("'gamma_mhz' must be >= 0", line_of(g));
    }
  }
  if (const auto f = node["functional"]) {
    s.functional = as<std::string>(f, "functional");
    try {
      parse_functional(*s.functional);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(f));
    }
  }
  if (node["corner_average"]) s.corner_average = as<bool>(node["corner_average"], "corner_average");
  if (const auto w = node["width_ns"]) {
    if (!(w.IsScalar() && w.Scalar() == "default")) s.width_ns = positive(w, "width_ns");
  }
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  RunConfig c;
  if (root.IsNull()) return c;
  check_keys(root,
             {"preset", "topology", "delta_mhz", "j_mhz", "j_reference_mhz", "gate", "target", "gate_time_ns",
              "repetitions", "step_ns", "threads", "output", "schemes", "gamma_grid", "quadrature_nodes",
              "functional", "cycles"},
             "config");
  if (root["preset"]) c.preset = as<std::string>(root["preset"], "preset");
  if (const auto n = root["topology"]) {
    c.topology = as<std::string>(n, "topology");
    if (c.topology != "pair" && c.topology != "star") {
      throw ConfigError("topology must be 'pair' or 'star'", line_of(n));
    }
  }
  if (const auto n = root["delta_mhz"]) {
    c.delta_mhz = as<double>(n, "delta_mhz");
    if (c.delta_mhz == 0.0 || !std::isfinite(c.delta_mhz)) {
      throw ConfigError("'delta_mhz' must be nonzero", line_of(n));
    }
  }
  if (const auto n = root["j_mhz"]) {
    c.j_given = true;
    c.j_mhz.clear();
    if (n.IsSequence()) {
      for (const auto& v : n) c.j_mhz.push_back(as<double>(v, "j_mhz"));
    } else {
      c.j_mhz.push_back(as<double>(n, "j_mhz"));
    }
    if (c.j_mhz.empty()) throw ConfigError("'j_mhz' is empty", line_of(n));
    for (double j : c.j_mhz) {
      if (!(j >= 0.0) || !std::isfinite(j)) throw ConfigError("'j_mhz' values must be >= 0", line_of(n));
    }
  }
  if (root["j_reference_mhz"]) c.j_reference_mhz = positive(root["j_reference_mhz"], "j_reference_mhz");
  if (const auto n = root["gate"]) {
    c.gate = as<std::string>(n, "gate");
    if (c.gate != "idle" && c.gate != "x" && c.gate != "xx") {
      throw ConfigError("gate must be idle, x or xx", line_of(n));
    }
  }
  if (const auto n = root["target"]) {
    c.target = as<int>(n, "target");
    if (c.target < 1) throw ConfigError("'target' must be >= 1", line_of(n));
  }
  if (const auto n = root["gate_time_ns"]) {
    if (!(n.IsScalar() && n.Scalar() == "matched")) c.gate_time_ns = positive(n, "gate_time_ns");
  }
  if (const auto n = root["repetitions"]) {
    c.repetitions = as<int>(n, "repetitions");
    if (c.repetitions < 1) throw ConfigError("'repetitions' must be >= 1", line_of(n));
  }
  if (root["step_ns"]) c.step_ns = positive(root["step_ns"], "step_ns");
  if (const auto n = root["threads"]) {
    c.threads = as<int>(n, "threads");
    if (c.threads < 1) throw ConfigError("'threads' must be >= 1", line_of(n));
  }
  if (root["output"]) c.output = as<std::string>(root["output"], "output");
  if (const auto n = root["schemes"]) {
    if (!n.IsSequence() || n.size() == 0) throw ConfigError("'schemes' must be a non-empty list", line_of(n));
    c.schemes.clear();
    for (const auto& s : n) c.schemes.push_back(parse_scheme(s));
  }
  if (const auto n = root["gamma_grid"]) {
    check_keys(n, {"step_mhz", "max_mhz"}, "gamma_grid");
    if (n["step_mhz"]) c.gamma_step_mhz = positive(n["step_mhz"], "step_mhz");
    if (n["max_mhz"]) c.gamma_max_mhz = positive(n["max_mhz"], "max_mhz");
    if (c.gamma_max_mhz < 2.0 * c.gamma_step_mhz) {
      throw ConfigError("gamma grid needs at least three points", line_of(n));
    }
  }
  if (const auto n = root["quadrature_nodes"]) {
    c.quadrature_nodes = as<int>(n, "quadrature_nodes");
    if (c.quadrature_nodes < 8) throw ConfigError("'quadrature_nodes' must be >= 8", line_of(n));
  }
  if (const auto n = root["functional"]) {
    c.functional = as<std::string>(n, "functional");
    try {
      parse_functional(c.functional);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(n));
    }
  }
  if (const auto n = root["cycles"]) {
    c.cycles.clear();
    if (n.IsSequence()) {
      for (const auto& v : n) c.cycles.push_back(as<int>(v, "cycles"));
    } else {
      c.cycles.push_back(as<int>(n, "cycles"));
    }
    for (int v : c.cycles) {
      if (v < 1) throw ConfigError("'cycles' values must be >= 1", line_of(n));
    }
    if (c.cycles.empty()) throw ConfigError("'cycles' is empty", line_of(n));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  return parse_config(std::string(std::istreambuf_iterator<char>(in), {}));
}

void validate(const RunConfig& c) {
  if (c.j_mhz.empty()) throw ConfigError("empty J grid", 0);
  if (c.preset) {
    for (double j : c.j_mhz) {
      if (!(j > 0.0)) throw ConfigError("J sweep values must be positive", 0);
    }
    return;
  }
  const auto topology = topology_of(c);
  if (c.gate == "x" && c.target > topology.num_qubits()) {
    throw ConfigError("X target " + std::to_string(c.target) + " is not a qubit of the " + c.topology, 0);
  }
  if (c.gate != "idle" && c.repetitions % 2 == 0) {
    throw ConfigError("X-gate sequences need an odd repetition count", 0);
  }
  if (c.repetitions > 1 && c.j_mhz.size() != 1) {
    throw ConfigError("sequences run at a single J; give one 'j_mhz' value", 0);
  }
}

Topology topology_of(const RunConfig& c) {
  return c.topology == "star" ? Topology::five_qubit_star() : Topology::pair();
}

SystemParams params_of(const RunConfig& c, double j_mhz) { return SystemParams::from_mhz(c.delta_mhz, j_mhz); }

double gate_time_of(const RunConfig& c) {
  return c.gate_time_ns ? *c.gate_time_ns : matched_gate_time(params_of(c, 0.0));
}

GateSpec gate_of(const RunConfig& c) {
  const double T = gate_time_of(c);
  if (c.gate == "x") return GateSpec::x(c.target, T);
  if (c.gate == "xx") return GateSpec::parallel_xx(T);
  return GateSpec::idle(T);
}

GammaGrid gamma_grid_of(const RunConfig& c) {
  return GammaGrid{mhz_to_rad_per_ns(c.gamma_step_mhz), mhz_to_rad_per_ns(c.gamma_max_mhz)};
}

QuadratureConfig quadrature_of(const RunConfig& c) {
  QuadratureConfig q;
  q.nodes_1d = c.quadrature_nodes;
  q.nodes_2d = c.quadrature_nodes;
  return q;
}

PresetContext preset_context_of(const RunConfig& c) {
  PresetContext ctx;
  ctx.detuning_mhz = c.delta_mhz;
  ctx.coupling_mhz = c.j_reference_mhz.value_or(5.0);
  if (c.j_given) ctx.j_grid_mhz = c.j_mhz;
  ctx.sim = SimulationConfig{c.step_ns, c.threads};
  ctx.gamma = gamma_grid_of(c);
  ctx.quadrature = quadrature_of(c);
  return ctx;
}

}  // namespace xtalk::cli
