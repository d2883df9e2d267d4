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

#include "xtalk/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

#include "xtalk/parallel.hpp"

namespace xtalk {

namespace {

const std::vector<int> kCycles = {4, 6, 8};
constexpr int kDdSegments = 4;

// FM protocols with gamma from `functional` at the reference J. Idle gates
// use corner averaging.
std::vector<Protocol> fm_protocols(const PresetContext& ctx, ErrorFunctional functional, bool corner,
                                   double T, Table& table) {
  std::vector<Protocol> out{Protocol::plain(Cd{})};
  for (int n : kCycles) {
    const auto scan = scan_gamma(functional, ctx.params(), n, T, ctx.gamma, ctx.quadrature, ctx.sim.threads);
    table.note("gamma_opt_mhz[N=" + std::to_string(n) + "]", rad_per_ns_to_mhz(scan.gamma_opt()));
    out.push_back(corner ? Protocol::fm_corner_averaged(n, scan) : Protocol::plain(Fm{n, scan.gamma_opt()}));
  }
  table.note("gamma_functional", functional_name(functional));
  table.note("corner_averaged", corner ? "true" : "false");
  return out;
}

std::vector<Protocol> dd_protocols(double T, Table& table) {
  const auto dd = Dd::with_default_width(kDdSegments, T);
  table.note("dd_segments", std::to_string(kDdSegments));
  table.note("dd_width_ns", dd.width);
  table.note("cd_drive", "segmented, w = 0");
  return {Protocol{"CD", Cd{kDdSegments}, std::nullopt}, Protocol::plain(dd)};
}

void add_sweep(Table& table, const PresetContext& ctx, const Topology& topology,
               const std::vector<Protocol>& protocols, const GateSpec& gate, const std::string& prefix) {
  for (const auto& s : sweep_j(ctx.params(), topology, protocols, gate, ctx.j_grid_mhz, ctx.sim)) {
    table.add(s, prefix);
  }
}

void add_sequences(Table& table, const PresetContext& ctx, const Topology& topology,
                   const std::vector<Protocol>& protocols, const GateSpec& gate, int count,
                   const std::string& prefix) {
  std::vector<FidelitySeries> out(protocols.size());
  parallel_for(protocols.size(), ctx.sim.threads, [&](size_t p) {
    out[p] = run_protocol_sequence(ctx.params(), topology, protocols[p], gate, count,
                                   SimulationConfig{ctx.sim.step, 1});
  });
  for (const auto& s : out) table.add(s, prefix);
}

Table sweep_only(const PresetContext& ctx, const Topology& topology, const GateSpec& gate,
                 const std::vector<Protocol>& protocols, Table table) {
  table.abscissa_name = "J_MHz";
  add_sweep(table, ctx, topology, protocols, gate, "");
  return table;
}

Table sequence_only(const PresetContext& ctx, const Topology& topology, const GateSpec& gate,
                    const std::vector<Protocol>& protocols, int count, Table table) {
  table.abscissa_name = "time_ns";
  table.note("j_mhz", ctx.coupling_mhz);
  table.note("sequence_length", std::to_string(count));
  add_sequences(table, ctx, topology, protocols, gate, count, "");
  return table;
}

// Panel b: J sweep; panel c: sequence at the reference J.
Table sweep_and_sequence(const PresetContext& ctx, const Topology& topology, const GateSpec& gate,
                         const std::vector<Protocol>& protocols, int count, Table table) {
  table.abscissa_name = "b:J_MHz;c:time_ns";
  table.note("j_mhz_sequence", ctx.coupling_mhz);
  table.note("sequence_length", std::to_string(count));
  add_sweep(table, ctx, topology, protocols, gate, "b/");
  add_sequences(table, ctx, topology, protocols, gate, count, "c/");
  return table;
}

Table gate_table(const Topology& topology, const GateSpec& gate) {
  Table t;
  t.note("topology", topology.name());
  t.note("gate", gate_name(gate));
  t.note("gate_time_ns", gate.duration);
  return t;
}

Table functional_scan(const PresetContext& ctx, ErrorFunctional functional, double T, Table table,
                      const std::string& prefix = "") {
  table.abscissa_name = table.rows.empty() ? "gamma_MHz" : table.abscissa_name;
  table.note("functional", functional_name(functional));
  table.note("functional_gate_time_ns", T);
  for (int n : kCycles) {
    GammaScan scan;
    try {
      scan = scan_gamma(functional, ctx.params(), n, T, ctx.gamma, ctx.quadrature, ctx.sim.threads);
    } catch (const NoMinimumError& e) {
      scan = e.scan();
    }
    const std::string label = prefix + "N=" + std::to_string(n);
    for (size_t k = 0; k < scan.grid.size(); ++k) {
      table.rows.push_back({rad_per_ns_to_mhz(scan.grid[k]), label, scan.values[k]});
    }
    if (scan.optimum_index) {
      table.note("gamma_opt_mhz[N=" + std::to_string(n) + "]", rad_per_ns_to_mhz(scan.gamma_opt()));
    }
  }
  return table;
}

Table fig2(const PresetContext& ctx) {
  const auto topology = Topology::pair();
  Table t;
  t.abscissa_name = "T_ns";
  t.note("topology", topology.name());
  t.note("gate", "idle");
  t.note("t_grid_ns", "2:0.5:60");
  const int count = 117;
  FidelitySeries series{"CD", std::vector<FidelityPoint>(count)};
  parallel_for(count, ctx.sim.threads, [&](size_t k) {
    const double T = 2.0 + 0.5 * static_cast<double>(k);
    series.points[k] = {T, run_single_gate(ctx.params(), topology, Cd{}, GateSpec::idle(T),
                                           SimulationConfig{ctx.sim.step, 1})};
  });
  t.add(series);
  return t;
}

Table fig4a(const PresetContext& ctx) {
  const double T = ctx.gate_time();
  Table t = gate_table(Topology::pair(), GateSpec::x(1, T));
  t.abscissa_name = "time_ns";
  t.value_name = "amplitude_rad_per_ns";
  const auto scan = scan_gamma(ErrorFunctional::Fm2X, ctx.params(), 4, T, ctx.gamma, ctx.quadrature,
                               ctx.sim.threads);
  t.note("gamma_opt_mhz[N=4]", rad_per_ns_to_mhz(scan.gamma_opt()));
  t.note("sample_step_ns", 0.05);
  const auto drive = SineEnvelopeDrive::x_gate(T, 1);
  const FmZModulation fm{scan.gamma_opt(), 4, T};
  const int samples = static_cast<int>(std::lround(T / 0.05));
  for (int k = 0; k <= samples; ++k) {
    const double time = T * k / samples;
    t.rows.push_back({time, "Omega_x Q1", sample(drive, time)});
    t.rows.push_back({time, "Z Q2 FM N=4", sample(fm, time)});
  }
  return t;
}

Table fig16(const PresetContext& ctx) {
  const double T = 3.0 * half_beat_time(ctx.params());
  Table t = gate_table(Topology::pair(), GateSpec::x(1, T));
  t.abscissa_name = "a:gamma_MHz;b:J_MHz;c:time_ns";
  t.value_name = "a:epsilon_rad_per_ns;b,c:infidelity";
  t = functional_scan(ctx, ErrorFunctional::Fm1, T, std::move(t), "a/");
  const auto study = non_matched_study(ctx.params(), T, kCycles, ctx.j_grid_mhz, 15, ctx.sim, ctx.gamma);
  t.note("j_mhz_sequence", ctx.coupling_mhz);
  t.note("sequence_length", "15");
  for (const auto& s : study.single) t.add(s, "b/");
  for (const auto& s : study.sequence) t.add(s, "c/");
  return t;
}

Preset fm_preset(std::string name, std::string description, Topology topology, GateKind kind, int target,
                 int panel) {
  return {std::move(name), std::move(description), [=](const PresetContext& ctx) {
            const double T = ctx.gate_time();
            const GateSpec gate{kind, target, T};
            Table t = gate_table(topology, gate);
            const bool idle = kind == GateKind::Idle;
            const auto protocols =
                fm_protocols(ctx, idle ? ErrorFunctional::Fm2Idle : ErrorFunctional::Fm2X, idle, T, t);
            const int count = idle ? 20 : 21;
            if (panel == 'b') return sweep_only(ctx, topology, gate, protocols, std::move(t));
            if (panel == 'c') return sequence_only(ctx, topology, gate, protocols, count, std::move(t));
            return sweep_and_sequence(ctx, topology, gate, protocols, count, std::move(t));
          }};
}

Preset dd_preset(std::string name, std::string description, Topology topology, GateKind kind, int target) {
  return {std::move(name), std::move(description), [=](const PresetContext& ctx) {
            const double T = ctx.gate_time();
            const GateSpec gate{kind, target, T};
            Table t = gate_table(topology, gate);
            const auto protocols = dd_protocols(T, t);
            return sweep_and_sequence(ctx, topology, gate, protocols, kind == GateKind::Idle ? 20 : 21,
                                      std::move(t));
          }};
}

std::vector<Preset> build_presets() {
  const auto pair = Topology::pair();
  const auto star = Topology::five_qubit_star();
  std::vector<Preset> out;
  out.push_back({"fig2", "CD idle infidelity vs gate time, pair", fig2});
  out.push_back(fm_preset("fig3b", "FM idle vs J, pair", pair, GateKind::Idle, 1, 'b'));
  out.push_back(fm_preset("fig3c", "FM consecutive idle gates, pair", pair, GateKind::Idle, 1, 'c'));
  out.push_back({"fig4a", "FM X1 drive and Z modulation waveforms", fig4a});
  out.push_back(fm_preset("fig4b", "FM X1 vs J, pair", pair, GateKind::X, 1, 'b'));
  out.push_back(fm_preset("fig4c", "FM consecutive X1 gates, pair", pair, GateKind::X, 1, 'c'));
  out.push_back(dd_preset("fig5", "DD idle, pair", pair, GateKind::Idle, 1));
  out.push_back(dd_preset("fig6", "DD X1, pair", pair, GateKind::X, 1));
  out.push_back(fm_preset("fig8", "FM idle, five-qubit star", star, GateKind::Idle, 1, 0));
  out.push_back(fm_preset("fig9", "FM X2, five-qubit star", star, GateKind::X, 2, 0));
  out.push_back(dd_preset("fig10", "DD idle, five-qubit star", star, GateKind::Idle, 1));
  out.push_back(dd_preset("fig11", "DD X2, five-qubit star", star, GateKind::X, 2));
  out.push_back({"fig12", "second-order idle functional vs gamma", [](const PresetContext& ctx) {
                   return functional_scan(ctx, ErrorFunctional::Fm2Idle, ctx.gate_time(), Table{});
                 }});
  out.push_back({"fig13", "second-order X functional vs gamma", [](const PresetContext& ctx) {
                   return functional_scan(ctx, ErrorFunctional::Fm2X, ctx.gate_time(), Table{});
                 }});
  out.push_back(fm_preset("fig14", "FM single-site X2, pair", pair, GateKind::X, 2, 0));
  out.push_back(fm_preset("fig15", "FM parallel X1X2, pair", pair, GateKind::ParallelXX, 1, 0));
  out.push_back({"fig16", "FM X1 at non-matched gate time 3 T_Delta, pair", fig16});
  out.push_back(dd_preset("fig17", "DD single-site X2, pair", pair, GateKind::X, 2));
  out.push_back(dd_preset("fig18", "DD parallel X1X2, pair", pair, GateKind::ParallelXX, 1));
  return out;
}

}  // namespace

void Table::note(const std::string& key, double value) { note(key, format_number(value)); }

void Table::add(const FidelitySeries& series, const std::string& prefix) {
  for (const auto& p : series.points) rows.push_back({p.abscissa, prefix + series.label, p.infidelity});
}

void Table::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
    return std::tie(a.scheme, a.abscissa) < std::tie(b.scheme, b.abscissa);
  });
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (see list-presets)");
}

Table run_preset(const Preset& preset, const PresetContext& ctx) {
  if (ctx.j_grid_mhz.empty()) throw std::invalid_argument("empty J grid");
  Table t;
  t.note("preset", preset.name);
  t.note("description", preset.description);
  t.note("delta_mhz", ctx.detuning_mhz);
  t.note("j_reference_mhz", ctx.coupling_mhz);
  std::string grid;
  for (double j : ctx.j_grid_mhz) grid += (grid.empty() ? "" : " ") + format_number(j);
  t.note("j_grid_mhz", grid);
  t.note("integrator", "exponential midpoint");
  t.note("step_ns", ctx.sim.step);
  t.note("gamma_step_mhz", rad_per_ns_to_mhz(ctx.gamma.step));
  t.note("gamma_max_mhz", rad_per_ns_to_mhz(ctx.gamma.max));
  t.note("quadrature_nodes", std::to_string(ctx.quadrature.nodes_2d));
  Table body = preset.run(ctx);
  body.header.insert(body.header.begin(), t.header.begin(), t.header.end());
  body.sort();
  return body;
}

}  // namespace xtalk
