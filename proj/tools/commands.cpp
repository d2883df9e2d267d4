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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "xtalk/parallel.hpp"

namespace xtalk::cli {

namespace {

bool matched(const RunConfig& c) {
  const double beats = gate_time_of(c) / half_beat_time(params_of(c, 0.0));
  return std::abs(beats - 2.0 * std::round(beats / 2.0)) < 1e-9;
}

double reference_j(const RunConfig& c) {
  if (c.j_reference_mhz) return *c.j_reference_mhz;
  return c.j_mhz.front() > 0.0 ? c.j_mhz.front() : 5.0;
}

ErrorFunctional default_functional(const RunConfig& c) {
  if (!matched(c)) return ErrorFunctional::Fm1;
  return c.gate == "idle" ? ErrorFunctional::Fm2Idle : ErrorFunctional::Fm2X;
}

Protocol resolve(const SchemeConfig& s, const RunConfig& c, Table& table, size_t index) {
  const std::string key = "scheme[" + std::to_string(index) + "].";
  const double T = gate_time_of(c);
  if (s.type == "cd") {
    table.note(key + "type", "cd");
    table.note(key + "drive", s.segments > 0 ? "segmented S=" + std::to_string(s.segments) + " w=0" : "sine");
    return Protocol{"CD", Cd{s.segments}, std::nullopt};
  }
  if (s.type == "dd") {
    const Dd dd{s.segments, s.width_ns.value_or(T / s.segments / 4.0)};
    table.note(key + "type", "dd");
    table.note(key + "segments", std::to_string(dd.segments));
    table.note(key + "width_ns", dd.width);
    return Protocol::plain(dd);
  }
  table.note(key + "type", "fm");
  table.note(key + "cycles", std::to_string(s.cycles));
  if (s.gamma_choice == GammaChoice::Fixed) {
    if (s.corner_average.value_or(false)) throw ConfigError("corner averaging needs gamma_mhz: optimize", 0);
    table.note(key + "gamma_mhz", s.gamma_mhz);
    return Protocol::plain(Fm{s.cycles, mhz_to_rad_per_ns(s.gamma_mhz)});
  }
  const auto functional = s.functional ? parse_functional(*s.functional) : default_functional(c);
  const auto scan = scan_gamma(functional, params_of(c, reference_j(c)), s.cycles, T, gamma_grid_of(c),
                               quadrature_of(c), c.threads);
  const bool corner = s.corner_average.value_or(c.gate == "idle");
  table.note(key + "gamma_functional", functional_name(functional));
  table.note(key + "gamma_reference_j_mhz", reference_j(c));
  table.note(key + "gamma_mhz", rad_per_ns_to_mhz(scan.gamma_opt()));
  table.note(key + "gamma_at_range_edge", scan.at_range_edge ? "true" : "false");
  table.note(key + "corner_averaged", corner ? "true" : "false");
  return corner ? Protocol::fm_corner_averaged(s.cycles, scan) : Protocol::plain(Fm{s.cycles, scan.gamma_opt()});
}

Table simulate_custom(const RunConfig& c) {
  const auto topology = topology_of(c);
  const auto gate = gate_of(c);
  Table t;
  t.note("topology", topology.name());
  t.note("delta_mhz", c.delta_mhz);
  std::string grid;
  for (double j : c.j_mhz) grid += (grid.empty() ? "" : " ") + format_number(j);
  t.note("j_mhz", grid);
  t.note("gate", gate_name(gate));
  t.note("gate_time_ns", gate.duration);
  t.note("repetitions", std::to_string(c.repetitions));
  t.note("integrator", "exponential midpoint");
  t.note("step_ns", c.step_ns);
  t.note("gamma_step_mhz", c.gamma_step_mhz);
  t.note("gamma_max_mhz", c.gamma_max_mhz);
  t.note("quadrature_nodes", std::to_string(c.quadrature_nodes));
  std::vector<Protocol> protocols;
  for (size_t k = 0; k < c.schemes.size(); ++k) protocols.push_back(resolve(c.schemes[k], c, t, k));

  const SimulationConfig serial{c.step_ns, 1};
  if (c.repetitions == 1) {
    t.abscissa_name = "J_MHz";
    const size_t nj = c.j_mhz.size();
    std::vector<TableRow> rows(protocols.size() * nj);
    parallel_for(rows.size(), c.threads, [&](size_t cell) {
      const auto& p = protocols[cell / nj];
      const double j = c.j_mhz[cell % nj];
      rows[cell] = {j, p.label, run_protocol(params_of(c, j), topology, p, gate, serial)};
    });
    t.rows = std::move(rows);
  } else {
    t.abscissa_name = "time_ns";
    std::vector<FidelitySeries> out(protocols.size());
    parallel_for(protocols.size(), c.threads, [&](size_t k) {
      out[k] = run_protocol_sequence(params_of(c, c.j_mhz.front()), topology, protocols[k], gate, c.repetitions,
                                     serial);
    });
    for (const auto& s : out) t.add(s);
  }
  t.sort();
  return t;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void emit(const RunConfig& c, const Table& t, std::ostream& out) {
  if (!c.output) {
    write_csv(out, t);
    return;
  }
  std::ofstream file(*c.output, std::ios::binary);
  if (!file) throw ConfigError("cannot write output file '" + *c.output + "'", 0);
  write_csv(file, t);
}

bool within(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <= rel * std::abs(b) + abs_floor;
}

// Closed-form CD idle infidelity on the pair.
double cd_idle_closed_form(const SystemParams& p, double T) {
  const double omega = std::sqrt(p.detuning * p.detuning / 4.0 + p.coupling * p.coupling);
  const double ratio = omega > 0.0 ? p.detuning / (2.0 * omega) : 0.0;
  const double inner = std::cos(p.detuning * T / 2.0) * std::cos(omega * T) +
                       std::sin(p.detuning * T / 2.0) * ratio * std::sin(omega * T);
  return 1.0 - std::abs(2.0 + 2.0 * inner) / 4.0;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.header) out << "# " << key << '=' << value << '\n';
  out << "# abscissa=" << table.abscissa_name << '\n';
  out << "abscissa,scheme," << table.value_name << '\n';
  for (const auto& row : table.rows) {
    out << format_number(row.abscissa) << ',' << csv_field(row.scheme) << ',' << format_number(row.value) << '\n';
  }
}

Table simulate(const RunConfig& c) {
  validate(c);
  if (c.preset) return run_preset(find_preset(*c.preset), preset_context_of(c));
  return simulate_custom(c);
}

GammaReport optimize_gamma(const RunConfig& c) {
  validate(c);
  const auto functional = parse_functional(c.functional);
  const double T = gate_time_of(c);
  const auto params = params_of(c, reference_j(c));
  GammaReport report;
  Table& t = report.table;
  t.abscissa_name = "gamma_MHz";
  t.value_name = "epsilon_rad_per_ns";
  t.note("functional", c.functional);
  t.note("delta_mhz", c.delta_mhz);
  t.note("j_mhz", reference_j(c));
  t.note("gate_time_ns", T);
  t.note("gamma_step_mhz", c.gamma_step_mhz);
  t.note("gamma_max_mhz", c.gamma_max_mhz);
  t.note("quadrature_nodes", std::to_string(c.quadrature_nodes));
  for (int n : c.cycles) {
    GammaScan scan;
    const std::string label = "N=" + std::to_string(n);
    try {
      scan = scan_gamma(functional, params, n, T, gamma_grid_of(c), quadrature_of(c), c.threads);
    } catch (const NoMinimumError& e) {
      scan = e.scan();
      report.all_found = false;
      t.note("gamma_opt_mhz[" + label + "]", "none");
    }
    for (size_t k = 0; k < scan.grid.size(); ++k) {
      t.rows.push_back({rad_per_ns_to_mhz(scan.grid[k]), label, scan.values[k]});
    }
    if (scan.optimum_index) {
      const double g = rad_per_ns_to_mhz(scan.gamma_opt());
      t.note("gamma_opt_mhz[" + label + "]", g);
      t.note("gamma_at_range_edge[" + label + "]", scan.at_range_edge ? "true" : "false");
      t.rows.push_back({g, "gamma_opt " + label, scan.values[*scan.optimum_index]});
    }
  }
  t.sort();
  return report;
}

std::vector<CheckResult> verify_checks(const RunConfig& c) {
  const auto params = params_of(c, c.j_mhz.front());
  const auto pair = Topology::pair();
  const double T = gate_time_of(c);
  const SimulationConfig sim{c.step_ns, 1};
  std::vector<CheckResult> out;

  // The idle functional scales as J^2, so its minimizer does not depend on J.
  SystemParams unit_coupling = params;
  unit_coupling.coupling = 1.0;
  double gamma = 0.0;
  if (matched(c)) {
    gamma = scan_gamma(ErrorFunctional::Fm2Idle, unit_coupling, 4, T, gamma_grid_of(c), quadrature_of(c), c.threads)
                .gamma_opt();
  }
  const auto dd = Dd::with_default_width(4, T);

  {
    double worst = 0.0;
    const std::vector<std::pair<ControlScheme, GateSpec>> cases{
        {Cd{}, GateSpec::idle(T)}, {Fm{4, gamma}, GateSpec::x(1, T)}, {dd, GateSpec::parallel_xx(T)}};
    for (const auto& [scheme, gate] : cases) {
      const auto h = assemble_hamiltonian(params, pair, scheme, gate);
      worst = std::max(worst, unitarity_defect(gate_train(h, 3, c.step_ns).back()));
    }
    out.push_back({"unitarity", worst <= 1e-10, worst, 1e-10});
  }
  {
    const double num = run_single_gate(params, pair, Cd{}, GateSpec::idle(T), sim);
    const double residual = std::abs(num - cd_idle_closed_form(params, T));
    out.push_back({"cd-idle-closed-form", residual <= 1e-8, residual, 1e-8});
  }
  {
    const auto closed = dd_second_order_closed_forms(params, GateKind::Idle);
    const double dd2 = epsilon_dd2_idle(params, 4, T, quadrature_of(c));
    const double fm2 = epsilon_fm2_idle(params, FmZModulation{0.0, 4, T}, T, quadrature_of(c));
    const double tiny = 1e-300;
    const double r1 = std::abs(dd2 - closed.dd) / std::max(closed.dd, tiny);
    const double r2 = std::abs(fm2 - closed.cd) / std::max(closed.cd, tiny);
    const bool pass = matched(c) ? within(dd2, closed.dd, 1e-6, 0.0) && within(fm2, closed.cd, 1e-6, 0.0) : true;
    out.push_back({"dd-closed-form", pass, params.coupling == 0.0 ? 0.0 : std::max(r1, r2), 1e-6});
  }
  {
    const std::vector<std::pair<ControlScheme, GateSpec>> cases{
        {Cd{}, GateSpec::idle(T)}, {Fm{4, gamma}, GateSpec::idle(T)}, {dd, GateSpec::x(1, T)}};
    double worst = 0.0;
    bool pass = true;
    for (const auto& [scheme, gate] : cases) {
      const double a = run_single_gate(params, pair, scheme, gate, sim);
      const double b = run_single_gate(params, pair, scheme, gate, SimulationConfig{c.step_ns / 2.0, 1});
      const double scale = std::max(std::abs(a), std::abs(b));
      // Changes below 1e-10 absolute count as converged.
      const double rel = std::abs(a - b) > 1e-10 ? std::abs(a - b) / scale : 0.0;
      worst = std::max(worst, rel);
      pass = pass && rel < 1e-2;
    }
    out.push_back({"step-halving", pass, worst, 1e-2});
  }
  {
    const auto u = gate_train(assemble_hamiltonian(params, pair, Fm{4, gamma}, GateSpec::x(1, T)), 1,
                              c.step_ns)
                       .front();
    const auto v = target_unitary(GateSpec::x(1, T), pair);
    const double residual = std::abs(gate_fidelity(u, v) - gate_fidelity(std::polar(1.0, 0.7) * u, v));
    out.push_back({"global-phase", residual <= 1e-12, residual, 1e-12});
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"XY crosstalk suppression simulator"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> preset;
  std::optional<std::string> out_path;
  std::optional<double> step;
  std::optional<int> threads;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML run configuration");
    sub->add_option("--preset", preset, "figure preset name");
    sub->add_option("--out", out_path, "output CSV path");
    sub->add_option("--step", step, "integrator step in ns")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "run a preset or configured experiment");
  auto* optimize_cmd = app.add_subcommand("optimize-gamma", "scan the FM amplitude");
  auto* verify_cmd = app.add_subcommand("verify", "run oracle and invariant checks");
  auto* list_cmd = app.add_subcommand("list-presets", "list figure presets");
  for (auto* sub : {simulate_cmd, optimize_cmd, verify_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  if (list_cmd->parsed()) {
    for (const auto& p : presets()) out << p.name << '\t' << p.description << '\n';
    return kSuccess;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (preset) config.preset = *preset;
    if (out_path) config.output = *out_path;
    if (step) config.step_ns = *step;
    if (threads) config.threads = *threads;

    if (simulate_cmd->parsed()) {
      emit(config, simulate(config), out);
      return kSuccess;
    }
    if (optimize_cmd->parsed()) {
      const auto report = optimize_gamma(config);
      emit(config, report.table, out);
      if (!report.all_found) {
        err << "error: no minimum in range for at least one N (scan written)\n";
        return kNoMinimum;
      }
      return kSuccess;
    }
    validate(config);
    bool all = true;
    for (const auto& r : verify_checks(config)) {
      out << (r.pass ? "PASS " : "FAIL ") << r.name << " residual=" << format_number(r.residual)
          << " tolerance=" << format_number(r.tolerance) << '\n';
      all = all && r.pass;
    }
    return all ? kSuccess : kCheckFailure;
  } catch (const NoMinimumError& e) {
    err << "error: " << e.what() << '\n';
    return kNoMinimum;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

}  // namespace xtalk::cli
