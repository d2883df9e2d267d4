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

#include "xtalk/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "xtalk/parallel.hpp"

namespace xtalk {

namespace {

bool x_type(const GateSpec& gate) { return gate.kind != GateKind::Idle; }

void check_count(const GateSpec& gate, int count) {
  if (count < 1) throw std::invalid_argument("sequence length must be >= 1");
  if (x_type(gate) && count % 2 == 0) {
    throw std::invalid_argument("X-gate sequences need an odd length");
  }
}

Fm with_gamma(const Fm& fm, double gamma) { return Fm{fm.cycles, gamma}; }

}  // namespace

double gate_fidelity(const Operator& u_gate, const Operator& u_ideal) {
  if (u_gate.rows() != u_ideal.rows() || u_gate.cols() != u_ideal.cols()) {
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  }
  const Complex overlap = (u_gate.adjoint() * u_ideal).trace();
  const Complex norm = (u_ideal.adjoint() * u_ideal).trace();
  return std::abs(overlap) / std::abs(norm);
}

double gate_infidelity(const Operator& u_gate, const Operator& u_ideal) {
  const double fidelity = gate_fidelity(u_gate, u_ideal);
  if (unitarity_defect(u_gate) > 1e-8 || unitarity_defect(u_ideal) > 1e-8) {
    return std::max(0.0, 1.0 - fidelity);
  }
  // Same quantity from the eigenphases of U_ideal^dagger U_gate:
  // 1 - |sum e^{i theta}| / d = x / (1 + sqrt(1 - x)), x = sum_{jk} 2 sin^2((theta_j - theta_k) / 2) / d^2.
  // Free of the cancellation in 1 - F and blind to norm drift of long products.
  const Eigen::ComplexEigenSolver<Operator> es(u_ideal.adjoint() * u_gate, false);
  const auto& ev = es.eigenvalues();
  const auto d = static_cast<double>(ev.size());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    for (Eigen::Index k = 0; k < j; ++k) {
      const double s = std::sin(0.5 * std::arg(ev(j) * std::conj(ev(k))));
      sum += 4.0 * s * s;
    }
  }
  const double x = std::min(sum / (d * d), 1.0);
  return x / (1.0 + std::sqrt(1.0 - x));
}

std::vector<Operator> gate_train(const Hamiltonian& h, int count, double step) {
  if (count < 1) throw std::invalid_argument("gate_train: count must be >= 1");
  const double T = h.gate_time();
  const double offset = h.evaluation_offset();
  const auto fn = h.as_function();

  Operator current = Operator::Identity(h.dimension(), h.dimension());
  if (offset > 0.0) current = propagate(fn, TimeGrid::covering(0.0, offset, step));

  std::vector<Operator> out;
  out.reserve(static_cast<size_t>(count));
  Operator window;
  for (int k = 0; k < count; ++k) {
    if (k == 0 || !h.gate_periodic()) {
      const double a = k * T + offset;
      window = propagate(fn, TimeGrid::covering(a, a + T, step));
    }
    current = window * current;
    out.push_back(current);
  }
  return out;
}

double run_single_gate(const SystemParams& params, const Topology& topology,
                       const ControlScheme& scheme, const GateSpec& gate,
                       const SimulationConfig& sim) {
  const auto h = assemble_hamiltonian(params, topology, scheme, gate);
  const auto u = gate_train(h, 1, sim.step);
  return gate_infidelity(u.front(), target_unitary(gate, topology, 1));
}

FidelitySeries run_sequence(const SystemParams& params, const Topology& topology,
                            const ControlScheme& scheme, const GateSpec& gate, int count,
                            const SimulationConfig& sim) {
  check_count(gate, count);
  const auto h = assemble_hamiltonian(params, topology, scheme, gate);
  const auto train = gate_train(h, count, sim.step);
  FidelitySeries series{scheme_name(scheme), {}};
  for (int k = 1; k <= count; ++k) {
    if (x_type(gate) && k % 2 == 0) continue;
    const double time = k * gate.duration + h.evaluation_offset();
    series.points.push_back(
        {time, gate_infidelity(train[static_cast<size_t>(k - 1)], target_unitary(gate, topology, k))});
  }
  return series;
}

Protocol Protocol::plain(ControlScheme scheme) {
  Protocol p;
  p.label = scheme_name(scheme);
  p.scheme = std::move(scheme);
  return p;
}

Protocol Protocol::fm_corner_averaged(int cycles, const GammaScan& scan) {
  Protocol p = plain(Fm{cycles, scan.gamma_opt()});
  p.corner_step = scan.grid_step;
  return p;
}

double run_protocol(const SystemParams& params, const Topology& topology, const Protocol& protocol,
                    const GateSpec& gate, const SimulationConfig& sim) {
  if (!protocol.corner_step) return run_single_gate(params, topology, protocol.scheme, gate, sim);
  const auto* fm = std::get_if<Fm>(&protocol.scheme);
  if (fm == nullptr) throw std::invalid_argument("corner averaging applies to FM only");
  const double d = *protocol.corner_step;
  if (fm->gamma - d < -1e-12 * d) throw std::invalid_argument("corner averaging needs gamma - step >= 0");
  double fidelity = 0.0;
  for (double g : {fm->gamma + d, std::max(fm->gamma - d, 0.0)}) {
    fidelity += 0.5 * (1.0 - run_single_gate(params, topology, with_gamma(*fm, g), gate, sim));
  }
  return std::max(0.0, 1.0 - fidelity);
}

FidelitySeries run_protocol_sequence(const SystemParams& params, const Topology& topology,
                                     const Protocol& protocol, const GateSpec& gate, int count,
                                     const SimulationConfig& sim) {
  if (!protocol.corner_step) {
    auto series = run_sequence(params, topology, protocol.scheme, gate, count, sim);
    series.label = protocol.label;
    return series;
  }
  const auto* fm = std::get_if<Fm>(&protocol.scheme);
  if (fm == nullptr) throw std::invalid_argument("corner averaging applies to FM only");
  const double d = *protocol.corner_step;
  if (fm->gamma - d < -1e-12 * d) throw std::invalid_argument("corner averaging needs gamma - step >= 0");
  const auto upper = run_sequence(params, topology, with_gamma(*fm, fm->gamma + d), gate, count, sim);
  const auto lower =
      run_sequence(params, topology, with_gamma(*fm, std::max(fm->gamma - d, 0.0)), gate, count, sim);
  FidelitySeries series{protocol.label, upper.points};
  for (size_t k = 0; k < series.points.size(); ++k) {
    const double f = 0.5 * ((1.0 - upper.points[k].infidelity) + (1.0 - lower.points[k].infidelity));
    series.points[k].infidelity = std::max(0.0, 1.0 - f);
  }
  return series;
}

std::vector<FidelitySeries> sweep_j(const SystemParams& params_template, const Topology& topology,
                                    std::span<const Protocol> protocols, const GateSpec& gate,
                                    std::span<const double> j_mhz, const SimulationConfig& sim) {
  if (j_mhz.empty()) throw std::invalid_argument("sweep_j: empty J grid");
  for (double j : j_mhz) {
    if (!(j > 0.0) || !std::isfinite(j)) throw std::invalid_argument("sweep_j: J values must be positive");
  }
  std::vector<FidelitySeries> out(protocols.size());
  for (size_t p = 0; p < protocols.size(); ++p) {
    out[p].label = protocols[p].label;
    out[p].points.resize(j_mhz.size());
  }
  const size_t cells = protocols.size() * j_mhz.size();
  parallel_for(cells, sim.threads, [&](size_t cell) {
    const size_t p = cell / j_mhz.size();
    const size_t k = cell % j_mhz.size();
    SystemParams params = params_template;
    params.coupling = mhz_to_rad_per_ns(j_mhz[k]);
    SimulationConfig serial = sim;
    serial.threads = 1;
    out[p].points[k] = {j_mhz[k], run_protocol(params, topology, protocols[p], gate, serial)};
  });
  return out;
}

double orders_of_improvement(double reference_infidelity, double scheme_infidelity) {
  return std::log10(reference_infidelity / scheme_infidelity);
}

NonMatchedStudy non_matched_study(const SystemParams& params, double gate_time,
                                  const std::vector<int>& cycles, std::span<const double> j_mhz,
                                  int sequence_length, const SimulationConfig& sim,
                                  const GammaGrid& grid) {
  const double beats = gate_time / half_beat_time(params);
  const double nearest_even = 2.0 * std::round(beats / 2.0);
  if (std::abs(beats - nearest_even) < 1e-9) {
    throw std::invalid_argument("non_matched_study: gate time is an even multiple of T_Delta");
  }
  NonMatchedStudy study;
  study.gate_time = gate_time;
  study.cycles = cycles;
  std::vector<Protocol> protocols{Protocol::plain(Cd{})};
  for (int n : cycles) {
    study.scans.push_back(scan_gamma(ErrorFunctional::Fm1, params, n, gate_time, grid, {}, sim.threads));
    protocols.push_back(Protocol::plain(Fm{n, study.scans.back().gamma_opt()}));
  }
  const auto gate = GateSpec::x(1, gate_time);
  study.single = sweep_j(params, Topology::pair(), protocols, gate, j_mhz, sim);
  study.sequence.resize(protocols.size());
  parallel_for(protocols.size(), sim.threads, [&](size_t p) {
    study.sequence[p] = run_protocol_sequence(params, Topology::pair(), protocols[p], gate, sequence_length,
                                              SimulationConfig{sim.step, 1});
  });
  return study;
}

}  // namespace xtalk
