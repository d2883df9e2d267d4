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

#include "xtalk/hamiltonian.hpp"

#include <climits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace xtalk {

namespace {

constexpr double kPi = std::numbers::pi;

// Gate-local clock for a train of gates of length T.
double local_time(double t, double gate_time) {
  return t - std::floor(t / gate_time) * gate_time;
}

Operator exchange_operator(const Edge& e, int n) {
  return embed_pair(pauli::minus(), e.neighbor, pauli::plus(), e.center, n);
}

Operator exchange_sum(const SystemParams& params, const Topology& topology, double t,
                      double extra_phase) {
  const int n = topology.num_qubits();
  Operator h = Operator::Zero(topology.dimension(), topology.dimension());
  const auto edges = topology.edges();
  for (size_t k = 0; k < edges.size(); ++k) {
    if (!params.edge_on(k)) continue;
    const Operator b = exchange_operator(edges[k], n);
    const Complex c = params.coupling * std::polar(1.0, params.detuning * t + extra_phase);
    h += c * b + std::conj(c) * b.adjoint();
  }
  return h;
}

bool is_periodic_phase(double detuning, double period) {
  return std::abs(std::polar(1.0, detuning * period) - Complex(1.0)) < 1e-12;
}

void check_target(const GateSpec& gate, const Topology& topology) {
  if (!(gate.duration > 0.0)) throw std::invalid_argument("gate time must be positive");
  if (gate.kind == GateKind::X && (gate.target < 1 || gate.target > topology.num_qubits())) {
    std::ostringstream msg;
    msg << "X gate target qubit " << gate.target << " does not exist in the " << topology.name()
        << " topology";
    throw std::invalid_argument(msg.str());
  }
  if (gate.kind == GateKind::ParallelXX && topology.kind != TopologyKind::Pair) {
    throw UnsupportedCombination("parallel X1X2 is only defined for the pair topology");
  }
}

std::vector<int> driven_qubits(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::Idle:
      return {};
    case GateKind::X:
      return {gate.target};
    case GateKind::ParallelXX:
      return {1, 2};
  }
  return {};
}

}  // namespace

std::vector<Edge> Topology::edges() const {
  if (kind == TopologyKind::Pair) return {{1, 2}};
  return {{1, 2}, {3, 2}, {4, 2}, {5, 2}};
}

std::string Topology::name() const { return kind == TopologyKind::Pair ? "pair" : "five-qubit-star"; }

void SystemParams::validate(const Topology& topology) const {
  if (detuning == 0.0 || !std::isfinite(detuning)) throw std::invalid_argument("detuning must be nonzero");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw std::invalid_argument("coupling must be >= 0");
  if (!edge_enabled.empty() && edge_enabled.size() != topology.edges().size()) {
    throw std::invalid_argument("edge_enabled must have one entry per edge");
  }
}

double half_beat_time(const SystemParams& params) { return kPi / std::abs(params.detuning); }

double matched_gate_time(const SystemParams& params) { return 2.0 * half_beat_time(params); }

std::string scheme_name(const ControlScheme& scheme) {
  std::ostringstream out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Cd>) {
          out << "CD";
        } else if constexpr (std::is_same_v<S, Fm>) {
          out << "FM N=" << s.cycles;
        } else {
          out << "DD Z-" << s.segments;
        }
      },
      scheme);
  return out.str();
}

std::string gate_name(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::Idle:
      return "idle";
    case GateKind::X:
      return "X" + std::to_string(gate.target);
    case GateKind::ParallelXX:
      return "X1X2";
  }
  return "?";
}

FmPlacement fm_placement(const GateSpec& gate, const Topology& topology) {
  const bool on_hub = (gate.kind == GateKind::X && gate.target == topology.center()) ||
                      gate.kind == GateKind::ParallelXX;
  return on_hub ? FmPlacement::SingleSite : FmPlacement::NeighborSite;
}

Operator xy_interaction_operation_frame(const SystemParams& params, const Topology& topology,
                                        double t) {
  return exchange_sum(params, topology, t, 0.0);
}

Operator xy_interaction_modulated_frame(const SystemParams& params, const Topology& topology,
                                        const FmZModulation& fm, double t) {
  return exchange_sum(params, topology, t, 2.0 * accumulated_phase(fm, local_time(t, fm.duration)));
}

Operator Hamiltonian::operator()(double t) const {
  Operator h = Operator::Zero(dimension_, dimension_);
  if (!exchange_.empty()) {
    const double extra = extra_phase_ ? extra_phase_(t) : 0.0;
    for (const auto& term : exchange_) {
      const Complex c = coupling_ * std::polar(1.0, term.detuning * t + extra);
      h += c * term.lowering_raising + std::conj(c) * term.lowering_raising.adjoint();
    }
  }
  for (const auto& term : local_) {
    const double c = term.coefficient(t);
    if (c != 0.0) h += c * term.op;
  }
  return h;
}

Hamiltonian assemble_hamiltonian(const SystemParams& params, const Topology& topology,
                                 const ControlScheme& scheme, const GateSpec& gate,
                                 FmFrame fm_frame) {
  params.validate(topology);
  check_target(gate, topology);

  const int n = topology.num_qubits();
  const int hub = topology.center();
  const double T = gate.duration;

  Hamiltonian h;
  h.dimension_ = topology.dimension();
  h.gate_time_ = T;
  h.coupling_ = params.coupling;

  bool periodic = true;
  const auto edges = topology.edges();
  for (size_t k = 0; k < edges.size(); ++k) {
    if (!params.edge_on(k) || params.coupling == 0.0) continue;
    h.exchange_.push_back({exchange_operator(edges[k], n), params.detuning});
    periodic = periodic && is_periodic_phase(params.detuning, T);
  }
  h.gate_periodic_ = periodic;

  const auto add_local = [&](const Operator& single, int qubit, std::function<double(double)> f) {
    h.local_.push_back({embed(single, qubit, n), std::move(f)});
  };
  const auto add_sine_x = [&](int qubit) {
    const auto drive = SineEnvelopeDrive::x_gate(T, qubit);
    add_local(pauli::x(), qubit, [drive, T](double t) { return sample(drive, local_time(t, T)); });
  };
  const auto add_segmented_x = [&](int qubit, int segments, double width) {
    const auto drive = SegmentedDrive::x_gate(T / segments, width, segments, qubit);
    add_local(pauli::x(), qubit, [drive, T](double t) { return sample(drive, local_time(t, T)); });
  };

  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Cd>) {
          if (s.segmented_drive_segments != 0 &&
              (s.segmented_drive_segments < 2 || s.segmented_drive_segments % 2 != 0)) {
            throw UnsupportedCombination("segmented CD drive needs an even segment count");
          }
          for (int q : driven_qubits(gate)) {
            if (s.segmented_drive_segments > 0) {
              add_segmented_x(q, s.segmented_drive_segments, 0.0);
            } else {
              add_sine_x(q);
            }
          }
        } else if constexpr (std::is_same_v<S, Fm>) {
          if (s.cycles < 1) throw UnsupportedCombination("FM needs at least one modulation cycle");
          if (!(s.gamma >= 0.0)) throw UnsupportedCombination("FM amplitude must be >= 0");
          const FmZModulation fm{s.gamma, s.cycles, T};
          if (fm_frame == FmFrame::Modulated) {
            h.extra_phase_ = [fm, T](double t) { return 2.0 * accumulated_phase(fm, local_time(t, T)); };
            // In the modulated frame every X target sees a plain sigma^x envelope.
            for (int q : driven_qubits(gate)) add_sine_x(q);
          } else {
            add_local(pauli::z(), hub, [fm, T](double t) { return sample(fm, local_time(t, T)); });
            for (int q : driven_qubits(gate)) {
              if (q != hub) {
                add_sine_x(q);
                continue;
              }
              const ModulatedQuadratureDrive drive{SineEnvelopeDrive::x_gate(T, q), fm};
              add_local(pauli::x(), q, [drive, T](double t) { return sample(drive, local_time(t, T)).x; });
              add_local(pauli::y(), q, [drive, T](double t) { return sample(drive, local_time(t, T)).y; });
            }
          }
        } else {
          if (s.segments < 4 || s.segments % 2 != 0) {
            throw UnsupportedCombination("DD needs an even segment count S >= 4");
          }
          const double tau = T / s.segments;
          if (!(s.width > 0.0) || !(s.width < tau)) {
            throw UnsupportedCombination("DD pulse width must satisfy 0 < w < tau");
          }
          const NascentDeltaTrain train{INT_MAX, tau, s.width};
          add_local(pauli::z(), hub, [train](double t) { return 0.5 * kPi * sample(train, t); });
          for (int q : driven_qubits(gate)) add_segmented_x(q, s.segments, s.width);
          h.evaluation_offset_ = 0.5 * s.width;
        }
      },
      scheme);
  return h;
}

Operator target_unitary(const GateSpec& gate, const Topology& topology, int repetitions) {
  if (repetitions < 0) throw std::invalid_argument("target_unitary: negative repetition count");
  const int n = topology.num_qubits();
  const Operator minus_i_x = Complex(0, -1) * pauli::x();
  Operator single = Operator::Identity(topology.dimension(), topology.dimension());
  for (int q : driven_qubits(gate)) single = embed(minus_i_x, q, n) * single;
  Operator out = Operator::Identity(topology.dimension(), topology.dimension());
  for (int k = 0; k < repetitions; ++k) out = single * out;
  return out;
}

}  // namespace xtalk
