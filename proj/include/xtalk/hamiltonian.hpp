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

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "xtalk/core.hpp"
#include "xtalk/pulses.hpp"

namespace xtalk {

/// Raised when a (topology, scheme, gate) combination cannot be assembled.
class UnsupportedCombination : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TopologyKind { Pair, FiveQubitStar };

/// XY edge between a neighbor and the hub qubit. Its detuning is omega_neighbor - omega_center.
struct Edge {
  int neighbor = 1;
  int center = 2;
};

/// Pair {1, 2} or a star with center qubit 2 and neighbors 1, 3, 4, 5.
/// Qubit 2 is the hub in both layouts and carries all Z controls.
struct Topology {
  TopologyKind kind = TopologyKind::Pair;

  static Topology pair() { return {TopologyKind::Pair}; }
  static Topology five_qubit_star() { return {TopologyKind::FiveQubitStar}; }

  int num_qubits() const { return kind == TopologyKind::Pair ? 2 : 5; }
  Eigen::Index dimension() const { return Eigen::Index{1} << num_qubits(); }
  int center() const { return 2; }
  std::vector<Edge> edges() const;
  std::string name() const;
};

/// Detuning and XY coupling in rad/ns, uniform over edges.
struct SystemParams {
  double detuning = mhz_to_rad_per_ns(50.0);
  double coupling = mhz_to_rad_per_ns(5.0);
  /// Optional per-edge on/off switch (same order as Topology::edges()); empty means all on.
  std::vector<bool> edge_enabled;

  static SystemParams from_mhz(double detuning_mhz, double coupling_mhz) {
    return SystemParams{mhz_to_rad_per_ns(detuning_mhz), mhz_to_rad_per_ns(coupling_mhz), {}};
  }

  bool edge_on(size_t index) const { return edge_enabled.empty() || edge_enabled.at(index); }
  void validate(const Topology& topology) const;
};

/// T_Delta = pi / |Delta|.
double half_beat_time(const SystemParams& params);
/// Shortest matched gate time T_M = 2 pi / |Delta|.
double matched_gate_time(const SystemParams& params);

/// No suppression control. The X drive is a sine envelope, or, when
/// `segmented_drive_segments` > 0, the zero-width segmented drive used as the
/// reference for decoupling comparisons.
struct Cd {
  int segmented_drive_segments = 0;
};

/// Sinusoidal Z modulation of the hub qubit.
struct Fm {
  int cycles = 4;
  double gamma = 0.0;
};

/// Finite-width Z pulse train on the hub qubit at s tau, s = 1..S per gate.
struct Dd {
  int segments = 4;
  double width = 0.0;

  /// Width tau/4, the default for all shipped experiments.
  static Dd with_default_width(int segments, double gate_time) {
    return Dd{segments, gate_time / segments / 4.0};
  }
};

using ControlScheme = std::variant<Cd, Fm, Dd>;

std::string scheme_name(const ControlScheme& scheme);

enum class GateKind { Idle, X, ParallelXX };

struct GateSpec {
  GateKind kind = GateKind::Idle;
  int target = 1;  // X gates only
  double duration = 20.0;

  static GateSpec idle(double duration) { return {GateKind::Idle, 1, duration}; }
  static GateSpec x(int target, double duration) { return {GateKind::X, target, duration}; }
  static GateSpec parallel_xx(double duration) { return {GateKind::ParallelXX, 1, duration}; }
};

std::string gate_name(const GateSpec& gate);

enum class FmPlacement { NeighborSite, SingleSite };

/// Single-site when the X target is the modulated hub qubit.
FmPlacement fm_placement(const GateSpec& gate, const Topology& topology);

/// Frame in which FM dynamics are integrated. Both give the same gate propagator.
enum class FmFrame { Modulated, Operation };

/// Sum over edges of J (e^{i Delta_j t} s_j^- s_c^+ + h.c.) in the operation frame.
Operator xy_interaction_operation_frame(const SystemParams& params, const Topology& topology,
                                        double t);

/// Edge phases shifted by 2 alpha(t) of the hub modulation.
Operator xy_interaction_modulated_frame(const SystemParams& params, const Topology& topology,
                                        const FmZModulation& fm, double t);

/// Assembled t -> H(t). Times are absolute along a train of identical gates:
/// gate k occupies [kT, (k+1)T] and drives run on the gate-local clock.
class Hamiltonian {
 public:
  Operator operator()(double t) const;

  Eigen::Index dimension() const { return dimension_; }
  double gate_time() const { return gate_time_; }
  /// Offset of the evaluation time past the gate boundary (w/2 for DD, else 0).
  double evaluation_offset() const { return evaluation_offset_; }
  /// True when H(t + T) == H(t), so every gate window has the same propagator.
  bool gate_periodic() const { return gate_periodic_; }
  HamiltonianFn as_function() const {
    return [self = *this](double t) { return self(t); };
  }

 private:
  friend Hamiltonian assemble_hamiltonian(const SystemParams&, const Topology&,
                                          const ControlScheme&, const GateSpec&, FmFrame);

  struct ExchangeTerm {
    Operator lowering_raising;  // s_j^- s_c^+
    double detuning = 0.0;
  };
  struct LocalTerm {
    Operator op;
    std::function<double(double)> coefficient;  // takes absolute time
  };

  Eigen::Index dimension_ = 0;
  double gate_time_ = 0.0;
  double evaluation_offset_ = 0.0;
  bool gate_periodic_ = false;
  double coupling_ = 0.0;
  std::vector<ExchangeTerm> exchange_;
  std::function<double(double)> extra_phase_;  // 2 alpha(t) in the modulated frame
  std::vector<LocalTerm> local_;
};

Hamiltonian assemble_hamiltonian(const SystemParams& params, const Topology& topology,
                                 const ControlScheme& scheme, const GateSpec& gate,
                                 FmFrame fm_frame = FmFrame::Modulated);

/// Ideal gate on the full register, raised to `repetitions`.
Operator target_unitary(const GateSpec& gate, const Topology& topology, int repetitions = 1);

}  // namespace xtalk
