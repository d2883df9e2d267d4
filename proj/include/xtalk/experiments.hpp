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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xtalk/core.hpp"
#include "xtalk/gamma_optimizer.hpp"
#include "xtalk/hamiltonian.hpp"

namespace xtalk {

struct SimulationConfig {
  double step = 0.002;  // ns
  int threads = 1;
};

/// |Tr(U_gate^dagger U_ideal)| / |Tr(U_ideal^dagger U_ideal)|; blind to global phase.
double gate_fidelity(const Operator& u_gate, const Operator& u_ideal);

/// 1 - F. For unitary arguments it is evaluated from the eigenphases of
/// U_ideal^dagger U_gate, which keeps full relative precision down to ~1e-16.
double gate_infidelity(const Operator& u_gate, const Operator& u_ideal);

struct FidelityPoint {
  double abscissa = 0.0;  // J in cyclic MHz, or time in ns
  double infidelity = 0.0;
};

struct FidelitySeries {
  std::string label;
  std::vector<FidelityPoint> points;
};

/// Propagators accumulated after each of `count` consecutive gates, each
/// evaluated at k T + evaluation_offset. Identical gate windows are integrated once.
std::vector<Operator> gate_train(const Hamiltonian& h, int count, double step);

double run_single_gate(const SystemParams& params, const Topology& topology,
                       const ControlScheme& scheme, const GateSpec& gate,
                       const SimulationConfig& sim = {});

/// Infidelity after each gate against the k-fold target; X-type sequences
/// report odd counts only. Abscissa is the evaluation time.
FidelitySeries run_sequence(const SystemParams& params, const Topology& topology,
                            const ControlScheme& scheme, const GateSpec& gate, int count,
                            const SimulationConfig& sim = {});

/// A scheme as used in a comparison. FM idle protocols may request corner
/// averaging, which reports F averaged over gamma +- corner_step.
struct Protocol {
  std::string label;
  ControlScheme scheme;
  std::optional<double> corner_step;

  static Protocol plain(ControlScheme scheme);
  static Protocol fm_corner_averaged(int cycles, const GammaScan& scan);
};

double run_protocol(const SystemParams& params, const Topology& topology, const Protocol& protocol,
                    const GateSpec& gate, const SimulationConfig& sim = {});

FidelitySeries run_protocol_sequence(const SystemParams& params, const Topology& topology,
                                     const Protocol& protocol, const GateSpec& gate, int count,
                                     const SimulationConfig& sim = {});

/// One single-gate series per protocol over J (cyclic MHz); cells run concurrently.
std::vector<FidelitySeries> sweep_j(const SystemParams& params_template, const Topology& topology,
                                    std::span<const Protocol> protocols, const GateSpec& gate,
                                    std::span<const double> j_mhz, const SimulationConfig& sim = {});

/// log10(IF_reference / IF_scheme).
double orders_of_improvement(double reference_infidelity, double scheme_infidelity);

struct NonMatchedStudy {
  double gate_time = 0.0;
  std::vector<int> cycles;
  std::vector<GammaScan> scans;           // first-order functional, per N
  std::vector<FidelitySeries> single;     // CD then FM per N, over J
  std::vector<FidelitySeries> sequence;   // CD then FM per N, at the reference J
};

/// FM X1 gates at a gate time that is not an even multiple of T_Delta, with
/// gamma chosen by the first-order functional.
NonMatchedStudy non_matched_study(const SystemParams& params, double gate_time,
                                  const std::vector<int>& cycles, std::span<const double> j_mhz,
                                  int sequence_length, const SimulationConfig& sim = {},
                                  const GammaGrid& grid = {});

}  // namespace xtalk
