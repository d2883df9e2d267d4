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

#include <doctest.h>

#include <numbers>

#include "xtalk/experiments.hpp"
#include "xtalk/hamiltonian.hpp"

using namespace xtalk;

namespace {

constexpr double kPi = std::numbers::pi;
const SystemParams kParams = SystemParams::from_mhz(50.0, 5.0);

Operator run(const Hamiltonian& h, double t0, double t1, double step) {
  return propagate(h.as_function(), TimeGrid::covering(t0, t1, step));
}

// exp(-i H_lab T) back-rotated by the bare qubit evolution.
Operator lab_frame_oracle(const SystemParams& p, double T) {
  const double w1 = mhz_to_rad_per_ns(5050.0);
  const double w2 = w1 - p.detuning;
  const Operator h0 = -0.5 * w1 * embed(pauli::z(), 1, 2) - 0.5 * w2 * embed(pauli::z(), 2, 2);
  const Operator hxy = p.coupling * (embed_pair(pauli::plus(), 1, pauli::minus(), 2, 2) +
                                     embed_pair(pauli::minus(), 1, pauli::plus(), 2, 2));
  return matrix_exp_skew_hermitian<double>(h0, -T) * matrix_exp_skew_hermitian<double>(Operator(h0 + hxy), T);
}

}  // namespace

TEST_CASE("topologies") {
  CHECK(Topology::pair().dimension() == 4);
  CHECK(Topology::five_qubit_star().dimension() == 32);
  CHECK(Topology::five_qubit_star().edges().size() == 4);
  for (const auto& e : Topology::five_qubit_star().edges()) CHECK(e.center == 2);
}

TEST_CASE("gate times") {
  CHECK(half_beat_time(kParams) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(matched_gate_time(kParams) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(matched_gate_time(SystemParams::from_mhz(-50.0, 5.0)) == doctest::Approx(20.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SystemParams::from_mhz(0.0, 5.0).validate(Topology::pair()), std::invalid_argument);
  CHECK_THROWS_AS(SystemParams::from_mhz(50.0, -1.0).validate(Topology::pair()), std::invalid_argument);
  SystemParams p = kParams;
  p.edge_enabled = {true, false};
  CHECK_THROWS_AS(p.validate(Topology::pair()), std::invalid_argument);
}

TEST_CASE("exchange term couples only the single-excitation states") {
  const Operator h = xy_interaction_operation_frame(kParams, Topology::pair(), 3.7);
  CHECK(hermiticity_defect(h) < 1e-15);
  CHECK(h(0, 0) == Complex(0.0));
  CHECK(h(3, 3) == Complex(0.0));
  CHECK(std::abs(h(1, 2)) == doctest::Approx(kParams.coupling));
  // sigma_1^- sigma_2^+ = |10><01| carries e^{i Delta t}
  CHECK(std::arg(h(2, 1)) == doctest::Approx(std::remainder(kParams.detuning * 3.7, 2.0 * kPi)));
}

TEST_CASE("modulated frame at gamma = 0 is the operation frame") {
  const FmZModulation fm{0.0, 4, 20.0};
  for (double t : {0.0, 4.1, 19.9}) {
    CHECK(max_abs(xy_interaction_modulated_frame(kParams, Topology::five_qubit_star(), fm, t) -
                  xy_interaction_operation_frame(kParams, Topology::five_qubit_star(), t)) < 1e-15);
  }
}

TEST_CASE("assembled Hamiltonians are Hermitian") {
  const double T = 20.0;
  const std::vector<ControlScheme> schemes{Cd{}, Cd{4}, Fm{4, 1.3}, Dd::with_default_width(4, T)};
  const std::vector<GateSpec> gates{GateSpec::idle(T), GateSpec::x(1, T), GateSpec::x(2, T), GateSpec::parallel_xx(T)};
  for (const auto& s : schemes) {
    for (const auto& g : gates) {
      for (auto frame : {FmFrame::Modulated, FmFrame::Operation}) {
        const auto h = assemble_hamiltonian(kParams, Topology::pair(), s, g, frame);
        for (double t : {0.01, 2.5, 5.0, 9.99, 17.3, 25.2}) CHECK(hermiticity_defect(h(t)) < 1e-14);
      }
    }
  }
}

TEST_CASE("unsupported combinations are rejected") {
  const double T = 20.0;
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::five_qubit_star(), Cd{}, GateSpec::parallel_xx(T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::x(3, T)), std::invalid_argument);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Dd{3, 1.0}, GateSpec::idle(T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Dd{4, 5.0}, GateSpec::idle(T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Fm{0, 1.0}, GateSpec::idle(T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Fm{4, -1.0}, GateSpec::idle(T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Cd{3}, GateSpec::x(1, T)),
                  UnsupportedCombination);
  CHECK_THROWS_AS(assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(0.0)), std::invalid_argument);
}

TEST_CASE("names") {
  CHECK(scheme_name(Cd{}) == "CD");
  CHECK(scheme_name(Fm{6, 1.0}) == "FM N=6");
  CHECK(scheme_name(Dd{4, 1.0}) == "DD Z-4");
  CHECK(gate_name(GateSpec::x(2, 20.0)) == "X2");
  CHECK(fm_placement(GateSpec::x(2, 20.0), Topology::pair()) == FmPlacement::SingleSite);
  CHECK(fm_placement(GateSpec::x(1, 20.0), Topology::pair()) == FmPlacement::NeighborSite);
}

TEST_CASE("periodicity flag") {
  CHECK(assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(20.0)).gate_periodic());
  CHECK(assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(40.0)).gate_periodic());
  CHECK_FALSE(assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(30.0)).gate_periodic());
  const auto h = assemble_hamiltonian(kParams, Topology::pair(), Dd::with_default_width(4, 20.0), GateSpec::x(1, 20.0));
  CHECK(h.evaluation_offset() == doctest::Approx(0.625));
  for (double t : {0.7, 4.4, 5.1, 13.0}) CHECK(max_abs(h(t) - h(t + 20.0)) < 1e-12);
}

TEST_CASE("target unitary") {
  const Operator x1 = target_unitary(GateSpec::x(1, 20.0), Topology::pair());
  CHECK(max_abs(x1 - Complex(0, -1) * kron(pauli::x(), pauli::identity())) == 0.0);
  CHECK(max_abs(target_unitary(GateSpec::x(1, 20.0), Topology::pair(), 2) + Operator::Identity(4, 4)) < 1e-15);
  CHECK(max_abs(target_unitary(GateSpec::idle(20.0), Topology::five_qubit_star(), 7) - Operator::Identity(32, 32)) == 0.0);
  const Operator xx = target_unitary(GateSpec::parallel_xx(20.0), Topology::pair());
  CHECK(max_abs(xx + kron(pauli::x(), pauli::x())) < 1e-15);
}

TEST_CASE("operation frame matches the lab frame oracle") {
  for (double T : {20.0, 13.7, 30.0}) {
    const auto h = assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(T));
    CHECK(max_abs(run(h, 0.0, T, 0.002) - lab_frame_oracle(kParams, T)) < 1e-8);
  }
}

TEST_CASE("FM modulated and operation frames give the same propagator") {
  const double T = 20.0;
  for (const auto& gate : {GateSpec::x(2, T), GateSpec::x(1, T), GateSpec::idle(T)}) {
    const auto a = run(assemble_hamiltonian(kParams, Topology::pair(), Fm{4, 1.5}, gate, FmFrame::Modulated), 0, T, 1e-4);
    const auto b = run(assemble_hamiltonian(kParams, Topology::pair(), Fm{4, 1.5}, gate, FmFrame::Operation), 0, T, 1e-4);
    CHECK(max_abs(a - b) < 1e-8);
  }
}

TEST_CASE("star with one active edge reduces to the pair") {
  const double T = 20.0;
  SystemParams star_params = kParams;
  star_params.edge_enabled = {true, false, false, false};
  const std::vector<std::pair<ControlScheme, GateSpec>> cases{
      {Cd{}, GateSpec::x(1, T)}, {Fm{4, 1.3}, GateSpec::x(2, T)}, {Dd::with_default_width(4, T), GateSpec::idle(T)}};
  for (const auto& [scheme, gate] : cases) {
    const auto pair = gate_train(assemble_hamiltonian(kParams, Topology::pair(), scheme, gate), 1, 0.004).front();
    const auto star =
        gate_train(assemble_hamiltonian(star_params, Topology::five_qubit_star(), scheme, gate), 1, 0.004).front();
    CHECK(max_abs(star - kron(pair, Operator::Identity(8, 8))) < 1e-10);
  }
}

TEST_CASE("narrow Z pulses approach ideal instantaneous flips") {
  const double T = 20.0, tau = 5.0, step = 0.0005;
  const Operator flip = matrix_exp_skew_hermitian<double>(Operator(0.5 * kPi * embed(pauli::z(), 2, 2)), 1.0);
  const auto cd = assemble_hamiltonian(kParams, Topology::pair(), Cd{}, GateSpec::idle(T));
  Operator ideal = Operator::Identity(4, 4);
  for (int s = 0; s < 4; ++s) ideal = flip * run(cd, s * tau, (s + 1) * tau, step) * ideal;
  double previous = 1.0;
  for (int div : {16, 32, 64}) {
    const auto h = assemble_hamiltonian(kParams, Topology::pair(), Dd{4, tau / div}, GateSpec::idle(T));
    const double distance = gate_infidelity(gate_train(h, 1, step).front(), ideal);
    CHECK(distance < previous / 3.0);
    previous = distance;
  }
  CHECK(previous < 1e-5);
}
