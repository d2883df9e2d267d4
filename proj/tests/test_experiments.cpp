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

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "xtalk/experiments.hpp"

using namespace xtalk;

namespace {

const SystemParams kParams = SystemParams::from_mhz(50.0, 5.0);
const SimulationConfig kSim{0.002, 1};

double cd_idle_closed_form(const SystemParams& p, double T) {
  const double omega = std::sqrt(p.detuning * p.detuning / 4.0 + p.coupling * p.coupling);
  const double inner = std::cos(p.detuning * T / 2.0) * std::cos(omega * T) +
                       std::sin(p.detuning * T / 2.0) * p.detuning / (2.0 * omega) * std::sin(omega * T);
  return 1.0 - std::abs(2.0 + 2.0 * inner) / 4.0;
}

}  // namespace

TEST_CASE("gate fidelity") {
  const Operator x1 = kron(pauli::x(), pauli::identity());
  CHECK(gate_fidelity(x1, x1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gate_fidelity(std::polar(1.0, 1.1) * x1, x1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gate_fidelity(Operator::Identity(4, 4), x1) == 0.0);
  CHECK_THROWS_AS(gate_fidelity(Operator::Identity(2, 2), x1), std::invalid_argument);
}

TEST_CASE("eigenphase infidelity equals 1 - F for unitary arguments") {
  std::srand(11);
  for (int dim : {2, 4, 32}) {
    const Operator a = Operator::Random(dim, dim);
    const Operator h = 0.5 * (a + a.adjoint());
    for (double scale : {1e-1, 1e-3}) {
      const Operator u = (Complex(0.0, -scale) * h).exp();
      const Operator v = Operator::Identity(dim, dim);
      CHECK(gate_infidelity(u, v) == doctest::Approx(1.0 - gate_fidelity(u, v)).epsilon(1e-9));
      CHECK(std::abs(gate_infidelity(std::polar(1.0, 0.4) * u, v) - gate_infidelity(u, v)) < 1e-12);
    }
  }
  // Non-unitary input falls back to the trace formula.
  CHECK(gate_infidelity(Operator::Zero(2, 2), pauli::x()) == 1.0);
}

TEST_CASE("CD idle matches the static closed form") {
  for (double j : {1.0, 5.0, 10.0}) {
    for (double delta : {50.0, -70.0}) {
      for (double T : {7.3, 10.0, 20.0, 33.3}) {
        const auto p = SystemParams::from_mhz(delta, j);
        CHECK(std::abs(run_single_gate(p, Topology::pair(), Cd{}, GateSpec::idle(T), kSim) -
                       cd_idle_closed_form(p, T)) < 1e-8);
      }
    }
  }
}

TEST_CASE("CD idle infidelity is symmetric in the sign of Delta") {
  for (double T : {7.3, 20.0}) {
    CHECK(run_single_gate(SystemParams::from_mhz(50.0, 5.0), Topology::pair(), Cd{}, GateSpec::idle(T), kSim) ==
          doctest::Approx(run_single_gate(SystemParams::from_mhz(-50.0, 5.0), Topology::pair(), Cd{},
                                          GateSpec::idle(T), kSim))
              .epsilon(1e-9));
  }
}

TEST_CASE("FM at gamma = 0 reproduces CD") {
  for (const auto& gate : {GateSpec::idle(20.0), GateSpec::x(1, 20.0), GateSpec::x(2, 20.0), GateSpec::parallel_xx(20.0)}) {
    const double cd = run_single_gate(kParams, Topology::pair(), Cd{}, gate, kSim);
    const double fm = run_single_gate(kParams, Topology::pair(), Fm{4, 0.0}, gate, kSim);
    CHECK(std::abs(cd - fm) < 1e-10);
  }
  CHECK(run_single_gate(kParams, Topology::pair(), Cd{4}, GateSpec::idle(20.0), kSim) ==
        run_single_gate(kParams, Topology::pair(), Cd{}, GateSpec::idle(20.0), kSim));
}

TEST_CASE("zero coupling gives exact target evolution") {
  const auto p = SystemParams::from_mhz(50.0, 0.0);
  const double T = 20.0;
  for (const auto& gate : {GateSpec::idle(T), GateSpec::x(1, T), GateSpec::x(2, T), GateSpec::parallel_xx(T)}) {
    CHECK(run_single_gate(p, Topology::pair(), Cd{}, gate, kSim) < 1e-12);
    CHECK(run_single_gate(p, Topology::pair(), Fm{4, 1.3}, gate, kSim) < 1e-12);
    // Cosine Z pulses need a finer step for their area to resolve below 1e-12.
    CHECK(run_single_gate(p, Topology::pair(), Dd::with_default_width(4, T), gate, {0.0005, 1}) < 1e-12);
  }
}

TEST_CASE("single-gate sequence is the single gate") {
  const double T = 20.0;
  const std::vector<std::pair<ControlScheme, GateSpec>> cases{
      {Cd{}, GateSpec::idle(T)}, {Fm{4, 1.3}, GateSpec::x(1, T)}, {Dd::with_default_width(4, T), GateSpec::x(1, T)}};
  for (const auto& [scheme, gate] : cases) {
    const auto seq = run_sequence(kParams, Topology::pair(), scheme, gate, 1, kSim);
    REQUIRE(seq.points.size() == 1);
    CHECK(seq.points[0].infidelity == run_single_gate(kParams, Topology::pair(), scheme, gate, kSim));
  }
}

TEST_CASE("sequence bookkeeping") {
  const double T = 20.0;
  const auto idle = run_sequence(kParams, Topology::pair(), Cd{}, GateSpec::idle(T), 4, kSim);
  CHECK(idle.points.size() == 4);
  CHECK(idle.points[3].abscissa == doctest::Approx(80.0));
  const auto x = run_sequence(kParams, Topology::pair(), Dd::with_default_width(4, T), GateSpec::x(1, T), 5, kSim);
  CHECK(x.points.size() == 3);
  CHECK(x.points[2].abscissa == doctest::Approx(100.625));
  CHECK_THROWS_AS(run_sequence(kParams, Topology::pair(), Cd{}, GateSpec::x(1, T), 4, kSim), std::invalid_argument);
  CHECK_THROWS_AS(run_sequence(kParams, Topology::pair(), Cd{}, GateSpec::idle(T), 0, kSim), std::invalid_argument);
}

TEST_CASE("cached gate windows equal direct propagation") {
  for (double T : {20.0, 30.0}) {
    const auto h = assemble_hamiltonian(kParams, Topology::pair(), Fm{4, 1.1}, GateSpec::x(1, T));
    const auto train = gate_train(h, 3, 0.002);
    const auto direct = propagate(h.as_function(), TimeGrid::covering(0.0, 3.0 * T, 0.002));
    CHECK(max_abs(train.back() - direct) < 1e-11);
  }
  const auto dd = assemble_hamiltonian(kParams, Topology::pair(), Dd::with_default_width(4, 20.0), GateSpec::idle(20.0));
  const auto train = gate_train(dd, 2, 0.002);
  const Operator direct = propagate(dd.as_function(), TimeGrid::covering(0.625, 40.625, 0.002)) *
                      propagate(dd.as_function(), TimeGrid::covering(0.0, 0.625, 0.002));
  CHECK(max_abs(train.back() - direct) < 1e-11);
}

TEST_CASE("corner-averaged protocols") {
  GammaScan scan = scan_gamma(ErrorFunctional::Fm2Idle, kParams, 4, 20.0);
  const auto p = Protocol::fm_corner_averaged(4, scan);
  CHECK(p.label == "FM N=4");
  const double d = scan.grid_step, g = scan.gamma_opt();
  const double up = run_single_gate(kParams, Topology::pair(), Fm{4, g + d}, GateSpec::idle(20.0), kSim);
  const double down = run_single_gate(kParams, Topology::pair(), Fm{4, g - d}, GateSpec::idle(20.0), kSim);
  CHECK(run_protocol(kParams, Topology::pair(), p, GateSpec::idle(20.0), kSim) ==
        doctest::Approx(0.5 * (up + down)).epsilon(1e-9));
  const auto seq = run_protocol_sequence(kParams, Topology::pair(), p, GateSpec::idle(20.0), 2, kSim);
  CHECK(seq.points[0].infidelity == doctest::Approx(0.5 * (up + down)).epsilon(1e-9));
  Protocol bad{"CD", Cd{}, 0.1};
  CHECK_THROWS_AS(run_protocol(kParams, Topology::pair(), bad, GateSpec::idle(20.0), kSim), std::invalid_argument);
}

TEST_CASE("J sweeps are deterministic under threading") {
  const std::vector<Protocol> protocols{Protocol::plain(Cd{}), Protocol::plain(Fm{4, 1.5}),
                                        Protocol::plain(Dd::with_default_width(4, 20.0))};
  const std::vector<double> js{1.0, 4.0, 7.0};
  const auto serial = sweep_j(kParams, Topology::pair(), protocols, GateSpec::x(1, 20.0), js, {0.004, 1});
  const auto threaded = sweep_j(kParams, Topology::pair(), protocols, GateSpec::x(1, 20.0), js, {0.004, 3});
  REQUIRE(serial.size() == 3);
  for (size_t p = 0; p < serial.size(); ++p) {
    CHECK(serial[p].label == threaded[p].label);
    for (size_t k = 0; k < js.size(); ++k) {
      CHECK(serial[p].points[k].abscissa == js[k]);
      CHECK(serial[p].points[k].infidelity == threaded[p].points[k].infidelity);
      CHECK(serial[p].points[k].infidelity >= 0.0);
      CHECK(serial[p].points[k].infidelity <= 1.0);
    }
  }
  const std::vector<double> empty;
  CHECK_THROWS_AS(sweep_j(kParams, Topology::pair(), protocols, GateSpec::x(1, 20.0), empty, kSim), std::invalid_argument);
  const std::vector<double> negative{-1.0};
  CHECK_THROWS_AS(sweep_j(kParams, Topology::pair(), protocols, GateSpec::x(1, 20.0), negative, kSim),
                  std::invalid_argument);
}

TEST_CASE("infidelity grows with J for CD") {
  double previous = 0.0;
  for (double j : {1.0, 2.0, 4.0, 8.0}) {
    const double v = run_single_gate(SystemParams::from_mhz(50.0, j), Topology::pair(), Cd{}, GateSpec::idle(20.0), kSim);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("step refinement is stable") {
  const std::vector<std::pair<ControlScheme, GateSpec>> cases{{Fm{4, 1.53}, GateSpec::x(1, 20.0)},
                                                              {Dd::with_default_width(4, 20.0), GateSpec::idle(20.0)}};
  for (const auto& [scheme, gate] : cases) {
    const double a = run_single_gate(kParams, Topology::pair(), scheme, gate, {0.002, 1});
    const double b = run_single_gate(kParams, Topology::pair(), scheme, gate, {0.001, 1});
    CHECK(std::abs(a - b) < 1e-2 * b);
  }
}

TEST_CASE("orders of improvement") {
  CHECK(orders_of_improvement(1e-3, 1e-7) == doctest::Approx(4.0));
  CHECK(orders_of_improvement(1e-3, 1e-3) == 0.0);
}

TEST_CASE("non-matched study needs a non-matched gate time") {
  const std::vector<double> js{5.0};
  CHECK_THROWS_AS(non_matched_study(kParams, 20.0, {4}, js, 3), std::invalid_argument);
}
