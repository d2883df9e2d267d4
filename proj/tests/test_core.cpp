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

#include <unsupported/Eigen/MatrixFunctions>

#include "xtalk/core.hpp"

using namespace xtalk;

namespace {

const Complex kI(0.0, 1.0);

Operator random_hermitian(int dim, unsigned seed) {
  std::srand(seed);
  Operator a = Operator::Random(dim, dim);
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("unit conversion") {
  CHECK(mhz_to_rad_per_ns(50.0) == doctest::Approx(0.3141592653589793).epsilon(1e-15));
  CHECK(rad_per_ns_to_mhz(mhz_to_rad_per_ns(5.0)) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("pauli algebra") {
  const Operator x = pauli::x(), y = pauli::y(), z = pauli::z();
  CHECK(max_abs(x * y - kI * z) < 1e-15);
  CHECK(max_abs(x * x - pauli::identity()) < 1e-15);
  CHECK(max_abs(pauli::plus() - 0.5 * (x + kI * y)) < 1e-15);
  CHECK(max_abs(pauli::minus() - pauli::plus().adjoint()) < 1e-15);
  CHECK(pauli::plus()(0, 1) == Complex(1.0));
}

TEST_CASE("kron puts the left factor on the most significant index") {
  const Operator k = kron(pauli::plus(), pauli::minus());
  // |0><1| (x) |1><0| = |01><10|
  CHECK(k(1, 2) == Complex(1.0));
  CHECK(max_abs(k) == doctest::Approx(1.0));
  CHECK((k.array() != Complex(0.0)).count() == 1);
}

TEST_CASE("embed") {
  const Operator z2 = embed(pauli::z(), 2, 3);
  CHECK(max_abs(z2 - kron(kron(pauli::identity(), pauli::z()), pauli::identity())) == 0.0);
  CHECK_THROWS_AS(embed(pauli::z(), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(pauli::z(), 4, 3), std::invalid_argument);
  const Operator pair = embed_pair(pauli::x(), 3, pauli::z(), 1, 3);
  CHECK(max_abs(pair - kron(kron(pauli::z(), pauli::identity()), pauli::x())) == 0.0);
}

TEST_CASE("matrix exponential agrees with the Pade oracle") {
  for (int dim : {2, 4, 8, 32}) {
    const Operator h = random_hermitian(dim, 7 + dim);
    const Operator oracle = (Complex(0.0, -0.37) * h).exp();
    CHECK(max_abs(matrix_exp_skew_hermitian<double>(h, 0.37) - oracle) < 1e-12);
  }
}

TEST_CASE("matrix exponential of a block-sparse operator") {
  Operator h = Operator::Zero(4, 4);
  h(0, 0) = 0.3;
  h(1, 2) = Complex(0.2, 0.1);
  h(2, 1) = std::conj(h(1, 2));
  h(3, 3) = -0.7;
  const Operator oracle = (Complex(0.0, -2.5) * h).exp();
  CHECK(max_abs(matrix_exp_skew_hermitian<double>(h, 2.5) - oracle) < 1e-14);
}

TEST_CASE("matrix exponential rejects non-Hermitian input") {
  Operator h = pauli::x();
  h(0, 1) = 2.0;
  CHECK_THROWS_AS(matrix_exp_skew_hermitian<double>(h, 1.0), std::invalid_argument);
}

TEST_CASE("float scalar instantiation") {
  const OperatorT<float> h = pauli::x<float>();
  const OperatorT<float> u = matrix_exp_skew_hermitian<float>(h, 0.5f);
  CHECK(unitarity_defect(u) < 1e-6);
}

TEST_CASE("nearest unitary") {
  const Operator u = matrix_exp_skew_hermitian(random_hermitian(8, 11), 0.7);
  CHECK(max_abs(nearest_unitary(u) - u) < 1e-13);
  const Operator perturbed = u + 1e-6 * random_hermitian(8, 12);
  const Operator w = nearest_unitary(perturbed);
  CHECK(unitarity_defect(w) < 1e-14);
  CHECK(max_abs(w - u) < 1e-5);
}

TEST_CASE("long propagation stays unitary") {
  const Operator a = random_hermitian(16, 13);
  const Operator b = random_hermitian(16, 14);
  const HamiltonianFn h = [&](double t) -> Operator { return a + std::cos(3.0 * t) * b; };
  CHECK(unitarity_defect(propagate(h, TimeGrid{0.0, 40.0, 0.002})) < 1e-13);
}

TEST_CASE("time grid") {
  const auto g = TimeGrid::covering(0.0, 20.0, 0.002);
  CHECK(g.count() == 10000);
  CHECK(TimeGrid::covering(0.0, 1.0, 0.3).count() == 4);
  CHECK_THROWS_AS(TimeGrid::covering(1.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::covering(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0.3}).count(), std::invalid_argument);
}

TEST_CASE("propagation of a constant Hamiltonian is exact") {
  const Operator h = random_hermitian(4, 3);
  const Operator u = propagate([&](double) { return h; }, TimeGrid::covering(0.0, 3.0, 0.1));
  CHECK(max_abs(u - (Complex(0.0, -3.0) * h).exp()) < 1e-12);
}

TEST_CASE("propagation composes over adjacent intervals") {
  const auto h = [](double t) -> Operator {
    return std::cos(t) * embed(pauli::x(), 1, 2) + std::sin(2.0 * t) * embed_pair(pauli::z(), 1, pauli::y(), 2, 2);
  };
  const Operator whole = propagate(h, TimeGrid::covering(0.0, 2.0, 0.01));
  const Operator split = propagate(h, TimeGrid::covering(1.0, 2.0, 0.01)) * propagate(h, TimeGrid::covering(0.0, 1.0, 0.01));
  CHECK(max_abs(whole - split) < 1e-13);
  CHECK(unitarity_defect(whole) < 1e-12);
}

TEST_CASE("midpoint integrator is second order") {
  const auto h = [](double t) -> Operator { return std::cos(3.0 * t) * pauli::x() + t * pauli::z(); };
  const Operator ref = propagate(h, TimeGrid::covering(0.0, 1.0, 1e-4));
  const double e1 = max_abs(propagate(h, TimeGrid::covering(0.0, 1.0, 0.02)) - ref);
  const double e2 = max_abs(propagate(h, TimeGrid::covering(0.0, 1.0, 0.01)) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("propagation rejects bad samples") {
  const auto grid = TimeGrid::covering(0.0, 1.0, 0.1);
  Operator bad = pauli::x();
  bad(0, 1) = 3.0;
  try {
    propagate([&](double) { return bad; }, grid);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("not Hermitian at t = 0.05") != std::string::npos);
  }
  CHECK_THROWS_AS(propagate([](double t) -> Operator { return t < 0.5 ? pauli::x() : Operator(embed(pauli::x(), 1, 2)); }, grid),
                  std::invalid_argument);
}
