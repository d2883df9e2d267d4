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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace xtalk {

/// Dense complex square matrix; carries Hamiltonians (rad/ns), propagators and targets.
template <typename Scalar>
using OperatorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Operator = OperatorT<double>;
using Complex = std::complex<double>;

/// Cyclic MHz to angular rad/ns.
inline constexpr double kMhzToRadPerNs = 2.0 * std::numbers::pi * 1e-3;

constexpr double mhz_to_rad_per_ns(double mhz) { return mhz * kMhzToRadPerNs; }
constexpr double rad_per_ns_to_mhz(double w) { return w / kMhzToRadPerNs; }

namespace pauli {

template <typename Scalar = double>
OperatorT<Scalar> identity() {
  return OperatorT<Scalar>::Identity(2, 2);
}

template <typename Scalar = double>
OperatorT<Scalar> x() {
  OperatorT<Scalar> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
OperatorT<Scalar> y() {
  using C = std::complex<Scalar>;
  OperatorT<Scalar> m(2, 2);
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Scalar = double>
OperatorT<Scalar> z() {
  OperatorT<Scalar> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// sigma^+ = (sigma^x + i sigma^y)/2 = |0><1|
template <typename Scalar = double>
OperatorT<Scalar> plus() {
  OperatorT<Scalar> m = OperatorT<Scalar>::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

template <typename Scalar = double>
OperatorT<Scalar> minus() {
  OperatorT<Scalar> m = OperatorT<Scalar>::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

}  // namespace pauli

/// Kronecker product with the left operand as the most significant factor.
template <typename DerivedA, typename DerivedB>
OperatorT<typename Eigen::NumTraits<typename DerivedA::Scalar>::Real> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename Eigen::NumTraits<typename DerivedA::Scalar>::Real;
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw std::invalid_argument("kron: operands must be square");
  }
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  OperatorT<Real> out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    }
  }
  return out;
}

/// Places a single-qubit operator on `qubit` (1-based, qubit 1 leftmost) of an n-qubit register.
template <typename Scalar = double>
OperatorT<Scalar> embed(const OperatorT<Scalar>& op, int qubit, int num_qubits) {
  if (qubit < 1 || qubit > num_qubits) {
    throw std::invalid_argument("embed: qubit index out of range");
  }
  OperatorT<Scalar> out = OperatorT<Scalar>::Identity(1, 1);
  for (int q = 1; q <= num_qubits; ++q) {
    out = kron(out, q == qubit ? op : pauli::identity<Scalar>());
  }
  return out;
}

/// Two-qubit product op_a (on qa) * op_b (on qb), qa != qb.
template <typename Scalar = double>
OperatorT<Scalar> embed_pair(const OperatorT<Scalar>& op_a, int qa, const OperatorT<Scalar>& op_b,
                             int qb, int num_qubits) {
  if (qa == qb) throw std::invalid_argument("embed_pair: qubits must differ");
  return embed(op_a, qa, num_qubits) * embed(op_b, qb, num_qubits);
}

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max|H - H^dagger| relative to max|H| (0 for the zero matrix).
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  const double scale = max_abs(h);
  if (scale == 0.0) return 0.0;
  return max_abs(h - h.adjoint()) / scale;
}

template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const auto n = u.rows();
  return max_abs(u.adjoint() * u - OperatorT<Real>::Identity(n, n));
}

inline constexpr double kHermitianTolerance = 1e-12;

/// Polar factor of u: the unitary closest to u in Frobenius norm.
template <typename Scalar>
OperatorT<Scalar> nearest_unitary(const OperatorT<Scalar>& u) {
  Eigen::JacobiSVD<OperatorT<Scalar>> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace detail {

// Connected components of the nonzero pattern of a Hermitian matrix. Each
// component is an invariant block, so exponentiating blocks separately is exact.
template <typename Scalar>
std::vector<std::vector<Eigen::Index>> hermitian_blocks(const OperatorT<Scalar>& h) {
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> label(static_cast<size_t>(n), -1);
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index seed = 0; seed < n; ++seed) {
    if (label[seed] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(blocks.size());
    blocks.emplace_back();
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      blocks.back().push_back(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (label[j] < 0 && (h(i, j) != std::complex<Scalar>(0) || h(j, i) != std::complex<Scalar>(0))) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return blocks;
}

}  // namespace detail

/// exp(-i h dt) for Hermitian h, via eigendecomposition of each invariant block.
template <typename Scalar>
OperatorT<Scalar> matrix_exp_skew_hermitian(const OperatorT<Scalar>& h, Scalar dt) {
  using C = std::complex<Scalar>;
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix_exp_skew_hermitian: not square");
  if (hermiticity_defect(h) > kHermitianTolerance) {
    throw std::invalid_argument("matrix_exp_skew_hermitian: operator is not Hermitian");
  }
  const Eigen::Index n = h.rows();
  OperatorT<Scalar> out = OperatorT<Scalar>::Zero(n, n);
  for (const auto& block : detail::hermitian_blocks(h)) {
    const auto m = static_cast<Eigen::Index>(block.size());
    if (m == 1) {
      const Eigen::Index k = block[0];
      out(k, k) = std::exp(C(0, -std::real(h(k, k)) * dt));
      continue;
    }
    OperatorT<Scalar> sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = h(block[a], block[b]);
    }
    Eigen::SelfAdjointEigenSolver<OperatorT<Scalar>> es(sub);
    const auto& v = es.eigenvectors();
    Eigen::Matrix<C, Eigen::Dynamic, 1> phases(m);
    for (Eigen::Index k = 0; k < m; ++k) phases(k) = std::exp(C(0, -es.eigenvalues()(k) * dt));
    const OperatorT<Scalar> ub = v * phases.asDiagonal() * v.adjoint();
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) out(block[a], block[b]) = ub(a, b);
    }
  }
  return out;
}

/// Uniform time grid; the step always divides the span an integer number of times.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;

  /// Finest grid over [t_start, t_end] whose step does not exceed max_step.
  static TimeGrid covering(double t_start, double t_end, double max_step) {
    if (!(max_step > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: empty interval");
    const double span = t_end - t_start;
    const auto count = static_cast<std::int64_t>(std::ceil(span / max_step - 1e-9));
    return TimeGrid{t_start, t_end, span / static_cast<double>(std::max<std::int64_t>(count, 1))};
  }

  std::int64_t count() const {
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
    const double ratio = (t_end - t_start) / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
      throw std::invalid_argument("TimeGrid: span is not an integer number of steps");
    }
    return static_cast<std::int64_t>(rounded);
  }
};

template <typename Scalar>
using HamiltonianFnT = std::function<OperatorT<Scalar>(Scalar)>;
using HamiltonianFn = HamiltonianFnT<double>;

/// Steps between projections of the running product back onto the unitary group.
inline constexpr std::int64_t kReunitarizeInterval = 1024;

/// Time-ordered propagator U(t_end, t_start) from midpoint-sampled step exponentials.
/// Rounding drift in the running product is removed every kReunitarizeInterval steps.
template <typename Scalar>
OperatorT<Scalar> propagate(const HamiltonianFnT<Scalar>& h_of_t, const TimeGrid& grid) {
  const std::int64_t steps = grid.count();
  const Scalar dt = (grid.t_end - grid.t_start) / static_cast<Scalar>(steps);
  OperatorT<Scalar> u;
  Eigen::Index dim = -1;
  for (std::int64_t k = 0; k < steps; ++k) {
    const Scalar t = grid.t_start + (static_cast<Scalar>(k) + Scalar(0.5)) * dt;
    const OperatorT<Scalar> h = h_of_t(t);
    if (h.rows() != h.cols()) throw std::invalid_argument("propagate: Hamiltonian sample is not square");
    if (dim < 0) {
      dim = h.rows();
      u = OperatorT<Scalar>::Identity(dim, dim);
    } else if (h.rows() != dim) {
      throw std::invalid_argument("propagate: Hamiltonian dimension changed between samples");
    }
    if (hermiticity_defect(h) > kHermitianTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "propagate: Hamiltonian is not Hermitian at t = " << t << " ns";
      throw std::invalid_argument(msg.str());
    }
    u = matrix_exp_skew_hermitian<Scalar>(h, dt) * u;
    if ((k + 1) % kReunitarizeInterval == 0) u = nearest_unitary(u);
  }
  return nearest_unitary(u);
}

inline Operator propagate(const HamiltonianFn& h_of_t, const TimeGrid& grid) {
  return propagate<double>(h_of_t, grid);
}

}  // namespace xtalk
