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

#include "xtalk/magnus.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace xtalk {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

const GaussRule& cached_rule(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
  return it->second;
}

int round_up(int value, int multiple) { return (value + multiple - 1) / multiple * multiple; }

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  // Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  for (int k = 0; k < order; ++k) {
    rule.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    rule.weights.push_back(2.0 * v0 * v0);
  }
  return rule;
}

Complex integrate_composite(const ComplexFn& f, double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("integrate_composite: panels must be >= 1");
  const GaussRule& rule = cached_rule(order);
  const double h = (b - a) / panels;
  Complex total = 0.0;
  for (int m = 0; m < panels; ++m) {
    const double mid = a + (m + 0.5) * h;
    Complex panel = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    }
    total += 0.5 * h * panel;
  }
  return total;
}

Complex integrate_adaptive(const ComplexFn& f, double a, double b, int order, int initial_panels,
                           double rel_tol, double abs_scale) {
  int panels = std::max(initial_panels, 1);
  Complex previous = integrate_composite(f, a, b, panels, order);
  for (int round = 0; round < 16; ++round) {
    panels *= 2;
    const Complex current = integrate_composite(f, a, b, panels, order);
    if (std::abs(current - previous) <= rel_tol * std::max(std::abs(current), abs_scale)) {
      return current;
    }
    previous = current;
  }
  throw std::runtime_error("integrate_adaptive: no convergence");
}

Complex integrate_triangle(const ComplexFn& outer, const ComplexFn& inner, double T,
                           const QuadratureConfig& cfg, int align) {
  const int order = cfg.panel_order;
  const int panels = round_up(std::max(cfg.nodes_2d / order, 1), std::max(align, 1));
  const GaussRule& rule = cached_rule(order);
  const double h = T / panels;

  // Prefix sums of full-panel integrals of the inner function.
  std::vector<Complex> prefix(static_cast<size_t>(panels) + 1, Complex(0.0));
  for (int m = 0; m < panels; ++m) {
    const double mid = (m + 0.5) * h;
    Complex panel = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * inner(mid + 0.5 * h * rule.nodes[k]);
    }
    prefix[m + 1] = prefix[m] + 0.5 * h * panel;
  }

  Complex total = 0.0;
  for (int m = 0; m < panels; ++m) {
    const double left = m * h;
    const double mid = (m + 0.5) * h;
    Complex panel = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t1 = mid + 0.5 * h * rule.nodes[k];
      // Partial inner integral over [left, t1], same rule mapped onto the sub-panel.
      const double sub = t1 - left;
      Complex partial = 0.0;
      for (size_t j = 0; j < rule.nodes.size(); ++j) {
        partial += rule.weights[j] * inner(left + 0.5 * sub * (1.0 + rule.nodes[j]));
      }
      partial *= 0.5 * sub;
      panel += rule.weights[k] * outer(t1) * (prefix[m] + partial);
    }
    total += 0.5 * h * panel;
  }
  return total;
}

double fm_phase(const SystemParams& params, const FmZModulation& fm, double t) {
  return params.detuning * t + 2.0 * accumulated_phase(fm, t);
}

double epsilon_fm1(const SystemParams& params, const FmZModulation& fm, double T,
                   const QuadratureConfig& cfg) {
  const auto f = [&](double t) { return std::polar(1.0, fm_phase(params, fm, t)); };
  const int order = cfg.panel_order;
  const Complex integral =
      integrate_adaptive(f, 0.0, T, order, std::max(cfg.nodes_1d / order / 4, 1), 1e-13, 1e-3 * T);
  // |int e^{i phi}| == |int e^{-i phi}|, both coefficients contribute.
  return 2.0 * params.coupling / T * std::abs(integral);
}

double epsilon_fm2_idle(const SystemParams& params, const FmZModulation& fm, double T,
                        const QuadratureConfig& cfg) {
  // sin(phi1 - phi2) = Im[e^{i phi1} e^{-i phi2}]
  const auto outer = [&](double t) { return std::polar(1.0, fm_phase(params, fm, t)); };
  const auto inner = [&](double t) { return std::polar(1.0, -fm_phase(params, fm, t)); };
  const Complex integral = integrate_triangle(outer, inner, T, cfg);
  const double j = params.coupling;
  return j * j / T * std::abs(integral.imag());
}

double epsilon_fm2_x(const SystemParams& params, const FmZModulation& fm, double T,
                     const QuadratureConfig& cfg) {
  const auto drive = SineEnvelopeDrive::x_gate(T, 1);
  const auto omega = [&](double t) { return Complex(sample(drive, t)); };
  const auto phase = [&](double t) { return std::polar(1.0, fm_phase(params, fm, t)); };
  // Omega(t1) e^{i phi(t2)} - Omega(t2) e^{i phi(t1)}
  const Complex integral = integrate_triangle(omega, phase, T, cfg) - integrate_triangle(phase, omega, T, cfg);
  return std::abs(kI * params.coupling / T * integral) + epsilon_fm2_idle(params, fm, T, cfg);
}

double epsilon_fm2_parallel_xx(const SystemParams& params, const FmZModulation& fm, double T,
                               const QuadratureConfig& cfg) {
  // The single-site X2 error equals the X1 error.
  return 2.0 * epsilon_fm2_x(params, fm, T, cfg) - epsilon_fm2_idle(params, fm, T, cfg);
}

double epsilon_dd1(const SystemParams& params, int segments, double T) {
  if (segments < 2 || segments % 2 != 0) {
    throw std::invalid_argument("epsilon_dd1: segment count must be even");
  }
  const double delta = params.detuning;
  const double tau = T / segments;
  Complex sum = 0.0;
  for (int s = 1; s <= segments; ++s) {
    const double sign = (s % 2 == 1) ? 1.0 : -1.0;
    sum += sign / (kI * delta) * (std::polar(1.0, delta * s * tau) - std::polar(1.0, delta * (s - 1) * tau));
  }
  return 2.0 * std::abs(params.coupling / T * sum);
}

double epsilon_dd2_idle(const SystemParams& params, int segments, double T,
                        const QuadratureConfig& cfg) {
  if (segments < 2 || segments % 2 != 0) {
    throw std::invalid_argument("epsilon_dd2_idle: segment count must be even");
  }
  const double tau = T / segments;
  const auto sign = [tau, segments](double t) {
    const int s = std::min(static_cast<int>(std::floor(t / tau)) + 1, segments);
    return (s % 2 == 1) ? 1.0 : -1.0;
  };
  const double delta = params.detuning;
  const auto outer = [&](double t) { return sign(t) * std::polar(1.0, delta * t); };
  const auto inner = [&](double t) { return sign(t) * std::polar(1.0, -delta * t); };
  const Complex integral = integrate_triangle(outer, inner, T, cfg, segments);
  const double j = params.coupling;
  return j * j / T * std::abs(integral.imag());
}

SecondOrderPair dd_second_order_closed_forms(const SystemParams& params, GateKind gate) {
  const double j = params.coupling;
  const double delta = params.detuning;
  const double cd_idle = 2.0 * std::abs(j * j / (2.0 * delta));
  const double dd_idle = 2.0 * std::abs((kPi - 4.0) / (2.0 * kPi) * j * j / delta);
  const double drive_term = 2.0 * std::abs(j / 4.0);
  switch (gate) {
    case GateKind::Idle:
      return {cd_idle, dd_idle};
    case GateKind::X:
      return {cd_idle + drive_term, dd_idle + drive_term};
    case GateKind::ParallelXX:
      return {cd_idle + 2.0 * drive_term, dd_idle + 2.0 * drive_term};
  }
  return {};
}

}  // namespace xtalk
