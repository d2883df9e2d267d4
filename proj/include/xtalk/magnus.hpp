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
#include <vector>

#include "xtalk/core.hpp"
#include "xtalk/hamiltonian.hpp"
#include "xtalk/pulses.hpp"

// First- and second-order Magnus crosstalk error functionals. Each error is
// the sum of the magnitudes of the coefficients in front of the operators of
// the corresponding average-Hamiltonian term, in rad/ns.

namespace xtalk {

struct QuadratureConfig {
  int nodes_1d = 2048;
  int nodes_2d = 2048;  // per axis
  int panel_order = 8;  // Gauss-Legendre points per panel
};

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (Golub-Welsch).
GaussRule gauss_legendre(int order);

using ComplexFn = std::function<Complex(double)>;

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
Complex integrate_composite(const ComplexFn& f, double a, double b, int panels, int order);

/// Composite rule with panel doubling until successive estimates agree to
/// rel_tol (relative to max(|I|, abs_scale)).
Complex integrate_adaptive(const ComplexFn& f, double a, double b, int order, int initial_panels,
                           double rel_tol, double abs_scale);

/// Ordered double integral int_0^T dt1 outer(t1) int_0^t1 dt2 inner(t2).
/// Panel count is rounded up to a multiple of `align` so panel edges can sit on
/// discontinuities at multiples of T/align.
Complex integrate_triangle(const ComplexFn& outer, const ComplexFn& inner, double T,
                           const QuadratureConfig& cfg = {}, int align = 1);

/// Delta t + 2 alpha(t).
double fm_phase(const SystemParams& params, const FmZModulation& fm, double t);

double epsilon_fm1(const SystemParams& params, const FmZModulation& fm, double T,
                   const QuadratureConfig& cfg = {});

double epsilon_fm2_idle(const SystemParams& params, const FmZModulation& fm, double T,
                        const QuadratureConfig& cfg = {});

/// Drive-crosstalk part plus the idle part, for a pi/2-area sine envelope.
double epsilon_fm2_x(const SystemParams& params, const FmZModulation& fm, double T,
                     const QuadratureConfig& cfg = {});

double epsilon_fm2_parallel_xx(const SystemParams& params, const FmZModulation& fm, double T,
                               const QuadratureConfig& cfg = {});

/// Closed-form first-order DD error with ideal pulses. Throws for odd S.
double epsilon_dd1(const SystemParams& params, int segments, double T);

/// Second-order idle error of an ideal-pulse DD sequence, by quadrature of the
/// sign-flipped exchange kernel f(t1) f(t2) sin(Delta (t1 - t2)).
double epsilon_dd2_idle(const SystemParams& params, int segments, double T,
                        const QuadratureConfig& cfg = {});

struct SecondOrderPair {
  double cd = 0.0;
  double dd = 0.0;
};

/// Closed forms at T_M with ideal DD Z-4 pulses, for Idle, X, or ParallelXX.
SecondOrderPair dd_second_order_closed_forms(const SystemParams& params, GateKind gate);

}  // namespace xtalk
