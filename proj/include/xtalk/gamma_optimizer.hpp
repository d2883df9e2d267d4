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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xtalk/hamiltonian.hpp"
#include "xtalk/magnus.hpp"

namespace xtalk {

enum class ErrorFunctional { Fm1, Fm2Idle, Fm2X, Fm2ParallelXX };

std::string functional_name(ErrorFunctional f);
/// Parses "fm1", "fm2-idle", "fm2-x", "fm2-xx".
ErrorFunctional parse_functional(const std::string& name);

/// Uniform grid 0, step, 2 step, ... <= max (rad/ns).
struct GammaGrid {
  double step = mhz_to_rad_per_ns(1.59);
  double max = mhz_to_rad_per_ns(600.0);

  std::vector<double> points() const;
};

struct GammaScan {
  std::vector<double> grid;
  std::vector<double> values;
  double grid_step = 0.0;
  std::optional<size_t> optimum_index;
  /// The selected minimum is the last interior point of the grid.
  bool at_range_edge = false;

  double gamma_opt() const;
};

/// Thrown when a scan has no interior local minimum; carries the full scan.
class NoMinimumError : public std::runtime_error {
 public:
  explicit NoMinimumError(GammaScan scan)
      : std::runtime_error("no minimum in range"), scan_(std::move(scan)) {}
  const GammaScan& scan() const { return scan_; }

 private:
  GammaScan scan_;
};

/// Index of the first interior local minimum; plateaus (equal within 1e-12
/// relative) resolve to their smallest-gamma point.
std::optional<size_t> first_local_minimum(const std::vector<double>& values);

/// Evaluates `functional` on the grid (in parallel when threads > 1, with an
/// order-independent result) and selects the first local minimum.
GammaScan scan_gamma(const std::function<double(double)>& functional, const GammaGrid& grid,
                     int threads = 1);

GammaScan scan_gamma(ErrorFunctional functional, const SystemParams& params, int cycles, double T,
                     const GammaGrid& grid = {}, const QuadratureConfig& cfg = {}, int threads = 1);

/// (F(gamma_opt + d) + F(gamma_opt - d)) / 2 with d the scan step.
double corner_averaged_fidelity(const std::function<double(double)>& fidelity_at_gamma,
                                const GammaScan& scan);

}  // namespace xtalk
