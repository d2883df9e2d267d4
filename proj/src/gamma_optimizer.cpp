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

#include "xtalk/gamma_optimizer.hpp"

#include <cmath>

#include "xtalk/parallel.hpp"

namespace xtalk {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string functional_name(ErrorFunctional f) {
  switch (f) {
    case ErrorFunctional::Fm1:
      return "fm1";
    case ErrorFunctional::Fm2Idle:
      return "fm2-idle";
    case ErrorFunctional::Fm2X:
      return "fm2-x";
    case ErrorFunctional::Fm2ParallelXX:
      return "fm2-xx";
  }
  return "?";
}

ErrorFunctional parse_functional(const std::string& name) {
  for (auto f : {ErrorFunctional::Fm1, ErrorFunctional::Fm2Idle, ErrorFunctional::Fm2X,
                 ErrorFunctional::Fm2ParallelXX}) {
    if (functional_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown functional '" + name + "' (expected fm1, fm2-idle, fm2-x, fm2-xx)");
}

std::vector<double> GammaGrid::points() const {
  if (!(step > 0.0)) throw std::invalid_argument("gamma grid step must be positive");
  if (!(max >= 2.0 * step)) throw std::invalid_argument("gamma grid needs at least three points");
  const auto count = static_cast<size_t>(std::floor(max / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (size_t k = 0; k < count; ++k) out[k] = static_cast<double>(k) * step;
  return out;
}

double GammaScan::gamma_opt() const {
  if (!optimum_index) throw NoMinimumError(*this);
  return grid.at(*optimum_index);
}

std::optional<size_t> first_local_minimum(const std::vector<double>& values) {
  const size_t n = values.size();
  size_t i = 1;
  while (i + 1 < n) {
    size_t j = i;
    while (j + 1 < n && nearly_equal(values[j + 1], values[i])) ++j;
    if (j + 1 >= n) break;
    if (values[i - 1] > values[i] && !nearly_equal(values[i - 1], values[i]) && values[j + 1] > values[j]) {
      return i;
    }
    i = j + 1;
  }
  return std::nullopt;
}

GammaScan scan_gamma(const std::function<double(double)>& functional, const GammaGrid& grid,
                     int threads) {
  GammaScan scan;
  scan.grid = grid.points();
  scan.grid_step = grid.step;
  scan.values.assign(scan.grid.size(), 0.0);
  parallel_for(scan.grid.size(), threads, [&](size_t k) { scan.values[k] = functional(scan.grid[k]); });
  scan.optimum_index = first_local_minimum(scan.values);
  if (!scan.optimum_index) throw NoMinimumError(std::move(scan));
  scan.at_range_edge = *scan.optimum_index + 2 >= scan.grid.size();
  return scan;
}

GammaScan scan_gamma(ErrorFunctional functional, const SystemParams& params, int cycles, double T,
                     const GammaGrid& grid, const QuadratureConfig& cfg, int threads) {
  if (cycles < 1) throw std::invalid_argument("scan_gamma: cycles must be >= 1");
  const auto evaluate = [&](double gamma) {
    const FmZModulation fm{gamma, cycles, T};
    switch (functional) {
      case ErrorFunctional::Fm1:
        return epsilon_fm1(params, fm, T, cfg);
      case ErrorFunctional::Fm2Idle:
        return epsilon_fm2_idle(params, fm, T, cfg);
      case ErrorFunctional::Fm2X:
        return epsilon_fm2_x(params, fm, T, cfg);
      case ErrorFunctional::Fm2ParallelXX:
        return epsilon_fm2_parallel_xx(params, fm, T, cfg);
    }
    return 0.0;
  };
  return scan_gamma(evaluate, grid, threads);
}

double corner_averaged_fidelity(const std::function<double(double)>& fidelity_at_gamma,
                                const GammaScan& scan) {
  const double g = scan.gamma_opt();
  const double d = scan.grid_step;
  if (g - d < -1e-12 * d) throw std::invalid_argument("corner averaging needs gamma_opt - step >= 0");
  return 0.5 * (fidelity_at_gamma(g + d) + fidelity_at_gamma(std::max(g - d, 0.0)));
}

}  // namespace xtalk
