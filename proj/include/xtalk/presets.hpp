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
#include <string>
#include <utility>
#include <vector>

#include "xtalk/experiments.hpp"
#include "xtalk/magnus.hpp"

namespace xtalk {

struct TableRow {
  double abscissa = 0.0;
  std::string scheme;
  double value = 0.0;
};

/// Long-format result: one row per (scheme, abscissa), plus resolved parameters.
struct Table {
  std::string abscissa_name = "abscissa";
  std::string value_name = "infidelity";
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TableRow> rows;

  void note(const std::string& key, const std::string& value) { header.emplace_back(key, value); }
  void note(const std::string& key, double value);
  /// Appends a series, label prefixed with `prefix` (e.g. "b/").
  void add(const FidelitySeries& series, const std::string& prefix = "");
  /// Rows sorted by scheme, then abscissa.
  void sort();
};

/// Shortest round-trip decimal form with 17 significant digits.
std::string format_number(double value);

struct PresetContext {
  double detuning_mhz = 50.0;
  /// Reference J: fixed-J panels and gamma optimization.
  double coupling_mhz = 5.0;
  std::vector<double> j_grid_mhz = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SimulationConfig sim;
  GammaGrid gamma;
  QuadratureConfig quadrature;

  SystemParams params() const { return SystemParams::from_mhz(detuning_mhz, coupling_mhz); }
  double gate_time() const { return matched_gate_time(params()); }
};

struct Preset {
  std::string name;
  std::string description;
  std::function<Table(const PresetContext&)> run;
};

const std::vector<Preset>& presets();
/// Throws std::invalid_argument for unknown names.
const Preset& find_preset(const std::string& name);
/// Runs a preset and records the context in the table header.
Table run_preset(const Preset& preset, const PresetContext& ctx);

}  // namespace xtalk
