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
#include <stdexcept>
#include <string>
#include <vector>

#include "xtalk/presets.hpp"

namespace xtalk::cli {

/// Invalid configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class GammaChoice { Fixed, Optimize };

struct SchemeConfig {
  std::string type = "cd";  // cd | fm | dd
  int segments = 0;         // cd: segmented drive (0 = sine); dd: S
  int cycles = 4;
  GammaChoice gamma_choice = GammaChoice::Optimize;
  double gamma_mhz = 0.0;
  std::optional<std::string> functional;  // default follows the gate
  std::optional<bool> corner_average;     // default: idle gates with optimized gamma
  std::optional<double> width_ns;         // default tau/4
};

/// All frequencies in cyclic MHz as written in the file.
struct RunConfig {
  std::optional<std::string> preset;
  std::string topology = "pair";
  double delta_mhz = 50.0;
  std::vector<double> j_mhz = {5.0};
  bool j_given = false;  // presets fall back to their own J grid
  std::optional<double> j_reference_mhz;  // presets; defaults to 5 MHz
  std::string gate = "idle";              // idle | x | xx
  int target = 1;
  std::optional<double> gate_time_ns;     // empty means matched
  int repetitions = 1;
  double step_ns = 0.002;
  int threads = 1;
  std::optional<std::string> output;
  std::vector<SchemeConfig> schemes = {SchemeConfig{}};
  double gamma_step_mhz = 1.59;
  double gamma_max_mhz = 600.0;
  int quadrature_nodes = 2048;
  // optimize-gamma
  std::string functional = "fm2-idle";
  std::vector<int> cycles = {4, 6, 8};
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Checks ranges that do not depend on a file position.
void validate(const RunConfig& config);

Topology topology_of(const RunConfig& config);
SystemParams params_of(const RunConfig& config, double j_mhz);
double gate_time_of(const RunConfig& config);
GateSpec gate_of(const RunConfig& config);
GammaGrid gamma_grid_of(const RunConfig& config);
QuadratureConfig quadrature_of(const RunConfig& config);
PresetContext preset_context_of(const RunConfig& config);

}  // namespace xtalk::cli
