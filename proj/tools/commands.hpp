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

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace xtalk::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kCheckFailure = 2, kNoMinimum = 3 };

/// Header lines as "# key=value", then "abscissa,scheme,<value>" rows.
void write_csv(std::ostream& out, const Table& table);

/// Preset run, or the custom experiment described by the config.
Table simulate(const RunConfig& config);

struct GammaReport {
  Table table;
  bool all_found = true;
};
GammaReport optimize_gamma(const RunConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};
std::vector<CheckResult> verify_checks(const RunConfig& config);

/// Full command line. Output goes to --out or the config 'output', else `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xtalk::cli
