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

#include "xtalk/pulses.hpp"

#include <cmath>
#include <numbers>

namespace xtalk {

namespace {
constexpr double kPi = std::numbers::pi;
}

SineEnvelopeDrive SineEnvelopeDrive::x_gate(double duration, int target) {
  return SineEnvelopeDrive{kPi * kPi / (4.0 * duration), duration, Axis::X, target};
}

SegmentedDrive SegmentedDrive::x_gate(double interval, double width, int segments, int target) {
  // S/2 active bursts, each of area pi/S.
  const double amplitude = kPi * kPi / (2.0 * segments * (interval - width));
  return SegmentedDrive{interval, width, segments, amplitude, Axis::X, target};
}

double nascent_delta(double width, double t) {
  if (std::abs(t) > 0.5 * width) return 0.0;
  return kPi / (2.0 * width) * std::cos(kPi * t / width);
}

double sample(const SineEnvelopeDrive& w, double t) {
  if (t < 0.0 || t > w.duration) return 0.0;
  return w.amplitude * std::sin(kPi * t / w.duration);
}

double sample(const FmZModulation& w, double t) {
  if (t < 0.0 || t > w.duration) return 0.0;
  return w.gamma * std::sin(2.0 * kPi * w.cycles * t / w.duration);
}

double sample(const NascentDeltaTrain& w, double t) {
  // Pulses are narrower than the interval, so only the nearest center can contribute.
  const double s = std::round(t / w.interval);
  if (s < 1.0 || s > w.count) return 0.0;
  return nascent_delta(w.width, t - s * w.interval);
}

double sample(const SegmentedDrive& w, double t) {
  const double s = std::floor(t / w.interval) + 1.0;  // 1-based segment index
  if (s < 1.0 || s > w.segments) return 0.0;
  if (static_cast<long>(s) % 2 == 0) return 0.0;
  const double lo = (s - 1.0) * w.interval + 0.5 * w.width;
  const double hi = s * w.interval - 0.5 * w.width;
  if (t < lo || t > hi) return 0.0;
  return w.amplitude * std::cos(kPi / (w.interval - w.width) * (t - (s - 0.5) * w.interval));
}

Quadrature sample(const ModulatedQuadratureDrive& w, double t) {
  const double envelope = sample(w.base, t);
  const double phase = 2.0 * accumulated_phase(w.modulation, t);
  return {envelope * std::cos(phase), envelope * std::sin(phase)};
}

double accumulated_phase(const FmZModulation& w, double t) {
  const double s = std::sin(kPi * w.cycles * t / w.duration);
  return w.gamma * w.duration / (kPi * w.cycles) * s * s;
}

double pulse_area(const SineEnvelopeDrive& w) { return 2.0 * w.amplitude * w.duration / kPi; }

double pulse_area(const FmZModulation&) { return 0.0; }

double pulse_area(const NascentDeltaTrain&) { return 1.0; }

double pulse_area(const SegmentedDrive& w) {
  const int active = (w.segments + 1) / 2;
  return active * w.amplitude * 2.0 * (w.interval - w.width) / kPi;
}

double pulse_area(const ModulatedQuadratureDrive& w) { return pulse_area(w.base); }

}  // namespace xtalk
