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

// Control waveforms as closed-form, sampleable value types. Amplitudes are in
// rad/ns, times in ns. Every waveform lives on its own gate-local clock that
// starts at t = 0.

namespace xtalk {

enum class Axis { X, Y };

/// Omega(t) = amplitude * sin(pi t / duration) on [0, duration], zero elsewhere.
struct SineEnvelopeDrive {
  double amplitude = 0.0;
  double duration = 0.0;
  Axis axis = Axis::X;
  int target = 1;

  /// Envelope whose area is pi/2, i.e. a full pi rotation for a sigma^x drive.
  static SineEnvelopeDrive x_gate(double duration, int target);
};

/// Z modulation gamma * sin(2 pi N t / T).
struct FmZModulation {
  double gamma = 0.0;
  int cycles = 1;
  double duration = 0.0;
};

/// Train of unit-area cosine pulses delta_w(t - s tau), s = 1..count.
struct NascentDeltaTrain {
  int count = 4;
  double interval = 0.0;
  double width = 0.0;
};

/// Cosine bursts in the odd segments of an S-segment gate, avoiding the Z pulse windows.
struct SegmentedDrive {
  double interval = 0.0;
  double width = 0.0;
  int segments = 4;
  double amplitude = 0.0;
  Axis axis = Axis::X;
  int target = 1;

  /// Bursts whose areas sum to pi/2. For S = 4 the amplitude is pi^2 / (8 (tau - w)).
  static SegmentedDrive x_gate(double interval, double width, int segments, int target);
};

/// Base envelope rotated in the xy-plane by the FM phase 2 alpha(t).
struct ModulatedQuadratureDrive {
  SineEnvelopeDrive base;
  FmZModulation modulation;
};

struct Quadrature {
  double x = 0.0;
  double y = 0.0;
};

/// Single cosine pulse of unit area: (pi/2w) cos(pi t / w) for |t| <= w/2.
double nascent_delta(double width, double t);

double sample(const SineEnvelopeDrive& w, double t);
double sample(const FmZModulation& w, double t);
double sample(const NascentDeltaTrain& w, double t);
double sample(const SegmentedDrive& w, double t);
Quadrature sample(const ModulatedQuadratureDrive& w, double t);

/// alpha(t) = (gamma T / pi N) sin^2(pi N t / T), the antiderivative of the FM waveform.
double accumulated_phase(const FmZModulation& w, double t);

double pulse_area(const SineEnvelopeDrive& w);
double pulse_area(const FmZModulation& w);
/// Area of one pulse of the train (1 by construction).
double pulse_area(const NascentDeltaTrain& w);
double pulse_area(const SegmentedDrive& w);
/// Rotation angle of the base envelope; the quadrature rotation does not change it.
double pulse_area(const ModulatedQuadratureDrive& w);

}  // namespace xtalk
