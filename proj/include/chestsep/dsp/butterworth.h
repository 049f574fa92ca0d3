// Copyright 2026 The chestsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef CHESTSEP_DSP_BUTTERWORTH_H_
#define CHESTSEP_DSP_BUTTERWORTH_H_

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "chestsep/dsp/audio_clip.h"

namespace chestsep {

// One biquad, b0..b2 over 1, a1, a2 (a0 normalised to 1).
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 2> a{};
};

using SosFilter = std::vector<Biquad>;

// Digital Butterworth bandpass from an order-`order` lowpass prototype via
// the bilinear transform with pre-warped edges. The result has 2*order
// poles, held as `order` second-order sections. Unit gain at the centre.
SosFilter DesignButterworthBandpass(int order, double low_hz, double high_hz,
                                    int sample_rate);

std::complex<double> FrequencyResponse(const SosFilter& sos, double hz,
                                       int sample_rate);

// Causal cascade, zero initial state.
std::vector<double> SosFilterSignal(const SosFilter& sos,
                                    std::span<const double> x);

// Forward-backward application with odd extension at both ends and
// steady-state initial conditions, so constant offsets pass without an edge
// transient. Output length equals input length.
std::vector<double> SosFiltFilt(const SosFilter& sos, std::span<const double> x);

// Zero-phase bandpass. Requires 0 < low_hz < high_hz < sample_rate/2.
AudioClip ButterworthBandpass(const AudioClip& clip, double low_hz,
                              double high_hz, int order = 4);

}  // namespace chestsep

#endif  // CHESTSEP_DSP_BUTTERWORTH_H_
