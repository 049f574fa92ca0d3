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
#ifndef CHESTSEP_SYNTHDATA_SYNTHDATA_H_
#define CHESTSEP_SYNTHDATA_SYNTHDATA_H_

#include <cstdint>
#include <string>

#include "json.hpp"

#include "chestsep/dsp/audio_clip.h"

namespace chestsep {

enum class SynthKind { kHeart, kLung, kCry, kCpapBubble, kCpapVentilator };

std::string ToString(SynthKind kind);
SynthKind SynthKindFromString(const std::string& name);

struct SynthSpec {
  SynthKind kind = SynthKind::kHeart;
  double duration_s = 10.0;
  int sample_rate = kDefaultSampleRate;
  double rate_param = 0.0;  // bpm or breaths/min; 0 selects the default
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

nlohmann::json SpecToJson(const SynthSpec& spec);
SynthSpec SpecFromJson(const nlohmann::json& j);

// Tunable generator constants. The defaults aim for a neonatal chest:
// fast heart rate, fast shallow breathing.
struct SynthParams {
  double heart_bpm = 160.0;
  double heart_jitter = 0.03;         // relative period jitter
  double heart_s2_delay = 0.3;        // fraction of the beat period
  double heart_s2_gain = 0.5;
  double heart_freq_lo_hz = 90.0;
  double heart_freq_hi_hz = 130.0;
  double heart_thump_lo_s = 0.06;
  double heart_thump_hi_s = 0.08;

  double lung_breaths_per_min = 50.0;
  double lung_band_lo_hz = 200.0;
  double lung_band_hi_hz = 1000.0;
  double lung_floor = 0.1;            // envelope level between breaths

  double cry_f0_lo_hz = 350.0;
  double cry_f0_hi_hz = 500.0;
  double cry_burst_lo_s = 0.4;
  double cry_burst_hi_s = 1.0;
  double cry_gap_lo_s = 0.5;
  double cry_gap_hi_s = 1.0;
  double cry_vibrato_hz = 5.0;
  double cry_vibrato_depth = 0.03;

  double bubble_band_lo_hz = 30.0;
  double bubble_band_hi_hz = 400.0;
  double bubble_rate_lo_hz = 5.0;
  double bubble_rate_hi_hz = 12.0;

  double vent_band_lo_hz = 50.0;
  double vent_band_hi_hz = 1800.0;
  double vent_tone_lo_hz = 90.0;
  double vent_tone_hi_hz = 130.0;
  double vent_tone_to_noise = 1.0;    // power ratio
};

// Every generator returns round(duration_s * sample_rate) samples at RMS 1.
AudioClip GenHeart(const SynthSpec& spec, const SynthParams& params = {});
AudioClip GenLung(const SynthSpec& spec, const SynthParams& params = {});
// Cry and CPAP kinds; InvalidInput for any other kind.
AudioClip GenNoise(const SynthSpec& spec, const SynthParams& params = {});
AudioClip Generate(const SynthSpec& spec, const SynthParams& params = {});

}  // namespace chestsep

#endif  // CHESTSEP_SYNTHDATA_SYNTHDATA_H_
