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
#include "chestsep/dsp/audio_clip.h"

#include <cmath>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw InvalidInput("sample rate must be positive, got " +
                       std::to_string(sample_rate_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidInput("non-finite sample at index " + std::to_string(i));
    }
  }
}

AudioClip AudioClip::Silence(std::size_t length, int sample_rate) {
  return AudioClip(std::vector<double>(length, 0.0), sample_rate);
}

double AudioClip::Energy() const {
  double e = 0.0;
  for (double s : samples_) e += s * s;
  return e;
}

double AudioClip::Rms() const {
  if (samples_.empty()) return 0.0;
  return std::sqrt(Energy() / static_cast<double>(samples_.size()));
}

double AudioClip::DurationSeconds() const {
  return static_cast<double>(samples_.size()) / sample_rate_;
}

void RequireSameShape(const AudioClip& a, const AudioClip& b, const char* what) {
  if (a.size() != b.size() || a.sample_rate() != b.sample_rate()) {
    throw InvalidInput(std::string(what) + ": clips differ in length or rate (" +
                       std::to_string(a.size()) + "@" +
                       std::to_string(a.sample_rate()) + " vs " +
                       std::to_string(b.size()) + "@" +
                       std::to_string(b.sample_rate()) + ")");
  }
}

AudioClip NormalizeRms(const AudioClip& clip) {
  const double rms = clip.Rms();
  if (rms == 0.0) return clip;
  std::vector<double> out(clip.samples());
  for (double& s : out) s /= rms;
  return AudioClip(std::move(out), clip.sample_rate());
}

}  // namespace chestsep
