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
#ifndef CHESTSEP_DSP_AUDIO_CLIP_H_
#define CHESTSEP_DSP_AUDIO_CLIP_H_

#include <cstddef>
#include <span>
#include <vector>

namespace chestsep {

inline constexpr int kDefaultSampleRate = 4000;

// Mono signal with its sampling rate. Samples are finite; the rate positive.
class AudioClip {
 public:
  AudioClip() = default;
  // Throws InvalidInput on a non-positive rate or a non-finite sample.
  AudioClip(std::vector<double> samples, int sample_rate);

  static AudioClip Silence(std::size_t length, int sample_rate);

  const std::vector<double>& samples() const { return samples_; }
  std::span<const double> view() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  double Energy() const;
  double Rms() const;
  double DurationSeconds() const;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kDefaultSampleRate;
};

// Throws InvalidInput unless both clips have the same length and rate.
void RequireSameShape(const AudioClip& a, const AudioClip& b, const char* what);

// Returns the clip scaled to unit RMS; all-zero clips are returned unchanged.
AudioClip NormalizeRms(const AudioClip& clip);

}  // namespace chestsep

#endif  // CHESTSEP_DSP_AUDIO_CLIP_H_
