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
#ifndef CHESTSEP_DSP_STFT_H_
#define CHESTSEP_DSP_STFT_H_

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "chestsep/dsp/audio_clip.h"

namespace chestsep {

enum class WindowKind { kHannPeriodic, kRectangular };

std::string ToString(WindowKind kind);
WindowKind WindowKindFromString(const std::string& name);

struct StftConfig {
  int fft_size = 1024;
  int window_size = 512;
  int hop_size = 256;
  WindowKind window = WindowKind::kHannPeriodic;

  int num_bins() const { return fft_size / 2 + 1; }
  // Leading zeros inserted before the first frame, so that no sample of the
  // clip falls only on the zero endpoint of a Hann window.
  int lead_padding() const { return window_size - hop_size; }

  // Throws InvalidInput when sizes are non-positive, the window exceeds the
  // FFT size, or the hop does not divide the window.
  void Validate() const;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

// Frames needed to cover a clip of the given length.
int NumFrames(std::size_t length, const StftConfig& config);

Eigen::VectorXd MakeWindow(const StftConfig& config);

// Magnitude/phase split of a one-sided short-time Fourier transform.
// Rows are frequency bins (fft_size/2 + 1), columns are frames.
struct Spectrogram {
  Eigen::MatrixXd magnitude;
  Eigen::MatrixXd phase;
  StftConfig config;
  int sample_rate = kDefaultSampleRate;
  std::size_t original_length = 0;

  Eigen::Index bins() const { return magnitude.rows(); }
  Eigen::Index frames() const { return magnitude.cols(); }
};

// Throws InvalidInput if the clip is shorter than one window.
Spectrogram Stft(const AudioClip& clip, const StftConfig& config);

// Weighted overlap-add inverse; output is truncated to original_length.
// Throws InvalidInput on inconsistent shapes and ConfigError when the
// window/hop pair leaves a sample with zero synthesis weight.
AudioClip Istft(const Spectrogram& spec);

// Inverse transform of a replacement magnitude using spec's phase.
AudioClip Istft(const Eigen::MatrixXd& magnitude, const Spectrogram& spec);

}  // namespace chestsep

#endif  // CHESTSEP_DSP_STFT_H_
