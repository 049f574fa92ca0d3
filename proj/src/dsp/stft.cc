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
#include "chestsep/dsp/stft.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chestsep/common/errors.h"

namespace chestsep {

std::string ToString(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHannPeriodic:
      return "hann_periodic";
    case WindowKind::kRectangular:
      return "rectangular";
  }
  return "unknown";
}

WindowKind WindowKindFromString(const std::string& name) {
  if (name == "hann_periodic" || name == "hann") return WindowKind::kHannPeriodic;
  if (name == "rectangular") return WindowKind::kRectangular;
  throw InvalidInput("unknown window kind '" + name + "'");
}

void StftConfig::Validate() const {
  if (fft_size <= 0 || window_size <= 0 || hop_size <= 0) {
    throw InvalidInput("STFT sizes must be positive");
  }
  if (window_size > fft_size) {
    throw InvalidInput("window_size (" + std::to_string(window_size) +
                       ") exceeds fft_size (" + std::to_string(fft_size) + ")");
  }
  if (window_size % hop_size != 0) {
    throw InvalidInput("hop_size (" + std::to_string(hop_size) +
                       ") must divide window_size (" +
                       std::to_string(window_size) + ")");
  }
}

int NumFrames(std::size_t length, const StftConfig& config) {
  const auto hop = static_cast<std::size_t>(config.hop_size);
  return static_cast<int>((length + hop - 1) / hop);
}

Eigen::VectorXd MakeWindow(const StftConfig& config) {
  const int n = config.window_size;
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    switch (config.window) {
      case WindowKind::kHannPeriodic:
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
        break;
      case WindowKind::kRectangular:
        w[i] = 1.0;
        break;
    }
  }
  return w;
}

Spectrogram Stft(const AudioClip& clip, const StftConfig& config) {
  config.Validate();
  if (clip.size() < static_cast<std::size_t>(config.window_size)) {
    throw InvalidInput("clip of " + std::to_string(clip.size()) +
                       " samples is shorter than one window (" +
                       std::to_string(config.window_size) + ")");
  }
  const int frames = NumFrames(clip.size(), config);
  const int bins = config.num_bins();
  const Eigen::VectorXd window = MakeWindow(config);
  const auto length = static_cast<long>(clip.size());

  Spectrogram spec;
  spec.magnitude.resize(bins, frames);
  spec.phase.resize(bins, frames);
  spec.config = config;
  spec.sample_rate = clip.sample_rate();
  spec.original_length = clip.size();

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(config.fft_size, 0.0);
  std::vector<std::complex<double>> bins_out;
  for (int t = 0; t < frames; ++t) {
    const long start =
        static_cast<long>(t) * config.hop_size - config.lead_padding();
    for (int n = 0; n < config.window_size; ++n) {
      const long idx = start + n;
      frame[n] = (idx >= 0 && idx < length) ? clip[idx] * window[n] : 0.0;
    }
    fft.fwd(bins_out, frame);
    for (int k = 0; k < bins; ++k) {
      const auto& c = bins_out[k];
      spec.magnitude(k, t) = std::abs(c);
      spec.phase(k, t) =
          (c.real() == 0.0 && c.imag() == 0.0) ? 0.0 : std::arg(c);
    }
  }
  return spec;
}

AudioClip Istft(const Eigen::MatrixXd& magnitude, const Spectrogram& spec) {
  const StftConfig& config = spec.config;
  try {
    config.Validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("cannot invert: ") + e.what());
  }
  if (config.window == WindowKind::kHannPeriodic &&
      config.window_size / config.hop_size < 2) {
    throw ConfigError("Hann window with hop == window is not overlap-add "
                      "invertible");
  }
  if (magnitude.rows() != config.num_bins() ||
      spec.phase.rows() != magnitude.rows() ||
      spec.phase.cols() != magnitude.cols()) {
    throw InvalidInput("magnitude/phase shape does not match the STFT config");
  }
  if (magnitude.cols() < NumFrames(spec.original_length, config)) {
    throw InvalidInput("too few frames for the recorded original length");
  }
  const Eigen::VectorXd window = MakeWindow(config);
  const auto length = static_cast<long>(spec.original_length);
  std::vector<double> out(spec.original_length, 0.0);
  std::vector<double> weight(spec.original_length, 0.0);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> bins_in(config.num_bins());
  std::vector<double> frame;
  for (Eigen::Index t = 0; t < magnitude.cols(); ++t) {
    for (Eigen::Index k = 0; k < magnitude.rows(); ++k) {
      const double m = magnitude(k, t);
      const double p = spec.phase(k, t);
      bins_in[k] = {m * std::cos(p), m * std::sin(p)};
    }
    fft.inv(frame, bins_in, config.fft_size);
    const long start = t * config.hop_size - config.lead_padding();
    for (int n = 0; n < config.window_size; ++n) {
      const long idx = start + n;
      if (idx < 0 || idx >= length) continue;
      out[idx] += frame[n] * window[n];
      weight[idx] += window[n] * window[n];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (weight[i] <= 0.0) {
      throw ConfigError("sample " + std::to_string(i) +
                        " has zero synthesis weight");
    }
    out[i] /= weight[i];
  }
  return AudioClip(std::move(out), spec.sample_rate);
}

AudioClip Istft(const Spectrogram& spec) { return Istft(spec.magnitude, spec); }

}  // namespace chestsep
