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
#include "chestsep/dsp/butterworth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {
namespace {

using Complex = std::complex<double>;

// Steady-state state of one transposed direct-form II biquad for a unit step.
std::array<double, 2> StepSteadyState(const Biquad& s) {
  // (I - A^T) z = b[1:] - a[1:] * b0, A the companion matrix of a.
  const double m00 = 1.0 + s.a[0], m01 = -1.0;
  const double m10 = s.a[1], m11 = 1.0;
  const double r0 = s.b[1] - s.a[0] * s.b[0];
  const double r1 = s.b[2] - s.a[1] * s.b[0];
  const double det = m00 * m11 - m01 * m10;
  return {(r0 * m11 - m01 * r1) / det, (m00 * r1 - m10 * r0) / det};
}

std::vector<std::array<double, 2>> CascadeSteadyState(const SosFilter& sos) {
  std::vector<std::array<double, 2>> zi;
  zi.reserve(sos.size());
  double scale = 1.0;
  for (const Biquad& s : sos) {
    auto z = StepSteadyState(s);
    zi.push_back({z[0] * scale, z[1] * scale});
    scale *= (s.b[0] + s.b[1] + s.b[2]) / (1.0 + s.a[0] + s.a[1]);
  }
  return zi;
}

void RunCascade(const SosFilter& sos, std::vector<std::array<double, 2>> state,
                std::vector<double>& x) {
  for (std::size_t k = 0; k < sos.size(); ++k) {
    const Biquad& s = sos[k];
    auto& z = state[k];
    for (double& v : x) {
      const double in = v;
      const double y = s.b[0] * in + z[0];
      z[0] = s.b[1] * in - s.a[0] * y + z[1];
      z[1] = s.b[2] * in - s.a[1] * y;
      v = y;
    }
  }
}

}  // namespace

SosFilter DesignButterworthBandpass(int order, double low_hz, double high_hz,
                                    int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  if (order < 1) throw InvalidInput("filter order must be >= 1");
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) {
    throw InvalidInput("band edges must satisfy 0 < low < high < fs/2, got " +
                       std::to_string(low_hz) + ".." + std::to_string(high_hz) +
                       " at fs=" + std::to_string(sample_rate));
  }
  const double fs2 = 2.0 * sample_rate;
  const double w1 = fs2 * std::tan(std::numbers::pi * low_hz / sample_rate);
  const double w2 = fs2 * std::tan(std::numbers::pi * high_hz / sample_rate);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;

  // Lowpass prototype poles on the left half of the unit circle, mapped to
  // bandpass pole pairs and then through the bilinear transform.
  std::vector<Complex> upper;
  std::vector<double> real_poles;
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const Complex p = std::polar(1.0, theta) * bw;
    const Complex disc = std::sqrt(p * p - 4.0 * w0sq);
    for (const Complex& s : {(p + disc) / 2.0, (p - disc) / 2.0}) {
      const Complex z = (fs2 + s) / (fs2 - s);
      if (std::abs(z.imag()) < 1e-14) {
        real_poles.push_back(z.real());
      } else if (z.imag() > 0.0) {
        upper.push_back(z);
      }
    }
  }
  std::sort(upper.begin(), upper.end(),
            [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
  std::sort(real_poles.begin(), real_poles.end());

  // Every section gets one zero at z = 1 and one at z = -1.
  SosFilter sos;
  for (const Complex& z : upper) {
    sos.push_back({{1.0, 0.0, -1.0}, {-2.0 * z.real(), std::norm(z)}});
  }
  for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
    const double p = real_poles[i], q = real_poles[i + 1];
    sos.push_back({{1.0, 0.0, -1.0}, {-(p + q), p * q}});
  }

  // Unit gain at the digital image of the analogue centre frequency.
  const double centre_hz =
      std::atan(std::sqrt(w0sq) / fs2) * sample_rate / std::numbers::pi;
  const double gain = 1.0 / std::abs(FrequencyResponse(sos, centre_hz, sample_rate));
  for (double& b : sos.front().b) b *= gain;
  return sos;
}

std::complex<double> FrequencyResponse(const SosFilter& sos, double hz,
                                       int sample_rate) {
  const Complex zinv = std::polar(1.0, -2.0 * std::numbers::pi * hz / sample_rate);
  Complex h = 1.0;
  for (const Biquad& s : sos) {
    const Complex num = s.b[0] + zinv * (s.b[1] + zinv * s.b[2]);
    const Complex den = 1.0 + zinv * (s.a[0] + zinv * s.a[1]);
    h *= num / den;
  }
  return h;
}

std::vector<double> SosFilterSignal(const SosFilter& sos,
                                    std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  RunCascade(sos, std::vector<std::array<double, 2>>(sos.size(), {0.0, 0.0}), y);
  return y;
}

std::vector<double> SosFiltFilt(const SosFilter& sos, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::size_t pad = 3 * (2 * sos.size() + 1);
  pad = std::min(pad, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = CascadeSteadyState(sos);
  auto scaled = [&zi](double v) {
    auto s = zi;
    for (auto& z : s) {
      z[0] *= v;
      z[1] *= v;
    }
    return s;
  };
  RunCascade(sos, scaled(ext.front()), ext);
  std::reverse(ext.begin(), ext.end());
  RunCascade(sos, scaled(ext.front()), ext);
  std::reverse(ext.begin(), ext.end());
  return std::vector<double>(ext.begin() + static_cast<long>(pad),
                             ext.begin() + static_cast<long>(pad + n));
}

AudioClip ButterworthBandpass(const AudioClip& clip, double low_hz,
                              double high_hz, int order) {
  const SosFilter sos =
      DesignButterworthBandpass(order, low_hz, high_hz, clip.sample_rate());
  return AudioClip(SosFiltFilt(sos, clip.view()), clip.sample_rate());
}

}  // namespace chestsep
