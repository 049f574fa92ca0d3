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
#include "chestsep/synthdata/synthdata.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chestsep/common/errors.h"
#include "chestsep/common/random.h"

namespace chestsep {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t NumSamples(const SynthSpec& spec) {
  return static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
}

double RateOr(const SynthSpec& spec, double fallback) {
  return spec.rate_param > 0.0 ? spec.rate_param : fallback;
}

// White Gaussian noise with every FFT bin outside [lo, hi] zeroed.
std::vector<double> BandNoise(Rng& rng, std::size_t n, double lo, double hi,
                              int rate) {
  std::vector<double> x(n);
  for (double& s : x) s = rng.Normal();
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(n);
    if (f < lo || f > hi) spec[k] = 0.0;
  }
  std::vector<double> y;
  fft.inv(y, spec, static_cast<Eigen::Index>(n));
  return y;
}

AudioClip Finish(std::vector<double> x, int rate) {
  AudioClip clip(std::move(x), rate);
  if (clip.Energy() == 0.0) return clip;
  return NormalizeRms(clip);
}

// Hann-windowed, exponentially decaying oscillation added at `start`.
void AddThump(std::vector<double>& x, double start, double amp, double freq,
              double dur, int rate, double phase) {
  const auto begin = static_cast<long>(std::ceil(start * rate));
  const auto len = static_cast<long>(dur * rate);
  for (long i = 0; i < len; ++i) {
    const long n = begin + i;
    if (n < 0) continue;
    if (n >= static_cast<long>(x.size())) break;
    const double t = static_cast<double>(n) / rate - start;
    const double hann = std::pow(std::sin(kPi * t / dur), 2.0);
    const double decay = std::exp(-3.0 * t / dur);
    x[n] += amp * hann * decay * std::sin(2.0 * kPi * freq * t + phase);
  }
}

double LungEnvelope(double phase, double floor) {
  double shape = 0.0;
  if (phase < 0.4) {
    shape = std::pow(std::sin(kPi * phase / 0.4), 2.0);
  } else if (phase < 0.9) {
    shape = 0.6 * std::pow(std::sin(kPi * (phase - 0.4) / 0.5), 2.0);
  }
  return floor + (1.0 - floor) * shape;
}

std::vector<double> Cry(Rng& rng, std::size_t n, int rate, const SynthParams& p) {
  std::vector<double> x(n, 0.0);
  const double nyquist = 0.5 * rate;
  double t = rng.Uniform(0.0, p.cry_gap_lo_s);
  while (t * rate < static_cast<double>(n)) {
    const double dur = rng.Uniform(p.cry_burst_lo_s, p.cry_burst_hi_s);
    const double f0 = rng.Uniform(p.cry_f0_lo_hz, p.cry_f0_hi_hz);
    const double vib_phase = rng.Uniform(0.0, 2.0 * kPi);
    const double ramp = std::min(0.03, dur / 4.0);
    const auto begin = static_cast<std::size_t>(std::ceil(t * rate));
    const auto end = std::min(n, static_cast<std::size_t>((t + dur) * rate));
    double phase = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double u = static_cast<double>(i) / rate - t;
      double gate = 1.0;
      if (u < ramp) gate = 0.5 - 0.5 * std::cos(kPi * u / ramp);
      if (dur - u < ramp) gate = 0.5 - 0.5 * std::cos(kPi * (dur - u) / ramp);
      const double f = f0 * (1.0 + p.cry_vibrato_depth *
                                       std::sin(2.0 * kPi * p.cry_vibrato_hz * u +
                                                vib_phase));
      phase += 2.0 * kPi * f / rate;
      double s = 0.0;
      for (int k = 1; k * f0 * (1.0 + p.cry_vibrato_depth) < 0.95 * nyquist; ++k) {
        s += std::sin(k * phase) / k;
      }
      x[i] = gate * s;
    }
    t += dur + rng.Uniform(p.cry_gap_lo_s, p.cry_gap_hi_s);
  }
  return x;
}

}  // namespace

std::string ToString(SynthKind kind) {
  switch (kind) {
    case SynthKind::kHeart:
      return "heart";
    case SynthKind::kLung:
      return "lung";
    case SynthKind::kCry:
      return "cry";
    case SynthKind::kCpapBubble:
      return "cpap_bubble";
    case SynthKind::kCpapVentilator:
      return "cpap_ventilator";
  }
  return "unknown";
}

SynthKind SynthKindFromString(const std::string& name) {
  for (SynthKind k : {SynthKind::kHeart, SynthKind::kLung, SynthKind::kCry,
                      SynthKind::kCpapBubble, SynthKind::kCpapVentilator}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidInput("unknown synthetic sound kind '" + name + "'");
}

void SynthSpec::Validate() const {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInput("duration must be positive");
  }
  if (sample_rate <= 0) throw InvalidInput("sample rate must be positive");
  if (rate_param < 0.0 || !std::isfinite(rate_param)) {
    throw InvalidInput("rate parameter must be positive");
  }
  if (NumSamples(*this) == 0) throw InvalidInput("duration rounds to zero samples");
}

nlohmann::json SpecToJson(const SynthSpec& spec) {
  return {{"kind", ToString(spec.kind)},
          {"duration_s", spec.duration_s},
          {"sample_rate", spec.sample_rate},
          {"rate_param", spec.rate_param},
          {"rng_seed", spec.rng_seed}};
}

SynthSpec SpecFromJson(const nlohmann::json& j) {
  try {
    SynthSpec s;
    s.kind = SynthKindFromString(j.at("kind").get<std::string>());
    s.duration_s = j.value("duration_s", s.duration_s);
    s.sample_rate = j.value("sample_rate", s.sample_rate);
    s.rate_param = j.value("rate_param", s.rate_param);
    s.rng_seed = j.value("rng_seed", s.rng_seed);
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed synth spec: ") + e.what());
  }
}

AudioClip GenHeart(const SynthSpec& spec, const SynthParams& p) {
  spec.Validate();
  const std::size_t n = NumSamples(spec);
  const int rate = spec.sample_rate;
  const double period = 60.0 / RateOr(spec, p.heart_bpm);
  Rng rng(DeriveSeed(spec.rng_seed, 0x4ea27));
  std::vector<double> x(n, 0.0);
  double t = rng.Uniform(0.0, 0.5 * period);
  const double end = static_cast<double>(n) / rate;
  while (t < end) {
    const double beat = period * (1.0 + rng.Uniform(-p.heart_jitter, p.heart_jitter));
    AddThump(x, t, rng.Uniform(0.9, 1.1),
             rng.Uniform(p.heart_freq_lo_hz, p.heart_freq_hi_hz),
             rng.Uniform(p.heart_thump_lo_s, p.heart_thump_hi_s), rate,
             rng.Uniform(0.0, 2.0 * kPi));
    AddThump(x, t + p.heart_s2_delay * beat,
             p.heart_s2_gain * rng.Uniform(0.9, 1.1),
             rng.Uniform(p.heart_freq_lo_hz, p.heart_freq_hi_hz),
             rng.Uniform(p.heart_thump_lo_s, p.heart_thump_hi_s), rate,
             rng.Uniform(0.0, 2.0 * kPi));
    t += beat;
  }
  return Finish(std::move(x), rate);
}

AudioClip GenLung(const SynthSpec& spec, const SynthParams& p) {
  spec.Validate();
  const std::size_t n = NumSamples(spec);
  const int rate = spec.sample_rate;
  const double period = 60.0 / RateOr(spec, p.lung_breaths_per_min);
  Rng rng(DeriveSeed(spec.rng_seed, 0x1c9));
  std::vector<double> x = BandNoise(rng, n, p.lung_band_lo_hz, p.lung_band_hi_hz, rate);
  const double offset = rng.Uniform(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = std::fmod(static_cast<double>(i) / rate / period + offset, 1.0);
    x[i] *= LungEnvelope(phase, p.lung_floor);
  }
  return Finish(std::move(x), rate);
}

AudioClip GenNoise(const SynthSpec& spec, const SynthParams& p) {
  spec.Validate();
  const std::size_t n = NumSamples(spec);
  const int rate = spec.sample_rate;
  Rng rng(DeriveSeed(spec.rng_seed, 0x2015e + static_cast<int>(spec.kind)));
  switch (spec.kind) {
    case SynthKind::kCry:
      return Finish(Cry(rng, n, rate, p), rate);
    case SynthKind::kCpapBubble: {
      std::vector<double> x =
          BandNoise(rng, n, p.bubble_band_lo_hz, p.bubble_band_hi_hz, rate);
      const double f = rng.Uniform(p.bubble_rate_lo_hz, p.bubble_rate_hi_hz);
      const double phi = rng.Uniform(0.0, 2.0 * kPi);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] *= 1.0 + 0.8 * std::sin(2.0 * kPi * f * i / rate + phi);
      }
      return Finish(std::move(x), rate);
    }
    case SynthKind::kCpapVentilator: {
      std::vector<double> x =
          BandNoise(rng, n, p.vent_band_lo_hz, p.vent_band_hi_hz, rate);
      double noise_power = 0.0;
      for (double s : x) noise_power += s * s;
      noise_power /= static_cast<double>(n);
      const double f0 = rng.Uniform(p.vent_tone_lo_hz, p.vent_tone_hi_hz);
      std::vector<double> tone(n, 0.0);
      double tone_power = 0.0;
      for (int k = 1; k <= 5 && k * f0 < 0.5 * rate; ++k) {
        const double phi = rng.Uniform(0.0, 2.0 * kPi);
        for (std::size_t i = 0; i < n; ++i) {
          tone[i] += std::sin(2.0 * kPi * k * f0 * i / rate + phi) / k;
        }
      }
      for (double s : tone) tone_power += s * s;
      tone_power /= static_cast<double>(n);
      const double g =
          tone_power > 0 ? std::sqrt(p.vent_tone_to_noise * noise_power / tone_power)
                         : 0.0;
      for (std::size_t i = 0; i < n; ++i) x[i] += g * tone[i];
      return Finish(std::move(x), rate);
    }
    case SynthKind::kHeart:
    case SynthKind::kLung:
      break;
  }
  throw InvalidInput("'" + ToString(spec.kind) + "' is not a noise kind");
}

AudioClip Generate(const SynthSpec& spec, const SynthParams& params) {
  switch (spec.kind) {
    case SynthKind::kHeart:
      return GenHeart(spec, params);
    case SynthKind::kLung:
      return GenLung(spec, params);
    default:
      return GenNoise(spec, params);
  }
}

}  // namespace chestsep
