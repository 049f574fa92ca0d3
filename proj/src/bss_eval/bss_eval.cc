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
#include "chestsep/bss_eval/bss_eval.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <unsupported/Eigen/FFT>

#include "chestsep/common/errors.h"

namespace chestsep {
namespace {

using Spectrum = std::vector<std::complex<double>>;

constexpr double kRegularizer = 1e-10;

int NextPow2(std::size_t n) {
  int p = 1;
  while (static_cast<std::size_t>(p) < n) p <<= 1;
  return p;
}

Spectrum Forward(std::span<const double> x, int nfft) {
  std::vector<double> padded(nfft, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  Eigen::FFT<double> fft;
  Spectrum out;
  fft.fwd(out, padded);
  return out;
}

std::vector<double> Inverse(const Spectrum& x) {
  Eigen::FFT<double> fft;
  std::vector<double> out;
  fft.inv(out, x);
  return out;
}

// r(k) = sum_u a(u) b(u + k), read from a circular buffer at index k mod n.
std::vector<double> CrossCorrelation(const Spectrum& a, const Spectrum& b) {
  Spectrum prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = std::conj(a[i]) * b[i];
  return Inverse(prod);
}

double At(const std::vector<double>& circ, int k) {
  const int n = static_cast<int>(circ.size());
  return circ[(k % n + n) % n];
}

double SquaredNorm(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

double RatioDb(double num, double den) {
  if (num == 0.0) throw UndefinedScore("target component has zero energy");
  if (den == 0.0) return kScoreCapDb;
  return std::clamp(10.0 * std::log10(num / den), -kScoreCapDb, kScoreCapDb);
}

std::vector<double> Difference(const std::vector<double>& a,
                               const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Decomposition DecomposeIn(const ReferenceSpace& space, const AudioClip& estimate,
                          int target, const std::vector<int>& interferers,
                          std::optional<int> noise) {
  const std::size_t out_len = space.length() + space.filter_len() - 1;
  Decomposition d;
  const int single[] = {target};
  d.s_target = space.Project(estimate, single);

  std::vector<int> sources = {target};
  sources.insert(sources.end(), interferers.begin(), interferers.end());
  std::vector<double> p_sources = d.s_target;
  if (!interferers.empty()) p_sources = space.Project(estimate, sources);
  d.e_interf = Difference(p_sources, d.s_target);

  if (noise) {
    sources.push_back(*noise);
    d.e_noise = Difference(space.Project(estimate, sources), p_sources);
  } else {
    d.e_noise.assign(out_len, 0.0);
  }

  d.e_artif.assign(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double est = i < estimate.size() ? estimate[i] : 0.0;
    d.e_artif[i] = est - d.s_target[i] - d.e_interf[i] - d.e_noise[i];
  }
  return d;
}

BssScores ScoreAll(const ReferenceSpace& space, const AudioClip& estimate,
                   const AudioClip& target_clip, int target,
                   const std::vector<int>& interferers) {
  const Decomposition d = DecomposeIn(space, estimate, target, interferers, {});
  return {Sdr(d), Sir(d), SiSdr(estimate, target_clip)};
}

}  // namespace

ReferenceSpace::ReferenceSpace(std::vector<AudioClip> refs, int filter_len)
    : refs_(std::move(refs)), filter_len_(filter_len) {
  if (refs_.empty()) throw InvalidInput("no reference signals");
  if (filter_len_ < 1) throw InvalidInput("filter_len must be at least 1");
  for (const AudioClip& r : refs_) RequireSameShape(refs_.front(), r, "bss_eval");
  length_ = refs_.front().size();
  nfft_ = NextPow2(length_ + filter_len_ - 1);
  for (const AudioClip& r : refs_) spectra_.push_back(Forward(r.view(), nfft_));

  const int n_refs = size();
  const int L = filter_len_;
  gram_.resize(n_refs * L, n_refs * L);
  for (int i = 0; i < n_refs; ++i) {
    for (int j = i; j < n_refs; ++j) {
      const std::vector<double> r = CrossCorrelation(spectra_[i], spectra_[j]);
      for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
          const double g = At(r, a - b);
          gram_(i * L + a, j * L + b) = g;
          gram_(j * L + b, i * L + a) = g;
        }
      }
    }
  }
}

std::vector<double> ReferenceSpace::Project(const AudioClip& estimate,
                                            std::span<const int> subset) const {
  if (estimate.size() != length_) {
    throw InvalidInput("estimate length differs from the references");
  }
  const int L = filter_len_;
  const int n = static_cast<int>(subset.size()) * L;
  const std::size_t out_len = length_ + L - 1;
  if (n == 0) return std::vector<double>(out_len, 0.0);

  Eigen::MatrixXd g(n, n);
  for (int p = 0; p < static_cast<int>(subset.size()); ++p) {
    for (int q = 0; q < static_cast<int>(subset.size()); ++q) {
      g.block(p * L, q * L, L, L) = gram_.block(subset[p] * L, subset[q] * L, L, L);
    }
  }
  const Spectrum est = Forward(estimate.view(), nfft_);
  Eigen::VectorXd rhs(n);
  for (int p = 0; p < static_cast<int>(subset.size()); ++p) {
    const std::vector<double> c = CrossCorrelation(spectra_[subset[p]], est);
    for (int d = 0; d < L; ++d) rhs[p * L + d] = c[d];
  }
  const double trace = g.trace();
  if (trace == 0.0) return std::vector<double>(out_len, 0.0);
  g.diagonal().array() += kRegularizer * trace / n;
  const Eigen::VectorXd coef = g.ldlt().solve(rhs);

  Spectrum acc(nfft_, {0.0, 0.0});
  std::vector<double> taps(L);
  for (int p = 0; p < static_cast<int>(subset.size()); ++p) {
    for (int d = 0; d < L; ++d) taps[d] = coef[p * L + d];
    const Spectrum h = Forward(taps, nfft_);
    const Spectrum& s = spectra_[subset[p]];
    for (int k = 0; k < nfft_; ++k) acc[k] += s[k] * h[k];
  }
  std::vector<double> out = Inverse(acc);
  out.resize(out_len);
  return out;
}

Decomposition Decompose(const AudioClip& estimate, const AudioClip& target_ref,
                        std::span<const AudioClip> other_refs,
                        const std::optional<AudioClip>& noise_ref,
                        int filter_len) {
  std::vector<AudioClip> refs = {target_ref};
  refs.insert(refs.end(), other_refs.begin(), other_refs.end());
  if (noise_ref) refs.push_back(*noise_ref);
  RequireSameShape(target_ref, estimate, "bss_eval");
  const ReferenceSpace space(std::move(refs), filter_len);
  std::vector<int> interferers(other_refs.size());
  std::iota(interferers.begin(), interferers.end(), 1);
  std::optional<int> noise;
  if (noise_ref) noise = static_cast<int>(other_refs.size()) + 1;
  return DecomposeIn(space, estimate, 0, interferers, noise);
}

double Sdr(const Decomposition& d) {
  std::vector<double> err(d.e_interf.size());
  for (std::size_t i = 0; i < err.size(); ++i) {
    err[i] = d.e_interf[i] + d.e_noise[i] + d.e_artif[i];
  }
  return RatioDb(SquaredNorm(d.s_target), SquaredNorm(err));
}

double Sir(const Decomposition& d) {
  return RatioDb(SquaredNorm(d.s_target), SquaredNorm(d.e_interf));
}

double SiSdr(const AudioClip& estimate, const AudioClip& target_ref) {
  RequireSameShape(estimate, target_ref, "si_sdr");
  const double tt = target_ref.Energy();
  if (tt == 0.0) throw UndefinedScore("si_sdr reference is all zeros");
  const auto& e = estimate.samples();
  const auto& t = target_ref.samples();
  const double alpha = std::inner_product(e.begin(), e.end(), t.begin(), 0.0) / tt;
  double den = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double r = e[i] - alpha * t[i];
    den += r * r;
  }
  const double num = alpha * alpha * tt;
  if (num == 0.0) return -kScoreCapDb;
  return RatioDb(num, den);
}

std::vector<SourceScores> ScoreInstance(const SeparationResult& result,
                                        const MixtureInstance& instance,
                                        int filter_len) {
  RequireSameShape(result.heart, instance.mixture, "score_instance");
  RequireSameShape(result.lung, instance.mixture, "score_instance");

  struct Source {
    std::string name;
    const AudioClip* truth;
    const AudioClip* estimate;
  };
  std::vector<Source> sources = {
      {"heart", &instance.scaled_heart, &result.heart},
      {"lung", &instance.scaled_lung, &result.lung},
  };
  if (instance.scaled_noise.Energy() > 0.0) {
    sources.push_back({"noise", &instance.scaled_noise,
                       result.noise ? &*result.noise : nullptr});
  }
  std::vector<AudioClip> truths;
  for (const Source& s : sources) truths.push_back(*s.truth);
  const ReferenceSpace space(std::move(truths), filter_len);

  std::vector<SourceScores> out;
  for (int i = 0; i < static_cast<int>(sources.size()); ++i) {
    if (sources[i].estimate == nullptr) continue;
    std::vector<int> interferers;
    for (int j = 0; j < static_cast<int>(sources.size()); ++j) {
      if (j != i) interferers.push_back(j);
    }
    SourceScores s;
    s.source = sources[i].name;
    s.estimate = ScoreAll(space, *sources[i].estimate, *sources[i].truth, i,
                          interferers);
    s.baseline = ScoreAll(space, instance.mixture, *sources[i].truth, i,
                          interferers);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace chestsep
