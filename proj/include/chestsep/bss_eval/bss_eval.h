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
#ifndef CHESTSEP_BSS_EVAL_BSS_EVAL_H_
#define CHESTSEP_BSS_EVAL_BSS_EVAL_H_

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chestsep/dsp/audio_clip.h"
#include "chestsep/mixgen/mixgen.h"
#include "chestsep/separation/separation.h"

namespace chestsep {

inline constexpr int kDefaultFilterLength = 512;
inline constexpr double kScoreCapDb = 200.0;

// Components of an estimate zero-padded to N + filter_len - 1 samples, the
// support of the delayed references.
struct Decomposition {
  std::vector<double> s_target;
  std::vector<double> e_interf;
  std::vector<double> e_noise;
  std::vector<double> e_artif;
};

// Gram matrix and spectra of a fixed set of references under delays
// 0..filter_len-1, reusable across estimates.
class ReferenceSpace {
 public:
  // Throws InvalidInput when clips differ in length or rate, or filter_len < 1.
  ReferenceSpace(std::vector<AudioClip> refs, int filter_len);

  // Least-squares projection of the zero-padded estimate onto the delay span
  // of the listed references, length N + filter_len - 1.
  std::vector<double> Project(const AudioClip& estimate,
                              std::span<const int> subset) const;

  int size() const { return static_cast<int>(refs_.size()); }
  int filter_len() const { return filter_len_; }
  std::size_t length() const { return length_; }

 private:
  std::vector<AudioClip> refs_;
  int filter_len_;
  std::size_t length_;
  int nfft_;
  std::vector<std::vector<std::complex<double>>> spectra_;
  Eigen::MatrixXd gram_;  // (R * L) x (R * L)
};

// Target span, then the span of all sources for the interference, then the
// noise reference for e_noise (zero without one).
Decomposition Decompose(const AudioClip& estimate, const AudioClip& target_ref,
                        std::span<const AudioClip> other_refs,
                        const std::optional<AudioClip>& noise_ref,
                        int filter_len);

// Scores in dB, clamped to +-kScoreCapDb. Throw UndefinedScore when the
// target component has zero energy.
double Sdr(const Decomposition& d);
double Sir(const Decomposition& d);
double SiSdr(const AudioClip& estimate, const AudioClip& target_ref);

struct BssScores {
  double sdr_db = 0.0;
  double sir_db = 0.0;
  double si_sdr_db = 0.0;
};

struct SourceScores {
  std::string source;  // heart, lung or noise
  BssScores estimate;
  BssScores baseline;  // the raw mixture scored against the same target
};

// Each separated source against its ground truth, with the other non-silent
// ground truths as interference. Noise is scored only when both the
// instance and the result carry it.
std::vector<SourceScores> ScoreInstance(const SeparationResult& result,
                                        const MixtureInstance& instance,
                                        int filter_len);

}  // namespace chestsep

#endif  // CHESTSEP_BSS_EVAL_BSS_EVAL_H_
