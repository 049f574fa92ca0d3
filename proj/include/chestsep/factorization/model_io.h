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
#ifndef CHESTSEP_FACTORIZATION_MODEL_IO_H_
#define CHESTSEP_FACTORIZATION_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"

#include "chestsep/factorization/model.h"

namespace chestsep {

// Binary layout, all integers little-endian uint32:
//   "CHSEPNMF" (8 bytes) | version | F | K | b_heart | b_lung | b_noise |
//   b_unsupervised | sample_rate | fft_size | window_size | hop_size |
//   window_kind | W as F*K float64, row-major.
inline constexpr char kModelMagic[8] = {'C', 'H', 'S', 'E', 'P', 'N', 'M', 'F'};
inline constexpr std::uint32_t kModelVersion = 1;

std::vector<unsigned char> EncodeModel(const FactorModel& model);
// Throws InvalidInput on a bad magic, version, or truncated payload.
FactorModel DecodeModel(const std::vector<unsigned char>& bytes);

// Header fields of the binary container, for the inspection sidecar.
nlohmann::json ModelHeaderJson(const FactorModel& model);

// Writes `path` and `path` + ".json".
void SaveModel(const std::filesystem::path& path, const FactorModel& model);
FactorModel LoadModel(const std::filesystem::path& path);

}  // namespace chestsep

#endif  // CHESTSEP_FACTORIZATION_MODEL_IO_H_
