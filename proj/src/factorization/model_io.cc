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
#include "chestsep/factorization/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "chestsep/common/errors.h"

namespace chestsep {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model codec assumes a little-endian host");

template <typename T>
void Put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T Get() {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw InvalidInput("model file is truncated");
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t WindowCode(WindowKind kind) {
  return kind == WindowKind::kHannPeriodic ? 0u : 1u;
}

}  // namespace

std::vector<unsigned char> EncodeModel(const FactorModel& model) {
  model.Validate();
  std::vector<unsigned char> out(std::begin(kModelMagic), std::end(kModelMagic));
  Put<std::uint32_t>(out, kModelVersion);
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(model.bins()));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(model.columns()));
  for (Block b : kAllBlocks) {
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(model.blocks[b]));
  }
  const ModelFingerprint& fp = model.fingerprint;
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(fp.sample_rate));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(fp.stft.fft_size));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(fp.stft.window_size));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(fp.stft.hop_size));
  Put<std::uint32_t>(out, WindowCode(fp.stft.window));
  for (Eigen::Index i = 0; i < model.bins(); ++i) {
    for (Eigen::Index j = 0; j < model.columns(); ++j) {
      Put<double>(out, model.basis(i, j));
    }
  }
  return out;
}

FactorModel DecodeModel(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof(kModelMagic) ||
      std::memcmp(bytes.data(), kModelMagic, sizeof(kModelMagic)) != 0) {
    throw InvalidInput("not a chestsep model file");
  }
  const std::vector<unsigned char> body(bytes.begin() + sizeof(kModelMagic),
                                        bytes.end());
  Reader r(body);
  const auto version = r.Get<std::uint32_t>();
  if (version != kModelVersion) {
    throw InvalidInput("unsupported model version " + std::to_string(version));
  }
  const auto bins = r.Get<std::uint32_t>();
  const auto cols = r.Get<std::uint32_t>();
  FactorModel model;
  for (Block b : kAllBlocks) model.blocks[b] = static_cast<int>(r.Get<std::uint32_t>());
  model.fingerprint.sample_rate = static_cast<int>(r.Get<std::uint32_t>());
  model.fingerprint.stft.fft_size = static_cast<int>(r.Get<std::uint32_t>());
  model.fingerprint.stft.window_size = static_cast<int>(r.Get<std::uint32_t>());
  model.fingerprint.stft.hop_size = static_cast<int>(r.Get<std::uint32_t>());
  const auto window = r.Get<std::uint32_t>();
  if (window > 1) throw InvalidInput("unknown window code in model file");
  model.fingerprint.stft.window =
      window == 0 ? WindowKind::kHannPeriodic : WindowKind::kRectangular;
  if (r.remaining() != static_cast<std::size_t>(bins) * cols * sizeof(double)) {
    throw InvalidInput("model payload size does not match its header");
  }
  model.basis.resize(bins, cols);
  for (std::uint32_t i = 0; i < bins; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) model.basis(i, j) = r.Get<double>();
  }
  model.Validate();
  return model;
}

nlohmann::json ModelHeaderJson(const FactorModel& model) {
  const ModelFingerprint& fp = model.fingerprint;
  nlohmann::json blocks = nlohmann::json::object();
  for (Block b : kAllBlocks) blocks[std::string(BlockName(b))] = model.blocks[b];
  return {
      {"format", std::string(kModelMagic, sizeof(kModelMagic))},
      {"version", kModelVersion},
      {"bins", model.bins()},
      {"columns", model.columns()},
      {"blocks", blocks},
      {"sample_rate", fp.sample_rate},
      {"stft",
       {{"fft_size", fp.stft.fft_size},
        {"window_size", fp.stft.window_size},
        {"hop_size", fp.stft.hop_size},
        {"window", ToString(fp.stft.window)}}},
      {"layout", "row-major float64 little-endian"},
  };
}

void SaveModel(const std::filesystem::path& path, const FactorModel& model) {
  const auto bytes = EncodeModel(model);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  std::ofstream side(path.string() + ".json", std::ios::trunc);
  if (!side) throw InvalidInput("cannot write " + path.string() + ".json");
  side << ModelHeaderJson(model).dump(2) << "\n";
}

FactorModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open model " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return DecodeModel(bytes);
}

}  // namespace chestsep
