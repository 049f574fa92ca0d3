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
#ifndef CHESTSEP_DSP_WAV_IO_H_
#define CHESTSEP_DSP_WAV_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "chestsep/dsp/audio_clip.h"

namespace chestsep {

enum class WavFormat { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file (16-bit PCM or 32-bit IEEE float). PCM samples
// are scaled by 1/32768. Throws InvalidInput on anything else.
AudioClip ReadWav(const std::filesystem::path& path);
AudioClip DecodeWav(const std::vector<unsigned char>& bytes);

// Float output is written verbatim (values outside [-1, 1] survive); PCM
// output is clipped and rounded.
void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavFormat format = WavFormat::kFloat32);
std::vector<unsigned char> EncodeWav(const AudioClip& clip, WavFormat format);

}  // namespace chestsep

#endif  // CHESTSEP_DSP_WAV_IO_H_
