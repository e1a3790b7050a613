// Copyright 2026 The lpvc Authors. All Rights Reserved.
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

#ifndef LPVC_WAV_H_
#define LPVC_WAV_H_

#include <filesystem>

#include "lpvc/signal.h"

namespace lpvc {

// Reads a RIFF/WAVE file holding 16-bit PCM mono audio. Samples are scaled
// by 1/32768.
Waveform LoadWav(const std::filesystem::path& path);

// Writes 16-bit PCM mono. Samples are clamped to [-1, 1] and rounded to the
// nearest quantization step (32767 for +1.0).
void SaveWav(const Waveform& w, const std::filesystem::path& path);

}  // namespace lpvc

#endif  // LPVC_WAV_H_
