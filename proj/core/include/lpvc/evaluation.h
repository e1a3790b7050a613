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

#ifndef LPVC_EVALUATION_H_
#define LPVC_EVALUATION_H_

// Objective scoring: LPC cepstra, mel-cepstral distortion, conversion
// success, voiced/unvoiced classes, per-phoneme distances and the additive
// noise model used by the degradation study.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lpvc/lpc.h"
#include "lpvc/prosody.h"
#include "lpvc/signal.h"

namespace lpvc {

inline constexpr std::size_t kCepstralOrder = 24;
inline constexpr double kDefaultWarpAlpha = 0.35;
// Declared noise floor, as RMS relative to full scale.
inline constexpr double kNoiseFloorRms = 1e-4;

struct CepstralVector {
  std::vector<double> mc;  // c_1..c_n
};

// Cepstrum of 1/A(z) via the LPC recursion. Throws kUnstableFrame when A(z)
// has a root on or outside the unit circle.
CepstralVector LpcToCepstrum(const LpcFrame& frame, std::size_t n_ceps = kCepstralOrder);

// First-order all-pass frequency warping of c_1..c_n (c_0 taken as 0).
CepstralVector WarpCepstrum(const CepstralVector& c, double alpha);

// 10/ln(10) * sqrt(2 * sum (t_i - p_i)^2), in dB.
double Mcd(const CepstralVector& t, const CepstralVector& p);

struct CepstrumOptions {
  bool mel_warp = false;
  double alpha = kDefaultWarpAlpha;
};

std::vector<CepstralVector> UtteranceCepstra(std::span<const LpcFrame> frames,
                                             const CepstrumOptions& opts = {});

// Mean per-frame MCD over frames non-silent on both sides and, when |mask| is
// given, selected by it. Throws kLengthMismatch, kNoValidFrames.
double UtteranceMcd(std::span<const LpcFrame> a, std::span<const LpcFrame> b,
                    const CepstrumOptions& opts = {}, const std::vector<bool>* mask = nullptr);

struct SuccessFragment {
  double mcd_source_target = 0.0;
  double mcd_converted_target = 0.0;
  double success_pct = 0.0;
  std::size_t n_frames = 0;
};

// Percentage reduction of the distance to the target achieved by
// conversion. Throws kDegenerateBaseline when source and target coincide.
double SuccessPercent(double mcd_source_target, double mcd_converted_target);

SuccessFragment SuccessRate(std::span<const LpcFrame> src, std::span<const LpcFrame> conv,
                            std::span<const LpcFrame> tgt, const CepstrumOptions& opts = {},
                            const std::vector<bool>* mask = nullptr);

std::size_t CountValidFrames(std::span<const LpcFrame> a, std::span<const LpcFrame> b,
                             const std::vector<bool>* mask = nullptr);

enum class FrameClass { kVoiced, kUnvoiced, kSilence };

const char* FrameClassName(FrameClass c);

// Silence below 2% of the loudest frame's energy, otherwise voiced iff the
// pitch track says so.
std::vector<FrameClass> ClassifyVuv(const Waveform& w, const FrameGrid& grid,
                                    const PitchTrack& track);

struct PhonemeLabel {
  std::string symbol;
  std::size_t start = 0;  // samples, inclusive
  std::size_t end = 0;    // samples, exclusive
  bool voiced = false;
};

struct PhonemeStat {
  double sum_db = 0.0;
  std::size_t n_frames = 0;
  std::size_t n_segments = 0;

  double mean_db() const { return n_frames == 0 ? 0.0 : sum_db / static_cast<double>(n_frames); }
};

using PhonemeTable = std::map<std::string, PhonemeStat>;

// Adds, for every label, the per-frame MCD between |src| and |tgt| over
// frames whose centres fall in [start, end). Throws kEmptySegment for labels
// shorter than one hop.
void AccumulatePhonemeDistances(std::span<const PhonemeLabel> labels,
                                std::span<const LpcFrame> src, std::span<const LpcFrame> tgt,
                                const FrameGrid& grid, PhonemeTable& table,
                                const CepstrumOptions& opts = {});

PhonemeTable PhonemeDistances(std::span<const PhonemeLabel> labels, std::span<const LpcFrame> src,
                              std::span<const LpcFrame> tgt, const FrameGrid& grid,
                              const CepstrumOptions& opts = {});

// Adds seeded white Gaussian noise at |level_db| above the declared floor.
Waveform InjectNoise(const Waveform& w, double level_db_above_floor, std::uint64_t seed);

}  // namespace lpvc

#endif  // LPVC_EVALUATION_H_
