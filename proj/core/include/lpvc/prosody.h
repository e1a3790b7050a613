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

#ifndef LPVC_PROSODY_H_
#define LPVC_PROSODY_H_

// Pitch tracking, pitch-mark placement and TD-PSOLA pitch modification.

#include <cstddef>
#include <span>
#include <vector>

#include "lpvc/signal.h"

namespace lpvc {

struct PitchConfig {
  double min_f0 = 50.0;
  double max_f0 = 500.0;
  double voicing_threshold = 0.3;  // normalized autocorrelation peak
  double energy_fraction = 0.02;   // of the loudest frame
};

struct PitchTrack {
  std::vector<double> f0;     // Hz, 0 when unvoiced
  std::vector<bool> voiced;
  std::vector<double> energy;  // mean-square frame energy
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = 0;

  std::size_t size() const { return f0.size(); }
  double center(std::size_t i) const {
    return static_cast<double>(i * hop) + 0.5 * static_cast<double>(frame_len - 1);
  }
  double MeanVoicedF0() const;
  std::size_t VoicedCount() const;
};

struct PitchMarks {
  std::vector<std::size_t> positions;
};

// Normalized-autocorrelation pitch tracker evaluated at each frame of
// |grid|. The correlation window is centred on the frame and spans at least
// three periods of the lowest searchable pitch.
PitchTrack EstimatePitch(const Waveform& w, const FrameGrid& grid, const PitchConfig& cfg = {});

// Glottal-cycle anchors: local maxima roughly one period apart inside voiced
// regions, seeded at the loudest voiced frame and propagated in both
// directions; unvoiced stretches get marks every 10 ms.
PitchMarks PlacePitchMarks(const Waveform& w, const PitchTrack& track);

inline constexpr double kMinPitchFactor = 0.25;
inline constexpr double kMaxPitchFactor = 4.0;

// TD-PSOLA. |factors| holds one pitch ratio per analysis mark (2.0 raises
// pitch an octave). Output length equals input length.
Waveform PsolaModify(const Waveform& w, const PitchMarks& marks, std::span<const double> factors);

// Replaces the source pitch contour with the target's. Tracks are aligned by
// frame index.
Waveform TransferProsody(const Waveform& source, const PitchTrack& src_track,
                         const PitchTrack& tgt_track);

// Per-frame pitch ratios used by TransferProsody: target/source for source-
// voiced frames (target gaps bridged by interpolation), 1 elsewhere, clamped.
std::vector<double> ProsodyFactors(const PitchTrack& src_track, const PitchTrack& tgt_track);

// Linear interpolation of per-frame values to sample positions.
std::vector<double> FrameValuesAtMarks(const PitchTrack& track, std::span<const double> values,
                                       const PitchMarks& marks);

// RMS of (a - b) over frames voiced in both tracks; NaN when none are.
double PitchRmsError(const PitchTrack& a, const PitchTrack& b);

}  // namespace lpvc

#endif  // LPVC_PROSODY_H_
