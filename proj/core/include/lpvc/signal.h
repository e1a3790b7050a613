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

#ifndef LPVC_SIGNAL_H_
#define LPVC_SIGNAL_H_

// Sample-domain primitives: the Waveform carrier, first-order emphasis
// filters, fixed-rate framing, Gaussian analysis windows and windowed
// overlap-add resynthesis.

#include <cstddef>
#include <span>
#include <vector>

namespace lpvc {

inline constexpr double kEmphasisCoefficient = 0.95;
inline constexpr double kDefaultFrameMs = 25.0;
inline constexpr double kDefaultOverlapMs = 20.0;
inline constexpr double kDefaultWindowSigma = 0.2;

// Real-valued mono signal in [-1, 1] at a fixed rate.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Overlapping frames stored row-major; frame i starts at sample i * hop.
struct FrameGrid {
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  std::size_t n_frames = 0;
  std::vector<double> frames;

  std::span<const double> frame(std::size_t i) const {
    return {frames.data() + i * frame_len, frame_len};
  }
  std::span<double> frame(std::size_t i) {
    return {frames.data() + i * frame_len, frame_len};
  }
  std::size_t start(std::size_t i) const { return i * hop; }
  // Center of frame i in (possibly fractional) samples.
  double center(std::size_t i) const {
    return static_cast<double>(i * hop) +
           0.5 * static_cast<double>(frame_len - 1);
  }
  // Number of signal samples spanned by the grid.
  std::size_t covered_length() const {
    return n_frames == 0 ? 0 : (n_frames - 1) * hop + frame_len;
  }
};

struct WindowSpec {
  std::size_t length = 0;
  double sigma = kDefaultWindowSigma;
};

// Throws kEmptyInput or kNonFiniteInput.
void CheckWaveform(const Waveform& w);

// y[0] = x[0]; y[n] = x[n] - 0.95 x[n-1].
Waveform PreEmphasize(const Waveform& w);
// y[n] = x[n] + 0.95 y[n-1]; exact inverse of PreEmphasize.
Waveform DeEmphasize(const Waveform& w);

// Frame length and hop from millisecond durations, rounded to the nearest
// sample.
std::size_t MsToSamples(double ms, int sample_rate);

// Splits |w| into frames of |frame_ms| overlapping by |overlap_ms|. Trailing
// samples that do not fill a whole frame are dropped.
FrameGrid FrameSignal(const Waveform& w, double frame_ms = kDefaultFrameMs,
                      double overlap_ms = kDefaultOverlapMs);

// Frame geometry only (frames left empty); same rules as FrameSignal.
FrameGrid FrameGeometry(std::size_t n_samples, int sample_rate,
                        double frame_ms = kDefaultFrameMs,
                        double overlap_ms = kDefaultOverlapMs);

// W(n) = exp(-(n - m)^2 / (2 (sigma N)^2)), m = (N - 1) / 2.
std::vector<double> GaussianWindow(const WindowSpec& spec);

// Multiplies every frame by |window| in place.
void ApplyWindow(FrameGrid& grid, std::span<const double> window);

// Weighted overlap-add: each (already analysis-windowed) frame is windowed
// again and the sum is normalized by the accumulated squared window, floored
// at 1e-12.
Waveform OverlapAdd(const FrameGrid& grid, std::span<const double> window,
                    int sample_rate);

}  // namespace lpvc

#endif  // LPVC_SIGNAL_H_
