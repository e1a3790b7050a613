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

#include "lpvc/signal.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpvc/error.h"

namespace lpvc {

void CheckWaveform(const Waveform& w) {
  if (w.samples.empty()) throw Error(ErrorCode::kEmptyInput, "waveform has no samples");
  if (w.sample_rate <= 0) {
    throw Error(ErrorCode::kBadSpec,
                "sample rate must be positive, got " + std::to_string(w.sample_rate));
  }
  for (double x : w.samples) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteInput, "waveform sample is not finite");
  }
}

Waveform PreEmphasize(const Waveform& w) {
  if (w.samples.empty()) throw Error(ErrorCode::kEmptyInput, "pre-emphasis of empty signal");
  Waveform out{std::vector<double>(w.size()), w.sample_rate};
  out.samples[0] = w.samples[0];
  for (std::size_t n = 1; n < w.size(); ++n) {
    out.samples[n] = w.samples[n] - kEmphasisCoefficient * w.samples[n - 1];
  }
  return out;
}

Waveform DeEmphasize(const Waveform& w) {
  if (w.samples.empty()) throw Error(ErrorCode::kEmptyInput, "de-emphasis of empty signal");
  Waveform out{std::vector<double>(w.size()), w.sample_rate};
  double prev = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    prev = w.samples[n] + kEmphasisCoefficient * prev;
    out.samples[n] = prev;
  }
  return out;
}

std::size_t MsToSamples(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::llround(ms * sample_rate / 1000.0));
}

FrameGrid FrameGeometry(std::size_t n_samples, int sample_rate, double frame_ms,
                        double overlap_ms) {
  if (!(frame_ms > overlap_ms) || !(overlap_ms > 0.0) || sample_rate <= 0) {
    throw Error(ErrorCode::kBadFrameSpec,
                "need frame_ms > overlap_ms > 0 (frame " + std::to_string(frame_ms) +
                    " ms, overlap " + std::to_string(overlap_ms) + " ms)");
  }
  FrameGrid grid;
  grid.frame_len = MsToSamples(frame_ms, sample_rate);
  grid.hop = MsToSamples(frame_ms - overlap_ms, sample_rate);
  if (grid.hop < 1 || grid.frame_len <= grid.hop) {
    throw Error(ErrorCode::kBadFrameSpec, "frame length must exceed a hop of at least one sample");
  }
  if (n_samples < grid.frame_len) {
    throw Error(ErrorCode::kTooShort, std::to_string(n_samples) +
                                          " samples is shorter than one frame of " +
                                          std::to_string(grid.frame_len));
  }
  grid.n_frames = (n_samples - grid.frame_len) / grid.hop + 1;
  return grid;
}

FrameGrid FrameSignal(const Waveform& w, double frame_ms, double overlap_ms) {
  FrameGrid grid = FrameGeometry(w.size(), w.sample_rate, frame_ms, overlap_ms);
  grid.frames.resize(grid.n_frames * grid.frame_len);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    auto first = w.samples.begin() + static_cast<std::ptrdiff_t>(grid.start(i));
    std::copy(first, first + static_cast<std::ptrdiff_t>(grid.frame_len), grid.frame(i).begin());
  }
  return grid;
}

std::vector<double> GaussianWindow(const WindowSpec& spec) {
  if (spec.length < 2 || !(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::kBadWindowSpec, "window needs N >= 2 and sigma > 0");
  }
  const double n_len = static_cast<double>(spec.length);
  const double center = 0.5 * (n_len - 1.0);
  const double spread = spec.sigma * n_len;
  std::vector<double> window(spec.length);
  for (std::size_t n = 0; n < spec.length; ++n) {
    const double d = static_cast<double>(n) - center;
    window[n] = std::exp(-(d * d) / (2.0 * spread * spread));
  }
  return window;
}

void ApplyWindow(FrameGrid& grid, std::span<const double> window) {
  if (window.size() != grid.frame_len) {
    throw Error(ErrorCode::kShapeMismatch, "window length " + std::to_string(window.size()) +
                                               " != frame length " +
                                               std::to_string(grid.frame_len));
  }
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    auto f = grid.frame(i);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] *= window[n];
  }
}

Waveform OverlapAdd(const FrameGrid& grid, std::span<const double> window, int sample_rate) {
  if (window.size() != grid.frame_len) {
    throw Error(ErrorCode::kShapeMismatch, "window length " + std::to_string(window.size()) +
                                               " != frame length " +
                                               std::to_string(grid.frame_len));
  }
  if (grid.frames.size() != grid.n_frames * grid.frame_len) {
    throw Error(ErrorCode::kShapeMismatch, "frame storage does not match grid shape");
  }
  constexpr double kFloor = 1e-12;
  const std::size_t len = grid.covered_length();
  std::vector<double> acc(len, 0.0);
  std::vector<double> norm(len, 0.0);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    const auto f = grid.frame(i);
    const std::size_t off = grid.start(i);
    for (std::size_t n = 0; n < grid.frame_len; ++n) {
      acc[off + n] += f[n] * window[n];
      norm[off + n] += window[n] * window[n];
    }
  }
  for (std::size_t s = 0; s < len; ++s) acc[s] /= std::max(norm[s], kFloor);
  return Waveform{std::move(acc), sample_rate};
}

}  // namespace lpvc
