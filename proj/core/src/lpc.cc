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

#include "lpvc/lpc.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpvc/error.h"

namespace lpvc {
namespace {

constexpr double kErrorFloor = 1e-12;
constexpr double kUnstableMagnitude = 1e6;

}  // namespace

LpcFrame LpcFrame::Flat(std::size_t order, double energy) {
  LpcFrame f;
  f.coeffs.assign(order + 1, 0.0);
  f.coeffs[0] = 1.0;
  f.gain = 0.0;
  f.frame_energy = energy;
  f.silent = true;
  return f;
}

std::vector<double> Autocorrelation(std::span<const double> frame, std::size_t max_lag) {
  if (max_lag >= frame.size()) {
    throw Error(ErrorCode::kLagTooLarge, "max lag " + std::to_string(max_lag) +
                                             " must be below frame length " +
                                             std::to_string(frame.size()));
  }
  const double inv_n = 1.0 / static_cast<double>(frame.size());
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double sum = 0.0;
    for (std::size_t t = 0; t + lag < frame.size(); ++t) sum += frame[t] * frame[t + lag];
    r[lag] = sum * inv_n;
  }
  return r;
}

int MinimumLpcOrder(int sample_rate) {
  return static_cast<int>(std::ceil(4.0 + static_cast<double>(sample_rate) / 1000.0));
}

int LpcOrder(int sample_rate, std::optional<int> configured) {
  return configured.value_or(MinimumLpcOrder(sample_rate));
}

bool OrderBelowMinimum(int order, int sample_rate) {
  return order < MinimumLpcOrder(sample_rate);
}

LevinsonResult LevinsonDurbin(std::span<const double> r) {
  if (r.empty() || !(r[0] > 0.0) || !std::isfinite(r[0])) {
    throw Error(ErrorCode::kSingularInput, "R(0) must be positive");
  }
  const std::size_t p = r.size() - 1;
  LevinsonResult out;
  std::vector<double>& a = out.frame.coeffs;
  a.assign(p + 1, 0.0);
  a[0] = 1.0;
  out.reflection.resize(p);
  std::vector<double> prev(p + 1, 0.0);
  double err = r[0];

  for (std::size_t m = 1; m <= p; ++m) {
    double acc = r[m];
    for (std::size_t i = 1; i < m; ++i) acc += a[i] * r[m - i];
    const double k = -acc / err;
    if (!std::isfinite(k) || std::abs(k) >= 1.0) {
      throw Error(ErrorCode::kSingularInput,
                  "reflection coefficient " + std::to_string(k) + " at order " + std::to_string(m));
    }
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(m), prev.begin());
    for (std::size_t i = 1; i < m; ++i) a[i] = prev[i] + k * prev[m - i];
    a[m] = k;
    out.reflection[m - 1] = k;
    err *= (1.0 - k * k);
    if (err < kErrorFloor) {
      throw Error(ErrorCode::kSingularInput, "prediction error collapsed at order " + std::to_string(m));
    }
  }
  out.error_energy = err;
  out.frame.gain = std::sqrt(err);
  out.frame.frame_energy = r[0];
  return out;
}

LpcFrame AnalyzeFrame(std::span<const double> windowed, int order) {
  const auto p = static_cast<std::size_t>(order);
  const std::vector<double> r = Autocorrelation(windowed, p);
  try {
    return LevinsonDurbin(r).frame;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularInput) throw;
    return LpcFrame::Flat(p, std::max(r[0], 0.0));
  }
}

ResidualFrame InverseFilter(std::span<const double> x, const LpcFrame& model,
                            std::span<const double> history) {
  const std::size_t p = model.order();
  ResidualFrame out{std::vector<double>(x.size())};
  const auto past = [&](std::ptrdiff_t idx) -> double {
    if (idx >= 0) return x[static_cast<std::size_t>(idx)];
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(history.size()) + idx;
    return h >= 0 ? history[static_cast<std::size_t>(h)] : 0.0;
  };
  for (std::size_t n = 0; n < x.size(); ++n) {
    double e = x[n];
    for (std::size_t i = 1; i <= p; ++i) {
      e += model.coeffs[i] * past(static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(i));
    }
    out.samples[n] = e;
  }
  return out;
}

SynthesisResult SynthesisFilter(std::span<const double> excitation, const LpcFrame& model,
                                std::span<const double> state) {
  const std::size_t p = model.order();
  if (state.size() != p) {
    throw Error(ErrorCode::kShapeMismatch, "filter state has " + std::to_string(state.size()) +
                                               " values, model order is " + std::to_string(p));
  }
  // history = [state..., outputs...]
  std::vector<double> hist(state.begin(), state.end());
  hist.reserve(p + excitation.size());
  for (double e : excitation) {
    double y = e;
    const std::size_t top = hist.size();
    for (std::size_t i = 1; i <= p; ++i) y -= model.coeffs[i] * hist[top - i];
    if (!(std::abs(y) <= kUnstableMagnitude)) {
      throw Error(ErrorCode::kUnstableModel, "synthesis output diverged");
    }
    hist.push_back(y);
  }
  SynthesisResult out;
  out.samples.assign(hist.begin() + static_cast<std::ptrdiff_t>(p), hist.end());
  out.state.assign(hist.end() - static_cast<std::ptrdiff_t>(p), hist.end());
  return out;
}

std::vector<std::size_t> SegmentBounds(const FrameGrid& grid, std::size_t n_samples) {
  std::vector<std::size_t> bounds(grid.n_frames + 1);
  bounds[0] = 0;
  const std::size_t offset = (grid.frame_len - grid.hop) / 2;
  for (std::size_t i = 1; i < grid.n_frames; ++i) bounds[i] = i * grid.hop + offset;
  bounds[grid.n_frames] = n_samples;
  return bounds;
}

UtteranceAnalysis AnalyzeUtterance(const Waveform& w, const AnalysisConfig& cfg) {
  CheckWaveform(w);
  UtteranceAnalysis out;
  out.sample_rate = w.sample_rate;
  out.emphasized = PreEmphasize(w).samples;
  out.grid = FrameGeometry(w.size(), w.sample_rate, cfg.frame_ms, cfg.overlap_ms);
  const std::vector<double> window = GaussianWindow({out.grid.frame_len, cfg.window_sigma});
  out.frames.reserve(out.grid.n_frames);
  std::vector<double> buf(out.grid.frame_len);
  for (std::size_t i = 0; i < out.grid.n_frames; ++i) {
    const std::size_t start = out.grid.start(i);
    for (std::size_t n = 0; n < buf.size(); ++n) buf[n] = out.emphasized[start + n] * window[n];
    out.frames.push_back(AnalyzeFrame(buf, cfg.order));
  }
  out.segment_bounds = SegmentBounds(out.grid, w.size());
  return out;
}

std::vector<double> UtteranceResidual(std::span<const double> signal,
                                      std::span<const LpcFrame> frames,
                                      std::span<const std::size_t> bounds) {
  if (bounds.size() != frames.size() + 1 || bounds.back() != signal.size()) {
    throw Error(ErrorCode::kShapeMismatch, "segment bounds do not match frames and signal");
  }
  std::vector<double> residual;
  residual.reserve(signal.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto seg = signal.subspan(bounds[i], bounds[i + 1] - bounds[i]);
    const auto history = signal.first(bounds[i]);
    const ResidualFrame e = InverseFilter(seg, frames[i], history);
    residual.insert(residual.end(), e.samples.begin(), e.samples.end());
  }
  return residual;
}

double PowerGain(const LpcFrame& model) {
  std::vector<double> a = model.coeffs;
  double gain = 1.0;
  for (std::size_t m = a.size() - 1; m >= 1; --m) {
    const double k = a[m];
    if (!(std::abs(k) < 1.0)) throw Error(ErrorCode::kUnstableModel, "A(z) is not minimum phase");
    const double den = 1.0 - k * k;
    gain /= den;
    std::vector<double> next(m);
    next[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) next[i] = (a[i] - k * a[m - i]) / den;
    a.swap(next);
  }
  return gain;
}

std::vector<double> UtteranceSynthesis(std::span<const double> excitation,
                                       std::span<const LpcFrame> frames,
                                       std::span<const std::size_t> bounds) {
  if (bounds.size() != frames.size() + 1 || bounds.back() != excitation.size()) {
    throw Error(ErrorCode::kShapeMismatch, "segment bounds do not match frames and excitation");
  }
  std::size_t max_order = 0;
  for (const LpcFrame& f : frames) max_order = std::max(max_order, f.order());
  // Carried outputs, time order, padded to the largest order in use.
  std::vector<double> carried(max_order, 0.0);
  std::vector<double> out;
  out.reserve(excitation.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::size_t p = frames[i].order();
    const auto seg = excitation.subspan(bounds[i], bounds[i + 1] - bounds[i]);
    const std::span<const double> state(carried.data() + (max_order - p), p);
    SynthesisResult r = SynthesisFilter(seg, frames[i], state);
    out.insert(out.end(), r.samples.begin(), r.samples.end());
    // Refresh the carried tail from the full output so far.
    const std::size_t have = std::min(max_order, out.size());
    std::fill(carried.begin(), carried.end(), 0.0);
    std::copy(out.end() - static_cast<std::ptrdiff_t>(have), out.end(),
              carried.end() - static_cast<std::ptrdiff_t>(have));
  }
  return out;
}

}  // namespace lpvc
