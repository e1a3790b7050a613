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

#include "lpvc/evaluation.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpvc/error.h"
#include "random.h"

namespace lpvc {
namespace {

// Step-down recursion: A(z) is minimum phase iff every reflection
// coefficient has magnitude below one.
bool IsMinimumPhase(const std::vector<double>& coeffs) {
  std::vector<double> a(coeffs.begin(), coeffs.end());
  for (std::size_t m = a.size() - 1; m >= 1; --m) {
    const double k = a[m];
    if (!(std::abs(k) < 1.0)) return false;
    const double den = 1.0 - k * k;
    std::vector<double> next(m);
    next[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) next[i] = (a[i] - k * a[m - i]) / den;
    a.swap(next);
  }
  return true;
}

const double kMcdScale = 10.0 / std::log(10.0);

}  // namespace

CepstralVector LpcToCepstrum(const LpcFrame& frame, std::size_t n_ceps) {
  for (double c : frame.coeffs) {
    if (!std::isfinite(c)) throw Error(ErrorCode::kUnstableFrame, "non-finite LPC coefficient");
  }
  if (!IsMinimumPhase(frame.coeffs)) {
    throw Error(ErrorCode::kUnstableFrame, "A(z) has roots on or outside the unit circle");
  }
  const std::vector<double>& a = frame.coeffs;
  const std::size_t p = frame.order();
  CepstralVector out{std::vector<double>(n_ceps, 0.0)};
  std::vector<double>& c = out.mc;  // c[n - 1] holds c_n
  for (std::size_t n = 1; n <= n_ceps; ++n) {
    double acc = n <= p ? -a[n] : 0.0;
    const std::size_t k_lo = n > p ? n - p : 1;
    for (std::size_t k = k_lo; k < n; ++k) {
      acc -= (static_cast<double>(k) / static_cast<double>(n)) * c[k - 1] * a[n - k];
    }
    c[n - 1] = acc;
  }
  return out;
}

CepstralVector WarpCepstrum(const CepstralVector& c, double alpha) {
  const std::size_t m = c.mc.size();
  const double beta = 1.0 - alpha * alpha;
  std::vector<double> g(m + 1, 0.0), d(m + 1, 0.0);
  // Input sequence c_0..c_m processed from the highest index down.
  for (std::size_t step = 0; step <= m; ++step) {
    const std::size_t idx = m - step;
    const double ci = idx == 0 ? 0.0 : c.mc[idx - 1];
    d = g;
    g[0] = ci + alpha * d[0];
    if (m >= 1) g[1] = beta * d[0] + alpha * d[1];
    for (std::size_t j = 2; j <= m; ++j) g[j] = d[j - 1] + alpha * (d[j] - g[j - 1]);
  }
  return CepstralVector{std::vector<double>(g.begin() + 1, g.end())};
}

double Mcd(const CepstralVector& t, const CepstralVector& p) {
  if (t.mc.size() != p.mc.size()) {
    throw Error(ErrorCode::kShapeMismatch, "cepstral vectors of length " +
                                               std::to_string(t.mc.size()) + " and " +
                                               std::to_string(p.mc.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < t.mc.size(); ++i) {
    const double d = t.mc[i] - p.mc[i];
    sum += d * d;
  }
  return kMcdScale * std::sqrt(2.0 * sum);
}

std::vector<CepstralVector> UtteranceCepstra(std::span<const LpcFrame> frames,
                                             const CepstrumOptions& opts) {
  std::vector<CepstralVector> out;
  out.reserve(frames.size());
  for (const LpcFrame& f : frames) {
    CepstralVector c = LpcToCepstrum(f);
    out.push_back(opts.mel_warp ? WarpCepstrum(c, opts.alpha) : std::move(c));
  }
  return out;
}

std::size_t CountValidFrames(std::span<const LpcFrame> a, std::span<const LpcFrame> b,
                             const std::vector<bool>* mask) {
  std::size_t count = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!a[i].silent && !b[i].silent && (mask == nullptr || (*mask)[i])) ++count;
  }
  return count;
}

double UtteranceMcd(std::span<const LpcFrame> a, std::span<const LpcFrame> b,
                    const CepstrumOptions& opts, const std::vector<bool>* mask) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(a.size()) + " vs " +
                                                std::to_string(b.size()) + " frames");
  }
  if (mask != nullptr && mask->size() != a.size()) {
    throw Error(ErrorCode::kLengthMismatch, "frame mask length differs from frame count");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].silent || b[i].silent || (mask != nullptr && !(*mask)[i])) continue;
    CepstralVector ca = LpcToCepstrum(a[i]);
    CepstralVector cb = LpcToCepstrum(b[i]);
    if (opts.mel_warp) {
      ca = WarpCepstrum(ca, opts.alpha);
      cb = WarpCepstrum(cb, opts.alpha);
    }
    sum += Mcd(ca, cb);
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::kNoValidFrames, "no frame is non-silent on both sides");
  return sum / static_cast<double>(count);
}

double SuccessPercent(double mcd_source_target, double mcd_converted_target) {
  if (!(mcd_source_target > 0.0)) {
    throw Error(ErrorCode::kDegenerateBaseline, "source and target are identical (MCD 0)");
  }
  // ratio form: exactly 100 when conv == tgt and exactly 0 when conv == src
  return 100.0 * (1.0 - mcd_converted_target / mcd_source_target);
}

SuccessFragment SuccessRate(std::span<const LpcFrame> src, std::span<const LpcFrame> conv,
                            std::span<const LpcFrame> tgt, const CepstrumOptions& opts,
                            const std::vector<bool>* mask) {
  if (src.size() != tgt.size() || conv.size() != tgt.size()) {
    throw Error(ErrorCode::kLengthMismatch, "source, converted and target frame counts differ");
  }
  SuccessFragment out;
  out.mcd_source_target = UtteranceMcd(src, tgt, opts, mask);
  out.mcd_converted_target = UtteranceMcd(conv, tgt, opts, mask);
  out.success_pct = SuccessPercent(out.mcd_source_target, out.mcd_converted_target);
  out.n_frames = CountValidFrames(src, tgt, mask);
  return out;
}

const char* FrameClassName(FrameClass c) {
  switch (c) {
    case FrameClass::kVoiced: return "voiced";
    case FrameClass::kUnvoiced: return "unvoiced";
    case FrameClass::kSilence: return "silence";
  }
  return "unknown";
}

std::vector<FrameClass> ClassifyVuv(const Waveform& w, const FrameGrid& grid,
                                    const PitchTrack& track) {
  if (track.size() != grid.n_frames) {
    throw Error(ErrorCode::kTrackMismatch, "pitch track and frame grid differ in length");
  }
  std::vector<double> energy(grid.n_frames, 0.0);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    double sum = 0.0;
    for (std::size_t n = grid.start(i); n < grid.start(i) + grid.frame_len && n < w.size(); ++n) {
      sum += w.samples[n] * w.samples[n];
    }
    energy[i] = sum / static_cast<double>(grid.frame_len);
  }
  const double max_energy = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  std::vector<FrameClass> out(grid.n_frames, FrameClass::kSilence);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    if (!(max_energy > 0.0) || energy[i] < 0.02 * max_energy) continue;
    out[i] = track.voiced[i] ? FrameClass::kVoiced : FrameClass::kUnvoiced;
  }
  return out;
}

void AccumulatePhonemeDistances(std::span<const PhonemeLabel> labels,
                                std::span<const LpcFrame> src, std::span<const LpcFrame> tgt,
                                const FrameGrid& grid, PhonemeTable& table,
                                const CepstrumOptions& opts) {
  if (src.size() != tgt.size() || src.size() != grid.n_frames) {
    throw Error(ErrorCode::kLengthMismatch, "frames are not aligned with the grid");
  }
  for (const PhonemeLabel& label : labels) {
    if (label.end <= label.start || label.end - label.start < grid.hop) {
      throw Error(ErrorCode::kEmptySegment, "label '" + label.symbol + "' is shorter than one hop");
    }
    PhonemeStat& stat = table[label.symbol];
    ++stat.n_segments;
    for (std::size_t i = 0; i < grid.n_frames; ++i) {
      const double c = grid.center(i);
      if (c < static_cast<double>(label.start) || c >= static_cast<double>(label.end)) continue;
      if (src[i].silent || tgt[i].silent) continue;
      CepstralVector cs = LpcToCepstrum(src[i]);
      CepstralVector ct = LpcToCepstrum(tgt[i]);
      if (opts.mel_warp) {
        cs = WarpCepstrum(cs, opts.alpha);
        ct = WarpCepstrum(ct, opts.alpha);
      }
      stat.sum_db += Mcd(cs, ct);
      ++stat.n_frames;
    }
  }
}

PhonemeTable PhonemeDistances(std::span<const PhonemeLabel> labels, std::span<const LpcFrame> src,
                              std::span<const LpcFrame> tgt, const FrameGrid& grid,
                              const CepstrumOptions& opts) {
  PhonemeTable table;
  AccumulatePhonemeDistances(labels, src, tgt, grid, table, opts);
  return table;
}

Waveform InjectNoise(const Waveform& w, double level_db_above_floor, std::uint64_t seed) {
  if (!(level_db_above_floor >= 0.0)) {
    throw Error(ErrorCode::kBadSpec, "noise level must be >= 0 dB above the floor");
  }
  const double rms = kNoiseFloorRms * std::pow(10.0, level_db_above_floor / 20.0);
  internal::Rng rng(seed);
  Waveform out = w;
  for (double& x : out.samples) x += rms * rng.Normal();
  return out;
}

}  // namespace lpvc
