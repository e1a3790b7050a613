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

#include "lpvc/prosody.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lpvc/error.h"

namespace lpvc {
namespace {

constexpr double kUnvoicedMarkMs = 10.0;
// A shorter lag wins when its peak is within this fraction of the best one.
constexpr double kPitchLowPassHz = 900.0;
constexpr double kSubharmonicTolerance = 0.9;

// Second-order Butterworth low-pass, bilinear transform.
std::vector<double> LowPass(const std::vector<double>& x, double cutoff_hz, double fs) {
  const double k = std::tan(M_PI * std::min(cutoff_hz, 0.45 * fs) / fs);
  const double norm = 1.0 / (1.0 + std::sqrt(2.0) * k + k * k);
  const double b0 = k * k * norm, b1 = 2.0 * b0, b2 = b0;
  const double a1 = 2.0 * (k * k - 1.0) * norm;
  const double a2 = (1.0 - std::sqrt(2.0) * k + k * k) * norm;
  std::vector<double> y(x.size());
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = b0 * x[n] + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[n];
    y2 = y1;
    y1 = y[n];
  }
  return y;
}

// Best normalized autocorrelation of x[start, start+span) over lag-1..lag+1.
double RawPeak(const std::vector<double>& x, std::size_t start, std::size_t span, std::size_t lag) {
  double mean = 0.0;
  for (std::size_t t = 0; t < span; ++t) mean += x[start + t];
  mean /= static_cast<double>(span);
  double best = -1.0;
  for (std::size_t l = lag - 1; l <= lag + 1 && l < span; ++l) {
    double num = 0.0, e1 = 0.0, e2 = 0.0;
    for (std::size_t t = 0; t + l < span; ++t) {
      const double a = x[start + t] - mean, b = x[start + t + l] - mean;
      num += a * b;
      e1 += a * a;
      e2 += b * b;
    }
    const double den = std::sqrt(e1 * e2);
    if (den > 1e-20) best = std::max(best, num / den);
  }
  return best;
}

double FrameEnergy(const std::vector<double>& x, std::size_t start, std::size_t len) {
  double sum = 0.0;
  for (std::size_t n = start; n < start + len; ++n) sum += x[n] * x[n];
  return sum / static_cast<double>(len);
}

// Frame index owning sample s: nearest frame centre.
std::size_t FrameAt(const PitchTrack& track, double s) {
  if (track.size() == 0) return 0;
  const double pos = (s - 0.5 * static_cast<double>(track.frame_len - 1)) /
                     static_cast<double>(track.hop);
  const double idx = std::round(std::clamp(pos, 0.0, static_cast<double>(track.size() - 1)));
  return static_cast<std::size_t>(idx);
}

std::size_t ArgMax(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
  std::size_t best = lo;
  for (std::size_t n = lo; n < hi; ++n) {
    if (x[n] > x[best]) best = n;
  }
  return best;
}

// Asymmetric Hann taper; a zero half-width means the side is flat.
double Taper(std::ptrdiff_t d, std::size_t left, std::size_t right) {
  if (d < 0) {
    if (left == 0) return 1.0;
    const double u = static_cast<double>(-d) / static_cast<double>(left);
    return u >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(M_PI * u));
  }
  if (right == 0) return 1.0;
  const double u = static_cast<double>(d) / static_cast<double>(right);
  return u >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(M_PI * u));
}

}  // namespace

double PitchTrack::MeanVoicedF0() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (voiced[i]) {
      sum += f0[i];
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::size_t PitchTrack::VoicedCount() const {
  return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
}

PitchTrack EstimatePitch(const Waveform& w, const FrameGrid& grid, const PitchConfig& cfg) {
  CheckWaveform(w);
  if (w.sample_rate < 8000) {
    throw Error(ErrorCode::kBadSpec, "pitch tracking needs fs >= 8000, got " +
                                         std::to_string(w.sample_rate));
  }
  const double fs = w.sample_rate;
  const std::size_t n = w.size();
  const auto lag_min = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(fs / cfg.max_f0)));
  const auto lag_max = static_cast<std::size_t>(std::ceil(fs / cfg.min_f0));
  const std::size_t span = std::min(n, std::max(grid.frame_len, 3 * lag_max));

  PitchTrack track;
  track.frame_len = grid.frame_len;
  track.hop = grid.hop;
  track.sample_rate = w.sample_rate;
  track.f0.assign(grid.n_frames, 0.0);
  track.voiced.assign(grid.n_frames, false);
  track.energy.resize(grid.n_frames);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    track.energy[i] = FrameEnergy(w.samples, grid.start(i), grid.frame_len);
  }
  const double max_energy =
      track.energy.empty() ? 0.0 : *std::max_element(track.energy.begin(), track.energy.end());
  if (!(max_energy > 0.0)) return track;

  // Correlate a low-passed copy so that formant ringing does not compete
  // with the period peak.
  const std::vector<double> smooth = LowPass(w.samples, kPitchLowPassHz, fs);
  std::vector<double> seg(span);
  std::vector<double> cum(span + 1);
  std::vector<double> corr(lag_max + 2, 0.0);
  for (std::size_t i = 0; i < grid.n_frames; ++i) {
    if (track.energy[i] < cfg.energy_fraction * max_energy) continue;
    const double c = grid.center(i);
    const double first = std::clamp(std::round(c - 0.5 * static_cast<double>(span)), 0.0,
                                    static_cast<double>(n - span));
    const auto start = static_cast<std::size_t>(first);
    const double mean =
        std::accumulate(smooth.begin() + static_cast<std::ptrdiff_t>(start),
                        smooth.begin() + static_cast<std::ptrdiff_t>(start + span), 0.0) /
        static_cast<double>(span);
    cum[0] = 0.0;
    for (std::size_t t = 0; t < span; ++t) {
      seg[t] = smooth[start + t] - mean;
      cum[t + 1] = cum[t] + seg[t] * seg[t];
    }
    const std::size_t top = std::min(lag_max + 1, span - 1);
    std::fill(corr.begin(), corr.end(), 0.0);
    for (std::size_t lag = lag_min - 1; lag <= top; ++lag) {
      double num = 0.0;
      for (std::size_t t = 0; t + lag < span; ++t) num += seg[t] * seg[t + lag];
      const double e1 = cum[span - lag];
      const double e2 = cum[span] - cum[lag];
      const double den = std::sqrt(e1 * e2);
      corr[lag] = den > 1e-20 ? num / den : 0.0;
    }

    const std::size_t hi = std::min(lag_max, top - 1);
    double best = -1.0;
    for (std::size_t lag = lag_min; lag <= hi; ++lag) {
      if (corr[lag] >= corr[lag - 1] && corr[lag] >= corr[lag + 1]) best = std::max(best, corr[lag]);
    }
    if (best < cfg.voicing_threshold) continue;
    std::size_t pick = 0;
    for (std::size_t lag = lag_min; lag <= hi; ++lag) {
      if (corr[lag] >= corr[lag - 1] && corr[lag] >= corr[lag + 1] &&
          corr[lag] >= kSubharmonicTolerance * best) {
        pick = lag;
        break;
      }
    }
    const double l = corr[pick - 1], m = corr[pick], r = corr[pick + 1];
    const double curve = l - 2.0 * m + r;
    const double shift = curve < 0.0 ? std::clamp(0.5 * (l - r) / curve, -0.5, 0.5) : 0.0;
    const double f0 = fs / (static_cast<double>(pick) + shift);
    if (f0 < cfg.min_f0 || f0 > cfg.max_f0) continue;
    // Voicing is judged on the unfiltered signal at the chosen period; the
    // low-passed copy correlates too easily on noise.
    if (RawPeak(w.samples, start, span, pick) < cfg.voicing_threshold) continue;
    track.f0[i] = f0;
    track.voiced[i] = true;
  }
  return track;
}

PitchMarks PlacePitchMarks(const Waveform& w, const PitchTrack& track) {
  PitchMarks marks;
  const std::size_t n = w.size();
  if (n == 0) return marks;
  const std::size_t step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(kUnvoicedMarkMs * w.sample_rate / 1000.0)));

  // Voiced regions in samples: runs of voiced frames, each frame owning the
  // hop-wide stretch around its centre.
  struct Region {
    std::size_t first_frame, last_frame, begin, end;
  };
  std::vector<Region> regions;
  const double half_hop = 0.5 * static_cast<double>(track.hop);
  for (std::size_t i = 0; i < track.size();) {
    if (!track.voiced[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < track.size() && track.voiced[j + 1]) ++j;
    const double b = i == 0 ? 0.0 : track.center(i) - half_hop;
    const double e = j + 1 == track.size() ? static_cast<double>(n) : track.center(j) + half_hop;
    regions.push_back({i, j, static_cast<std::size_t>(std::max(0.0, std::floor(b))),
                       std::min(n, static_cast<std::size_t>(std::ceil(e)))});
    i = j + 1;
  }

  const auto period_at = [&](std::size_t s, const Region& reg) {
    std::size_t f = std::clamp(FrameAt(track, static_cast<double>(s)), reg.first_frame, reg.last_frame);
    return static_cast<double>(w.sample_rate) / track.f0[f];
  };

  std::vector<std::size_t> voiced_marks;
  std::vector<std::pair<std::size_t, std::size_t>> region_marks;  // [first, last) into voiced_marks
  for (const Region& reg : regions) {
    std::size_t loudest = reg.first_frame;
    for (std::size_t f = reg.first_frame; f <= reg.last_frame; ++f) {
      if (track.energy[f] > track.energy[loudest]) loudest = f;
    }
    const double c = track.center(loudest);
    const double t0 = static_cast<double>(w.sample_rate) / track.f0[loudest];
    const auto lo = static_cast<std::size_t>(std::clamp(c - 0.5 * t0, static_cast<double>(reg.begin),
                                                        static_cast<double>(reg.end - 1)));
    const auto hi = static_cast<std::size_t>(std::clamp(c + 0.5 * t0, static_cast<double>(lo + 1),
                                                        static_cast<double>(reg.end)));
    const std::size_t seed = ArgMax(w.samples, lo, hi);

    std::vector<std::size_t> left, right;
    for (std::size_t prev = seed;;) {
      const double t = period_at(prev, reg);
      const double a = static_cast<double>(prev) + 0.8 * t;
      const double b = static_cast<double>(prev) + 1.2 * t;
      if (a >= static_cast<double>(reg.end)) break;
      const auto from = static_cast<std::size_t>(std::ceil(a));
      const auto to = std::min(reg.end, static_cast<std::size_t>(std::floor(b)) + 1);
      if (from >= to) break;
      prev = ArgMax(w.samples, from, to);
      right.push_back(prev);
    }
    for (std::size_t prev = seed;;) {
      const double t = period_at(prev, reg);
      const double a = static_cast<double>(prev) - 1.2 * t;
      const double b = static_cast<double>(prev) - 0.8 * t;
      if (b < static_cast<double>(reg.begin)) break;
      const auto from = static_cast<std::size_t>(std::max(static_cast<double>(reg.begin), std::ceil(a)));
      const auto to = static_cast<std::size_t>(std::floor(b)) + 1;
      if (from >= to) break;
      prev = ArgMax(w.samples, from, to);
      left.push_back(prev);
    }
    const std::size_t first = voiced_marks.size();
    voiced_marks.insert(voiced_marks.end(), left.rbegin(), left.rend());
    voiced_marks.push_back(seed);
    voiced_marks.insert(voiced_marks.end(), right.begin(), right.end());
    region_marks.emplace_back(first, voiced_marks.size());
  }

  std::vector<std::size_t>& out = marks.positions;
  if (region_marks.empty()) {
    for (std::size_t s = 0; s < n; s += step) out.push_back(s);
    return marks;
  }
  // Leading unvoiced stretch, walked back from the first voiced mark.
  {
    std::vector<std::size_t> lead;
    const std::size_t first = voiced_marks[region_marks.front().first];
    for (std::size_t k = 1; k * step <= first; ++k) lead.push_back(first - k * step);
    out.insert(out.end(), lead.rbegin(), lead.rend());
  }
  for (std::size_t r = 0; r < region_marks.size(); ++r) {
    const auto [b, e] = region_marks[r];
    out.insert(out.end(), voiced_marks.begin() + static_cast<std::ptrdiff_t>(b),
               voiced_marks.begin() + static_cast<std::ptrdiff_t>(e));
    if (r + 1 < region_marks.size()) {
      const std::size_t g0 = voiced_marks[e - 1];
      const std::size_t g1 = voiced_marks[region_marks[r + 1].first];
      const auto gap = static_cast<double>(g1 - g0);
      const auto parts = std::max<long long>(1, std::llround(gap / static_cast<double>(step)));
      for (long long k = 1; k < parts; ++k) {
        out.push_back(g0 + static_cast<std::size_t>(std::llround(gap * static_cast<double>(k) /
                                                                 static_cast<double>(parts))));
      }
    }
  }
  for (std::size_t s = out.back() + step; s < n; s += step) out.push_back(s);

  // Enforce strict monotonicity (propagation from neighbouring regions can
  // touch).
  std::vector<std::size_t> clean;
  clean.reserve(out.size());
  for (std::size_t s : out) {
    if (s < n && (clean.empty() || s > clean.back())) clean.push_back(s);
  }
  out.swap(clean);
  return marks;
}

Waveform PsolaModify(const Waveform& w, const PitchMarks& marks, std::span<const double> factors) {
  const std::vector<std::size_t>& m = marks.positions;
  if (factors.size() != m.size()) {
    throw Error(ErrorCode::kShapeMismatch, std::to_string(factors.size()) + " factors for " +
                                               std::to_string(m.size()) + " marks");
  }
  for (double f : factors) {
    if (!(f >= kMinPitchFactor && f <= kMaxPitchFactor)) {
      throw Error(ErrorCode::kBadFactor, "pitch factor " + std::to_string(f) + " outside [0.25, 4]");
    }
  }
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] >= n || (i > 0 && m[i] <= m[i - 1])) {
      throw Error(ErrorCode::kShapeMismatch, "pitch marks must be strictly increasing and in range");
    }
  }
  if (m.empty()) return w;

  const std::size_t count = m.size();
  const auto left = [&](std::size_t i) -> std::size_t { return i == 0 ? 0 : m[i] - m[i - 1]; };
  const auto right = [&](std::size_t i) -> std::size_t { return i + 1 == count ? 0 : m[i + 1] - m[i]; };

  std::vector<double> out(n, 0.0);
  std::vector<double> weight(n, 0.0);
  double t = static_cast<double>(m[0]);
  bool first_placement = true;
  while (t < static_cast<double>(n)) {
    const auto pos = static_cast<std::size_t>(std::llround(t));
    if (pos >= n) break;
    // Nearest analysis mark to the synthesis instant.
    auto it = std::lower_bound(m.begin(), m.end(), pos);
    std::size_t i = static_cast<std::size_t>(it - m.begin());
    if (i == count || (i > 0 && pos - m[i - 1] <= m[i] - pos)) i = i == 0 ? 0 : i - 1;

    // The outermost segments carry the signal edges untapered, but only when
    // laid at their own position; repeats use symmetric windows.
    std::size_t lw = left(i), rw = right(i);
    const bool flat_left = lw == 0 && first_placement;
    const bool flat_right = rw == 0 && pos >= m[i];
    if (lw == 0 && !flat_left) lw = rw != 0 ? rw : std::max<std::size_t>(1, m[i]);
    if (rw == 0 && !flat_right) rw = lw;
    first_placement = false;

    const std::ptrdiff_t d_lo = flat_left ? -static_cast<std::ptrdiff_t>(pos) : -static_cast<std::ptrdiff_t>(lw);
    const std::ptrdiff_t d_hi = flat_right ? static_cast<std::ptrdiff_t>(n - 1 - pos) : static_cast<std::ptrdiff_t>(rw);
    for (std::ptrdiff_t d = d_lo; d <= d_hi; ++d) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(m[i]) + d;
      const std::ptrdiff_t dst = static_cast<std::ptrdiff_t>(pos) + d;
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(n) || dst < 0 ||
          dst >= static_cast<std::ptrdiff_t>(n)) {
        continue;
      }
      const double g = Taper(d, flat_left ? 0 : lw, flat_right ? 0 : rw);
      out[static_cast<std::size_t>(dst)] += g * w.samples[static_cast<std::size_t>(src)];
      weight[static_cast<std::size_t>(dst)] += g;
    }
    if (flat_right) break;
    const double period = static_cast<double>(right(i) != 0 ? right(i) : lw);
    t += period / factors[i];
  }
  for (std::size_t s = 0; s < n; ++s) out[s] /= std::max(weight[s], 1.0);
  return Waveform{std::move(out), w.sample_rate};
}

std::vector<double> ProsodyFactors(const PitchTrack& src_track, const PitchTrack& tgt_track) {
  if (src_track.size() != tgt_track.size()) {
    throw Error(ErrorCode::kTrackMismatch, "source track has " + std::to_string(src_track.size()) +
                                               " frames, target has " +
                                               std::to_string(tgt_track.size()));
  }
  const std::size_t n = tgt_track.size();
  // Target contour with unvoiced gaps bridged linearly and edges held.
  std::vector<double> target(n, 0.0);
  std::vector<std::size_t> voiced_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (tgt_track.voiced[i]) voiced_idx.push_back(i);
  }
  std::vector<double> factors(n, 1.0);
  if (voiced_idx.empty()) return factors;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::lower_bound(voiced_idx.begin(), voiced_idx.end(), i);
    if (it == voiced_idx.end()) {
      target[i] = tgt_track.f0[voiced_idx.back()];
    } else if (*it == i || it == voiced_idx.begin()) {
      target[i] = tgt_track.f0[*it];
    } else {
      const std::size_t hi = *it, lo = *(it - 1);
      const double u = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      target[i] = (1.0 - u) * tgt_track.f0[lo] + u * tgt_track.f0[hi];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (src_track.voiced[i] && src_track.f0[i] > 0.0) {
      factors[i] = std::clamp(target[i] / src_track.f0[i], kMinPitchFactor, kMaxPitchFactor);
    }
  }
  return factors;
}

std::vector<double> FrameValuesAtMarks(const PitchTrack& track, std::span<const double> values,
                                       const PitchMarks& marks) {
  std::vector<double> out(marks.positions.size(), 1.0);
  if (values.empty()) return out;
  for (std::size_t k = 0; k < marks.positions.size(); ++k) {
    const double pos = (static_cast<double>(marks.positions[k]) -
                        0.5 * static_cast<double>(track.frame_len - 1)) /
                       static_cast<double>(track.hop);
    if (pos <= 0.0) {
      out[k] = values.front();
    } else if (pos >= static_cast<double>(values.size() - 1)) {
      out[k] = values.back();
    } else {
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const double u = pos - static_cast<double>(lo);
      out[k] = (1.0 - u) * values[lo] + u * values[lo + 1];
    }
  }
  return out;
}

Waveform TransferProsody(const Waveform& source, const PitchTrack& src_track,
                         const PitchTrack& tgt_track) {
  const std::vector<double> frame_factors = ProsodyFactors(src_track, tgt_track);
  const PitchMarks marks = PlacePitchMarks(source, src_track);
  const std::vector<double> mark_factors = FrameValuesAtMarks(src_track, frame_factors, marks);
  return PsolaModify(source, marks, mark_factors);
}

double PitchRmsError(const PitchTrack& a, const PitchTrack& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a.voiced[i] && b.voiced[i]) {
      const double d = a.f0[i] - b.f0[i];
      sum += d * d;
      ++count;
    }
  }
  return count == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : std::sqrt(sum / static_cast<double>(count));
}

}  // namespace lpvc
