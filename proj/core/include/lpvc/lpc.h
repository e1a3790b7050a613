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

#ifndef LPVC_LPC_H_
#define LPVC_LPC_H_

// All-pole (LPC) modelling. A frame is described by the denominator
// polynomial A(z) = sum_{i=0..p} a_i z^-i with a_0 = 1, so the predictor is
// x^(n) = -sum_{i=1..p} a_i x(n - i) and the synthesis filter is 1/A(z).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lpvc/signal.h"

namespace lpvc {

inline constexpr int kDefaultLpcOrder = 24;

struct LpcFrame {
  std::vector<double> coeffs{1.0};  // a_0..a_p, a_0 == 1
  double gain = 0.0;                // sqrt of final prediction-error energy
  double frame_energy = 0.0;        // R(0)
  bool silent = false;              // degenerate frame, flat model

  std::size_t order() const { return coeffs.size() - 1; }
  static LpcFrame Flat(std::size_t order, double energy = 0.0);
};

struct ResidualFrame {
  std::vector<double> samples;
};

// Biased estimator R(tau) = (1/N) sum_t x(t) x(t + tau), tau = 0..max_lag.
std::vector<double> Autocorrelation(std::span<const double> frame, std::size_t max_lag);

// Smallest order satisfying p >= 4 + fs/1000.
int MinimumLpcOrder(int sample_rate);

// The configured order when given, otherwise MinimumLpcOrder().
int LpcOrder(int sample_rate, std::optional<int> configured = std::nullopt);

// True when |order| is below MinimumLpcOrder(sample_rate).
bool OrderBelowMinimum(int order, int sample_rate);

struct LevinsonResult {
  LpcFrame frame;
  std::vector<double> reflection;  // k_1..k_p
  double error_energy = 0.0;
};

// Solves the Toeplitz normal equations for r.size() - 1 coefficients.
// Throws kSingularInput when R(0) <= 0 or the prediction error collapses.
LevinsonResult LevinsonDurbin(std::span<const double> r);

// Autocorrelation + Levinson-Durbin on an already windowed frame. Silent or
// degenerate frames come back as a flat model with |silent| set.
LpcFrame AnalyzeFrame(std::span<const double> windowed, int order);

// e[n] = sum_i a_i x[n - i]. |history| holds the samples preceding |x| in
// time order (history.back() is x[-1]); missing history is zero.
ResidualFrame InverseFilter(std::span<const double> x, const LpcFrame& model,
                            std::span<const double> history = {});

struct SynthesisResult {
  std::vector<double> samples;
  std::vector<double> state;  // last p outputs, time order
};

// y[n] = e[n] - sum_{i=1..p} a_i y[n - i]. |state| holds previous outputs in
// time order and must have length p. Throws kUnstableModel if the output
// magnitude exceeds 1e6.
SynthesisResult SynthesisFilter(std::span<const double> excitation, const LpcFrame& model,
                                std::span<const double> state);

// Output power of 1/A(z) driven by unit-variance white noise, from the
// step-down reflection coefficients. Throws UnstableModel if A(z) is not
// minimum phase.
double PowerGain(const LpcFrame& model);

struct AnalysisConfig {
  double frame_ms = kDefaultFrameMs;
  double overlap_ms = kDefaultOverlapMs;
  double window_sigma = kDefaultWindowSigma;
  int order = kDefaultLpcOrder;
};

// Frame-level LPC description of one utterance. Frame i owns the synthesis
// segment [segment_bounds[i], segment_bounds[i + 1]), centred on its analysis
// window; the first and last segments extend to the signal edges.
struct UtteranceAnalysis {
  int sample_rate = 0;
  FrameGrid grid;                       // geometry only
  std::vector<double> emphasized;       // pre-emphasized signal
  std::vector<LpcFrame> frames;
  std::vector<std::size_t> segment_bounds;
};

std::vector<std::size_t> SegmentBounds(const FrameGrid& grid, std::size_t n_samples);

// pre-emphasis -> framing -> Gaussian window -> per-frame LPC.
UtteranceAnalysis AnalyzeUtterance(const Waveform& w, const AnalysisConfig& cfg = {});

// Continuous residual of |signal| with the model switching at each segment
// boundary.
std::vector<double> UtteranceResidual(std::span<const double> signal,
                                      std::span<const LpcFrame> frames,
                                      std::span<const std::size_t> bounds);

// Inverse of UtteranceResidual: chained synthesis filtering, zero initial
// state.
std::vector<double> UtteranceSynthesis(std::span<const double> excitation,
                                       std::span<const LpcFrame> frames,
                                       std::span<const std::size_t> bounds);

}  // namespace lpvc

#endif  // LPVC_LPC_H_
