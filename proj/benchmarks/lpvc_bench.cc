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


// Microbenchmarks for the hot paths: LPC analysis, one LM epoch and PSOLA.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lpvc/lpc.h"
#include "lpvc/mapping.h"
#include "lpvc/prosody.h"
#include "lpvc/signal.h"

namespace {

std::vector<double> Noise(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> v(n);
  for (double& x : v) x = g(gen);
  return v;
}

void BM_LevinsonDurbin(benchmark::State& state) {
  const auto order = static_cast<std::size_t>(state.range(0));
  const auto frame = Noise(276, 1);
  const auto r = lpvc::Autocorrelation(frame, order);
  for (auto _ : state) {
    auto res = lpvc::LevinsonDurbin(r);
    benchmark::DoNotOptimize(res.frame.coeffs.data());
  }
}
BENCHMARK(BM_LevinsonDurbin)->Arg(8)->Arg(16)->Arg(24);

void BM_AnalyzeUtterance(benchmark::State& state) {
  const lpvc::Waveform w{Noise(6836, 2), 11025};
  for (auto _ : state) {
    auto an = lpvc::AnalyzeUtterance(w);
    benchmark::DoNotOptimize(an.frames.data());
  }
  state.SetItemsProcessed(state.iterations() * 120);
}
BENCHMARK(BM_AnalyzeUtterance)->Unit(benchmark::kMillisecond);

void BM_LmEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<lpvc::FeaturePair> pairs(n);
  for (auto& p : pairs) {
    p.source.resize(24);
    p.target.resize(24);
    for (double& x : p.source) x = u(gen);
    for (double& y : p.target) y = u(gen);
  }
  lpvc::TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.max_pairs = 0;
  for (auto _ : state) {
    auto map = lpvc::Train(pairs, cfg);
    benchmark::DoNotOptimize(map.w1.data());
  }
}
BENCHMARK(BM_LmEpoch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Psola(benchmark::State& state) {
  const int fs = 11025;
  std::vector<double> s(6836, 0.0);
  for (double t = 0.0; t < 6836.0; t += fs / 120.0) s[static_cast<std::size_t>(t)] = 1.0;
  double y1 = 0.0, y2 = 0.0;
  const double r = 0.97, c = 2.0 * r * std::cos(2.0 * std::numbers::pi * 700.0 / fs);
  for (double& x : s) {
    const double y = 0.05 * x + c * y1 - r * r * y2;
    y2 = y1;
    y1 = y;
    x = y;
  }
  const lpvc::Waveform w{s, fs};
  const auto track = lpvc::EstimatePitch(w, lpvc::FrameGeometry(w.size(), fs));
  const auto marks = lpvc::PlacePitchMarks(w, track);
  const std::vector<double> factors(marks.positions.size(), 2.0);
  for (auto _ : state) {
    auto out = lpvc::PsolaModify(w, marks, factors);
    benchmark::DoNotOptimize(out.samples.data());
  }
}
BENCHMARK(BM_Psola)->Unit(benchmark::kMicrosecond);

void BM_EstimatePitch(benchmark::State& state) {
  const lpvc::Waveform w{Noise(6836, 4), 11025};
  const auto grid = lpvc::FrameGeometry(w.size(), 11025);
  for (auto _ : state) {
    auto t = lpvc::EstimatePitch(w, grid);
    benchmark::DoNotOptimize(t.f0.data());
  }
}
BENCHMARK(BM_EstimatePitch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
