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

#include "lpvc/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "lpvc/error.h"
#include "lpvc/wav.h"
#include "random.h"

namespace lpvc {
namespace {

using internal::MixSeed;
using internal::Rng;

constexpr std::size_t kPreroll = 128;
constexpr double kSegmentFadeMs = 4.0;
constexpr double kWordFadeMs = 10.0;
constexpr double kMaxPeak = 0.95;

// Adult male reference resonances (Hz).
const std::map<std::string, std::vector<Resonance>>& ReferenceResonances() {
  static const std::map<std::string, std::vector<Resonance>> kTable{
      {"a", {{730, 80}, {1090, 90}, {2440, 120}, {3400, 175}, {4500, 250}}},
      {"i", {{270, 60}, {2290, 100}, {3010, 120}, {3700, 175}, {4500, 250}}},
      {"o", {{570, 70}, {840, 80}, {2410, 120}, {3300, 175}, {4500, 250}}},
      {"e", {{530, 70}, {1840, 100}, {2480, 120}, {3500, 175}, {4500, 250}}},
      {"u", {{300, 60}, {870, 80}, {2240, 120}, {3300, 175}, {4500, 250}}},
      {"s", {{4300, 1200}}},
      {"f", {{1500, 3000}, {3800, 2500}}},
      {"t", {{3500, 1500}}},
  };
  return kTable;
}

double DurationWeight(const std::string& symbol) {
  if (IsVowel(symbol)) return 1.0;
  return symbol == "t" ? 0.5 : 0.8;
}

// Cascade of two-pole resonators applied to x[from, to), returning the tail
// [keep_from, to).
std::vector<double> Resonate(const std::vector<double>& x, std::size_t from, std::size_t keep_from,
                             std::size_t to, const std::vector<Resonance>& res, int fs) {
  std::vector<double> y(x.begin() + static_cast<std::ptrdiff_t>(from),
                        x.begin() + static_cast<std::ptrdiff_t>(to));
  for (const Resonance& r : res) {
    const double radius = std::exp(-M_PI * r.bandwidth_hz / fs);
    const double theta = 2.0 * M_PI * r.center_hz / fs;
    const double c1 = 2.0 * radius * std::cos(theta);
    const double c2 = -radius * radius;
    double y1 = 0.0, y2 = 0.0;
    for (double& v : y) {
      const double out = v + c1 * y1 + c2 * y2;
      y2 = y1;
      y1 = out;
      v = out;
    }
  }
  return {y.begin() + static_cast<std::ptrdiff_t>(keep_from - from), y.end()};
}

double Rms(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return x.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(x.size()));
}

void Fade(std::vector<double>& x, std::size_t len) {
  len = std::min(len, x.size() / 2);
  for (std::size_t n = 0; n < len; ++n) {
    const double g = 0.5 * (1.0 - std::cos(M_PI * (static_cast<double>(n) + 0.5) / static_cast<double>(len)));
    x[n] *= g;
    x[x.size() - 1 - n] *= g;
  }
}

}  // namespace

bool IsVowel(const std::string& symbol) {
  return symbol == "a" || symbol == "i" || symbol == "o" || symbol == "e" || symbol == "u";
}

void SyntheticSpeakerSpec::Validate(int sample_rate) const {
  if (!(base_f0 >= 50.0 && base_f0 <= 500.0)) {
    throw Error(ErrorCode::kBadSpec, id + ": base_f0 must lie in [50, 500] Hz");
  }
  if (!(f0_jitter_pct >= 0.0 && f0_jitter_pct < 20.0)) {
    throw Error(ErrorCode::kBadSpec, id + ": f0 jitter must be in [0, 20) %");
  }
  if (gain_contour.empty()) throw Error(ErrorCode::kBadSpec, id + ": empty gain contour");
  for (const std::string& sym : PhonemeInventory()) {
    auto it = formants.find(sym);
    if (it == formants.end() || it->second.empty()) {
      throw Error(ErrorCode::kBadSpec, id + ": no resonances for '" + sym + "'");
    }
    for (const Resonance& r : it->second) {
      if (!(r.center_hz > 0.0 && r.center_hz < 0.5 * sample_rate) || !(r.bandwidth_hz > 0.0)) {
        throw Error(ErrorCode::kBadSpec, id + ": resonance for '" + sym + "' outside (0, fs/2)");
      }
    }
  }
}

SyntheticSpeakerSpec MakeSpeaker(const std::string& id, const std::string& gender, double base_f0,
                                 double formant_scale, int sample_rate) {
  SyntheticSpeakerSpec spec;
  spec.id = id;
  spec.gender = gender;
  spec.base_f0 = base_f0;
  const double ceiling = 0.46 * sample_rate;
  for (const auto& [sym, list] : ReferenceResonances()) {
    std::vector<Resonance>& dst = spec.formants[sym];
    // Resonances pushed past the band edge are dropped; a phoneme never
    // loses all of them.
    for (const Resonance& r : list) {
      if (r.center_hz * formant_scale <= ceiling) dst.push_back({r.center_hz * formant_scale, r.bandwidth_hz});
    }
    if (dst.empty()) dst.push_back({std::min(list.front().center_hz * formant_scale, ceiling), list.front().bandwidth_hz});
  }
  return spec;
}

std::vector<SyntheticSpeakerSpec> DefaultSpeakers(int sample_rate) {
  return {
      MakeSpeaker("male1", "male", 120.86, 1.00, sample_rate),
      MakeSpeaker("male2", "male", 102.89, 0.93, sample_rate),
      MakeSpeaker("female1", "female", 245.68, 1.17, sample_rate),
      MakeSpeaker("female2", "female", 226.32, 1.12, sample_rate),
  };
}

std::vector<std::pair<std::string, std::string>> DefaultPairing() {
  return {{"male1", "female1"}, {"male2", "female2"}, {"female1", "male1"},
          {"female2", "male2"}, {"male1", "male2"},   {"female1", "female2"}};
}

std::vector<WordScript> MakeWordScripts(std::size_t words, std::uint64_t seed, int sample_rate) {
  const auto n = static_cast<std::size_t>(std::llround(kWordSeconds * sample_rate));
  const std::vector<std::string>& inventory = PhonemeInventory();
  std::vector<WordScript> scripts;
  scripts.reserve(words);
  for (std::size_t w = 0; w < words; ++w) {
    Rng rng(MixSeed(seed, w));
    WordScript script;
    char id[32];
    std::snprintf(id, sizeof(id), "w%03zu", w);
    script.word_id = id;
    const std::size_t count = 2 + rng.Below(3);
    std::vector<std::string> symbols;
    while (symbols.size() < count) {
      const std::string& sym = inventory[rng.Below(inventory.size())];
      if (!symbols.empty() && symbols.back() == sym) continue;
      symbols.push_back(sym);
    }
    if (std::none_of(symbols.begin(), symbols.end(), IsVowel)) {
      const std::size_t slot = rng.Below(count);
      std::string vowel;
      do {
        vowel = inventory[rng.Below(5)];
      } while ((slot > 0 && symbols[slot - 1] == vowel) || (slot + 1 < count && symbols[slot + 1] == vowel));
      symbols[slot] = vowel;
    }
    std::vector<double> weights;
    for (const std::string& s : symbols) weights.push_back(DurationWeight(s) * rng.Uniform(0.8, 1.2));
    double total = 0.0;
    for (double v : weights) total += v;
    double cum = 0.0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < count; ++k) {
      cum += weights[k];
      const std::size_t end =
          k + 1 == count ? n : static_cast<std::size_t>(std::llround(cum / total * static_cast<double>(n)));
      script.segments.push_back({symbols[k], start, end});
      start = end;
    }
    script.intonation = rng.Uniform(-0.15, 0.15);
    scripts.push_back(std::move(script));
  }
  return scripts;
}

Waveform RenderWord(const SyntheticSpeakerSpec& spec, const WordScript& script, std::uint64_t seed,
                    int sample_rate) {
  const std::size_t n = script.segments.empty() ? 0 : script.segments.back().end;
  Rng rng(seed);
  const double fs = sample_rate;

  // Excitation: glottal pulse trains through voiced runs, white noise
  // elsewhere.
  std::vector<double> excitation(n, 0.0);
  std::vector<double> aspiration(n, 0.0);
  double next_pulse = -1.0;
  for (const WordSegment& seg : script.segments) {
    if (IsVowel(seg.symbol)) {
      if (next_pulse < static_cast<double>(seg.start)) {
        next_pulse = static_cast<double>(seg.start) + rng.Uniform(0.0, fs / spec.base_f0);
      }
      while (next_pulse < static_cast<double>(seg.end)) {
        excitation[static_cast<std::size_t>(next_pulse)] += 1.0;
        const double rel = next_pulse / static_cast<double>(n) - 0.5;
        const double f0 = spec.base_f0 * (1.0 + script.intonation * rel) *
                          (1.0 + 0.01 * spec.f0_jitter_pct * rng.Normal());
        next_pulse += fs / f0;
      }
      for (std::size_t t = seg.start; t < seg.end; ++t) aspiration[t] = rng.Normal();
    } else {
      next_pulse = -1.0;
      const std::size_t len = seg.end - seg.start;
      for (std::size_t t = seg.start; t < seg.end; ++t) {
        double env = 1.0;
        if (seg.symbol == "t") {
          // Release burst followed by decaying aspiration.
          const double ms = 1000.0 * static_cast<double>(t - seg.start) / fs;
          env = ms < 12.0 ? 1.0 : 0.3 + 0.7 * std::exp(-(ms - 12.0) / 15.0);
        }
        excitation[t] = env * rng.Normal();
      }
      (void)len;
    }
  }
  // Glottal spectral tilt on the pulse component.
  {
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      bool voiced = false;
      for (const WordSegment& seg : script.segments) {
        if (t >= seg.start && t < seg.end) voiced = IsVowel(seg.symbol);
      }
      if (voiced) {
        prev = excitation[t] + 0.8 * prev;
        excitation[t] = prev;
      } else {
        prev = 0.0;
      }
    }
  }

  std::vector<double> out;
  out.reserve(n);
  const auto seg_fade = static_cast<std::size_t>(std::llround(kSegmentFadeMs * fs / 1000.0));
  for (const WordSegment& seg : script.segments) {
    const std::size_t from = seg.start >= kPreroll ? seg.start - kPreroll : 0;
    const std::vector<Resonance>& res = spec.formants.at(seg.symbol);
    std::vector<double> y = Resonate(excitation, from, seg.start, seg.end, res, sample_rate);
    if (IsVowel(seg.symbol) && spec.aspiration > 0.0) {
      // Breath noise through the same tract, at a fixed level below the pulses.
      const std::vector<double> breath = Resonate(aspiration, from, seg.start, seg.end, res, sample_rate);
      const double rb = Rms(breath), rp = Rms(y);
      if (rb > 0.0) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += spec.aspiration * rp / rb * breath[k];
      }
    }
    double target = IsVowel(seg.symbol) ? spec.voiced_rms : spec.unvoiced_rms;
    if (seg.symbol == "f") target *= 0.85;
    const double rms = Rms(y);
    if (rms > 0.0) {
      for (double& v : y) v *= target / rms;
    }
    Fade(y, seg_fade);
    out.insert(out.end(), y.begin(), y.end());
  }

  // Amplitude contour and word-edge fades.
  const std::size_t knots = spec.gain_contour.size();
  for (std::size_t t = 0; t < n; ++t) {
    double g = spec.gain_contour.front();
    if (knots > 1) {
      const double pos = static_cast<double>(t) / static_cast<double>(n - 1) * static_cast<double>(knots - 1);
      const auto k = std::min(static_cast<std::size_t>(pos), knots - 2);
      const double u = pos - static_cast<double>(k);
      g = (1.0 - u) * spec.gain_contour[k] + u * spec.gain_contour[k + 1];
    }
    out[t] *= g;
  }
  Fade(out, static_cast<std::size_t>(std::llround(kWordFadeMs * fs / 1000.0)));
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > kMaxPeak) {
    for (double& v : out) v *= kMaxPeak / peak;
  }
  return Waveform{std::move(out), sample_rate};
}

Manifest GenerateSyntheticCorpus(const std::vector<SyntheticSpeakerSpec>& specs, std::size_t words,
                                 std::uint64_t seed, const std::filesystem::path& out_dir,
                                 int sample_rate) {
  if (words < 2) throw Error(ErrorCode::kBadSpec, "a corpus needs at least 2 words");
  if (specs.empty()) throw Error(ErrorCode::kBadSpec, "no speakers given");
  std::set<std::string> ids;
  for (const SyntheticSpeakerSpec& s : specs) {
    s.Validate(sample_rate);
    if (!ids.insert(s.id).second) throw Error(ErrorCode::kBadSpec, "duplicate speaker id " + s.id);
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out_dir.string());

  const std::vector<WordScript> scripts = MakeWordScripts(words, seed, sample_rate);
  Manifest m;
  m.sample_rate = sample_rate;
  m.order = 24;
  m.base_dir = std::filesystem::absolute(out_dir);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const SyntheticSpeakerSpec& spec = specs[s];
    SpeakerEntry entry{spec.id, spec.gender, {}};
    const std::filesystem::path dir = m.base_dir / spec.id;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
    const std::uint64_t speaker_seed = MixSeed(seed, 1000 + s);
    for (std::size_t w = 0; w < scripts.size(); ++w) {
      const WordScript& script = scripts[w];
      const Waveform wave = RenderWord(spec, script, MixSeed(speaker_seed, w), sample_rate);
      const std::filesystem::path path = dir / (script.word_id + ".wav");
      SaveWav(wave, path);
      UtteranceEntry u{script.word_id, path, {}};
      for (const WordSegment& seg : script.segments) {
        u.labels.push_back({seg.symbol, seg.start, seg.end, IsVowel(seg.symbol)});
      }
      entry.utterances.push_back(std::move(u));
    }
    m.speakers.push_back(std::move(entry));
  }
  for (const auto& [a, b] : DefaultPairing()) {
    if (ids.count(a) && ids.count(b)) m.pairing.emplace_back(a, b);
  }
  if (m.pairing.empty()) {
    for (std::size_t s = 0; s + 1 < specs.size(); ++s) m.pairing.emplace_back(specs[s].id, specs[s + 1].id);
  }
  SaveManifest(m, m.base_dir / "manifest.json");
  return m;
}

}  // namespace lpvc
