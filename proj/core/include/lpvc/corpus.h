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

#ifndef LPVC_CORPUS_H_
#define LPVC_CORPUS_H_

// Seeded synthetic speakers: parallel "words" built from formant-filtered
// pulse trains (vowels) and shaped noise (fricatives and a plosive).

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lpvc/manifest.h"
#include "lpvc/signal.h"

namespace lpvc {

inline constexpr double kWordSeconds = 0.62;
inline constexpr int kDefaultSampleRate = 11025;

struct Resonance {
  double center_hz = 0.0;
  double bandwidth_hz = 0.0;
};

struct SyntheticSpeakerSpec {
  std::string id;
  std::string gender;
  double base_f0 = 120.0;       // Hz
  double f0_jitter_pct = 1.0;   // per-period standard deviation
  std::map<std::string, std::vector<Resonance>> formants;  // per phoneme symbol
  // Piecewise-linear amplitude across the word.
  std::vector<double> gain_contour{1.0, 0.8};
  double voiced_rms = 0.15;
  double unvoiced_rms = 0.04;
  double aspiration = 0.1;  // breath noise RMS relative to the voiced pulses

  // Throws kBadSpec.
  void Validate(int sample_rate) const;
};

inline const std::vector<std::string>& PhonemeInventory() {
  static const std::vector<std::string> kSymbols{"a", "i", "o", "e", "u", "s", "t", "f"};
  return kSymbols;
}
bool IsVowel(const std::string& symbol);

// Speaker whose resonances are the reference set scaled by |formant_scale|.
SyntheticSpeakerSpec MakeSpeaker(const std::string& id, const std::string& gender, double base_f0,
                                 double formant_scale, int sample_rate = kDefaultSampleRate);

// Two male and two female speakers at average pitches 120.86, 102.89,
// 245.68 and 226.32 Hz.
std::vector<SyntheticSpeakerSpec> DefaultSpeakers(int sample_rate = kDefaultSampleRate);

// Default conversion pairs: male1->female1, male2->female2, female1->male1,
// female2->male2, male1->male2, female1->female2.
std::vector<std::pair<std::string, std::string>> DefaultPairing();

struct WordSegment {
  std::string symbol;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct WordScript {
  std::string word_id;
  std::vector<WordSegment> segments;
  double intonation = 0.0;  // relative f0 slope across the word
};

// Shared segment scripts; each word spans round(0.62 * fs) samples.
std::vector<WordScript> MakeWordScripts(std::size_t words, std::uint64_t seed, int sample_rate);

Waveform RenderWord(const SyntheticSpeakerSpec& spec, const WordScript& script, std::uint64_t seed,
                    int sample_rate);

// Writes <out_dir>/<speaker>/<word>.wav and <out_dir>/manifest.json.
// Throws kBadSpec when words < 2 or a spec is invalid.
Manifest GenerateSyntheticCorpus(const std::vector<SyntheticSpeakerSpec>& specs, std::size_t words,
                                 std::uint64_t seed, const std::filesystem::path& out_dir,
                                 int sample_rate = kDefaultSampleRate);

}  // namespace lpvc

#endif  // LPVC_CORPUS_H_
