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

#ifndef LPVC_PIPELINE_H_
#define LPVC_PIPELINE_H_

// End-to-end train / convert / evaluate driver over a manifest corpus.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpvc/evaluation.h"
#include "lpvc/lpc.h"
#include "lpvc/manifest.h"
#include "lpvc/mapping.h"
#include "lpvc/prosody.h"
#include "lpvc/signal.h"

namespace lpvc {

enum class ResidualSource { kSource, kTarget };

// Where prosody transfer runs: on the synthesized output, or on the
// excitation before it goes through the converted filters.
enum class ProsodyDomain { kOutput, kResidual };

// Non-parallel evaluation pairs each source word with a different target
// word and aligns frames by index, truncating to the shorter one. Heuristic.
enum class Pairing { kParallel, kNonParallel };

enum class EvalMode {
  kModel,         // converted frames come from the trained map
  kOracleTarget,  // converted := target, upper bound
  kPassthrough,   // converted := source, lower bound
};

const char* EvalModeName(EvalMode mode);
EvalMode ParseEvalMode(std::string_view name);

struct PipelineConfig {
  AnalysisConfig analysis;
  TrainConfig train;
  PitchConfig pitch;
  CepstrumOptions cepstrum;
  double train_fraction = 0.8;
  ResidualSource residual = ResidualSource::kSource;
  ProsodyDomain prosody_domain = ProsodyDomain::kOutput;

  void Validate() const;
};

// Reads a JSON config. Unknown keys are rejected with BadSpec.
PipelineConfig ParsePipelineConfig(std::string_view text);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

// Memoizes per-utterance waves, analyses and pitch tracks.
class CorpusCache {
 public:
  CorpusCache(const Manifest& manifest, const PipelineConfig& cfg);

  const Manifest& manifest() const { return manifest_; }
  const PipelineConfig& config() const { return cfg_; }

  const Waveform& Wave(const std::string& speaker, const std::string& word);
  const UtteranceAnalysis& Analysis(const std::string& speaker, const std::string& word);
  const PitchTrack& Track(const std::string& speaker, const std::string& word);

 private:
  using Key = std::pair<std::string, std::string>;
  const Manifest& manifest_;
  PipelineConfig cfg_;
  std::map<Key, Waveform> waves_;
  std::map<Key, UtteranceAnalysis> analyses_;
  std::map<Key, PitchTrack> tracks_;
};

// Frame-index pairing of parallel utterances; frames silent on either side
// are dropped.
std::vector<FeaturePair> PairFrames(const UtteranceAnalysis& src, const UtteranceAnalysis& tgt);

std::uint64_t UtteranceSeed(std::uint64_t seed, const std::string& speaker, const std::string& word);

// Analysis of one utterance after seeded noise injection; the seed depends
// on the training seed, speaker and word.
UtteranceAnalysis NoisyAnalysis(CorpusCache& cache, const std::string& speaker,
                                const std::string& word, double noise_db);

// Trains source->target on the training split. With noise_db set, noise at
// that level above the floor is added to both sides of every training
// utterance before analysis.
SpeakerMap TrainSpeakerPair(CorpusCache& cache, const std::string& source, const std::string& target,
                            std::optional<double> noise_db = std::nullopt);

struct ConvertedUtterance {
  std::vector<LpcFrame> frames;
  Waveform waveform;  // de-emphasized, before prosody transfer
  std::size_t replaced_frames = 0;
};

void CheckModelOrder(const SpeakerMap& map, int order);

// residual_from must have the same frame geometry as src when given;
// otherwise the source residual drives synthesis.
ConvertedUtterance ConvertAnalysis(const SpeakerMap& map, const UtteranceAnalysis& src,
                                   const UtteranceAnalysis* residual_from = nullptr);

// Constant-f0 track, voiced on every frame, shaped like `like`.
PitchTrack ConstantTrack(const PitchTrack& like, double f0);

// Re-estimates the pitch of `converted` and moves it onto the target
// contour, which must share its frame geometry.
Waveform ApplyProsody(const Waveform& converted, const PitchTrack& target,
                      const PitchConfig& pitch_cfg, const AnalysisConfig& analysis_cfg);
Waveform ApplyProsody(const Waveform& converted, double target_f0, const PitchConfig& pitch_cfg,
                      const AnalysisConfig& analysis_cfg);

// Residual-domain variant: the excitation is pitch-modified toward |target|
// and then filtered. Returns the de-emphasized waveform.
Waveform ConvertWithResidualProsody(const SpeakerMap& map, const UtteranceAnalysis& src,
                                    const PitchTrack& target, const PitchConfig& pitch_cfg,
                                    const UtteranceAnalysis* residual_from = nullptr);

struct WordResult {
  std::string word_id;
  SuccessFragment fragment;
};

struct EvalReport {
  std::string source;
  std::string target;
  EvalMode mode = EvalMode::kModel;
  Pairing pairing = Pairing::kParallel;
  std::vector<WordResult> words;  // non-parallel ids read "source_word:target_word"
  SuccessFragment aggregate;  // frame-pooled
  SuccessFragment voiced;
  SuccessFragment unvoiced;
  PhonemeTable phonemes_source_target;
  PhonemeTable phonemes_converted_target;
  std::size_t improved_words = 0;  // MCD(conv, tgt) < MCD(src, tgt)
};

// Evaluates on `words`, or on the evaluation split when empty. With noise_db
// set, the evaluation recordings carry the same noise level as training;
// frame classes still come from the clean source.
EvalReport EvaluatePair(CorpusCache& cache, const SpeakerMap* map, const std::string& source,
                        const std::string& target, EvalMode mode = EvalMode::kModel,
                        std::vector<std::string> words = {},
                        std::optional<double> noise_db = std::nullopt,
                        Pairing pairing = Pairing::kParallel);

WordSplit PairSplit(const Manifest& manifest, const std::string& source, const std::string& target,
                    double train_fraction);

}  // namespace lpvc

#endif  // LPVC_PIPELINE_H_
