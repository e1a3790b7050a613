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

#include "lpvc/pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

#include <json.hpp>

#include "lpvc/error.h"
#include "lpvc/wav.h"
#include "random.h"

namespace lpvc {
namespace {

using nlohmann::json;

template <typename T>
void ReadField(const json& obj, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kBadSpec, std::string("config key '") + key + "' has the wrong type");
  }
}

void RejectUnknown(const json& obj, const std::set<std::string>& seen, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!seen.count(it.key())) {
      throw Error(ErrorCode::kBadSpec, "unknown config key '" + where + it.key() + "'");
    }
  }
}

const json& Section(const json& root, const char* key, std::set<std::string>& seen) {
  static const json kEmpty = json::object();
  seen.insert(key);
  auto it = root.find(key);
  if (it == root.end()) return kEmpty;
  if (!it->is_object()) throw Error(ErrorCode::kBadSpec, std::string("config section '") + key + "' must be an object");
  return *it;
}

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void Pool(SuccessFragment& acc, const SuccessFragment& part) {
  const auto n = static_cast<double>(part.n_frames);
  acc.mcd_source_target += part.mcd_source_target * n;
  acc.mcd_converted_target += part.mcd_converted_target * n;
  acc.n_frames += part.n_frames;
}

void Finish(SuccessFragment& acc) {
  if (acc.n_frames == 0) return;
  const auto n = static_cast<double>(acc.n_frames);
  acc.mcd_source_target /= n;
  acc.mcd_converted_target /= n;
  acc.success_pct = SuccessPercent(acc.mcd_source_target, acc.mcd_converted_target);
}

}  // namespace

const char* EvalModeName(EvalMode mode) {
  switch (mode) {
    case EvalMode::kModel: return "model";
    case EvalMode::kOracleTarget: return "oracle-target";
    case EvalMode::kPassthrough: return "passthrough";
  }
  return "?";
}

EvalMode ParseEvalMode(std::string_view name) {
  if (name == "model") return EvalMode::kModel;
  if (name == "oracle-target") return EvalMode::kOracleTarget;
  if (name == "passthrough") return EvalMode::kPassthrough;
  throw Error(ErrorCode::kBadSpec, "unknown evaluation mode '" + std::string(name) + "'");
}

void PipelineConfig::Validate() const {
  train.Validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kBadSpec, "train_fraction must lie in (0, 1)");
  }
  if (!(pitch.min_f0 > 0.0 && pitch.min_f0 < pitch.max_f0)) {
    throw Error(ErrorCode::kBadSpec, "pitch range must satisfy 0 < min_f0 < max_f0");
  }
}

PipelineConfig ParsePipelineConfig(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadSpec, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kBadSpec, "config must be a JSON object");

  PipelineConfig cfg;
  std::set<std::string> top;
  {
    std::set<std::string> seen;
    const json& s = Section(root, "analysis", top);
    ReadField(s, "frame_ms", cfg.analysis.frame_ms, seen);
    ReadField(s, "overlap_ms", cfg.analysis.overlap_ms, seen);
    ReadField(s, "window_sigma", cfg.analysis.window_sigma, seen);
    ReadField(s, "order", cfg.analysis.order, seen);
    RejectUnknown(s, seen, "analysis.");
  }
  {
    std::set<std::string> seen;
    const json& s = Section(root, "train", top);
    ReadField(s, "hidden", cfg.train.hidden, seen);
    ReadField(s, "max_epochs", cfg.train.max_epochs, seen);
    ReadField(s, "mse_goal", cfg.train.mse_goal, seen);
    ReadField(s, "lambda_init", cfg.train.lambda_init, seen);
    ReadField(s, "lambda_factor", cfg.train.lambda_factor, seen);
    ReadField(s, "lambda_max", cfg.train.lambda_max, seen);
    ReadField(s, "validation_fraction", cfg.train.validation_fraction, seen);
    ReadField(s, "max_validation_failures", cfg.train.max_validation_failures, seen);
    ReadField(s, "max_pairs", cfg.train.max_pairs, seen);
    ReadField(s, "seed", cfg.train.seed, seen);
    RejectUnknown(s, seen, "train.");
  }
  {
    std::set<std::string> seen;
    const json& s = Section(root, "pitch", top);
    ReadField(s, "min_f0", cfg.pitch.min_f0, seen);
    ReadField(s, "max_f0", cfg.pitch.max_f0, seen);
    ReadField(s, "voicing_threshold", cfg.pitch.voicing_threshold, seen);
    ReadField(s, "energy_fraction", cfg.pitch.energy_fraction, seen);
    RejectUnknown(s, seen, "pitch.");
  }
  {
    std::set<std::string> seen;
    const json& s = Section(root, "cepstrum", top);
    ReadField(s, "mel_warp", cfg.cepstrum.mel_warp, seen);
    ReadField(s, "alpha", cfg.cepstrum.alpha, seen);
    RejectUnknown(s, seen, "cepstrum.");
  }
  ReadField(root, "train_fraction", cfg.train_fraction, top);
  std::string residual = "source";
  ReadField(root, "residual", residual, top);
  if (residual == "source") {
    cfg.residual = ResidualSource::kSource;
  } else if (residual == "target") {
    cfg.residual = ResidualSource::kTarget;
  } else {
    throw Error(ErrorCode::kBadSpec, "residual must be 'source' or 'target'");
  }
  std::string domain = "output";
  ReadField(root, "prosody_domain", domain, top);
  if (domain == "output") {
    cfg.prosody_domain = ProsodyDomain::kOutput;
  } else if (domain == "residual") {
    cfg.prosody_domain = ProsodyDomain::kResidual;
  } else {
    throw Error(ErrorCode::kBadSpec, "prosody_domain must be 'output' or 'residual'");
  }
  RejectUnknown(root, top, "");
  cfg.Validate();
  return cfg;
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParsePipelineConfig(ss.str());
}

CorpusCache::CorpusCache(const Manifest& manifest, const PipelineConfig& cfg)
    : manifest_(manifest), cfg_(cfg) {}

const Waveform& CorpusCache::Wave(const std::string& speaker, const std::string& word) {
  Key key{speaker, word};
  auto it = waves_.find(key);
  if (it != waves_.end()) return it->second;
  Waveform w = LoadWav(manifest_.Utterance(speaker, word).wav_path);
  if (w.sample_rate != manifest_.sample_rate) {
    throw Error(ErrorCode::kManifestError, speaker + "/" + word + " is not at the manifest sample rate");
  }
  return waves_.emplace(key, std::move(w)).first->second;
}

const UtteranceAnalysis& CorpusCache::Analysis(const std::string& speaker, const std::string& word) {
  Key key{speaker, word};
  auto it = analyses_.find(key);
  if (it != analyses_.end()) return it->second;
  UtteranceAnalysis a = AnalyzeUtterance(Wave(speaker, word), cfg_.analysis);
  return analyses_.emplace(key, std::move(a)).first->second;
}

const PitchTrack& CorpusCache::Track(const std::string& speaker, const std::string& word) {
  Key key{speaker, word};
  auto it = tracks_.find(key);
  if (it != tracks_.end()) return it->second;
  const UtteranceAnalysis& a = Analysis(speaker, word);
  PitchTrack t = EstimatePitch(Wave(speaker, word), a.grid, cfg_.pitch);
  return tracks_.emplace(key, std::move(t)).first->second;
}

std::vector<FeaturePair> PairFrames(const UtteranceAnalysis& src, const UtteranceAnalysis& tgt) {
  const std::size_t n = std::min(src.frames.size(), tgt.frames.size());
  std::vector<FeaturePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (src.frames[i].silent || tgt.frames[i].silent) continue;
    out.push_back({FeatureOf(src.frames[i]), FeatureOf(tgt.frames[i])});
  }
  return out;
}

std::uint64_t UtteranceSeed(std::uint64_t seed, const std::string& speaker, const std::string& word) {
  return internal::MixSeed(seed, Fnv1a(speaker + "/" + word));
}

WordSplit PairSplit(const Manifest& manifest, const std::string& source, const std::string& target,
                    double train_fraction) {
  const std::vector<std::string> shared = manifest.SharedWords(source, target);
  if (shared.size() < 2) {
    throw Error(ErrorCode::kManifestError,
                source + " and " + target + " share " + std::to_string(shared.size()) + " words, need 2");
  }
  WordSplit split = SplitWords(shared, train_fraction);
  if (split.train.empty() || split.eval.empty()) {
    throw Error(ErrorCode::kManifestError, "train/evaluation split leaves an empty side");
  }
  return split;
}

UtteranceAnalysis NoisyAnalysis(CorpusCache& cache, const std::string& speaker,
                                const std::string& word, double noise_db) {
  const PipelineConfig& cfg = cache.config();
  const Waveform w =
      InjectNoise(cache.Wave(speaker, word), noise_db, UtteranceSeed(cfg.train.seed, speaker, word));
  return AnalyzeUtterance(w, cfg.analysis);
}

SpeakerMap TrainSpeakerPair(CorpusCache& cache, const std::string& source, const std::string& target,
                            std::optional<double> noise_db) {
  const PipelineConfig& cfg = cache.config();
  const WordSplit split = PairSplit(cache.manifest(), source, target, cfg.train_fraction);
  std::vector<FeaturePair> pairs;
  for (const std::string& word : split.train) {
    std::vector<FeaturePair> part;
    if (noise_db) {
      part = PairFrames(NoisyAnalysis(cache, source, word, *noise_db),
                        NoisyAnalysis(cache, target, word, *noise_db));
    } else {
      part = PairFrames(cache.Analysis(source, word), cache.Analysis(target, word));
    }
    pairs.insert(pairs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return Train(pairs, cfg.train);
}

void CheckModelOrder(const SpeakerMap& map, int order) {
  if (map.input_dim() != order || map.output_dim() != order) {
    throw Error(ErrorCode::kModelMismatch, "model maps order " + std::to_string(map.input_dim()) +
                                               " but the analysis order is " + std::to_string(order));
  }
}

namespace {

struct Excitation {
  ConversionResult conv;
  std::vector<double> residual;  // pre-emphasized domain, power-matched
};

Excitation ConvertedExcitation(const SpeakerMap& map, const UtteranceAnalysis& src,
                               const UtteranceAnalysis* residual_from) {
  if (!src.frames.empty()) CheckModelOrder(map, static_cast<int>(src.frames.front().order()));
  Excitation ex{ConvertUtterance(map, src.frames), {}};
  if (residual_from != nullptr) {
    if (residual_from->frames.size() != src.frames.size() ||
        residual_from->emphasized.size() != src.emphasized.size()) {
      throw Error(ErrorCode::kLengthMismatch, "residual utterance differs in length from the source");
    }
    ex.residual = UtteranceResidual(residual_from->emphasized, residual_from->frames,
                                    residual_from->segment_bounds);
  } else {
    ex.residual = UtteranceResidual(src.emphasized, src.frames, src.segment_bounds);
  }
  // Match each segment's model power to the analysis model it replaces, so
  // the output follows the source energy contour.
  const UtteranceAnalysis& excited = residual_from != nullptr ? *residual_from : src;
  for (std::size_t i = 0; i < ex.conv.frames.size(); ++i) {
    const LpcFrame& before = excited.frames[i];
    const LpcFrame& after = ex.conv.frames[i];
    if (before.silent || after.silent) continue;
    const double scale = std::sqrt(PowerGain(before) / PowerGain(after));
    for (std::size_t t = src.segment_bounds[i]; t < src.segment_bounds[i + 1]; ++t) ex.residual[t] *= scale;
  }
  return ex;
}

}  // namespace

ConvertedUtterance ConvertAnalysis(const SpeakerMap& map, const UtteranceAnalysis& src,
                                   const UtteranceAnalysis* residual_from) {
  Excitation ex = ConvertedExcitation(map, src, residual_from);
  const std::vector<double> synth = UtteranceSynthesis(ex.residual, ex.conv.frames, src.segment_bounds);
  ConvertedUtterance out;
  out.waveform = DeEmphasize(Waveform{synth, src.sample_rate});
  out.frames = std::move(ex.conv.frames);
  out.replaced_frames = ex.conv.replaced_frames;
  return out;
}

Waveform ConvertWithResidualProsody(const SpeakerMap& map, const UtteranceAnalysis& src,
                                    const PitchTrack& target, const PitchConfig& pitch_cfg,
                                    const UtteranceAnalysis* residual_from) {
  Excitation ex = ConvertedExcitation(map, src, residual_from);
  const Waveform excitation{ex.residual, src.sample_rate};
  // The whitened residual voices poorly, so voicing and period come from the
  // source waveform; marks still land on residual peaks.
  const PitchTrack own = EstimatePitch(DeEmphasize(Waveform{src.emphasized, src.sample_rate}), src.grid, pitch_cfg);
  const Waveform moved = TransferProsody(excitation, own, target);
  const std::vector<double> synth = UtteranceSynthesis(moved.samples, ex.conv.frames, src.segment_bounds);
  return DeEmphasize(Waveform{synth, src.sample_rate});
}

PitchTrack ConstantTrack(const PitchTrack& like, double f0) {
  PitchTrack t = like;
  t.f0.assign(like.size(), f0);
  t.voiced.assign(like.size(), true);
  return t;
}

Waveform ApplyProsody(const Waveform& converted, const PitchTrack& target,
                      const PitchConfig& pitch_cfg, const AnalysisConfig& analysis_cfg) {
  const FrameGrid grid = FrameGeometry(converted.size(), converted.sample_rate, analysis_cfg.frame_ms,
                                       analysis_cfg.overlap_ms);
  const PitchTrack own = EstimatePitch(converted, grid, pitch_cfg);
  return TransferProsody(converted, own, target);
}

Waveform ApplyProsody(const Waveform& converted, double target_f0, const PitchConfig& pitch_cfg,
                      const AnalysisConfig& analysis_cfg) {
  if (!(target_f0 >= pitch_cfg.min_f0 && target_f0 <= pitch_cfg.max_f0)) {
    throw Error(ErrorCode::kBadSpec, "target f0 outside the pitch search range");
  }
  const FrameGrid grid = FrameGeometry(converted.size(), converted.sample_rate, analysis_cfg.frame_ms,
                                       analysis_cfg.overlap_ms);
  const PitchTrack own = EstimatePitch(converted, grid, pitch_cfg);
  return TransferProsody(converted, own, ConstantTrack(own, target_f0));
}

EvalReport EvaluatePair(CorpusCache& cache, const SpeakerMap* map, const std::string& source,
                        const std::string& target, EvalMode mode, std::vector<std::string> words,
                        std::optional<double> noise_db, Pairing pairing) {
  const PipelineConfig& cfg = cache.config();
  if (words.empty()) words = PairSplit(cache.manifest(), source, target, cfg.train_fraction).eval;
  if (mode == EvalMode::kModel && map == nullptr) {
    throw Error(ErrorCode::kBadSpec, "model evaluation needs a trained map");
  }
  const bool parallel = pairing == Pairing::kParallel;
  if (!parallel && words.size() < 2) {
    throw Error(ErrorCode::kManifestError, "non-parallel evaluation needs at least two words");
  }
  EvalReport report;
  report.source = source;
  report.target = target;
  report.mode = mode;
  report.pairing = pairing;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::string& word = words[w];
    // non-parallel: the next word in the list stands in for the target
    const std::string& other = parallel ? word : words[(w + 1) % words.size()];
    std::optional<UtteranceAnalysis> noisy_src, noisy_tgt;
    if (noise_db) {
      noisy_src = NoisyAnalysis(cache, source, word, *noise_db);
      noisy_tgt = NoisyAnalysis(cache, target, other, *noise_db);
    }
    const UtteranceAnalysis& sa = noise_db ? *noisy_src : cache.Analysis(source, word);
    const UtteranceAnalysis& ta = noise_db ? *noisy_tgt : cache.Analysis(target, other);
    if (parallel && sa.frames.size() != ta.frames.size()) {
      throw Error(ErrorCode::kLengthMismatch, source + "/" + word + " and " + target + "/" + word +
                                                  " differ in frame count");
    }
    const std::size_t n = std::min(sa.frames.size(), ta.frames.size());
    const std::span<const LpcFrame> src_frames(sa.frames.data(), n);
    const std::span<const LpcFrame> tgt_frames(ta.frames.data(), n);
    std::vector<LpcFrame> conv;
    switch (mode) {
      case EvalMode::kModel:
        CheckModelOrder(*map, static_cast<int>(sa.frames.front().order()));
        conv = ConvertUtterance(*map, src_frames).frames;
        break;
      case EvalMode::kOracleTarget: conv.assign(tgt_frames.begin(), tgt_frames.end()); break;
      case EvalMode::kPassthrough: conv.assign(src_frames.begin(), src_frames.end()); break;
    }
    const SuccessFragment frag = SuccessRate(src_frames, conv, tgt_frames, cfg.cepstrum);
    report.words.push_back({parallel ? word : word + ":" + other, frag});
    if (frag.mcd_converted_target < frag.mcd_source_target) ++report.improved_words;
    Pool(report.aggregate, frag);

    std::vector<FrameClass> classes =
        ClassifyVuv(cache.Wave(source, word), sa.grid, cache.Track(source, word));
    classes.resize(n);
    for (FrameClass c : {FrameClass::kVoiced, FrameClass::kUnvoiced}) {
      std::vector<bool> mask(classes.size());
      for (std::size_t i = 0; i < classes.size(); ++i) mask[i] = classes[i] == c;
      if (CountValidFrames(src_frames, tgt_frames, &mask) == 0) continue;
      const SuccessFragment part = SuccessRate(src_frames, conv, tgt_frames, cfg.cepstrum, &mask);
      Pool(c == FrameClass::kVoiced ? report.voiced : report.unvoiced, part);
    }

    // phoneme boundaries only line up within a parallel pair
    const std::vector<PhonemeLabel>& labels = cache.manifest().Utterance(source, word).labels;
    if (parallel && !labels.empty()) {
      AccumulatePhonemeDistances(labels, sa.frames, ta.frames, sa.grid, report.phonemes_source_target,
                                 cfg.cepstrum);
      AccumulatePhonemeDistances(labels, conv, ta.frames, sa.grid, report.phonemes_converted_target,
                                 cfg.cepstrum);
    }
  }
  Finish(report.aggregate);
  Finish(report.voiced);
  Finish(report.unvoiced);
  return report;
}

}  // namespace lpvc
