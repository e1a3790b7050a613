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

#include "lpvc/experiment.h"

#include <algorithm>
#include <cmath>

#include "lpvc/error.h"
#include "lpvc/report.h"

namespace lpvc {
namespace {

double ClassSuccess(const NoiseRow& row, FrameClass cls) {
  switch (cls) {
    case FrameClass::kVoiced: return row.voiced.success_pct;
    case FrameClass::kUnvoiced: return row.unvoiced.success_pct;
    case FrameClass::kSilence: break;
  }
  return row.all.success_pct;
}

std::string LevelLabel(double level) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g dB", level);
  return buf;
}

Waveform FitLength(const Waveform& w, std::size_t n) {
  Waveform out = w;
  out.samples.resize(n, 0.0);
  return out;
}

}  // namespace

const SpeakerMap& ModelStore::Get(const std::string& source, const std::string& target) {
  SpeakerPair key{source, target};
  auto it = maps_.find(key);
  if (it != maps_.end()) return it->second;
  return maps_.emplace(key, TrainSpeakerPair(cache_, source, target)).first->second;
}

void ModelStore::Put(const std::string& source, const std::string& target, SpeakerMap map) {
  maps_[{source, target}] = std::move(map);
}

const NoiseRow& NoiseSweepResult::Row(double level_db, std::uint64_t seed) const {
  for (const NoiseRow& r : rows) {
    if (r.level_db == level_db && r.seed == seed) return r;
  }
  throw Error(ErrorCode::kBadSpec, "no noise sweep row for level " + LevelLabel(level_db));
}

double NoiseSweepResult::Degradation(double level_db, std::uint64_t seed, FrameClass cls) const {
  double base = level_db;
  for (const NoiseRow& r : rows) base = std::min(base, r.level_db);
  return ClassSuccess(Row(base, seed), cls) - ClassSuccess(Row(level_db, seed), cls);
}

NoiseSweepResult NoiseSweep(CorpusCache& cache, const std::string& source, const std::string& target,
                            const std::vector<double>& levels_db,
                            const std::vector<std::uint64_t>& seeds) {
  if (levels_db.empty() || seeds.empty()) throw Error(ErrorCode::kBadSpec, "noise sweep needs levels and seeds");
  NoiseSweepResult result{source, target, {}};
  PipelineConfig cfg = cache.config();
  for (std::uint64_t seed : seeds) {
    cfg.train.seed = seed;
    CorpusCache seeded(cache.manifest(), cfg);
    for (double level : levels_db) {
      const SpeakerMap map = TrainSpeakerPair(seeded, source, target, level);
      const EvalReport report = EvaluatePair(seeded, &map, source, target, EvalMode::kModel, {}, level);
      result.rows.push_back({level, seed, report.aggregate, report.voiced, report.unvoiced});
    }
  }
  return result;
}

std::vector<ProsodyRow> ProsodyAblation(CorpusCache& cache, ModelStore& models,
                                        const std::vector<SpeakerPair>& pairs) {
  const PipelineConfig& cfg = cache.config();
  std::vector<ProsodyRow> rows;
  for (const auto& [source, target] : pairs) {
    const SpeakerMap& map = models.Get(source, target);
    const WordSplit split = PairSplit(cache.manifest(), source, target, cfg.train_fraction);
    double target_sum = 0.0;
    std::size_t target_n = 0;
    for (const std::string& word : split.eval) {
      const PitchTrack& t = cache.Track(target, word);
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.voiced[i]) {
          target_sum += t.f0[i];
          ++target_n;
        }
      }
    }
    for (bool prosody : {false, true}) {
      ProsodyRow row{source, target, prosody, 0.0, 0.0, 0.0, 0.0};
      row.target_mean_f0_hz = target_n ? target_sum / static_cast<double>(target_n) : 0.0;
      double rms_sum = 0.0, f0_sum = 0.0;
      std::size_t rms_n = 0, f0_n = 0;
      SuccessFragment pooled;
      for (const std::string& word : split.eval) {
        const UtteranceAnalysis& sa = cache.Analysis(source, word);
        const UtteranceAnalysis& ta = cache.Analysis(target, word);
        const PitchTrack& tgt_track = cache.Track(target, word);
        const UtteranceAnalysis* residual =
            cfg.residual == ResidualSource::kTarget ? &ta : nullptr;
        Waveform out = ConvertAnalysis(map, sa, residual).waveform;
        if (prosody) out = ApplyProsody(out, tgt_track, cfg.pitch, cfg.analysis);
        out = FitLength(out, cache.Wave(target, word).size());

        const UtteranceAnalysis oa = AnalyzeUtterance(out, cfg.analysis);
        const PitchTrack ot = EstimatePitch(out, oa.grid, cfg.pitch);
        const double rms = PitchRmsError(ot, tgt_track);
        if (std::isfinite(rms)) {
          rms_sum += rms;
          ++rms_n;
        }
        for (std::size_t i = 0; i < ot.size(); ++i) {
          if (ot.voiced[i]) {
            f0_sum += ot.f0[i];
            ++f0_n;
          }
        }
        if (CountValidFrames(sa.frames, ta.frames) > 0 && CountValidFrames(oa.frames, ta.frames) > 0) {
          std::vector<bool> mask(sa.frames.size());
          for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !oa.frames[i].silent;
          if (CountValidFrames(sa.frames, ta.frames, &mask) == 0) continue;
          const SuccessFragment f = SuccessRate(sa.frames, oa.frames, ta.frames, cfg.cepstrum, &mask);
          const auto n = static_cast<double>(f.n_frames);
          pooled.mcd_source_target += f.mcd_source_target * n;
          pooled.mcd_converted_target += f.mcd_converted_target * n;
          pooled.n_frames += f.n_frames;
        }
      }
      row.pitch_rms_hz = rms_n ? rms_sum / static_cast<double>(rms_n) : std::nan("");
      row.mean_f0_hz = f0_n ? f0_sum / static_cast<double>(f0_n) : 0.0;
      if (pooled.n_frames > 0) {
        row.success_pct = SuccessPercent(pooled.mcd_source_target, pooled.mcd_converted_target);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

PhonemeTable PhonemeContribution(CorpusCache& cache, const std::string& source,
                                 const std::string& target) {
  PhonemeTable table;
  for (const std::string& word : cache.manifest().SharedWords(source, target)) {
    const UtteranceAnalysis& sa = cache.Analysis(source, word);
    const UtteranceAnalysis& ta = cache.Analysis(target, word);
    const std::vector<PhonemeLabel>& labels = cache.manifest().Utterance(source, word).labels;
    if (labels.empty()) continue;
    if (sa.frames.size() != ta.frames.size()) {
      throw Error(ErrorCode::kLengthMismatch, "utterance " + word + " differs in length between speakers");
    }
    AccumulatePhonemeDistances(labels, sa.frames, ta.frames, sa.grid, table, cache.config().cepstrum);
  }
  return table;
}

std::string NoiseSweepCsv(const NoiseSweepResult& r) {
  std::string out =
      "level_db,seed,success_all_pct,success_voiced_pct,success_unvoiced_pct,"
      "degradation_voiced_pct,degradation_unvoiced_pct\n";
  for (const NoiseRow& row : r.rows) {
    out += FormatNumber(row.level_db) + "," + std::to_string(row.seed) + "," +
           FormatNumber(row.all.success_pct) + "," + FormatNumber(row.voiced.success_pct) + "," +
           FormatNumber(row.unvoiced.success_pct) + "," +
           FormatNumber(r.Degradation(row.level_db, row.seed, FrameClass::kVoiced)) + "," +
           FormatNumber(r.Degradation(row.level_db, row.seed, FrameClass::kUnvoiced)) + "\n";
  }
  return out;
}

std::string ProsodyCsv(const std::vector<ProsodyRow>& rows) {
  std::string out = "source,target,prosody,pitch_rms_hz,mean_f0_hz,target_mean_f0_hz,success_pct\n";
  for (const ProsodyRow& r : rows) {
    out += r.source + "," + r.target + "," + (r.prosody ? "on" : "off") + "," +
           FormatNumber(r.pitch_rms_hz) + "," + FormatNumber(r.mean_f0_hz) + "," +
           FormatNumber(r.target_mean_f0_hz) + "," + FormatNumber(r.success_pct) + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> RunScenario(CorpusCache& cache, std::string_view scenario,
                                               const std::filesystem::path& out_dir,
                                               const ScenarioOptions& opts) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::filesystem::path p = out_dir / name;
    WriteTextFile(p, content);
    written.push_back(p);
  };

  if (scenario == "noise_sweep") {
    const NoiseSweepResult r = NoiseSweep(cache, opts.source, opts.target, opts.noise_levels_db, opts.seeds);
    emit("noise_sweep.csv", NoiseSweepCsv(r));
    std::vector<std::string> labels;
    for (double level : opts.noise_levels_db) labels.push_back(LevelLabel(level));
    std::vector<Series> series{{"voiced", {}}, {"unvoiced", {}}};
    for (double level : opts.noise_levels_db) {
      double v = 0.0, u = 0.0;
      for (std::uint64_t seed : opts.seeds) {
        v += r.Row(level, seed).voiced.success_pct;
        u += r.Row(level, seed).unvoiced.success_pct;
      }
      series[0].values.push_back(v / static_cast<double>(opts.seeds.size()));
      series[1].values.push_back(u / static_cast<double>(opts.seeds.size()));
    }
    emit("noise_sweep.svg", LineChartSvg("Conversion success vs training noise (" + opts.source + " -> " +
                                             opts.target + ")",
                                         labels, series, "success (%)"));
  } else if (scenario == "prosody_ablation") {
    ModelStore models(cache);
    const std::vector<ProsodyRow> rows = ProsodyAblation(cache, models, opts.prosody_pairs);
    emit("prosody_ablation.csv", ProsodyCsv(rows));
    std::vector<std::string> labels;
    std::vector<Series> series{{"prosody off", {}}, {"prosody on", {}}};
    for (const ProsodyRow& r : rows) {
      if (!r.prosody) labels.push_back(r.source + "->" + r.target);
      series[r.prosody ? 1 : 0].values.push_back(r.pitch_rms_hz);
    }
    emit("prosody_ablation.svg", BarChartSvg("Pitch contour RMS error", labels, series, "RMS error (Hz)"));
  } else if (scenario == "phoneme_contribution") {
    const PhonemeTable table = PhonemeContribution(cache, opts.source, opts.target);
    emit("phoneme_contribution.csv", PhonemeCsv(table));
    std::vector<std::string> labels;
    Series s{"MCD", {}};
    for (const auto& [symbol, stat] : table) {
      labels.push_back(symbol);
      s.values.push_back(stat.mean_db());
    }
    emit("phoneme_contribution.svg",
         BarChartSvg("Source/target distance per phoneme (" + opts.source + " -> " + opts.target + ")",
                     labels, {s}, "mean MCD (dB)"));
  } else {
    throw Error(ErrorCode::kScenarioUnknown, "unknown scenario '" + std::string(scenario) + "'");
  }
  return written;
}

}  // namespace lpvc
