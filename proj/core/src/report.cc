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

#include "lpvc/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpvc/error.h"

namespace lpvc {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double Y(double v) const {
    return kTop + (kHeight - kTop - kBottom) * (1.0 - (v - lo) / (hi - lo));
  }
};

Axis MakeAxis(const std::vector<Series>& series) {
  double lo = 0.0, hi = 0.0;
  for (const Series& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-9) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  return {lo < 0.0 ? lo - pad : lo, hi + pad};
}

void Frame(std::ostringstream& out, const std::string& title, const std::string& y_label,
           const Axis& axis) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(kWidth) << "\" height=\""
      << Fixed(kHeight) << "\" viewBox=\"0 0 " << Fixed(kWidth) << " " << Fixed(kHeight) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << Fixed(kWidth) << "\" height=\"" << Fixed(kHeight)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << Fixed(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << Escape(title) << "</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight;
  for (int t = 0; t <= 5; ++t) {
    const double v = axis.lo + (axis.hi - axis.lo) * t / 5.0;
    const double y = axis.Y(v);
    out << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(y) << "\" x2=\"" << Fixed(x1) << "\" y2=\""
        << Fixed(y) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << Fixed(x0 - 6) << "\" y=\"" << Fixed(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << Fixed(v)
        << "</text>\n";
  }
  out << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(kTop) << "\" x2=\"" << Fixed(x0) << "\" y2=\""
      << Fixed(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
  if (axis.lo <= 0.0 && axis.hi >= 0.0) {
    out << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(axis.Y(0.0)) << "\" x2=\"" << Fixed(x1)
        << "\" y2=\"" << Fixed(axis.Y(0.0)) << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"16\" y=\"" << Fixed(kHeight / 2) << "\" transform=\"rotate(-90 16 "
      << Fixed(kHeight / 2) << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << Escape(y_label) << "</text>\n";
}

void Legend(std::ostringstream& out, const std::vector<Series>& series) {
  const double x = kWidth - kRight + 16;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(s);
    out << "<rect x=\"" << Fixed(x) << "\" y=\"" << Fixed(y - 9) << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[s % 8] << "\"/>\n";
    out << "<text x=\"" << Fixed(x + 18) << "\" y=\"" << Fixed(y + 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << Escape(series[s].name) << "</text>\n";
  }
}

void XLabel(std::ostringstream& out, double x, const std::string& label) {
  out << "<text x=\"" << Fixed(x) << "\" y=\"" << Fixed(kHeight - kBottom + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << Escape(label)
      << "</text>\n";
}

void CheckSeries(const std::vector<std::string>& categories, const std::vector<Series>& series) {
  for (const Series& s : series) {
    if (s.values.size() != categories.size()) {
      throw Error(ErrorCode::kShapeMismatch, "series '" + s.name + "' does not match the category count");
    }
  }
}

}  // namespace

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string UtteranceCsv(const EvalReport& report) {
  std::string out = "word_id,mcd_source_target_db,mcd_converted_target_db,success_pct,n_frames\n";
  for (const WordResult& w : report.words) {
    out += CsvField(w.word_id) + "," + FormatNumber(w.fragment.mcd_source_target) + "," +
           FormatNumber(w.fragment.mcd_converted_target) + "," + FormatNumber(w.fragment.success_pct) +
           "," + std::to_string(w.fragment.n_frames) + "\n";
  }
  return out;
}

std::string ClassCsv(const EvalReport& report) {
  std::string out = "class,mcd_source_target_db,mcd_converted_target_db,success_pct,n_frames\n";
  auto row = [&](const char* name, const SuccessFragment& f) {
    out += std::string(name) + "," + FormatNumber(f.mcd_source_target) + "," +
           FormatNumber(f.mcd_converted_target) + "," + FormatNumber(f.success_pct) + "," +
           std::to_string(f.n_frames) + "\n";
  };
  row("all", report.aggregate);
  row(FrameClassName(FrameClass::kVoiced), report.voiced);
  row(FrameClassName(FrameClass::kUnvoiced), report.unvoiced);
  return out;
}

std::string PhonemeCsv(const PhonemeTable& table) {
  std::string out = "symbol,mean_db,n_frames,n_segments\n";
  for (const auto& [symbol, stat] : table) {
    out += CsvField(symbol) + "," + FormatNumber(stat.mean_db()) + "," + std::to_string(stat.n_frames) +
           "," + std::to_string(stat.n_segments) + "\n";
  }
  return out;
}

std::string SummaryText(const EvalReport& report) {
  std::ostringstream out;
  out << "pair " << report.source << " -> " << report.target << " (" << EvalModeName(report.mode) << ")\n";
  if (report.pairing == Pairing::kNonParallel) {
    out << "pairing: non-parallel, frames aligned by index and truncated (heuristic)\n";
  }
  out << "words evaluated: " << report.words.size() << ", improved: " << report.improved_words << "\n";
  out << "MCD source/target: " << FormatNumber(report.aggregate.mcd_source_target) << " dB\n";
  out << "MCD converted/target: " << FormatNumber(report.aggregate.mcd_converted_target) << " dB\n";
  out << "success: " << FormatNumber(report.aggregate.success_pct) << " %\n";
  out << "voiced success: " << FormatNumber(report.voiced.success_pct) << " % over "
      << report.voiced.n_frames << " frames\n";
  out << "unvoiced success: " << FormatNumber(report.unvoiced.success_pct) << " % over "
      << report.unvoiced.n_frames << " frames\n";
  return out.str();
}

std::string BarChartSvg(const std::string& title, const std::vector<std::string>& categories,
                        const std::vector<Series>& series, const std::string& y_label) {
  CheckSeries(categories, series);
  const Axis axis = MakeAxis(series);
  std::ostringstream out;
  Frame(out, title, y_label, axis);
  const double plot_w = kWidth - kLeft - kRight;
  const double group_w = categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bar_w = 0.8 * group_w / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  const double base = axis.Y(std::clamp(0.0, axis.lo, axis.hi));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c) + 0.1 * group_w;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[c];
      if (!std::isfinite(v)) continue;
      const double y = axis.Y(v);
      out << "<rect x=\"" << Fixed(gx + bar_w * static_cast<double>(s)) << "\" y=\""
          << Fixed(std::min(y, base)) << "\" width=\"" << Fixed(bar_w) << "\" height=\""
          << Fixed(std::abs(base - y)) << "\" fill=\"" << kPalette[s % 8] << "\"/>\n";
    }
    XLabel(out, kLeft + group_w * (static_cast<double>(c) + 0.5), categories[c]);
  }
  Legend(out, series);
  out << "</svg>\n";
  return out.str();
}

std::string LineChartSvg(const std::string& title, const std::vector<std::string>& x_labels,
                         const std::vector<Series>& series, const std::string& y_label) {
  CheckSeries(x_labels, series);
  const Axis axis = MakeAxis(series);
  std::ostringstream out;
  Frame(out, title, y_label, axis);
  const double plot_w = kWidth - kLeft - kRight;
  auto x_of = [&](std::size_t i) {
    return x_labels.size() < 2 ? kLeft + plot_w / 2
                               : kLeft + 20 + (plot_w - 40) * static_cast<double>(i) /
                                                  static_cast<double>(x_labels.size() - 1);
  };
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::string points;
    for (std::size_t i = 0; i < x_labels.size(); ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      if (!points.empty()) points += ' ';
      points += Fixed(x_of(i)) + "," + Fixed(axis.Y(v));
      out << "<circle cx=\"" << Fixed(x_of(i)) << "\" cy=\"" << Fixed(axis.Y(v)) << "\" r=\"3\" fill=\""
          << kPalette[s % 8] << "\"/>\n";
    }
    out << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << kPalette[s % 8]
        << "\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t i = 0; i < x_labels.size(); ++i) XLabel(out, x_of(i), x_labels[i]);
  Legend(out, series);
  out << "</svg>\n";
  return out.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

void WriteEvalReport(const EvalReport& report, const std::filesystem::path& dir,
                     const std::string& stem) {
  WriteTextFile(dir / (stem + "_utterances.csv"), UtteranceCsv(report));
  WriteTextFile(dir / (stem + "_classes.csv"), ClassCsv(report));
  if (!report.phonemes_source_target.empty()) {
    WriteTextFile(dir / (stem + "_phonemes.csv"), PhonemeCsv(report.phonemes_converted_target));
  }
  WriteTextFile(dir / (stem + "_summary.txt"), SummaryText(report));
}

}  // namespace lpvc
