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

#ifndef LPVC_REPORT_H_
#define LPVC_REPORT_H_

// CSV tables and static SVG charts. Output is byte-stable for equal input.

#include <filesystem>
#include <string>
#include <vector>

#include "lpvc/evaluation.h"
#include "lpvc/pipeline.h"

namespace lpvc {

std::string FormatNumber(double v);

std::string UtteranceCsv(const EvalReport& report);
std::string ClassCsv(const EvalReport& report);
std::string PhonemeCsv(const PhonemeTable& table);
std::string SummaryText(const EvalReport& report);

struct Series {
  std::string name;
  std::vector<double> values;  // one per category / x position
};

std::string BarChartSvg(const std::string& title, const std::vector<std::string>& categories,
                        const std::vector<Series>& series, const std::string& y_label);

std::string LineChartSvg(const std::string& title, const std::vector<std::string>& x_labels,
                         const std::vector<Series>& series, const std::string& y_label);

void WriteTextFile(const std::filesystem::path& path, const std::string& content);

// Writes <stem>_utterances.csv, <stem>_classes.csv, <stem>_phonemes.csv
// (when labels were present) and <stem>_summary.txt.
void WriteEvalReport(const EvalReport& report, const std::filesystem::path& dir,
                     const std::string& stem);

}  // namespace lpvc

#endif  // LPVC_REPORT_H_
