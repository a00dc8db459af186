// Copyright 2026 The Keyprompt Authors.
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

#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>

#include "keyprompt/promptgen.hpp"

namespace keyprompt::report {

inline constexpr std::string_view kFineTuningLabel = "Fine-Tuning";
inline constexpr std::string_view kOriginalLabel = "Original";

// Baseline rows share the table with technique rows under these labels.
bool IsReservedLabel(std::string_view technique);

struct CellKey {
  std::string model_tag;
  promptgen::Mode mode = promptgen::Mode::kIntroDiscussion;
  std::string technique;
  std::string metric;  // rouge1 | rouge2 | rougeLsum

  friend bool operator<(const CellKey& a, const CellKey& b) {
    return std::tie(a.model_tag, a.mode, a.technique, a.metric) <
           std::tie(b.model_tag, b.mode, b.technique, b.metric);
  }
  friend bool operator==(const CellKey& a, const CellKey& b) = default;

  // "model/mode/technique/metric", for diagnostics.
  std::string ToString() const;
};

// Full-precision values; rounding happens only when rendering.
using ResultsTable = std::map<CellKey, double>;

// (v_technique - v_baseline) / v_baseline. Throws kZeroBaseline.
double Improvement(double v_technique, double v_baseline);

// One ratio per non-reserved cell against the baseline row with the same
// model, mode and metric. Throws kMissingBaseline, kZeroBaseline.
ResultsTable ImprovementTable(const ResultsTable& main,
                              std::string_view baseline_label = kFineTuningLabel);

// (confused - main) / main per non-reserved cell. The two tables must hold
// the same non-reserved keys (kMissingCell otherwise).
ResultsTable ConfusionComparison(const ResultsTable& confused, const ResultsTable& main);

// Shortest round-trip decimal of v rounded half away from zero to 3 places.
std::string FormatRounded(double v);

// csv | json | markdown render rounded values; jsonl is the full-precision
// interchange format. Throws kBadFormat.
std::string Emit(const ResultsTable& table, std::string_view format);

// Interchange file: one {model_tag, mode, technique, metric, value} per line.
ResultsTable ParseTable(std::istream& in);
ResultsTable LoadTable(const std::string& path);

}  // namespace keyprompt::report
