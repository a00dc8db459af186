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

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "keyprompt/textproc.hpp"

namespace keyprompt::rouge {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// f = 2pr/(p+r), or 0 when p + r = 0.
RougeScore MakeScore(double precision, double recall);

// Clipped n-gram overlap; n must be 1 or 2 (kBadN otherwise). No stemming and
// no stopword removal.
RougeScore RougeN(std::string_view candidate, std::string_view reference, int n);

// Bit-parallel LCS length (64 positions of `a` per machine word).
std::size_t LcsLength(const textproc::TokenSequence& a, const textproc::TokenSequence& b);
// Quadratic dynamic-programming version of the same thing.
std::size_t LcsLengthReference(const textproc::TokenSequence& a, const textproc::TokenSequence& b);

// Positions of `reference` on one LCS with `candidate`, ascending.
std::vector<std::size_t> LcsReferencePositions(const textproc::TokenSequence& reference,
                                               const textproc::TokenSequence& candidate);

// Summary-level LCS: per reference sentence, the union of LCS matches against
// every candidate sentence, each token credited while it is still unused on
// both sides.
RougeScore RougeLsum(std::string_view candidate, std::string_view reference);

// Plain sentence-agnostic ROUGE-L.
RougeScore RougeL(std::string_view candidate, std::string_view reference);

inline constexpr std::string_view kMetricNames[] = {"rouge1", "rouge2", "rougeLsum"};
bool IsMetricName(std::string_view name);
RougeScore ScoreMetric(std::string_view metric, std::string_view candidate,
                       std::string_view reference);

struct TextRecord {
  std::string id;
  std::string text;
};

struct ExampleScore {
  std::string id;
  RougeScore score;
};

struct CorpusScore {
  std::string metric;
  double mean_f = 0.0;
  std::vector<ExampleScore> per_example;  // prediction order
};

// Every prediction id must appear among the references. Throws kEmptySet,
// kMissingReference, kDuplicateId, kInvalidArgument (unknown metric).
std::vector<CorpusScore> ScoreCorpus(const std::vector<TextRecord>& predictions,
                                     const std::vector<TextRecord>& references,
                                     const std::vector<std::string>& metrics,
                                     unsigned threads = 1);

// Line-delimited {id, text}.
std::vector<TextRecord> ParseTextRecords(std::istream& in);
std::vector<TextRecord> LoadTextRecords(const std::string& path);
void WriteTextRecords(std::ostream& out, const std::vector<TextRecord>& records);

// One {metric, mean_f, per_example:[{id, precision, recall, f}]} line per metric.
void WriteScores(std::ostream& out, const std::vector<CorpusScore>& scores);

}  // namespace keyprompt::rouge
