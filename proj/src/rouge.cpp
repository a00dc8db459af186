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

#include "keyprompt/rouge.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/parallel.hpp"

namespace keyprompt::rouge {
namespace {

using textproc::TokenSequence;

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<TokenSequence> SentenceTokens(std::string_view text) {
  std::vector<TokenSequence> out;
  for (const auto& sentence : textproc::SplitSentences(text)) {
    auto tokens = textproc::Tokenize(sentence);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace

RougeScore MakeScore(double precision, double recall) {
  RougeScore s{precision, recall, 0.0};
  if (precision + recall > 0.0) s.f = 2.0 * precision * recall / (precision + recall);
  return s;
}

RougeScore RougeN(std::string_view candidate, std::string_view reference, int n) {
  if (n != 1 && n != 2) throw Error(ErrorCode::kBadN, "ROUGE-N supports n = 1 or 2, got " + std::to_string(n));
  const auto cand = textproc::NGramCountsOf(textproc::Tokenize(candidate), n);
  const auto ref = textproc::NGramCountsOf(textproc::Tokenize(reference), n);
  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [gram, count] : cand) cand_total += count;
  for (const auto& [gram, count] : ref) {
    ref_total += count;
    if (const auto it = cand.find(gram); it != cand.end()) overlap += std::min(count, it->second);
  }
  return MakeScore(Ratio(overlap, cand_total), Ratio(overlap, ref_total));
}

std::size_t LcsLength(const TokenSequence& a, const TokenSequence& b) {
  if (a.empty() || b.empty()) return 0;
  const std::size_t m = a.size();
  const std::size_t words = (m + 63) / 64;
  std::unordered_map<std::string_view, std::vector<std::uint64_t>> match;
  for (std::size_t i = 0; i < m; ++i) {
    auto& mask = match[a[i]];
    if (mask.empty()) mask.assign(words, 0);
    mask[i / 64] |= std::uint64_t{1} << (i % 64);
  }

  // Zero bits of V mark the positions of a that end an LCS step.
  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  for (const auto& token : b) {
    const auto it = match.find(token);
    if (it == match.end()) continue;
    const auto& mask = it->second;
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & mask[w];
      const std::uint64_t sum = v[w] + u + carry;
      carry = (sum < v[w] || (carry && sum == v[w])) ? 1 : 0;
      v[w] = sum | (v[w] & ~mask[w]);
    }
  }
  std::size_t ones = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = v[w];
    if (w + 1 == words && m % 64 != 0) word &= (std::uint64_t{1} << (m % 64)) - 1;
    ones += static_cast<std::size_t>(std::popcount(word));
  }
  return m - ones;
}

std::size_t LcsLengthReference(const TokenSequence& a, const TokenSequence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::size_t> LcsReferencePositions(const TokenSequence& reference,
                                               const TokenSequence& candidate) {
  const std::size_t rows = reference.size(), cols = candidate.size();
  std::vector<std::uint32_t> t((rows + 1) * (cols + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return t[i * (cols + 1) + j]; };
  for (std::size_t i = 1; i <= rows; ++i) {
    for (std::size_t j = 1; j <= cols; ++j) {
      at(i, j) = reference[i - 1] == candidate[j - 1] ? at(i - 1, j - 1) + 1
                                                      : std::max(at(i - 1, j), at(i, j - 1));
    }
  }
  std::vector<std::size_t> positions;
  std::size_t i = rows, j = cols;
  while (i > 0 && j > 0) {
    if (reference[i - 1] == candidate[j - 1]) {
      positions.push_back(i - 1);
      --i;
      --j;
    } else if (at(i, j - 1) > at(i - 1, j)) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(positions.begin(), positions.end());
  return positions;
}

RougeScore RougeLsum(std::string_view candidate, std::string_view reference) {
  const auto cand_sents = SentenceTokens(candidate);
  const auto ref_sents = SentenceTokens(reference);
  std::map<std::string_view, std::size_t> cand_counts, ref_counts;
  std::size_t cand_total = 0, ref_total = 0;
  for (const auto& s : cand_sents) {
    for (const auto& tok : s) ++cand_counts[tok];
    cand_total += s.size();
  }
  for (const auto& s : ref_sents) {
    for (const auto& tok : s) ++ref_counts[tok];
    ref_total += s.size();
  }
  if (cand_total == 0 || ref_total == 0) return {};

  std::size_t hits = 0;
  for (const auto& ref : ref_sents) {
    std::set<std::size_t> united;
    for (const auto& cand : cand_sents) {
      for (std::size_t p : LcsReferencePositions(ref, cand)) united.insert(p);
    }
    for (std::size_t p : united) {
      auto& c = cand_counts[ref[p]];
      auto& r = ref_counts[ref[p]];
      if (c > 0 && r > 0) {
        ++hits;
        --c;
        --r;
      }
    }
  }
  return MakeScore(Ratio(hits, cand_total), Ratio(hits, ref_total));
}

RougeScore RougeL(std::string_view candidate, std::string_view reference) {
  const auto cand = textproc::Tokenize(candidate);
  const auto ref = textproc::Tokenize(reference);
  const std::size_t lcs = LcsLength(ref, cand);
  return MakeScore(Ratio(lcs, cand.size()), Ratio(lcs, ref.size()));
}

bool IsMetricName(std::string_view name) {
  return std::find(std::begin(kMetricNames), std::end(kMetricNames), name) != std::end(kMetricNames);
}

RougeScore ScoreMetric(std::string_view metric, std::string_view candidate,
                       std::string_view reference) {
  if (metric == "rouge1") return RougeN(candidate, reference, 1);
  if (metric == "rouge2") return RougeN(candidate, reference, 2);
  if (metric == "rougeLsum") return RougeLsum(candidate, reference);
  throw Error(ErrorCode::kInvalidArgument, "unknown metric \"" + std::string(metric) + "\"");
}

std::vector<CorpusScore> ScoreCorpus(const std::vector<TextRecord>& predictions,
                                     const std::vector<TextRecord>& references,
                                     const std::vector<std::string>& metrics, unsigned threads) {
  if (predictions.empty()) throw Error(ErrorCode::kEmptySet, "no predictions to score");
  if (metrics.empty()) throw Error(ErrorCode::kInvalidArgument, "no metrics requested");
  for (const auto& m : metrics) {
    if (!IsMetricName(m)) throw Error(ErrorCode::kInvalidArgument, "unknown metric \"" + m + "\"");
  }
  std::unordered_map<std::string_view, const std::string*> ref_text;
  for (const auto& r : references) {
    if (!ref_text.emplace(r.id, &r.text).second) {
      throw Error(ErrorCode::kDuplicateId, "reference id " + r.id);
    }
  }
  std::vector<const std::string*> matched(predictions.size());
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& id = predictions[i].id;
    if (!seen.insert(id).second) throw Error(ErrorCode::kDuplicateId, "prediction id " + id);
    const auto it = ref_text.find(id);
    if (it == ref_text.end()) throw Error(ErrorCode::kMissingReference, id);
    matched[i] = it->second;
  }

  std::vector<CorpusScore> out;
  for (const auto& metric : metrics) {
    CorpusScore cs;
    cs.metric = metric;
    cs.per_example.resize(predictions.size());
    ParallelFor(predictions.size(), threads, [&](std::size_t i) {
      cs.per_example[i] = {predictions[i].id, ScoreMetric(metric, predictions[i].text, *matched[i])};
    });
    double sum = 0.0;
    for (const auto& e : cs.per_example) sum += e.score.f;
    cs.mean_f = sum / static_cast<double>(cs.per_example.size());
    out.push_back(std::move(cs));
  }
  return out;
}

std::vector<TextRecord> ParseTextRecords(std::istream& in) {
  std::vector<TextRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (textproc::TrimWhitespace(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    const auto id = obj.is_object() ? obj.find("id") : obj.end();
    const auto text = obj.is_object() ? obj.find("text") : obj.end();
    if (obj.is_discarded() || !obj.is_object() || id == obj.end() || !id->is_string() ||
        text == obj.end() || !text->is_string()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_no) + ": expected {\"id\": string, \"text\": string}");
    }
    out.push_back({id->get<std::string>(), text->get<std::string>()});
  }
  return out;
}

std::vector<TextRecord> LoadTextRecords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ParseTextRecords(in);
}

void WriteTextRecords(std::ostream& out, const std::vector<TextRecord>& records) {
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["text"] = r.text;
    out << obj.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
  }
}

void WriteScores(std::ostream& out, const std::vector<CorpusScore>& scores) {
  for (const auto& cs : scores) {
    nlohmann::ordered_json obj;
    obj["metric"] = cs.metric;
    obj["mean_f"] = cs.mean_f;
    auto& rows = obj["per_example"] = nlohmann::ordered_json::array();
    for (const auto& e : cs.per_example) {
      nlohmann::ordered_json row;
      row["id"] = e.id;
      row["precision"] = e.score.precision;
      row["recall"] = e.score.recall;
      row["f"] = e.score.f;
      rows.push_back(std::move(row));
    }
    out << obj.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
  }
}

}  // namespace keyprompt::rouge
