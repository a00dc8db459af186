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

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace keyprompt::corpus {

enum class SectionKind { kIntroduction, kMethods, kResults, kDiscussion, kOther };

// IMRAD order; the only kinds used for dataset construction.
inline constexpr std::array<SectionKind, 4> kImradKinds = {
    SectionKind::kIntroduction, SectionKind::kMethods, SectionKind::kResults,
    SectionKind::kDiscussion};

constexpr bool IsImrad(SectionKind k) { return k != SectionKind::kOther; }

// "Introduction", "Methods", ...
std::string_view SectionKindName(SectionKind kind);
// "introduction", "methods", ... (file/JSON key form)
std::string_view SectionKindKey(SectionKind kind);
// Case-insensitive inverse of SectionKindName.
std::optional<SectionKind> ParseSectionKind(std::string_view text);

struct SectionRecord {
  std::string heading;
  SectionKind kind = SectionKind::kOther;
  std::string body;
};

struct Article {
  std::string id;
  std::string title;
  std::vector<SectionRecord> sections;
  std::map<SectionKind, std::string> abstract_sections;
  std::vector<std::string> keywords;
  std::vector<std::string> mesh_terms;
  std::size_t full_text_token_count = 0;

  // Bodies of every section of `kind`, joined with '\n'. Empty if none.
  std::string SectionText(SectionKind kind) const;
  // All section bodies joined with '\n'.
  std::string FullText() const;
  // True if some section of `kind` has a body with at least one token.
  bool HasSection(SectionKind kind) const;
  // True if the structured abstract has a part of `kind` with a token in it.
  bool HasAbstractPart(SectionKind kind) const;
};

// Heading phrase -> kind lookup. See data/section_headings.txt for the
// bundled table and the normalization rules.
class HeadingTable {
 public:
  static const HeadingTable& Default();
  static HeadingTable Parse(std::istream& in);
  static HeadingTable Load(const std::string& path);

  static std::string Normalize(std::string_view heading);

  SectionKind Classify(std::string_view heading) const;
  const std::map<std::string, SectionKind>& entries() const { return entries_; }

 private:
  std::map<std::string, SectionKind> entries_;
};

// Total; unmatched headings are kOther.
SectionKind ClassifySection(std::string_view heading);

// One JSON object per line. Blank lines are skipped. Throws
// Error(kMalformedRecord) naming the 1-based line, Error(kDuplicateId).
std::vector<Article> ParseArticles(std::istream& in,
                                   const HeadingTable& headings = HeadingTable::Default(),
                                   unsigned threads = 1);
std::vector<Article> LoadArticles(const std::string& path,
                                  const HeadingTable& headings = HeadingTable::Default(),
                                  unsigned threads = 1);

// Input schema plus "section_kinds". One line, no trailing newline.
std::string ArticleToJsonLine(const Article& article);
void WriteArticles(std::ostream& out, const std::vector<Article>& articles);

enum class RejectReason {
  kEmptyFullText,
  kMissingKeywords,
  kIncompleteAbstract,
  kMissingSections,
  kLengthOutlier,
};

std::string_view RejectReasonName(RejectReason reason);

struct Rejection {
  std::string id;
  RejectReason reason;
};

struct FilterResult {
  std::vector<Article> kept;
  std::vector<Rejection> rejected;
};

// First failing structural predicate, checked in RejectReason order.
std::optional<RejectReason> StructuralDefect(const Article& article);

// Stage 1 drops structurally incomplete articles; stage 2 drops articles
// whose length deviates from the stage-1 mean by strictly more than
// sd_multiplier population standard deviations. Input order is preserved.
FilterResult FilterCorpus(const std::vector<Article>& articles, double sd_multiplier = 2.0);

void WriteRejections(std::ostream& out, const std::vector<Rejection>& rejected);

struct CorpusStats {
  std::size_t n_articles = 0;
  double mean_length = 0.0;
  double sd_length = 0.0;  // population
  std::map<std::size_t, double> truncation_coverage;  // limit -> fraction with length <= limit
};

CorpusStats ComputeCorpusStats(const std::vector<Article>& articles,
                               const std::vector<std::size_t>& limits);

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Ids are sorted, shuffled with Rng(seed), then cut into
// floor(n*train), floor(n*validation) and the remainder.
Split SplitCorpus(const std::vector<Article>& articles, const SplitRatios& ratios,
                  std::uint64_t seed);

}  // namespace keyprompt::corpus
