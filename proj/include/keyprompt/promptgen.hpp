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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "keyprompt/corpus.hpp"
#include "keyprompt/keyterms.hpp"

namespace keyprompt::promptgen {

// Input text modes: introduction + discussion, per section without the
// section token, per section with it.
enum class Mode { kIntroDiscussion, kSectionsNoAnnotation, kSectionsWithAnnotation };

// "id", "s-na", "s-wa"
std::string_view ModeKey(Mode mode);
// "I+D", "S-n/a", "S-w/a"
std::string_view ModeLabel(Mode mode);
// Accepts either form, case-insensitively.
std::optional<Mode> ParseMode(std::string_view text);

inline constexpr std::string_view kContentToken = "[CONTENT]";
inline constexpr std::string_view kSummaryToken = "[SUMMARY]";
inline constexpr std::string_view kTermSeparator = " | ";

// "[CONTENT] t1 | t2 | ... | tN [SUMMARY]", optionally preceded by
// "[<SECTION>] ". Throws kEmptyTermList.
std::string RenderPrompt(const std::vector<std::string>& terms,
                         std::optional<corpus::SectionKind> section = std::nullopt);

struct ParsedPrompt {
  std::optional<std::string> annotation;  // e.g. "METHODS"
  std::vector<std::string> terms;
};

// Inverse of RenderPrompt; nullopt if `prompt` does not follow the grammar.
std::optional<ParsedPrompt> ParsePrompt(std::string_view prompt);

// The grammar as an ECMAScript regex, for validation.
const std::string& PromptGrammarPattern();
bool MatchesPromptGrammar(std::string_view prompt);

struct PromptedExample {
  std::string article_id;
  Mode mode = Mode::kIntroDiscussion;
  std::optional<corpus::SectionKind> section;  // set iff mode is per-section
  keyterms::Technique technique = keyterms::Technique::kKeywords;
  std::string input_text;
  std::string prompt;
  std::string target;
  std::optional<std::string> confused_from;

  // "<article_id>" or "<article_id>:<section key>"; the id scored outputs use.
  std::string ExampleId() const;
};

struct TruncationLimits {
  std::size_t input = 0;
  std::size_t target = 512;

  static TruncationLimits DefaultsFor(Mode mode);  // 2048/512 for I+D, 512/512 otherwise
};

struct ExtractorConfig {
  std::size_t n_terms = 10;
  const textproc::StopwordList* stopwords = &textproc::StopwordList::Default();
  const keyterms::EmbeddingProvider* embedder = nullptr;  // required for KeyBERT
  keyterms::NGramRange ngram_range;
};

// Key terms for one example. Keywords, MeSH and TF are article-level;
// TF-IDF and KeyBERT are scoped to `section`, or to Introduction plus
// Discussion when `section` is empty.
keyterms::KeyTermList ExtractTerms(const corpus::Article& article, keyterms::Technique technique,
                                   std::optional<corpus::SectionKind> section,
                                   const ExtractorConfig& config);

// I+D: one example; input = Introduction + "\n" + Discussion, target = the
// four abstract parts joined with '\n'. Per-section modes: one example per
// IMRAD section present, target = the matching abstract part.
std::vector<PromptedExample> BuildExamples(const corpus::Article& article, Mode mode,
                                           keyterms::Technique technique,
                                           const TruncationLimits& limits,
                                           const ExtractorConfig& config);

// Reassigns prompts within each (mode, section, technique) group following a
// seeded derangement of the group's article ids, so no example keeps a prompt
// from its own article. Throws kTooFewArticles for groups with fewer than two
// distinct articles.
std::vector<PromptedExample> Confuse(const std::vector<PromptedExample>& examples,
                                     std::uint64_t seed);

// Seeded derangement of {0..n-1}: result[i] != i for all i. n >= 2.
std::vector<std::size_t> Derangement(std::size_t n, std::uint64_t seed);

// Present IMRAD parts in IMRAD order joined with '\n'. Throws kEmptyParts.
std::string IntegrateSectionSummaries(const std::map<corpus::SectionKind, std::string>& parts);

// Dataset file: one JSON object per line with keys article_id, mode,
// section (per-section modes), technique, prompt, input_text, target and
// confused_from (when set).
std::string ExampleToJsonLine(const PromptedExample& example);
std::vector<PromptedExample> ParseDataset(std::istream& in);
std::vector<PromptedExample> LoadDataset(const std::string& path);
void WriteDataset(std::ostream& out, const std::vector<PromptedExample>& examples);

}  // namespace keyprompt::promptgen
