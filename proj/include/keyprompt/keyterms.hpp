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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyprompt/corpus.hpp"
#include "keyprompt/embedding.hpp"
#include "keyprompt/textproc.hpp"

namespace keyprompt::keyterms {

enum class Technique { kKeywords, kMesh, kKeyBert, kTf, kTfIdf };

inline constexpr Technique kAllTechniques[] = {Technique::kKeywords, Technique::kMesh,
                                               Technique::kKeyBert, Technique::kTf,
                                               Technique::kTfIdf};

// CLI/file form: keywords, mesh, keybert, tf, tfidf.
std::string_view TechniqueKey(Technique t);
// Results-table form: Keywords, MeSH, KeyBERT, TF, TF-IDF.
std::string_view TechniqueLabel(Technique t);
// Accepts either form, case-insensitively.
std::optional<Technique> ParseTechnique(std::string_view text);

// Ordered salient terms. Terms are non-empty, unique and free of '|'; when
// scores are present they run parallel to terms, sorted by score descending
// with ties broken lexicographically.
struct KeyTermList {
  Technique technique = Technique::kKeywords;
  std::vector<std::string> terms;
  std::optional<std::vector<double>> scores;
};

// Empty string if the list is valid, otherwise the first violated rule.
std::string CheckInvariants(const KeyTermList& list);

// Drops '|', collapses whitespace runs to one space and trims.
std::string SanitizeTerm(std::string_view term);

// Author keywords in source order, sanitized, deduplicated ignoring ASCII
// case (first spelling wins). Throws kNoTermsAvailable if none survive.
KeyTermList ExtractKeywords(const corpus::Article& article);

// MeSH descriptors, order preserved, sanitized and deduplicated exactly.
KeyTermList ExtractMesh(const corpus::Article& article);

// Most frequent eligible tokens over the whole article. Eligible: not a
// stopword and at least two bytes long.
KeyTermList ExtractTf(const corpus::Article& article, std::size_t n_terms,
                      const textproc::StopwordList& stopwords);

// Section-contrastive TF-IDF. Each IMRAD kind present in the article is
// one document; the target kinds are merged into a single document.
//   score(t) = rf(t) * (ln((1 + S) / (1 + df(t))) + 1)
// with rf the share of t among the target's eligible tokens, S the number of
// documents and df the number of documents containing t.
KeyTermList ExtractTfIdf(const corpus::Article& article, corpus::SectionKind target,
                         std::size_t n_terms, const textproc::StopwordList& stopwords);
KeyTermList ExtractTfIdf(const corpus::Article& article,
                         std::span<const corpus::SectionKind> targets, std::size_t n_terms,
                         const textproc::StopwordList& stopwords);

struct NGramRange {
  int lo = 1;
  int hi = 1;
};

// Embedding-similarity extraction: candidates are the lo..hi-grams of the
// text whose first and last tokens are not stopwords; each is scored by
// cosine similarity to the embedding of the whole text. Zero vectors are
// excluded. Provider errors surface as kProviderFailure.
KeyTermList ExtractEmbeddingTerms(std::string_view text, const EmbeddingProvider& provider,
                                  NGramRange range, std::size_t n_terms,
                                  const textproc::StopwordList& stopwords);

}  // namespace keyprompt::keyterms
