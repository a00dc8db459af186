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

#include "keyprompt/keyterms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

#include "keyprompt/error.hpp"
#include "keyprompt/simd/kernels.hpp"

namespace keyprompt::keyterms {
namespace {

using corpus::Article;
using corpus::SectionKind;

constexpr std::size_t kMinTermBytes = 2;

bool Eligible(const std::string& token, const textproc::StopwordList& stopwords) {
  return token.size() >= kMinTermBytes && !stopwords.Contains(token);
}

void RequireTerms(std::size_t n_terms) {
  if (n_terms == 0) throw Error(ErrorCode::kInvalidArgument, "number of terms must be >= 1");
}

// Sorts by score descending, then term ascending, and keeps the top n.
KeyTermList TopScored(Technique technique, std::vector<std::pair<std::string, double>> scored,
                      std::size_t n_terms) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > n_terms) scored.resize(n_terms);
  KeyTermList out;
  out.technique = technique;
  out.scores.emplace();
  for (auto& [term, score] : scored) {
    out.terms.push_back(std::move(term));
    out.scores->push_back(score);
  }
  return out;
}

KeyTermList Passthrough(Technique technique, const std::vector<std::string>& source,
                        bool fold_case, const char* what) {
  KeyTermList out;
  out.technique = technique;
  std::set<std::string> seen;
  for (const auto& raw : source) {
    std::string term = SanitizeTerm(raw);
    if (term.empty()) continue;
    const std::string key = fold_case ? textproc::ToLowerAscii(term) : term;
    if (!seen.insert(key).second) continue;
    out.terms.push_back(std::move(term));
  }
  if (out.terms.empty()) throw Error(ErrorCode::kNoTermsAvailable, std::string("article has no ") + what);
  return out;
}

}  // namespace

std::string_view TechniqueKey(Technique t) {
  switch (t) {
    case Technique::kKeywords: return "keywords";
    case Technique::kMesh: return "mesh";
    case Technique::kKeyBert: return "keybert";
    case Technique::kTf: return "tf";
    case Technique::kTfIdf: return "tfidf";
  }
  return "unknown";
}

std::string_view TechniqueLabel(Technique t) {
  switch (t) {
    case Technique::kKeywords: return "Keywords";
    case Technique::kMesh: return "MeSH";
    case Technique::kKeyBert: return "KeyBERT";
    case Technique::kTf: return "TF";
    case Technique::kTfIdf: return "TF-IDF";
  }
  return "unknown";
}

std::optional<Technique> ParseTechnique(std::string_view text) {
  const std::string lower = textproc::ToLowerAscii(text);
  for (Technique t : kAllTechniques) {
    if (lower == TechniqueKey(t) || lower == textproc::ToLowerAscii(TechniqueLabel(t))) return t;
  }
  return std::nullopt;
}

std::string CheckInvariants(const KeyTermList& list) {
  std::set<std::string_view> seen;
  for (const auto& t : list.terms) {
    if (t.empty()) return "empty term";
    if (t.find('|') != std::string::npos) return "term contains '|': " + t;
    if (!seen.insert(t).second) return "duplicate term: " + t;
  }
  if (list.scores) {
    if (list.scores->size() != list.terms.size()) return "scores not parallel to terms";
    for (std::size_t i = 1; i < list.terms.size(); ++i) {
      const double prev = (*list.scores)[i - 1];
      const double cur = (*list.scores)[i];
      if (prev < cur || (prev == cur && !(list.terms[i - 1] < list.terms[i]))) {
        return "terms not sorted by score at position " + std::to_string(i);
      }
    }
  }
  return {};
}

std::string SanitizeTerm(std::string_view term) {
  std::string out;
  bool pending_space = false;
  for (char c : term) {
    if (c == '|') continue;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

KeyTermList ExtractKeywords(const Article& article) {
  return Passthrough(Technique::kKeywords, article.keywords, /*fold_case=*/true, "author keywords");
}

KeyTermList ExtractMesh(const Article& article) {
  return Passthrough(Technique::kMesh, article.mesh_terms, /*fold_case=*/false, "MeSH terms");
}

KeyTermList ExtractTf(const Article& article, std::size_t n_terms,
                      const textproc::StopwordList& stopwords) {
  RequireTerms(n_terms);
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& section : article.sections) {
    for (auto& token : textproc::Tokenize(section.body)) {
      if (Eligible(token, stopwords)) ++counts[std::move(token)];
    }
  }
  if (counts.empty()) {
    throw Error(ErrorCode::kNoTermsAvailable, "article " + article.id + " has no eligible tokens");
  }
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(counts.size());
  for (auto& [term, count] : counts) scored.emplace_back(term, static_cast<double>(count));
  return TopScored(Technique::kTf, std::move(scored), n_terms);
}

KeyTermList ExtractTfIdf(const Article& article, SectionKind target, std::size_t n_terms,
                         const textproc::StopwordList& stopwords) {
  const SectionKind targets[] = {target};
  return ExtractTfIdf(article, targets, n_terms, stopwords);
}

KeyTermList ExtractTfIdf(const Article& article, std::span<const SectionKind> targets,
                         std::size_t n_terms, const textproc::StopwordList& stopwords) {
  RequireTerms(n_terms);
  if (targets.empty()) throw Error(ErrorCode::kInvalidArgument, "no TF-IDF target section");
  for (SectionKind t : targets) {
    if (!corpus::IsImrad(t) || !article.HasSection(t)) {
      throw Error(ErrorCode::kMissingSection, std::string(corpus::SectionKindName(t)));
    }
  }

  // Document 0 is the merged target; the other present IMRAD kinds follow.
  std::vector<std::map<std::string, std::size_t>> docs(1);
  std::size_t target_total = 0;
  for (SectionKind kind : corpus::kImradKinds) {
    if (!article.HasSection(kind)) continue;
    const bool is_target = std::find(targets.begin(), targets.end(), kind) != targets.end();
    if (!is_target) docs.emplace_back();
    auto& doc = is_target ? docs.front() : docs.back();
    for (auto& token : textproc::Tokenize(article.SectionText(kind))) {
      if (!Eligible(token, stopwords)) continue;
      if (is_target) ++target_total;
      ++doc[std::move(token)];
    }
  }
  if (docs.size() < 2) {
    throw Error(ErrorCode::kMissingSection,
                "TF-IDF needs at least one IMRAD section besides the target");
  }
  if (target_total == 0) {
    throw Error(ErrorCode::kNoTermsAvailable, "target section has no eligible tokens");
  }

  const double n_docs = static_cast<double>(docs.size());
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(docs.front().size());
  for (const auto& [term, count] : docs.front()) {
    std::size_t df = 0;
    for (const auto& doc : docs) df += doc.count(term);
    const double rf = static_cast<double>(count) / static_cast<double>(target_total);
    const double idf = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df))) + 1.0;
    scored.emplace_back(term, rf * idf);
  }
  return TopScored(Technique::kTfIdf, std::move(scored), n_terms);
}

KeyTermList ExtractEmbeddingTerms(std::string_view text, const EmbeddingProvider& provider,
                                  NGramRange range, std::size_t n_terms,
                                  const textproc::StopwordList& stopwords) {
  RequireTerms(n_terms);
  if (range.lo < 1 || range.hi < range.lo || range.hi > 3) {
    throw Error(ErrorCode::kInvalidArgument, "n-gram range must satisfy 1 <= lo <= hi <= 3");
  }

  const auto tokens = textproc::Tokenize(text);
  std::set<std::string> candidates;
  for (int len = range.lo; len <= range.hi; ++len) {
    const auto n = static_cast<std::size_t>(len);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      if (stopwords.Contains(tokens[i]) || stopwords.Contains(tokens[i + n - 1])) continue;
      std::string candidate = tokens[i];
      for (std::size_t j = i + 1; j < i + n; ++j) (candidate += ' ') += tokens[j];
      candidates.insert(std::move(candidate));
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::kNoTermsAvailable, "no candidate phrases");

  auto embed = [&](std::string_view s) {
    std::vector<float> v;
    try {
      v = provider.Embed(s);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kProviderFailure) throw;
      throw Error(ErrorCode::kProviderFailure, e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kProviderFailure, e.what());
    }
    if (v.size() != provider.dimension()) {
      throw Error(ErrorCode::kProviderFailure, "provider returned a vector of the wrong dimension");
    }
    return v;
  };

  const std::vector<float> doc = embed(text);
  const double doc_norm2 = simd::Dot(doc, doc);
  if (!(doc_norm2 > 0.0)) throw Error(ErrorCode::kNoTermsAvailable, "document embeds to a zero vector");
  const double doc_norm = std::sqrt(doc_norm2);

  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(candidates.size());
  for (const auto& candidate : candidates) {
    const std::vector<float> v = embed(candidate);
    const double norm2 = simd::Dot(v, v);
    if (!(norm2 > 0.0)) continue;
    scored.emplace_back(candidate, simd::Dot(v, doc) / (std::sqrt(norm2) * doc_norm));
  }
  if (scored.empty()) throw Error(ErrorCode::kNoTermsAvailable, "every candidate embeds to zero");
  return TopScored(Technique::kKeyBert, std::move(scored), n_terms);
}

}  // namespace keyprompt::keyterms
