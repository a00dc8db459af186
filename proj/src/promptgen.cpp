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

#include "keyprompt/promptgen.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <regex>

#include "json.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/random.hpp"
#include "keyprompt/textproc.hpp"

namespace keyprompt::promptgen {
namespace {

using corpus::Article;
using corpus::SectionKind;
using keyterms::Technique;
using nlohmann::json;
using nlohmann::ordered_json;

std::string SectionToken(SectionKind kind) {
  std::string name(corpus::SectionKindName(kind));
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return "[" + name + "]";
}

bool IsSectionMode(Mode mode) { return mode != Mode::kIntroDiscussion; }

}  // namespace

std::string_view ModeKey(Mode mode) {
  switch (mode) {
    case Mode::kIntroDiscussion: return "id";
    case Mode::kSectionsNoAnnotation: return "s-na";
    case Mode::kSectionsWithAnnotation: return "s-wa";
  }
  return "unknown";
}

std::string_view ModeLabel(Mode mode) {
  switch (mode) {
    case Mode::kIntroDiscussion: return "I+D";
    case Mode::kSectionsNoAnnotation: return "S-n/a";
    case Mode::kSectionsWithAnnotation: return "S-w/a";
  }
  return "unknown";
}

std::optional<Mode> ParseMode(std::string_view text) {
  const std::string lower = textproc::ToLowerAscii(text);
  for (Mode m : {Mode::kIntroDiscussion, Mode::kSectionsNoAnnotation,
                 Mode::kSectionsWithAnnotation}) {
    if (lower == ModeKey(m) || lower == textproc::ToLowerAscii(ModeLabel(m))) return m;
  }
  return std::nullopt;
}

// --- prompt grammar -------------------------------------------------------------

std::string RenderPrompt(const std::vector<std::string>& terms,
                         std::optional<SectionKind> section) {
  if (terms.empty()) throw Error(ErrorCode::kEmptyTermList, "cannot render a prompt without terms");
  std::string out;
  if (section) {
    if (!corpus::IsImrad(*section)) {
      throw Error(ErrorCode::kInvalidArgument, "section annotation must be an IMRAD kind");
    }
    out += SectionToken(*section);
    out += ' ';
  }
  out += kContentToken;
  out += ' ';
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].empty() || terms[i].find('|') != std::string::npos ||
        textproc::TrimWhitespace(terms[i]).size() != terms[i].size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prompt terms must be non-empty, trimmed and free of '|': \"" + terms[i] + "\"");
    }
    if (i) out += kTermSeparator;
    out += terms[i];
  }
  out += ' ';
  out += kSummaryToken;
  return out;
}

std::optional<ParsedPrompt> ParsePrompt(std::string_view prompt) {
  ParsedPrompt parsed;
  const std::string content_open = std::string(kContentToken) + " ";
  if (prompt.rfind(content_open, 0) != 0) {
    // Optional "[ANNOTATION] " prefix of uppercase letters.
    if (prompt.empty() || prompt.front() != '[') return std::nullopt;
    std::size_t i = 1;
    while (i < prompt.size() && prompt[i] >= 'A' && prompt[i] <= 'Z') ++i;
    if (i == 1 || i + 1 >= prompt.size() || prompt[i] != ']' || prompt[i + 1] != ' ') {
      return std::nullopt;
    }
    parsed.annotation = std::string(prompt.substr(1, i - 1));
    prompt.remove_prefix(i + 2);
    if (prompt.rfind(content_open, 0) != 0) return std::nullopt;
  }
  prompt.remove_prefix(content_open.size());
  const std::string summary_close = " " + std::string(kSummaryToken);
  if (prompt.size() < summary_close.size() ||
      prompt.substr(prompt.size() - summary_close.size()) != summary_close) {
    return std::nullopt;
  }
  prompt.remove_suffix(summary_close.size());

  for (;;) {
    const auto sep = prompt.find(kTermSeparator);
    const std::string_view term = prompt.substr(0, sep);
    if (term.empty() || term.find('|') != std::string_view::npos) return std::nullopt;
    parsed.terms.emplace_back(term);
    if (sep == std::string_view::npos) break;
    prompt.remove_prefix(sep + kTermSeparator.size());
  }
  return parsed;
}

const std::string& PromptGrammarPattern() {
  static const std::string pattern =
      R"((\[[A-Z]+\] )?\[CONTENT\] ([^|]+( \| [^|]+)*) \[SUMMARY\])";
  return pattern;
}

bool MatchesPromptGrammar(std::string_view prompt) {
  static const std::regex re(PromptGrammarPattern());
  return std::regex_match(prompt.begin(), prompt.end(), re);
}

// --- examples -------------------------------------------------------------------

std::string PromptedExample::ExampleId() const {
  if (!section) return article_id;
  return article_id + ":" + std::string(corpus::SectionKindKey(*section));
}

TruncationLimits TruncationLimits::DefaultsFor(Mode mode) {
  return mode == Mode::kIntroDiscussion ? TruncationLimits{2048, 512} : TruncationLimits{512, 512};
}

keyterms::KeyTermList ExtractTerms(const Article& article, Technique technique,
                                   std::optional<SectionKind> section,
                                   const ExtractorConfig& config) {
  const auto& stopwords = config.stopwords ? *config.stopwords : textproc::StopwordList::Default();
  static constexpr SectionKind kIntroDiscussion[] = {SectionKind::kIntroduction,
                                                     SectionKind::kDiscussion};
  switch (technique) {
    case Technique::kKeywords:
      return keyterms::ExtractKeywords(article);
    case Technique::kMesh:
      return keyterms::ExtractMesh(article);
    case Technique::kTf:
      return keyterms::ExtractTf(article, config.n_terms, stopwords);
    case Technique::kTfIdf:
      if (section) return keyterms::ExtractTfIdf(article, *section, config.n_terms, stopwords);
      return keyterms::ExtractTfIdf(article, kIntroDiscussion, config.n_terms, stopwords);
    case Technique::kKeyBert: {
      if (!config.embedder) {
        throw Error(ErrorCode::kInvalidArgument, "KeyBERT extraction needs an embedding provider");
      }
      const std::string text =
          section ? article.SectionText(*section)
                  : article.SectionText(SectionKind::kIntroduction) + "\n" +
                        article.SectionText(SectionKind::kDiscussion);
      return keyterms::ExtractEmbeddingTerms(text, *config.embedder, config.ngram_range,
                                             config.n_terms, stopwords);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown technique");
}

std::vector<PromptedExample> BuildExamples(const Article& article, Mode mode, Technique technique,
                                           const TruncationLimits& limits,
                                           const ExtractorConfig& config) {
  auto missing = [&](const std::string& what) {
    return Error(ErrorCode::kMissingSection, article.id + ": " + what);
  };

  std::vector<PromptedExample> out;
  if (mode == Mode::kIntroDiscussion) {
    for (SectionKind kind : {SectionKind::kIntroduction, SectionKind::kDiscussion}) {
      if (!article.HasSection(kind)) throw missing(std::string(corpus::SectionKindName(kind)));
    }
    std::map<SectionKind, std::string> abstract_parts;
    for (SectionKind kind : corpus::kImradKinds) {
      if (!article.HasAbstractPart(kind)) {
        throw missing("abstract " + std::string(corpus::SectionKindName(kind)));
      }
      abstract_parts[kind] = article.abstract_sections.at(kind);
    }
    PromptedExample ex;
    ex.article_id = article.id;
    ex.mode = mode;
    ex.technique = technique;
    ex.input_text = textproc::TruncateTokens(article.SectionText(SectionKind::kIntroduction) +
                                                 "\n" +
                                                 article.SectionText(SectionKind::kDiscussion),
                                             limits.input);
    ex.target = textproc::TruncateTokens(IntegrateSectionSummaries(abstract_parts), limits.target);
    ex.prompt = RenderPrompt(ExtractTerms(article, technique, std::nullopt, config).terms);
    out.push_back(std::move(ex));
    return out;
  }

  for (SectionKind kind : corpus::kImradKinds) {
    if (!article.HasSection(kind)) continue;
    if (!article.HasAbstractPart(kind)) {
      throw missing("abstract " + std::string(corpus::SectionKindName(kind)));
    }
    PromptedExample ex;
    ex.article_id = article.id;
    ex.mode = mode;
    ex.section = kind;
    ex.technique = technique;
    ex.input_text = textproc::TruncateTokens(article.SectionText(kind), limits.input);
    ex.target = textproc::TruncateTokens(article.abstract_sections.at(kind), limits.target);
    const auto terms = ExtractTerms(article, technique, kind, config);
    ex.prompt = RenderPrompt(terms.terms, mode == Mode::kSectionsWithAnnotation
                                              ? std::optional<SectionKind>(kind)
                                              : std::nullopt);
    out.push_back(std::move(ex));
  }
  return out;
}

// --- confusion ------------------------------------------------------------------

std::vector<std::size_t> Derangement(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kTooFewArticles, "a derangement needs at least two elements");
  constexpr int kMaxAttempts = 1000;
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.Shuffle(perm);
    bool fixed_point = false;
    for (std::size_t i = 0; i < n && !fixed_point; ++i) fixed_point = perm[i] == i;
    if (!fixed_point) return perm;
  }
  for (std::size_t i = 0; i < n; ++i) perm[i] = (i + 1) % n;
  return perm;
}

std::vector<PromptedExample> Confuse(const std::vector<PromptedExample>& examples,
                                     std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    std::string key = std::string(ModeKey(ex.mode)) + "|" +
                      (ex.section ? std::string(corpus::SectionKindKey(*ex.section)) : "") + "|" +
                      std::string(keyterms::TechniqueKey(ex.technique));
    groups[key].push_back(i);
  }

  std::vector<PromptedExample> out = examples;
  for (const auto& [key, members] : groups) {
    // First example of each article donates that article's prompt.
    std::map<std::string, std::size_t> first_of;
    for (std::size_t idx : members) first_of.emplace(examples[idx].article_id, idx);
    if (first_of.size() < 2) {
      throw Error(ErrorCode::kTooFewArticles,
                  "group " + key + " has fewer than two distinct articles");
    }
    std::vector<std::string> ids;
    for (const auto& [id, idx] : first_of) ids.push_back(id);
    const auto perm = Derangement(ids.size(), SplitMix64(seed ^ Fnv1a(key)));
    std::map<std::string, std::string> donor;
    for (std::size_t i = 0; i < ids.size(); ++i) donor[ids[i]] = ids[perm[i]];
    for (std::size_t idx : members) {
      const std::string& from = donor.at(examples[idx].article_id);
      out[idx].prompt = examples[first_of.at(from)].prompt;
      out[idx].confused_from = from;
    }
  }
  return out;
}

std::string IntegrateSectionSummaries(const std::map<SectionKind, std::string>& parts) {
  std::string out;
  bool any = false;
  for (SectionKind kind : corpus::kImradKinds) {
    const auto it = parts.find(kind);
    if (it == parts.end()) continue;
    if (any) out += '\n';
    out += it->second;
    any = true;
  }
  if (!any) throw Error(ErrorCode::kEmptyParts, "no section summaries to integrate");
  return out;
}

// --- dataset files --------------------------------------------------------------

std::string ExampleToJsonLine(const PromptedExample& ex) {
  ordered_json obj;
  obj["article_id"] = ex.article_id;
  obj["mode"] = std::string(ModeKey(ex.mode));
  if (ex.section) obj["section"] = std::string(corpus::SectionKindKey(*ex.section));
  obj["technique"] = std::string(keyterms::TechniqueKey(ex.technique));
  obj["prompt"] = ex.prompt;
  obj["input_text"] = ex.input_text;
  obj["target"] = ex.target;
  if (ex.confused_from) obj["confused_from"] = *ex.confused_from;
  return obj.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void WriteDataset(std::ostream& out, const std::vector<PromptedExample>& examples) {
  for (const auto& ex : examples) out << ExampleToJsonLine(ex) << '\n';
}

std::vector<PromptedExample> ParseDataset(std::istream& in) {
  std::vector<PromptedExample> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedRecord,
                "dataset line " + std::to_string(line_no) + ": " + what);
  };
  auto str = [&](const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) fail(std::string("missing string \"") + key + "\"");
    return it->get<std::string>();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (textproc::TrimWhitespace(line).empty()) continue;
    const auto obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) fail("not a JSON object");
    PromptedExample ex;
    ex.article_id = str(obj, "article_id");
    const auto mode = ParseMode(str(obj, "mode"));
    if (!mode) fail("unknown mode");
    ex.mode = *mode;
    if (const auto it = obj.find("section"); it != obj.end() && !it->is_null()) {
      const auto kind = it->is_string() ? corpus::ParseSectionKind(it->get<std::string>())
                                        : std::nullopt;
      if (!kind || !corpus::IsImrad(*kind)) fail("unknown section");
      ex.section = *kind;
    }
    if (IsSectionMode(ex.mode) != ex.section.has_value()) {
      fail("\"section\" is required for per-section modes and forbidden for id");
    }
    const auto technique = keyterms::ParseTechnique(str(obj, "technique"));
    if (!technique) fail("unknown technique");
    ex.technique = *technique;
    ex.prompt = str(obj, "prompt");
    if (!MatchesPromptGrammar(ex.prompt)) fail("prompt does not follow the prompt grammar");
    ex.input_text = str(obj, "input_text");
    ex.target = str(obj, "target");
    if (const auto it = obj.find("confused_from"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) fail("\"confused_from\" must be a string");
      ex.confused_from = it->get<std::string>();
      if (*ex.confused_from == ex.article_id) fail("\"confused_from\" equals \"article_id\"");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<PromptedExample> LoadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset file " + path);
  return ParseDataset(in);
}

}  // namespace keyprompt::promptgen
