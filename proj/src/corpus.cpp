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

#include "keyprompt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "embedded_data.hpp"
#include "json.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/parallel.hpp"
#include "keyprompt/random.hpp"
#include "keyprompt/textproc.hpp"

namespace keyprompt::corpus {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kKindNames = {"Introduction", "Methods", "Results",
                                                        "Discussion", "Other"};
constexpr std::array<std::string_view, 5> kKindKeys = {"introduction", "methods", "results",
                                                       "discussion", "other"};

[[noreturn]] void Malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

std::string RequireString(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end()) Malformed(line_no, std::string("missing \"") + key + "\"");
  if (!it->is_string()) Malformed(line_no, std::string("\"") + key + "\" must be a string");
  return it->get<std::string>();
}

std::vector<std::string> OptionalStringArray(const json& obj, const char* key,
                                             std::size_t line_no) {
  std::vector<std::string> out;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) Malformed(line_no, std::string("\"") + key + "\" must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) Malformed(line_no, std::string("\"") + key + "\" entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Article ParseArticleLine(const std::string& line, std::size_t line_no,
                         const HeadingTable& headings) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) Malformed(line_no, "not valid JSON");
  if (!obj.is_object()) Malformed(line_no, "record must be a JSON object");

  Article a;
  a.id = RequireString(obj, "id", line_no);
  if (a.id.empty()) Malformed(line_no, "\"id\" must be non-empty");
  if (const auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) Malformed(line_no, "\"title\" must be a string");
    a.title = it->get<std::string>();
  }

  const auto sections = obj.find("sections");
  if (sections == obj.end()) Malformed(line_no, "missing \"sections\"");
  if (!sections->is_array()) Malformed(line_no, "\"sections\" must be an array");
  for (const auto& s : *sections) {
    if (!s.is_object()) Malformed(line_no, "section entries must be objects");
    SectionRecord rec;
    rec.heading = RequireString(s, "heading", line_no);
    rec.body = RequireString(s, "text", line_no);
    rec.kind = headings.Classify(rec.heading);
    a.sections.push_back(std::move(rec));
  }

  if (const auto kinds = obj.find("section_kinds"); kinds != obj.end() && !kinds->is_null()) {
    if (!kinds->is_array() || kinds->size() != a.sections.size()) {
      Malformed(line_no, "\"section_kinds\" must be an array parallel to \"sections\"");
    }
    for (std::size_t i = 0; i < a.sections.size(); ++i) {
      const auto& k = (*kinds)[i];
      const auto kind = k.is_string() ? ParseSectionKind(k.get<std::string>()) : std::nullopt;
      if (!kind) Malformed(line_no, "unknown section kind in \"section_kinds\"");
      a.sections[i].kind = *kind;
    }
  }

  if (const auto abs = obj.find("abstract"); abs != obj.end() && !abs->is_null()) {
    if (!abs->is_object()) Malformed(line_no, "\"abstract\" must be an object");
    for (SectionKind kind : kImradKinds) {
      const auto part = abs->find(std::string(SectionKindKey(kind)));
      if (part == abs->end() || part->is_null()) continue;
      if (!part->is_string()) Malformed(line_no, "abstract parts must be strings");
      a.abstract_sections[kind] = part->get<std::string>();
    }
  }

  a.keywords = OptionalStringArray(obj, "keywords", line_no);
  a.mesh_terms = OptionalStringArray(obj, "mesh_terms", line_no);

  for (const auto& s : a.sections) a.full_text_token_count += textproc::CountTokens(s.body);
  return a;
}

}  // namespace

std::string_view SectionKindName(SectionKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::string_view SectionKindKey(SectionKind kind) {
  return kKindKeys[static_cast<std::size_t>(kind)];
}

std::optional<SectionKind> ParseSectionKind(std::string_view text) {
  const std::string lower = textproc::ToLowerAscii(text);
  for (std::size_t i = 0; i < kKindKeys.size(); ++i) {
    if (lower == kKindKeys[i]) return static_cast<SectionKind>(i);
  }
  return std::nullopt;
}

std::string Article::SectionText(SectionKind kind) const {
  std::string out;
  bool first = true;
  for (const auto& s : sections) {
    if (s.kind != kind) continue;
    if (!first) out += '\n';
    out += s.body;
    first = false;
  }
  return out;
}

std::string Article::FullText() const {
  std::string out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i) out += '\n';
    out += sections[i].body;
  }
  return out;
}

bool Article::HasSection(SectionKind kind) const {
  return std::any_of(sections.begin(), sections.end(), [&](const SectionRecord& s) {
    return s.kind == kind && textproc::CountTokens(s.body) > 0;
  });
}

bool Article::HasAbstractPart(SectionKind kind) const {
  const auto it = abstract_sections.find(kind);
  return it != abstract_sections.end() && textproc::CountTokens(it->second) > 0;
}

// --- headings ---------------------------------------------------------------

std::string HeadingTable::Normalize(std::string_view heading) {
  static const std::regex kNumbering(
      R"(^(?:\d+(?:\.\d+)*[.)]?\s+|\d+(?:\.\d+)*[.)]\s*|[ivxlc]+[.)]\s*|[a-z][.)]\s+))");
  std::string s = textproc::ToLowerAscii(textproc::TrimWhitespace(heading));
  s = std::regex_replace(s, kNumbering, "", std::regex_constants::format_first_only);

  std::string spaced;
  for (char c : s) {
    if (c == '&') {
      spaced += " and ";
    } else {
      spaced += c;
    }
  }
  std::string out;
  bool pending_space = false;
  for (char c : spaced) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  while (!out.empty() && (out.back() == ':' || out.back() == '.' || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

SectionKind HeadingTable::Classify(std::string_view heading) const {
  const auto it = entries_.find(Normalize(heading));
  return it == entries_.end() ? SectionKind::kOther : it->second;
}

HeadingTable HeadingTable::Parse(std::istream& in) {
  HeadingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view entry = textproc::TrimWhitespace(line);
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    const auto kind =
        colon == std::string_view::npos ? std::nullopt : ParseSectionKind(entry.substr(0, colon));
    if (!kind || *kind == SectionKind::kOther) {
      throw Error(ErrorCode::kMalformedRecord,
                  "heading table line " + std::to_string(line_no) + ": expected '<kind>: <phrase>'");
    }
    const std::string phrase = Normalize(entry.substr(colon + 1));
    if (phrase.empty()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "heading table line " + std::to_string(line_no) + ": empty phrase");
    }
    table.entries_[phrase] = *kind;
  }
  return table;
}

HeadingTable HeadingTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open heading table " + path);
  return Parse(in);
}

const HeadingTable& HeadingTable::Default() {
  static const HeadingTable table = [] {
    std::istringstream in{std::string(data::SectionHeadingsText())};
    return Parse(in);
  }();
  return table;
}

SectionKind ClassifySection(std::string_view heading) {
  return HeadingTable::Default().Classify(heading);
}

// --- parsing / writing --------------------------------------------------------

std::vector<Article> ParseArticles(std::istream& in, const HeadingTable& headings,
                                   unsigned threads) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (textproc::TrimWhitespace(line).empty()) continue;
    lines.emplace_back(line_no, std::move(line));
  }

  std::vector<Article> articles(lines.size());
  ParallelFor(lines.size(), threads, [&](std::size_t i) {
    articles[i] = ParseArticleLine(lines[i].second, lines[i].first, headings);
  });

  std::set<std::string_view> seen;
  for (const auto& a : articles) {
    if (!seen.insert(a.id).second) throw Error(ErrorCode::kDuplicateId, a.id);
  }
  return articles;
}

std::vector<Article> LoadArticles(const std::string& path, const HeadingTable& headings,
                                  unsigned threads) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open article file " + path);
  return ParseArticles(in, headings, threads);
}

std::string ArticleToJsonLine(const Article& a) {
  ordered_json obj;
  obj["id"] = a.id;
  obj["title"] = a.title;
  ordered_json sections = ordered_json::array();
  ordered_json kinds = ordered_json::array();
  for (const auto& s : a.sections) {
    ordered_json rec;
    rec["heading"] = s.heading;
    rec["text"] = s.body;
    sections.push_back(std::move(rec));
    kinds.push_back(std::string(SectionKindKey(s.kind)));
  }
  obj["sections"] = std::move(sections);
  obj["section_kinds"] = std::move(kinds);
  ordered_json abs = ordered_json::object();
  for (SectionKind kind : kImradKinds) {
    if (const auto it = a.abstract_sections.find(kind); it != a.abstract_sections.end()) {
      abs[std::string(SectionKindKey(kind))] = it->second;
    }
  }
  obj["abstract"] = std::move(abs);
  obj["keywords"] = a.keywords;
  obj["mesh_terms"] = a.mesh_terms;
  return obj.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void WriteArticles(std::ostream& out, const std::vector<Article>& articles) {
  for (const auto& a : articles) out << ArticleToJsonLine(a) << '\n';
}

// --- filtering ----------------------------------------------------------------

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kEmptyFullText: return "EmptyFullText";
    case RejectReason::kMissingKeywords: return "MissingKeywords";
    case RejectReason::kIncompleteAbstract: return "IncompleteAbstract";
    case RejectReason::kMissingSections: return "MissingSections";
    case RejectReason::kLengthOutlier: return "LengthOutlier";
  }
  return "Unknown";
}

std::optional<RejectReason> StructuralDefect(const Article& a) {
  if (a.full_text_token_count == 0) return RejectReason::kEmptyFullText;
  const bool has_keyword = std::any_of(a.keywords.begin(), a.keywords.end(), [](const auto& k) {
    return !textproc::TrimWhitespace(k).empty();
  });
  if (!has_keyword) return RejectReason::kMissingKeywords;
  for (SectionKind kind : kImradKinds) {
    if (!a.HasAbstractPart(kind)) return RejectReason::kIncompleteAbstract;
  }
  for (SectionKind kind : kImradKinds) {
    if (!a.HasSection(kind)) return RejectReason::kMissingSections;
  }
  return std::nullopt;
}

namespace {

// Exact integer moments: sum = S, var_num = n*sum(x^2) - S^2 = n^2 * variance.
struct Moments {
  std::size_t n = 0;
  unsigned __int128 sum = 0;
  unsigned __int128 var_num = 0;
};

Moments MomentsOf(const std::vector<std::size_t>& lengths) {
  Moments m;
  unsigned __int128 sum_sq = 0;
  for (std::size_t x : lengths) {
    m.sum += x;
    sum_sq += static_cast<unsigned __int128>(x) * x;
  }
  m.n = lengths.size();
  m.var_num = static_cast<unsigned __int128>(m.n) * sum_sq - m.sum * m.sum;
  return m;
}

}  // namespace

FilterResult FilterCorpus(const std::vector<Article>& articles, double sd_multiplier) {
  if (articles.empty()) throw Error(ErrorCode::kEmptyCorpus, "no articles to filter");
  if (!(sd_multiplier > 0.0) || !std::isfinite(sd_multiplier)) {
    throw Error(ErrorCode::kInvalidArgument, "sd multiplier must be a positive finite number");
  }

  FilterResult result;
  std::vector<const Article*> survivors;
  std::vector<std::optional<RejectReason>> verdict(articles.size());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    verdict[i] = StructuralDefect(articles[i]);
  }

  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    if (!verdict[i]) lengths.push_back(articles[i].full_text_token_count);
  }
  if (!lengths.empty()) {
    const Moments m = MomentsOf(lengths);
    const long double k2 = static_cast<long double>(sd_multiplier) * sd_multiplier;
    const long double threshold = k2 * static_cast<long double>(m.var_num);
    // Small integer multipliers (the default 2 among them) compare exactly.
    const bool integral_k = sd_multiplier == std::floor(sd_multiplier) && sd_multiplier <= 1024.0;
    const auto k2_int = static_cast<unsigned __int128>(sd_multiplier) *
                        static_cast<unsigned __int128>(sd_multiplier);
    constexpr unsigned __int128 kHalfRange = ~static_cast<unsigned __int128>(0) >> 1;
    for (std::size_t i = 0; i < articles.size(); ++i) {
      if (verdict[i]) continue;
      // |x - mean| > k*sd  <=>  (n*x - S)^2 > k^2 * var_num
      const __int128 d = static_cast<__int128>(m.n) * articles[i].full_text_token_count -
                         static_cast<__int128>(m.sum);
      const auto dev = static_cast<unsigned __int128>(d < 0 ? -d : d);
      bool outlier;
      if (integral_k && dev <= (std::uint64_t{1} << 63) &&
          (m.var_num == 0 || k2_int <= kHalfRange / m.var_num)) {
        outlier = dev * dev > k2_int * m.var_num;
      } else {
        const long double dev_ld = static_cast<long double>(dev);
        outlier = dev_ld * dev_ld > threshold;
      }
      if (outlier) verdict[i] = RejectReason::kLengthOutlier;
    }
  }

  for (std::size_t i = 0; i < articles.size(); ++i) {
    if (verdict[i]) {
      result.rejected.push_back({articles[i].id, *verdict[i]});
    } else {
      result.kept.push_back(articles[i]);
    }
  }
  return result;
}

void WriteRejections(std::ostream& out, const std::vector<Rejection>& rejected) {
  for (const auto& r : rejected) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["reason"] = std::string(RejectReasonName(r.reason));
    out << obj.dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
  }
}

// --- stats / split --------------------------------------------------------------

CorpusStats ComputeCorpusStats(const std::vector<Article>& articles,
                               const std::vector<std::size_t>& limits) {
  if (articles.empty()) throw Error(ErrorCode::kEmptyCorpus, "no articles for statistics");
  std::vector<std::size_t> lengths;
  lengths.reserve(articles.size());
  for (const auto& a : articles) lengths.push_back(a.full_text_token_count);

  const Moments m = MomentsOf(lengths);
  CorpusStats stats;
  stats.n_articles = m.n;
  const long double n = static_cast<long double>(m.n);
  stats.mean_length = static_cast<double>(static_cast<long double>(m.sum) / n);
  stats.sd_length = static_cast<double>(std::sqrt(static_cast<long double>(m.var_num)) / n);
  for (std::size_t limit : limits) {
    const auto within =
        std::count_if(lengths.begin(), lengths.end(), [&](std::size_t x) { return x <= limit; });
    stats.truncation_coverage[limit] = static_cast<double>(within) / static_cast<double>(m.n);
  }
  return stats;
}

Split SplitCorpus(const std::vector<Article>& articles, const SplitRatios& ratios,
                  std::uint64_t seed) {
  const double r[3] = {ratios.train, ratios.validation, ratios.test};
  for (double x : r) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kBadRatios, "split ratios must be positive");
    }
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error(ErrorCode::kBadRatios, "split ratios must sum to 1");
  }

  std::vector<std::string> ids;
  ids.reserve(articles.size());
  for (const auto& a : articles) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  Rng rng(seed);
  rng.Shuffle(ids);

  // The epsilon keeps products like 20 * 0.15 = 2.9999999999999996 from
  // flooring one short.
  const double n = static_cast<double>(ids.size());
  const auto n_train = static_cast<std::size_t>(std::floor(n * r[0] + 1e-9));
  const auto n_val = std::min(ids.size() - n_train,
                              static_cast<std::size_t>(std::floor(n * r[1] + 1e-9)));

  Split split;
  split.seed = seed;
  const auto b = ids.begin();
  split.train.assign(b, b + static_cast<std::ptrdiff_t>(n_train));
  split.validation.assign(b + static_cast<std::ptrdiff_t>(n_train),
                          b + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(b + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return split;
}

}  // namespace keyprompt::corpus
