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

#include "keyprompt/textproc.hpp"

#include <fstream>
#include <sstream>

#include "embedded_data.hpp"
#include "keyprompt/error.hpp"

namespace keyprompt::textproc {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char LowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

bool IsTokenByte(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

std::vector<TokenSpan> TokenSpans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !IsTokenByte(static_cast<unsigned char>(text[i]))) ++i;
    if (i == n) break;
    const std::size_t begin = i;
    while (i < n && IsTokenByte(static_cast<unsigned char>(text[i]))) ++i;
    spans.push_back({begin, i});
  }
  return spans;
}

TokenSequence Tokenize(std::string_view text) {
  TokenSequence tokens;
  for (const auto& span : TokenSpans(text)) {
    tokens.push_back(ToLowerAscii(text.substr(span.begin, span.end - span.begin)));
  }
  return tokens;
}

std::size_t CountTokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    const bool tok = IsTokenByte(c);
    if (tok && !in_token) ++count;
    in_token = tok;
  }
  return count;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto emit = [&](std::size_t begin, std::size_t end) {
    std::string_view s = TrimWhitespace(text.substr(begin, end - begin));
    if (!s.empty()) sentences.emplace_back(s);
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      emit(start, i);
      start = i + 1;
    } else if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() &&
               IsSpace(static_cast<unsigned char>(text[i + 1]))) {
      emit(start, i + 1);
      start = i + 1;
    }
  }
  emit(start, text.size());
  return sentences;
}

NGramCounts NGramCountsOf(const TokenSequence& tokens, int n) {
  if (n < 1) throw Error(ErrorCode::kBadN, "n-gram order must be >= 1, got " + std::to_string(n));
  NGramCounts counts;
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return counts;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++counts[NGram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + order))];
  }
  return counts;
}

std::string TruncateTokens(std::string_view text, std::size_t limit) {
  if (limit == 0) return {};
  const auto spans = TokenSpans(text);
  if (spans.size() <= limit) return std::string(text);
  return std::string(text.substr(0, spans[limit - 1].end));
}

std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = LowerAscii(c);
  return out;
}

std::string_view TrimWhitespace(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && IsSpace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && IsSpace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

StopwordList StopwordList::Parse(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string entry = ToLowerAscii(TrimWhitespace(line));
    if (entry.empty()) continue;
    const auto tokens = Tokenize(entry);
    if (tokens.size() != 1 || tokens[0] != entry) {
      throw Error(ErrorCode::kMalformedRecord,
                  "stopword line " + std::to_string(line_no) + " is not a single token");
    }
    words.insert(tokens[0]);
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stopword file " + path);
  return Parse(in);
}

const StopwordList& StopwordList::Default() {
  static const StopwordList list = [] {
    std::istringstream in{std::string(data::StopwordsText())};
    return Parse(in);
  }();
  return list;
}

}  // namespace keyprompt::textproc
