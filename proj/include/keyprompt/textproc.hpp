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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace keyprompt::textproc {

// Lowercase word tokens. Never empty, never containing whitespace.
using TokenSequence = std::vector<std::string>;

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

// Byte offsets [begin, end) of one token in the source text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Token characters are ASCII letters and digits plus any byte >= 0x80, so
// UTF-8 words stay whole. Everything else separates tokens.
bool IsTokenByte(unsigned char c) noexcept;

TokenSequence Tokenize(std::string_view text);
std::vector<TokenSpan> TokenSpans(std::string_view text);
std::size_t CountTokens(std::string_view text);

// Sentence boundaries: a newline, or '.', '!', '?' followed by whitespace.
// The terminator stays with its sentence; surrounding whitespace is trimmed
// and empty sentences are dropped.
std::vector<std::string> SplitSentences(std::string_view text);

// Throws Error(kBadN) for n < 1.
NGramCounts NGramCountsOf(const TokenSequence& tokens, int n);

// Prefix of `text` ending at the last byte of token number `limit`. The
// original text is returned unchanged when it has at most `limit` tokens.
std::string TruncateTokens(std::string_view text, std::size_t limit);

std::string ToLowerAscii(std::string_view s);
std::string_view TrimWhitespace(std::string_view s);

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::set<std::string> words) : words_(std::move(words)) {}

  // Bundled English list (data/stopwords.txt, compiled in).
  static const StopwordList& Default();

  // One lowercase token per line; '#' starts a comment. An entry that does
  // not tokenize to exactly one token is rejected with kMalformedRecord.
  static StopwordList Parse(std::istream& in);
  static StopwordList Load(const std::string& path);

  bool Contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
  }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

}  // namespace keyprompt::textproc
