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

#include <functional>
#include <sstream>

#include "doctest.h"
#include "keyprompt/error.hpp"
#include "keyprompt/random.hpp"
#include "test_support.hpp"

namespace keyprompt::rouge {
namespace {

using textproc::TokenSequence;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

std::string RandomText(Rng& rng, std::size_t vocab, std::size_t max_words) {
  static const char* kWords[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  static const char* kSeps[] = {" ", " ", " ", ". ", "\n", ", "};
  std::string s;
  const auto n = rng.Below(max_words + 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) s += kSeps[rng.Below(6)];
    s += kWords[rng.Below(vocab)];
  }
  return s;
}

TokenSequence RandomSeq(Rng& rng, std::size_t alphabet, std::size_t max_len) {
  TokenSequence s(rng.Below(max_len + 1));
  for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng.Below(alphabet)));
  return s;
}

TEST_CASE("rouge-n hand-counted cases") {
  const auto s = RougeN("the cat sat", "the cat", 1);
  CHECK(std::abs(s.precision - 2.0 / 3.0) < 1e-12);
  CHECK(s.recall == 1.0);
  CHECK(std::abs(s.f - 0.8) < 1e-12);
  const auto b = RougeN("a b c", "a b d", 2);
  CHECK(b.precision == 0.5);
  CHECK(b.recall == 0.5);
  CHECK(b.f == 0.5);
  CHECK(RougeN("same words here", "same words here", 2).f == 1.0);
  CHECK(RougeN("", "anything", 1).f == 0.0);
  CHECK(RougeN("x", "", 1).f == 0.0);
  CHECK(RougeN("one", "one", 2).f == 0.0);  // no bigrams at all
  CHECK(RougeN("a a a", "a", 1).precision == doctest::Approx(1.0 / 3.0));  // clipped counts
  CHECK(CodeOf([] { RougeN("a", "a", 3); }) == ErrorCode::kBadN);
  CHECK(CodeOf([] { RougeN("a", "a", 0); }) == ErrorCode::kBadN);
}

TEST_CASE("rouge-lsum hand-counted cases") {
  const auto s = RougeLsum("a b c d", "b d");
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 1.0);
  CHECK(std::abs(s.f - 2.0 / 3.0) < 1e-12);
  CHECK(RougeLsum("Same text. Two sentences.", "Same text. Two sentences.").f == 1.0);
  CHECK(RougeLsum("alpha beta", "gamma delta").f == 0.0);
  CHECK(RougeLsum("", "").f == 0.0);

  // Union credit: both reference tokens are matched by different candidate
  // sentences.
  const auto u = RougeLsum("a x.\nb y.", "a b.");
  CHECK(u.recall == 1.0);
  CHECK(u.precision == 0.5);

  // A candidate token is credited once even when two reference sentences
  // could use it.
  const auto once = RougeLsum("a", "a.\na.");
  CHECK(once.precision == 1.0);
  CHECK(once.recall == 0.5);
}

TEST_CASE("lcs length") {
  CHECK(LcsLength({"a", "b", "c", "d"}, {"b", "d"}) == 2);
  CHECK(LcsLength({"x", "y"}, {"x", "y"}) == 2);
  CHECK(LcsLength({"x"}, {}) == 0);
  CHECK(LcsLength({}, {}) == 0);
  CHECK(LcsReferencePositions({"a", "b", "c", "d"}, {"b", "d"}) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("bit-parallel lcs matches dynamic programming") {
  Rng rng(404);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t alphabet = 1 + rng.Below(6);
    const std::size_t max_len = trial % 3 == 0 ? 300 : 70;  // crosses 64-bit word boundaries
    const auto a = RandomSeq(rng, alphabet, max_len);
    const auto b = RandomSeq(rng, alphabet, max_len);
    const auto expected = LcsLengthReference(a, b);
    CHECK(LcsLength(a, b) == expected);
    CHECK(LcsLength(b, a) == expected);
    CHECK(LcsReferencePositions(a, b).size() == expected);
  }
}

TEST_CASE("lcs matches exhaustive enumeration on short sequences") {
  Rng rng(405);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto a = RandomSeq(rng, 3, 10);
    const auto b = RandomSeq(rng, 3, 10);
    CHECK(LcsLength(a, b) == testing::ExhaustiveLcs(a, b));
  }
}

TEST_CASE("rouge properties on random pairs") {
  Rng rng(406);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = RandomText(rng, 1 + rng.Below(8), 25);
    const auto b = RandomText(rng, 1 + rng.Below(8), 25);
    for (int n : {1, 2}) {
      const auto ab = RougeN(a, b, n);
      const auto ba = RougeN(b, a, n);
      CHECK(ab.f == ba.f);
      CHECK(ab.precision == ba.recall);
      for (double v : {ab.precision, ab.recall, ab.f}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    const auto l = RougeLsum(a, b);
    for (double v : {l.precision, l.recall, l.f}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // Single-sentence inputs reduce to plain ROUGE-L.
    std::string flat_a = a, flat_b = b;
    for (auto* s : {&flat_a, &flat_b}) {
      for (char& c : *s) {
        if (c == '.' || c == '\n') c = ' ';
      }
    }
    const auto lsum = RougeLsum(flat_a, flat_b);
    const auto plain = RougeL(flat_a, flat_b);
    CHECK(lsum.precision == plain.precision);
    CHECK(lsum.recall == plain.recall);
  }
}

TEST_CASE("corpus scoring") {
  const std::vector<TextRecord> refs = {{"e1", "the cat"}, {"e2", "a b d"}, {"e3", "unused"}};
  const auto one = ScoreCorpus({{"e1", "the cat sat"}}, refs, {"rouge1"});
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0].mean_f - 0.8) < 1e-12);
  const auto two = ScoreCorpus({{"e1", "the cat sat"}, {"e2", "a b c"}}, refs, {"rouge1", "rouge2", "rougeLsum"}, 3);
  REQUIRE(two.size() == 3);
  CHECK(two[0].metric == "rouge1");
  CHECK(two[0].per_example[1].id == "e2");
  CHECK(two[1].mean_f == doctest::Approx((2.0 / 3.0 + 0.5) / 2));  // bigram f: 2/3 and 1/2
  CHECK(CodeOf([&] { ScoreCorpus({{"nope", "x"}}, refs, {"rouge1"}); }) == ErrorCode::kMissingReference);
  CHECK(CodeOf([&] { ScoreCorpus({}, refs, {"rouge1"}); }) == ErrorCode::kEmptySet);
  CHECK(CodeOf([&] { ScoreCorpus({{"e1", "x"}, {"e1", "y"}}, refs, {"rouge1"}); }) == ErrorCode::kDuplicateId);
  CHECK(CodeOf([&] { ScoreCorpus({{"e1", "x"}}, refs, {"rougeW"}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("mean of f values") {
  // f = 0.4 and f = 0.6 built from precision/recall pairs.
  CHECK(MakeScore(0.4, 0.4).f == doctest::Approx(0.4));
  const std::vector<TextRecord> refs = {{"x", "a b c d e"}, {"y", "a b c d e"}};
  // x: 2 of 5 reference unigrams, precision 1 -> f = 2*1*0.4/1.4
  const auto s = ScoreCorpus({{"x", "a b"}, {"y", "a b c"}}, refs, {"rouge1"});
  const double fx = 2 * 0.4 / 1.4, fy = 2 * 0.6 / 1.6;
  CHECK(s[0].mean_f == doctest::Approx((fx + fy) / 2));
}

TEST_CASE("prediction and score files") {
  std::istringstream in("{\"id\": \"a\", \"text\": \"x\"}\n\n{\"id\": \"b\", \"text\": \"y\"}\n");
  const auto recs = ParseTextRecords(in);
  REQUIRE(recs.size() == 2);
  std::ostringstream out;
  WriteTextRecords(out, recs);
  CHECK(out.str() == "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\",\"text\":\"y\"}\n");
  std::istringstream bad("{\"id\": 3, \"text\": \"x\"}\n");
  CHECK(CodeOf([&] { ParseTextRecords(bad); }) == ErrorCode::kMalformedRecord);

  std::ostringstream scores;
  WriteScores(scores, ScoreCorpus(recs, recs, {"rouge1"}));
  CHECK(scores.str().rfind("{\"metric\":\"rouge1\",\"mean_f\":1.0,\"per_example\":[{\"id\":\"a\",", 0) == 0);
}

}  // namespace
}  // namespace keyprompt::rouge
