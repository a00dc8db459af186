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

#include <cmath>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "keyprompt/error.hpp"
#include "keyprompt/simd/kernels.hpp"
#include "test_support.hpp"

namespace keyprompt::keyterms {
namespace {

using corpus::SectionKind;
using testing::MakeArticle;

const textproc::StopwordList kNoStopwords;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

// One axis per vocabulary word, so a text embeds to its scaled count vector.
class OneHotProvider : public EmbeddingProvider {
 public:
  explicit OneHotProvider(std::vector<std::string> vocab, float scale = 1.0f)
      : vocab_(std::move(vocab)), scale_(scale) {}
  std::size_t dimension() const override { return vocab_.size(); }
  std::vector<float> Embed(std::string_view text) const override {
    std::vector<float> v(vocab_.size(), 0.0f);
    for (const auto& t : textproc::Tokenize(text)) {
      const auto it = std::find(vocab_.begin(), vocab_.end(), t);
      if (it != vocab_.end()) v[static_cast<std::size_t>(it - vocab_.begin())] += scale_;
    }
    return v;
  }

 private:
  std::vector<std::string> vocab_;
  float scale_;
};

class ZeroProvider : public EmbeddingProvider {
 public:
  std::size_t dimension() const override { return 4; }
  std::vector<float> Embed(std::string_view) const override { return std::vector<float>(4, 0.0f); }
};

class ThrowingProvider : public EmbeddingProvider {
 public:
  std::size_t dimension() const override { return 4; }
  std::vector<float> Embed(std::string_view) const override { throw std::runtime_error("offline"); }
};

TEST_CASE("technique names") {
  for (auto t : kAllTechniques) {
    CHECK(ParseTechnique(TechniqueKey(t)) == t);
    CHECK(ParseTechnique(TechniqueLabel(t)) == t);
  }
  CHECK(ParseTechnique("TF-IDF") == Technique::kTfIdf);
  CHECK_FALSE(ParseTechnique("rake").has_value());
}

TEST_CASE("keywords and mesh passthrough") {
  auto a = MakeArticle("a", {{SectionKind::kIntroduction, "x"}}, {"cancer", "p53"});
  CHECK(ExtractKeywords(a).terms == std::vector<std::string>{"cancer", "p53"});
  a.keywords = {"X", "x", "a|b", "  spaced   out ", "|"};
  CHECK(ExtractKeywords(a).terms == std::vector<std::string>{"X", "ab", "spaced out"});
  a.keywords = {};
  CHECK(CodeOf([&] { ExtractKeywords(a); }) == ErrorCode::kNoTermsAvailable);

  a.mesh_terms = {"Neoplasms", "Apoptosis"};
  CHECK(ExtractMesh(a).terms == std::vector<std::string>{"Neoplasms", "Apoptosis"});
  a.mesh_terms = {"A", "A"};
  CHECK(ExtractMesh(a).terms == std::vector<std::string>{"A"});
  a.mesh_terms = {"A", "a"};
  CHECK(ExtractMesh(a).terms.size() == 2);
  a.mesh_terms = {};
  CHECK(CodeOf([&] { ExtractMesh(a); }) == ErrorCode::kNoTermsAvailable);
}

TEST_CASE("term frequency") {
  const auto a = MakeArticle("a", {{SectionKind::kIntroduction, "alpha alpha beta gamma gamma gamma"}});
  const auto tf = ExtractTf(a, 2, kNoStopwords);
  CHECK(tf.terms == std::vector<std::string>{"gamma", "alpha"});
  CHECK(CheckInvariants(tf).empty());
  CHECK(ExtractTf(a, 50, kNoStopwords).terms == std::vector<std::string>{"gamma", "alpha", "beta"});

  const auto ties = MakeArticle("t", {{SectionKind::kMethods, "delta beta alpha"}});
  CHECK(ExtractTf(ties, 3, kNoStopwords).terms == std::vector<std::string>{"alpha", "beta", "delta"});

  const auto noise = MakeArticle("n", {{SectionKind::kMethods, "the a of x y"}});
  CHECK(CodeOf([&] { ExtractTf(noise, 3, textproc::StopwordList::Default()); }) ==
        ErrorCode::kNoTermsAvailable);
  CHECK(CodeOf([&] { ExtractTf(a, 0, kNoStopwords); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("tf-idf worked example") {
  // Two-letter tokens stand in for x, y, z: single letters are not eligible.
  const auto a = MakeArticle("a", {{SectionKind::kIntroduction, "xx xx yy"}, {SectionKind::kMethods, "yy zz zz"}});
  const auto out = ExtractTfIdf(a, SectionKind::kIntroduction, 2, kNoStopwords);
  REQUIRE(out.terms == std::vector<std::string>{"xx", "yy"});
  CHECK((*out.scores)[0] == doctest::Approx(2.0 / 3.0 * (std::log(1.5) + 1.0)));
  CHECK((*out.scores)[0] == doctest::Approx(0.9370).epsilon(1e-4));
  CHECK((*out.scores)[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("tf-idf prefers section-unique terms") {
  const auto a = MakeArticle("a", {{SectionKind::kIntroduction, "common unique"},
                                   {SectionKind::kMethods, "common other"},
                                   {SectionKind::kResults, "common more"}});
  CHECK(ExtractTfIdf(a, SectionKind::kIntroduction, 1, kNoStopwords).terms ==
        std::vector<std::string>{"unique"});
}

TEST_CASE("tf-idf errors") {
  const auto one = MakeArticle("a", {{SectionKind::kIntroduction, "alpha beta"}});
  CHECK(CodeOf([&] { ExtractTfIdf(one, SectionKind::kMethods, 3, kNoStopwords); }) ==
        ErrorCode::kMissingSection);
  CHECK(CodeOf([&] { ExtractTfIdf(one, SectionKind::kIntroduction, 3, kNoStopwords); }) ==
        ErrorCode::kMissingSection);
  const auto stop = MakeArticle("s", {{SectionKind::kIntroduction, "the of"}, {SectionKind::kMethods, "alpha"}});
  CHECK(CodeOf([&] { ExtractTfIdf(stop, SectionKind::kIntroduction, 3, textproc::StopwordList::Default()); }) ==
        ErrorCode::kNoTermsAvailable);
}

TEST_CASE("tf and tf-idf match the brute-force oracle") {
  Rng rng(2024);
  const auto& sw = textproc::StopwordList::Default();
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::RandomArticle(rng, "r" + std::to_string(trial));
    const std::size_t n = 1 + rng.Below(12);
    const auto oracle_tf = testing::OracleTf(a, n, sw);
    if (oracle_tf.error) {
      CHECK(CodeOf([&] { ExtractTf(a, n, sw); }) == *oracle_tf.error);
    } else {
      CHECK(ExtractTf(a, n, sw).terms == oracle_tf.terms);
    }
    for (auto kind : corpus::kImradKinds) {
      const auto oracle = testing::OracleTfIdf(a, {kind}, n, sw);
      if (oracle.error) {
        CHECK(CodeOf([&] { ExtractTfIdf(a, kind, n, sw); }) == *oracle.error);
      } else {
        const auto got = ExtractTfIdf(a, kind, n, sw);
        CHECK(got.terms == oracle.terms);
        CHECK(CheckInvariants(got).empty());
      }
    }
  }
}

TEST_CASE("embedding extraction picks the dominant unigram") {
  const std::string text = "tumor tumor tumor growth growth signal";
  OneHotProvider provider({"tumor", "growth", "signal"});
  const auto out = ExtractEmbeddingTerms(text, provider, {1, 1}, 3, kNoStopwords);
  CHECK(out.terms == std::vector<std::string>{"tumor", "growth", "signal"});
  CHECK(CheckInvariants(out).empty());

  // Brute-force cosine for every candidate.
  const double doc[3] = {3, 2, 1};
  const double norm = std::sqrt(14.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK((*out.scores)[i] == doctest::Approx(doc[i] / norm));

  // Cosine ranking ignores vector scale.
  OneHotProvider scaled({"tumor", "growth", "signal"}, 7.5f);
  CHECK(ExtractEmbeddingTerms(text, scaled, {1, 1}, 3, kNoStopwords).terms == out.terms);
}

TEST_CASE("embedding candidates and errors") {
  OneHotProvider provider({"lung", "cancer", "the"});
  const auto grams =
      ExtractEmbeddingTerms("the lung cancer", provider, {1, 3}, 10, textproc::StopwordList::Default());
  // Phrases starting or ending with a stopword are not candidates.
  CHECK(std::find(grams.terms.begin(), grams.terms.end(), "lung cancer") != grams.terms.end());
  CHECK(std::find(grams.terms.begin(), grams.terms.end(), "the lung") == grams.terms.end());
  CHECK(std::find(grams.terms.begin(), grams.terms.end(), "the") == grams.terms.end());

  CHECK(ExtractEmbeddingTerms("the tumor", OneHotProvider({"tumor"}), {1, 1}, 5,
                              textproc::StopwordList::Default())
            .terms == std::vector<std::string>{"tumor"});

  ZeroProvider zero;
  CHECK(CodeOf([&] { ExtractEmbeddingTerms("alpha beta", zero, {1, 1}, 3, kNoStopwords); }) ==
        ErrorCode::kNoTermsAvailable);
  ThrowingProvider broken;
  CHECK(CodeOf([&] { ExtractEmbeddingTerms("alpha beta", broken, {1, 1}, 3, kNoStopwords); }) ==
        ErrorCode::kProviderFailure);
  CHECK(CodeOf([&] { ExtractEmbeddingTerms("alpha", provider, {2, 1}, 3, kNoStopwords); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { ExtractEmbeddingTerms("alpha", provider, {1, 4}, 3, kNoStopwords); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { ExtractEmbeddingTerms("the of", provider, {1, 1}, 3, textproc::StopwordList::Default()); }) ==
        ErrorCode::kNoTermsAvailable);
}

TEST_CASE("hashed provider is deterministic and additive") {
  HashedBagOfWordsProvider p(64, 3);
  CHECK(p.Embed("alpha beta") == p.Embed("alpha beta"));
  CHECK(p.Embed("Alpha, beta!") == p.Embed("alpha beta"));
  const auto a = p.TokenVector("alpha");
  const auto b = p.TokenVector("beta");
  const auto ab = p.Embed("alpha beta");
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(ab[i] == (0.0f + a[i]) + b[i]);
    CHECK(a[i] >= -1.0f);
    CHECK(a[i] < 1.0f);
  }
  CHECK(HashedBagOfWordsProvider(64, 4).TokenVector("alpha") != a);
  CHECK(p.Embed("").size() == 64);

  const auto out = ExtractEmbeddingTerms("kidney kidney renal failure", p, {1, 2}, 4, kNoStopwords);
  CHECK(CheckInvariants(out).empty());
  CHECK(out.terms == ExtractEmbeddingTerms("kidney kidney renal failure", p, {1, 2}, 4, kNoStopwords).terms);
}

TEST_CASE("file provider") {
  std::istringstream in(R"({"text": "a", "vector": [1, 0]})" "\n" R"({"text": "a b", "vector": [0.5, 0.5]})" "\n");
  const auto p = FileEmbeddingProvider::Parse(in);
  CHECK(p.dimension() == 2);
  CHECK(p.Embed("a") == std::vector<float>{1.0f, 0.0f});
  CHECK(CodeOf([&] { p.Embed("zzz"); }) == ErrorCode::kProviderFailure);
  std::istringstream ragged(R"({"text": "a", "vector": [1, 0]})" "\n" R"({"text": "b", "vector": [1]})" "\n");
  CHECK(CodeOf([&] { FileEmbeddingProvider::Parse(ragged); }) == ErrorCode::kMalformedRecord);
}

TEST_CASE("embedder specs") {
  CHECK(MakeEmbeddingProvider("hash")->dimension() == 256);
  CHECK(MakeEmbeddingProvider("hash:32")->dimension() == 32);
  CHECK(MakeEmbeddingProvider("hash:32:9")->Embed("x") == HashedBagOfWordsProvider(32, 9).Embed("x"));
  CHECK(CodeOf([] { MakeEmbeddingProvider("hash:0"); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { MakeEmbeddingProvider("bert"); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { MakeEmbeddingProvider("file:/nonexistent/x.jsonl"); }) == ErrorCode::kIo);
}

TEST_CASE("invariant checker") {
  KeyTermList list{Technique::kTf, {"b", "a"}, std::vector<double>{1.0, 1.0}};
  CHECK_FALSE(CheckInvariants(list).empty());
  list.terms = {"a", "b"};
  CHECK(CheckInvariants(list).empty());
  list.terms = {"a", "a"};
  CHECK_FALSE(CheckInvariants(list).empty());
  list = {Technique::kKeywords, {"x|y"}, std::nullopt};
  CHECK_FALSE(CheckInvariants(list).empty());
}

}  // namespace
}  // namespace keyprompt::keyterms
