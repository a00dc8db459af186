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

#include "keyprompt/report.hpp"

#include <functional>
#include <sstream>

#include "doctest.h"
#include "keyprompt/error.hpp"
#include "keyprompt/random.hpp"
#include "test_support.hpp"

namespace keyprompt::report {
namespace {

using promptgen::Mode;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

CellKey Key(const std::string& technique, const std::string& metric = "rouge1",
            Mode mode = Mode::kSectionsWithAnnotation, const std::string& model = "M") {
  return {model, mode, technique, metric};
}

TEST_CASE("improvement") {
  CHECK(Improvement(0.520, 0.419) == doctest::Approx(0.24105).epsilon(1e-4));
  CHECK(FormatRounded(Improvement(0.520, 0.419)) == "0.241");
  CHECK(FormatRounded(Improvement(0.256, 0.175)) == "0.463");
  CHECK(Improvement(0.256, 0.175) == doctest::Approx(0.4629).epsilon(1e-3));
  CHECK(Improvement(0.3, 0.3) == 0.0);
  CHECK(CodeOf([] { Improvement(0.3, 0.0); }) == ErrorCode::kZeroBaseline);

  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const double a = (static_cast<double>(rng.Below(2000001)) - 1000000.0) / 1000.0;
    double b = (static_cast<double>(rng.Below(2000001)) - 1000000.0) / 1000.0;
    if (b == 0.0) b = 1.0;
    CHECK(Improvement(a, b) + 1.0 == doctest::Approx(a / b).epsilon(1e-12));
    CHECK(Improvement(a, b) == doctest::Approx(-Improvement(2 * b - a, b)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("improvement table") {
  ResultsTable main = {{Key("Fine-Tuning"), 0.419}, {Key("KeyBERT"), 0.520}, {Key("Original"), 0.2},
                       {Key("Original", "rouge2"), 0.1},
                       {Key("Fine-Tuning", "rouge2"), 0.175}, {Key("KeyBERT", "rouge2"), 0.256}};
  const auto table = ImprovementTable(main);
  REQUIRE(table.size() == 2);
  CHECK(table.at(Key("KeyBERT")) == doctest::Approx(0.241).epsilon(1e-3));
  CHECK(table.at(Key("KeyBERT", "rouge2")) == doctest::Approx(0.4629).epsilon(1e-3));

  ResultsTable flat = {{Key("Fine-Tuning"), 0.4}, {Key("TF"), 0.4}, {Key("MeSH"), 0.4}};
  for (const auto& [k, v] : ImprovementTable(flat)) CHECK(v == 0.0);

  ResultsTable orphan = {{Key("TF"), 0.4}};
  CHECK(CodeOf([&] { ImprovementTable(orphan); }) == ErrorCode::kMissingBaseline);
  ResultsTable zero = {{Key("Fine-Tuning"), 0.0}, {Key("TF"), 0.4}};
  CHECK(CodeOf([&] { ImprovementTable(zero); }) == ErrorCode::kZeroBaseline);

  // Another baseline label can be chosen.
  const auto vs_original = ImprovementTable(main, "Original");
  CHECK(vs_original.at(Key("KeyBERT")) == doctest::Approx(1.6));
}

TEST_CASE("confusion comparison") {
  ResultsTable main = {{Key("Fine-Tuning"), 0.419}, {Key("KeyBERT"), 0.520}};
  ResultsTable confused = {{Key("KeyBERT"), 0.371}};
  const auto cmp = ConfusionComparison(confused, main);
  REQUIRE(cmp.size() == 1);
  CHECK(FormatRounded(cmp.at(Key("KeyBERT"))) == "-0.287");
  CHECK(cmp.at(Key("KeyBERT")) == doctest::Approx(-0.2865).epsilon(1e-3));
  CHECK(ConfusionComparison({{Key("KeyBERT"), 0.520}}, main).at(Key("KeyBERT")) == 0.0);
  CHECK(CodeOf([&] { ConfusionComparison({}, main); }) == ErrorCode::kMissingCell);
  CHECK(CodeOf([&] { ConfusionComparison({{Key("KeyBERT"), 0.3}, {Key("TF"), 0.1}}, main); }) ==
        ErrorCode::kMissingCell);
}

TEST_CASE("rounding renders half away from zero") {
  CHECK(FormatRounded(0.2410) == "0.241");
  CHECK(FormatRounded(0.2415) == "0.242");
  CHECK(FormatRounded(-0.2415) == "-0.242");
  CHECK(FormatRounded(0.0005) == "0.001");
  CHECK(FormatRounded(0.0004999) == "0.000");
  CHECK(FormatRounded(-0.0004) == "-0.000");
  CHECK(FormatRounded(0.9995) == "1.000");
  CHECK(FormatRounded(9.9999) == "10.000");
  CHECK(FormatRounded(0.0) == "0.000");
  CHECK(FormatRounded(2.0) == "2.000");
  CHECK(FormatRounded(1e-12) == "0.000");
  CHECK(FormatRounded(123456.78951) == "123456.790");
}

TEST_CASE("emit formats") {
  const ResultsTable one = {{Key("TF"), 0.2410}};
  CHECK(Emit(one, "csv") == "model_tag,mode,technique,metric,value\nM,s-wa,TF,rouge1,0.241\n");
  CHECK(Emit(one, "csv") == Emit(one, "csv"));
  CHECK(Emit(one, "json") ==
        "[\n  {\"model_tag\": \"M\", \"mode\": \"s-wa\", \"technique\": \"TF\", \"metric\": \"rouge1\", "
        "\"value\": 0.241}\n]\n");
  CHECK(Emit({}, "json") == "[]\n");
  const auto md = Emit(one, "markdown");
  CHECK(md.find("### rouge1") != std::string::npos);
  CHECK(md.find("| TF | 0.241 |") != std::string::npos);
  CHECK(md.find("M S-w/a") != std::string::npos);
  CHECK(CodeOf([&] { Emit(one, "xlsx"); }) == ErrorCode::kBadFormat);

  const ResultsTable quoted = {{Key("TF", "rouge1", Mode::kIntroDiscussion, "a,b"), 0.5}};
  CHECK(Emit(quoted, "csv").find("\"a,b\",id,TF") != std::string::npos);
}

TEST_CASE("deterministic ordering") {
  const ResultsTable t = {{Key("TF", "rouge2", Mode::kIntroDiscussion, "B"), 0.1},
                          {Key("KeyBERT", "rouge1", Mode::kSectionsNoAnnotation, "A"), 0.2},
                          {Key("KeyBERT", "rouge1", Mode::kIntroDiscussion, "A"), 0.3}};
  CHECK(Emit(t, "csv") ==
        "model_tag,mode,technique,metric,value\n"
        "A,id,KeyBERT,rouge1,0.300\n"
        "A,s-na,KeyBERT,rouge1,0.200\n"
        "B,id,TF,rouge2,0.100\n");
}

TEST_CASE("interchange file round-trip keeps full precision") {
  ResultsTable t = {{Key("TF"), 0.1 + 0.2}, {Key("Fine-Tuning", "rougeLsum", Mode::kIntroDiscussion), 1.0 / 3.0}};
  std::istringstream in(Emit(t, "jsonl"));
  const auto back = ParseTable(in);
  CHECK(back == t);

  std::istringstream labels(R"({"model_tag": "M", "mode": "I+D", "technique": "TF", "metric": "rouge1", "value": 0.5})");
  CHECK(ParseTable(labels).begin()->first.mode == Mode::kIntroDiscussion);
  std::istringstream dup(std::string(R"({"model_tag": "M", "mode": "id", "technique": "TF", "metric": "rouge1", "value": 0.5})") +
                         "\n" + R"({"model_tag": "M", "mode": "id", "technique": "TF", "metric": "rouge1", "value": 0.6})");
  CHECK(CodeOf([&] { ParseTable(dup); }) == ErrorCode::kMalformedRecord);
  std::istringstream metric(R"({"model_tag": "M", "mode": "id", "technique": "TF", "metric": "bleu", "value": 0.5})");
  CHECK(CodeOf([&] { ParseTable(metric); }) == ErrorCode::kMalformedRecord);
}

TEST_CASE("published fixtures load") {
  const auto main = LoadTable(testing::SourcePath("tests/fixtures/main_results.jsonl"));
  CHECK(main.size() == 315);
  CHECK(LoadTable(testing::SourcePath("tests/fixtures/improvements.jsonl")).size() == 225);
  CHECK(ImprovementTable(main).size() == 225);
  const double v = main.at({"LT5-Base-ETC", Mode::kSectionsWithAnnotation, "KeyBERT", "rouge1"});
  CHECK(v == 0.52);
}

}  // namespace
}  // namespace keyprompt::report
