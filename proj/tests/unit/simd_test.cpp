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

#include "keyprompt/simd/kernels.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "keyprompt/embedding.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/keyterms.hpp"
#include "keyprompt/random.hpp"

namespace keyprompt::simd {
namespace {

std::vector<float> RandomFloats(Rng& rng, std::size_t n) {
  std::vector<float> v(n);
  for (auto& x : v) {
    // Mix magnitudes so rounding actually happens in the accumulations.
    const double mag = std::ldexp(1.0, static_cast<int>(rng.Below(40)) - 20);
    x = static_cast<float>((static_cast<double>(rng.Below(1u << 24)) / (1u << 23) - 1.0) * mag);
  }
  return v;
}

bool SameBits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<Isa> VectorIsas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (IsaAvailable(isa)) out.push_back(isa);
  }
  return out;
}

double DotWith(Isa isa, const std::vector<float>& a, const std::vector<float>& b, std::size_t off, std::size_t n) {
  switch (isa) {
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::Dot(a.data() + off, b.data() + off, n);
#endif
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::Dot(a.data() + off, b.data() + off, n);
#endif
    default: return scalar::Dot(a.data() + off, b.data() + off, n);
  }
}

void AxpyWith(Isa isa, float alpha, const float* x, float* y, std::size_t n) {
  switch (isa) {
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: avx2::Axpy(alpha, x, y, n); return;
#endif
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
    case Isa::kNeon: neon::Axpy(alpha, x, y, n); return;
#endif
    default: scalar::Axpy(alpha, x, y, n);
  }
}

TEST_CASE("scalar dot follows the canonical lane order") {
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 64u, 100u}) {
    const auto a = RandomFloats(rng, n);
    const auto b = RandomFloats(rng, n);
    double lanes[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) lanes[i % 8] += static_cast<double>(a[i]) * b[i];
    const double expected = ((lanes[0] + lanes[4]) + (lanes[2] + lanes[6])) +
                            ((lanes[1] + lanes[5]) + (lanes[3] + lanes[7]));
    CHECK(SameBits(scalar::Dot(a.data(), b.data(), n), expected));
  }
}

TEST_CASE("vector dot is bit-identical to scalar") {
  Rng rng(2);
  for (Isa isa : VectorIsas()) {
    CAPTURE(IsaName(isa));
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = rng.Below(300);
      const std::size_t off = rng.Below(8);
      const auto a = RandomFloats(rng, n + off);
      const auto b = RandomFloats(rng, n + off);
      CHECK(SameBits(DotWith(isa, a, b, off, n), DotWith(Isa::kScalar, a, b, off, n)));
    }
  }
}

TEST_CASE("vector axpy is bit-identical to scalar") {
  Rng rng(3);
  for (Isa isa : VectorIsas()) {
    CAPTURE(IsaName(isa));
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = rng.Below(300);
      const std::size_t off = rng.Below(8);
      const auto x = RandomFloats(rng, n + off);
      auto y1 = RandomFloats(rng, n + off);
      auto y2 = y1;
      const float alpha = RandomFloats(rng, 1)[0];
      AxpyWith(isa, alpha, x.data() + off, y1.data() + off, n);
      AxpyWith(Isa::kScalar, alpha, x.data() + off, y2.data() + off, n);
      CHECK(std::memcmp(y1.data(), y2.data(), y1.size() * sizeof(float)) == 0);
    }
  }
}

TEST_CASE("dispatch selection") {
  CHECK(IsaAvailable(Isa::kScalar));
  const Isa original = ActiveIsa();
  const std::vector<float> a = {1, 2, 3}, b = {4, 5, 6};
  SetIsa(Isa::kScalar);
  CHECK(ActiveIsa() == Isa::kScalar);
  CHECK(Dot(a, b) == 32.0);
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (IsaAvailable(isa)) {
      SetIsa(isa);
      CHECK(Dot(a, b) == 32.0);
    } else {
      CHECK_THROWS_AS(SetIsa(isa), Error);
    }
  }
  SetIsa(original);
  CHECK_THROWS_AS(Dot(a, std::vector<float>{1}), Error);
  std::vector<float> y = {1, 1, 1};
  Axpy(2.0f, a, y);
  CHECK(y == std::vector<float>{3, 5, 7});
}

TEST_CASE("embedding extraction is identical under every variant") {
  const Isa original = ActiveIsa();
  keyterms::HashedBagOfWordsProvider provider(96, 5);
  const std::string text =
      "Renal function declined in the treated cohort while serum markers of kidney injury rose "
      "sharply. Dialysis was required for renal failure in a minority of the cohort.";
  SetIsa(Isa::kScalar);
  const auto reference =
      keyterms::ExtractEmbeddingTerms(text, provider, {1, 2}, 8, textproc::StopwordList::Default());
  for (Isa isa : VectorIsas()) {
    SetIsa(isa);
    const auto got =
        keyterms::ExtractEmbeddingTerms(text, provider, {1, 2}, 8, textproc::StopwordList::Default());
    CHECK(got.terms == reference.terms);
    CHECK(*got.scores == *reference.scores);
  }
  SetIsa(original);
}

}  // namespace
}  // namespace keyprompt::simd
