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

// Vector kernels behind embedding scoring.
//
// Every variant follows one canonical evaluation order so that results are
// bit-identical across ISAs:
//
//   Dot:  element i is accumulated into double lane (i mod 8), lanes are
//         visited in increasing i, and the lanes are reduced as
//         ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)).
//         The float*float product is exact in double, so fused and unfused
//         multiply-add give the same lane values.
//   Axpy: y[i] = y[i] + alpha*x[i] in float, multiply and add rounded
//         separately (no FMA contraction).
//
// Tests compare each available variant against the scalar one for exact
// equality.

#include <cstddef>
#include <span>
#include <string_view>

namespace keyprompt::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

// Compiled in and supported by the running CPU.
bool IsaAvailable(Isa isa);

// Best available variant, unless overridden with SetIsa or the
// KEYPROMPT_SIMD environment variable (scalar|avx2|neon).
Isa ActiveIsa();

// Throws Error(kInvalidArgument) if the variant is unavailable.
void SetIsa(Isa isa);

// a.size() must equal b.size().
double Dot(std::span<const float> a, std::span<const float> b);
void Axpy(float alpha, std::span<const float> x, std::span<float> y);

namespace scalar {
double Dot(const float* a, const float* b, std::size_t n);
void Axpy(float alpha, const float* x, float* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define KEYPROMPT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double Dot(const float* a, const float* b, std::size_t n);
void Axpy(float alpha, const float* x, float* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define KEYPROMPT_HAVE_NEON_KERNELS 1
namespace neon {
double Dot(const float* a, const float* b, std::size_t n);
void Axpy(float alpha, const float* x, float* y, std::size_t n);
}  // namespace neon
#endif

namespace detail {
// Shared lane reduction; see the ordering note above.
inline double ReduceLanes(const double lanes[8]) {
  return ((lanes[0] + lanes[4]) + (lanes[2] + lanes[6])) +
         ((lanes[1] + lanes[5]) + (lanes[3] + lanes[7]));
}
}  // namespace detail

}  // namespace keyprompt::simd
