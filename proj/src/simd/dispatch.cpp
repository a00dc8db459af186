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

#include <atomic>
#include <cstdlib>
#include <string>

#include "keyprompt/error.hpp"
#include "keyprompt/simd/kernels.hpp"

namespace keyprompt::simd {
namespace {

Isa DetectBest() {
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
  return Isa::kNeon;
#endif
  return Isa::kScalar;
}

Isa InitialIsa() {
  if (const char* env = std::getenv("KEYPROMPT_SIMD")) {
    const std::string name(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == IsaName(isa) && IsaAvailable(isa)) return isa;
    }
  }
  return DetectBest();
}

std::atomic<Isa>& Current() {
  static std::atomic<Isa> isa{InitialIsa()};
  return isa;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa ActiveIsa() { return Current().load(std::memory_order_relaxed); }

void SetIsa(Isa isa) {
  if (!IsaAvailable(isa)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SIMD variant " + std::string(IsaName(isa)) + " is not available on this CPU");
  }
  Current().store(isa, std::memory_order_relaxed);
}

double Dot(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dot product of vectors with different dimensions");
  }
  switch (ActiveIsa()) {
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::Dot(a.data(), b.data(), a.size());
#endif
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::Dot(a.data(), b.data(), a.size());
#endif
    default: return scalar::Dot(a.data(), b.data(), a.size());
  }
}

void Axpy(float alpha, std::span<const float> x, std::span<float> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "axpy of vectors with different dimensions");
  }
  switch (ActiveIsa()) {
#if defined(KEYPROMPT_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: avx2::Axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
#if defined(KEYPROMPT_HAVE_NEON_KERNELS)
    case Isa::kNeon: neon::Axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
    default: scalar::Axpy(alpha, x.data(), y.data(), x.size()); return;
  }
}

}  // namespace keyprompt::simd
