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

#if defined(KEYPROMPT_HAVE_NEON_KERNELS)

#include <arm_neon.h>

namespace keyprompt::simd::neon {

double Dot(const float* a, const float* b, std::size_t n) {
  // Four float64x2 accumulators hold lanes {0,1} {2,3} {4,5} {6,7}.
  float64x2_t l01 = vdupq_n_f64(0.0);
  float64x2_t l23 = vdupq_n_f64(0.0);
  float64x2_t l45 = vdupq_n_f64(0.0);
  float64x2_t l67 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float32x4_t a0 = vld1q_f32(a + i);
    const float32x4_t a1 = vld1q_f32(a + i + 4);
    const float32x4_t b0 = vld1q_f32(b + i);
    const float32x4_t b1 = vld1q_f32(b + i + 4);
    l01 = vaddq_f64(l01, vmulq_f64(vcvt_f64_f32(vget_low_f32(a0)), vcvt_f64_f32(vget_low_f32(b0))));
    l23 = vaddq_f64(l23, vmulq_f64(vcvt_high_f64_f32(a0), vcvt_high_f64_f32(b0)));
    l45 = vaddq_f64(l45, vmulq_f64(vcvt_f64_f32(vget_low_f32(a1)), vcvt_f64_f32(vget_low_f32(b1))));
    l67 = vaddq_f64(l67, vmulq_f64(vcvt_high_f64_f32(a1), vcvt_high_f64_f32(b1)));
  }
  double lanes[8];
  vst1q_f64(lanes, l01);
  vst1q_f64(lanes + 2, l23);
  vst1q_f64(lanes + 4, l45);
  vst1q_f64(lanes + 6, l67);
  for (; i < n; ++i) {
    lanes[i % 8] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return detail::ReduceLanes(lanes);
}

void Axpy(float alpha, const float* x, float* y, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t scaled = vmulq_f32(va, vld1q_f32(x + i));
    vst1q_f32(y + i, vaddq_f32(vld1q_f32(y + i), scaled));
  }
  for (; i < n; ++i) {
    const float scaled = alpha * x[i];
    y[i] = y[i] + scaled;
  }
}

}  // namespace keyprompt::simd::neon

#endif
