// Copyright 2026 The scsim Authors
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

// AVX2 kernel variants. Deliberately avoids FMA so every operation rounds
// exactly like the scalar reference; equivalence tests compare bit patterns.

#include "scsim/kernels.hpp"

#include <immintrin.h>

#include "kernels_detail.hpp"

namespace scsim::kernels {
namespace {

using namespace detail;

const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kHalf = _mm256_set1_pd(0.5);

// int in [0, 2^32) packed in the low bits of a 64-bit lane -> double
inline __m256d u32lane_to_pd(__m256i v) {
  const __m256i magic_i = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
  const __m256d magic_d = _mm256_set1_pd(4503599627370496.0);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_i)),
                       magic_d);
}

// ln(x), lane-wise, same scheme as detail::log_ref.
inline __m256d log_pd(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3fe0000000000000LL);
  __m256i bits = _mm256_castpd_si256(x);
  __m256i eb = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                _mm256_set1_epi64x(0x7ff));
  __m256d e = _mm256_sub_pd(u32lane_to_pd(eb), _mm256_set1_pd(1022.0));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  __m256d lt = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrtHalf), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(lt, kOne));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(lt, m)), kOne);

  __m256d z = _mm256_mul_pd(m, m);
  __m256d p = _mm256_set1_pd(kLogP[0]);
  for (int i = 1; i < 6; ++i)
    p = _mm256_add_pd(_mm256_mul_pd(p, m), _mm256_set1_pd(kLogP[i]));
  __m256d q = _mm256_add_pd(m, _mm256_set1_pd(kLogQ[0]));
  for (int i = 1; i < 5; ++i)
    q = _mm256_add_pd(_mm256_mul_pd(q, m), _mm256_set1_pd(kLogQ[i]));

  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_sub_pd(y, _mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo)));
  y = _mm256_sub_pd(y, _mm256_mul_pd(kHalf, z));
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_add_pd(r, _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)));
}

inline __m256d log2_pd(__m256d x) {
  return _mm256_mul_pd(log_pd(x), _mm256_set1_pd(kLog2e));
}

// Matches the (acc0+acc1)+(acc2+acc3) combine of the scalar stripes.
inline double reduce_lanes(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void exp_from_bits_avx2(const std::uint64_t* bits, double* out,
                        std::size_t n) {
  const __m256d ln2x53 = _mm256_set1_pd(kLn2x53);
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits + i));
    __m256i u = _mm256_add_epi64(_mm256_srli_epi64(b, 11),
                                 _mm256_set1_epi64x(1));
    // u <= 2^53: assemble the double from 32-bit halves, exactly.
    __m256i lo = _mm256_and_si256(u, _mm256_set1_epi64x(0xffffffffLL));
    __m256i hi = _mm256_srli_epi64(u, 32);
    __m256d v = _mm256_add_pd(
        _mm256_mul_pd(u32lane_to_pd(hi), _mm256_set1_pd(4294967296.0)),
        u32lane_to_pd(lo));
    __m256d r = _mm256_sub_pd(ln2x53, log_pd(v));
    _mm256_storeu_pd(out + i, _mm256_max_pd(r, _mm256_setzero_pd()));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = exp_from_bits_ref(bits[i]);
}

double rate_sum_shared_avx2(const double* x, const double* total, double s,
                            std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d sx = _mm256_mul_pd(sv, _mm256_loadu_pd(x + i));
    __m256d denom = _mm256_sub_pd(
        _mm256_add_pd(kOne, _mm256_loadu_pd(total + i)), sx);
    __m256d arg = _mm256_add_pd(kOne, _mm256_div_pd(sx, denom));
    acc = _mm256_add_pd(acc, log2_pd(arg));
  }
  double sum = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) {
    double sx = s * x[i];
    double denom = (1.0 + total[i]) - sx;
    sum += log2_ref(1.0 + sx / denom);
  }
  return sum;
}

double rate_sum_direct_avx2(const double* x, const double* isum, double s,
                            std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d sx = _mm256_mul_pd(sv, _mm256_loadu_pd(x + i));
    __m256d denom = _mm256_add_pd(kOne, _mm256_loadu_pd(isum + i));
    __m256d arg = _mm256_add_pd(kOne, _mm256_div_pd(sx, denom));
    acc = _mm256_add_pd(acc, log2_pd(arg));
  }
  double sum = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) {
    double sx = s * x[i];
    sum += log2_ref(1.0 + sx / (1.0 + isum[i]));
  }
  return sum;
}

void axpy_avx2(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    yi = _mm256_add_pd(yi, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, yi);
  }
  for (std::size_t i = n4; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double sum = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {
      exp_from_bits_avx2, rate_sum_shared_avx2, rate_sum_direct_avx2,
      axpy_avx2,          dot_avx2,             "avx2",
  };
  return &ops;
}

}  // namespace scsim::kernels
