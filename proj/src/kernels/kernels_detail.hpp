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

#pragma once

#include <cstdint>

namespace scsim::kernels::detail {

// Rational approximation of ln(x) on [sqrt(1/2), sqrt(2)], after Cephes.
// Both the scalar and the AVX2 kernels evaluate exactly this scheme so the
// two paths round identically at every step.
inline constexpr double kLogP[6] = {
    1.01875663804580931796e-4, 4.97494994976747001425e-1,
    4.70579119878881725854e0,  1.44989225341610930846e1,
    1.79368678507819816313e1,  7.70838733755885391666e0,
};
inline constexpr double kLogQ[5] = {
    // leading coefficient 1.0 implied
    1.12873587189167450590e1, 4.52279145837532221105e1,
    8.29875266912776603211e1, 7.11544750618563894466e1,
    2.31251620126765340583e1,
};
inline constexpr double kSqrtHalf = 0.70710678118654752440;
inline constexpr double kLn2Lo = 2.121944400546905827679e-4;
inline constexpr double kLn2Hi = 0.693359375;
inline constexpr double kLog2e = 1.4426950408889634074;
// 53 * ln(2); -ln(u * 2^-53) = kLn2x53 - ln(u)
inline constexpr double kLn2x53 = 36.7368005696771013991;

// Mantissa/exponent split: x = m * 2^e with m in [0.5, 1).
// Valid for normal positive doubles, which is all the callers produce.
inline void split_frexp(double x, double& m, double& e) {
  std::uint64_t bits;
  __builtin_memcpy(&bits, &x, 8);
  int ie = static_cast<int>((bits >> 52) & 0x7ff) - 1022;
  bits = (bits & 0x000fffffffffffffULL) | 0x3fe0000000000000ULL;
  __builtin_memcpy(&m, &bits, 8);
  e = static_cast<double>(ie);
}

// ln(x) for normal positive x. Scalar reference path.
inline double log_ref(double x) {
  double m, e;
  split_frexp(x, m, e);
  if (m < kSqrtHalf) {
    e -= 1.0;
    m = m + m - 1.0;
  } else {
    m = m - 1.0;
  }
  double z = m * m;
  double p = kLogP[0];
  for (int i = 1; i < 6; ++i) p = p * m + kLogP[i];
  double q = m + kLogQ[0];
  for (int i = 1; i < 5; ++i) q = q * m + kLogQ[i];
  double y = m * (z * p / q);
  y = y - e * kLn2Lo;
  y = y - 0.5 * z;
  double r = m + y;
  return r + e * kLn2Hi;
}

inline double log2_ref(double x) { return log_ref(x) * kLog2e; }

// Draw mapping shared by both paths: u64 -> (0,1] -> Exp(1). The raw
// difference can round one ulp below zero at the top of the range, so it is
// floored at +0.0 to keep draws in the Exp(1) support.
inline double exp_from_bits_ref(std::uint64_t bits) {
  double v = static_cast<double>((bits >> 11) + 1);  // in [1, 2^53]
  double r = kLn2x53 - log_ref(v);
  return r > 0.0 ? r : 0.0;
}

}  // namespace scsim::kernels::detail
