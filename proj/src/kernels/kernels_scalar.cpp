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

// Scalar reference kernels. Compiled with -ffp-contract=off; loops are
// striped over four accumulators combined as (s0+s1)+(s2+s3) to mirror the
// AVX2 lane layout, keeping both paths bit-identical.

#include "scsim/kernels.hpp"

#include "kernels_detail.hpp"

namespace scsim::kernels {
namespace {

using namespace detail;

void exp_from_bits_scalar(const std::uint64_t* bits, double* out,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_from_bits_ref(bits[i]);
}

double rate_sum_shared_scalar(const double* x, const double* total, double s,
                              std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int j = 0; j < 4; ++j) {
      double sx = s * x[i + j];
      double denom = (1.0 + total[i + j]) - sx;
      acc[j] += log2_ref(1.0 + sx / denom);
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    double sx = s * x[i];
    double denom = (1.0 + total[i]) - sx;
    sum += log2_ref(1.0 + sx / denom);
  }
  return sum;
}

double rate_sum_direct_scalar(const double* x, const double* isum, double s,
                              std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int j = 0; j < 4; ++j) {
      double sx = s * x[i + j];
      acc[j] += log2_ref(1.0 + sx / (1.0 + isum[i + j]));
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    double sx = s * x[i];
    sum += log2_ref(1.0 + sx / (1.0 + isum[i]));
  }
  return sum;
}

void axpy_scalar(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4)
    for (int j = 0; j < 4; ++j) acc[j] += a[i + j] * b[i + j];
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      exp_from_bits_scalar, rate_sum_shared_scalar, rate_sum_direct_scalar,
      axpy_scalar,          dot_scalar,             "scalar",
  };
  return ops;
}

}  // namespace scsim::kernels
