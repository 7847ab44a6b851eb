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

#include <cstddef>
#include <cstdint>

namespace scsim::kernels {

// Numeric hot loops used by the channel sampler and the LP solver.
// Every kernel has a scalar reference implementation and, on x86-64,
// an AVX2 variant selected at runtime. The two variants are written to
// produce bit-identical results (same polynomial, same accumulation
// order, no FMA contraction), which the unit tests assert exactly.
struct Ops {
  // out[i] = -ln(u_i) with u_i = ((bits[i] >> 11) + 1) * 2^-53, u in (0, 1].
  void (*exp_from_bits)(const std::uint64_t* bits, double* out, std::size_t n);

  // sum_k log2(1 + s*x[k] / (1 + total[k] - s*x[k])).
  // x holds the fading draws of one link, total[k] the power sum over all
  // transmitters for draw k (so total[k] - s*x[k] is the interference).
  double (*rate_sum_shared)(const double* x, const double* total, double s,
                            std::size_t n);

  // sum_k log2(1 + s*x[k] / (1 + isum[k])).
  double (*rate_sum_direct)(const double* x, const double* isum, double s,
                            std::size_t n);

  // y[i] += a * x[i]
  void (*axpy)(double* y, const double* x, double a, std::size_t n);

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  const char* name;
};

enum class SimdMode { kAuto, kScalar, kAvx2 };

// Selects the kernel set. kAuto picks AVX2 when the CPU supports it.
// Returns false if the requested mode is unavailable on this machine.
bool set_simd_mode(SimdMode mode);

const Ops& ops();

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when unsupported or not built

}  // namespace scsim::kernels
