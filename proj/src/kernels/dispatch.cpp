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

#include "scsim/kernels.hpp"

namespace scsim::kernels {

#ifndef SCSIM_HAVE_AVX2
const Ops* avx2_ops() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Ops* g_active = nullptr;

const Ops* resolve(SimdMode mode) {
  switch (mode) {
    case SimdMode::kScalar:
      return &scalar_ops();
    case SimdMode::kAvx2:
      return (avx2_ops() && cpu_has_avx2()) ? avx2_ops() : nullptr;
    case SimdMode::kAuto:
    default:
      if (avx2_ops() && cpu_has_avx2()) return avx2_ops();
      return &scalar_ops();
  }
}

}  // namespace

bool set_simd_mode(SimdMode mode) {
  const Ops* next = resolve(mode);
  if (!next) return false;
  g_active = next;
  return true;
}

const Ops& ops() {
  if (!g_active) g_active = resolve(SimdMode::kAuto);
  return *g_active;
}

}  // namespace scsim::kernels
