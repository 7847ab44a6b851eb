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
#include <string>
#include <vector>

namespace scsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidateOptions {
  std::uint64_t seed = 2026;
  int stable_triples = 50;     // closed-form oracle: stable gain samples
  int violating_triples = 10;  // and samples breaking the stability conditions
  int initial_values = 10;     // deviations per triple
  int finish_pairs = 100;      // segment-finish replay pairs
  int cascade_instances = 200;
  int mc_draws = 100000;       // fading-rate Monte-Carlo sample count
};

// Closed-form buffer solution vs an independent fixed-step RK4 integration
// of the unsaturated loop, plus long-horizon convergence/divergence splits.
CheckResult validate_closed_form(const ValidateOptions& opt);

// predict_finish endpoints vs an independent RK4 of the saturated loop:
// downloading at the constant predicted ratio lands on the continuous
// buffer trajectory.
CheckResult validate_finish_prediction(const ValidateOptions& opt);

// Cascade LP vs a multi-resolution alpha-grid search (final step 1e-3) on
// instances with at most 2 helpers and 3 users.
CheckResult validate_cascade_oracle(const ValidateOptions& opt);

// Pathloss/LOS worked values to 4 significant digits, the expected
// Rayleigh-fading rate constant by quadrature, and the Monte-Carlo estimate
// against it.
CheckResult validate_channel_model(const ValidateOptions& opt);

std::vector<CheckResult> validate_all(const ValidateOptions& opt);

}  // namespace scsim
