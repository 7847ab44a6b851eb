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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "scsim/engine.hpp"

namespace scsim {

// Trace files are CSV with "#"-prefixed directives carrying run and user
// metadata, so a directory of per-user files reconstructs a RunTrace without
// side channels. Floating-point fields use 17 significant digits and round
// trip bit-exactly. The schema line is "# scsim-trace v1".

void write_user_trace(std::ostream& os, const RunTrace& run, const UserTrace& user);
UserTrace read_user_trace(std::istream& is, RunTrace& run_meta);

std::string user_trace_filename(int user_id);

// Writes one CSV per user into dir (created if missing). Returns the number
// of files written.
int write_run_traces(const std::filesystem::path& dir, const RunTrace& run);

// Reads every user_*.csv in dir. Slot statistics are not serialized; the
// returned trace has an empty slots vector.
RunTrace read_run_traces(const std::filesystem::path& dir);

// Per-slot allocation dump (CSV): slot, user, demand_bps, allocated_bps,
// theta_star, c_min_star.
class AllocationDumper {
 public:
  explicit AllocationDumper(std::ostream& os);
  void operator()(int slot, const sched::SlotProblem& problem,
                  const sched::Allocation& alloc);

 private:
  std::ostream* os_;
};

}  // namespace scsim
