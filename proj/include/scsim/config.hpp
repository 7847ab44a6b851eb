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
#include <stdexcept>
#include <string>

#include "scsim/engine.hpp"

namespace scsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON schema with nested sections (simulation, channel, controller,
// adaptation, media, placement, experiment). Every key is optional and
// defaults to the built-in SimConfig value; unknown keys are rejected.
SimConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const SimConfig& cfg);

SimConfig load_config(const std::filesystem::path& path);

// FNV-1a over the canonical JSON rendering; stable across runs and
// platforms, embedded in traces and summaries for provenance.
std::string config_hash(const SimConfig& cfg);

}  // namespace scsim
