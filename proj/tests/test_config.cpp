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

#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "scsim/config.hpp"

using namespace scsim;

TEST_CASE("empty object yields the built-in defaults") {
  SimConfig def;
  SimConfig cfg = config_from_json_text("{}");
  CHECK(config_to_json_text(cfg) == config_to_json_text(def));
  CHECK(config_hash(cfg) == config_hash(def));
}

TEST_CASE("canonical text round trips") {
  SimConfig cfg;
  cfg.seed = 99;
  cfg.gains.kp = -0.07;
  cfg.plan = make_plan(ExperimentKind::kExp2, 25);
  std::string text = config_to_json_text(cfg);
  SimConfig back = config_from_json_text(text);
  CHECK(config_to_json_text(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("sections override individual fields") {
  SimConfig cfg = config_from_json_text(R"({
    "simulation": {"seed": 42, "trace_stride": 10},
    "channel": {"tx_power": 2.5e5},
    "controller": {"kp": -0.1, "g_i_max": 0.2},
    "media": {"ladder_bps": [1e6, 2e6]},
    "placement": {"kind": "clustered"},
    "experiment": {"kind": "2", "users": 30, "baseline": true}
  })");
  CHECK(cfg.seed == 42);
  CHECK(cfg.trace_stride == 10);
  CHECK(cfg.channel.tx_power == 2.5e5);
  CHECK(cfg.gains.kp == -0.1);
  CHECK(cfg.bounds.g_i_max == 0.2);
  CHECK(cfg.ladder_bps == std::vector<double>{1e6, 2e6});
  CHECK(cfg.placement.kind == PlacementKind::kClustered);
  CHECK(cfg.plan.kind == ExperimentKind::kExp2);
  CHECK(cfg.plan.target_users == 30);
  CHECK(cfg.plan.force_baseline);

  // Untouched fields keep their defaults.
  SimConfig def;
  CHECK(cfg.slot_s == def.slot_s);
  CHECK(cfg.gains.ki == def.gains.ki);
}

TEST_CASE("experiment kind derives the plan before overrides apply") {
  SimConfig cfg = config_from_json_text(
      R"({"experiment": {"kind": "3", "post_phase_s": 60.0}})");
  CHECK(cfg.plan.kind == ExperimentKind::kExp3);
  CHECK(cfg.plan.post_phase_s == 60.0);
}

TEST_CASE("unknown keys are rejected with their location") {
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"controller": {"kq": 1}})"),
                       doctest::Contains("'kq'"), ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"typo_section": {}})"),
                       doctest::Contains("typo_section"), ConfigError);
}

TEST_CASE("bad values are rejected") {
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"simulation": {"slot_s": "fast"}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"simulation": {"slot_s": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"simulation": {"trace_stride": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"simulation": 3})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"experiment": {"kind": "4"}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"placement": {"kind": "ring"}})"),
                  ConfigError);
}

TEST_CASE("hash is deterministic and sensitive") {
  SimConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = a.seed + 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("load_config reads files and reports missing ones") {
  auto path = std::filesystem::temp_directory_path() / "scsim_test_config.json";
  {
    std::ofstream os(path);
    os << R"({"simulation": {"seed": 1234}})";
  }
  SimConfig cfg = load_config(path);
  CHECK(cfg.seed == 1234);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}
