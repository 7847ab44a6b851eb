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

#include "scsim/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scsim {

namespace {

using nlohmann::ordered_json;

// Pulls a key out of `section`, erasing it so leftovers can be reported.
template <typename T>
void take(ordered_json& section, const char* key, T& out) {
  auto it = section.find(key);
  if (it == section.end()) return;
  try {
    out = it->get<T>();
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
  section.erase(it);
}

void expect_empty(const ordered_json& section, const std::string& where) {
  if (section.empty()) return;
  throw ConfigError("config: unknown key '" + section.begin().key() + "' in " + where);
}

ordered_json take_section(ordered_json& root, const char* name) {
  auto it = root.find(name);
  if (it == root.end()) return ordered_json::object();
  if (!it->is_object())
    throw ConfigError(std::string("config: section '") + name + "' must be an object");
  ordered_json section = std::move(*it);
  root.erase(it);
  return section;
}

ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "1") return ExperimentKind::kExp1;
  if (s == "1*") return ExperimentKind::kExp1Star;
  if (s == "2") return ExperimentKind::kExp2;
  if (s == "3") return ExperimentKind::kExp3;
  throw ConfigError("config: experiment must be one of 1, 1*, 2, 3 (got '" + s + "')");
}

PlacementKind placement_from_string(const std::string& s) {
  if (s == "uniform") return PlacementKind::kUniform;
  if (s == "clustered") return PlacementKind::kClustered;
  throw ConfigError("config: placement kind must be uniform or clustered (got '" + s + "')");
}

}  // namespace

SimConfig config_from_json_text(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  SimConfig cfg;

  ordered_json sim = take_section(root, "simulation");
  take(sim, "slot_s", cfg.slot_s);
  take(sim, "area_w_m", cfg.area_w_m);
  take(sim, "area_h_m", cfg.area_h_m);
  take(sim, "helper_rows", cfg.helper_rows);
  take(sim, "helper_cols", cfg.helper_cols);
  take(sim, "seed", cfg.seed);
  take(sim, "trace_stride", cfg.trace_stride);
  take(sim, "audit", cfg.audit);
  expect_empty(sim, "simulation");

  ordered_json ch = take_section(root, "channel");
  take(ch, "f0_ghz", cfg.channel.f0_ghz);
  take(ch, "bandwidth_hz", cfg.channel.bandwidth_hz);
  take(ch, "tx_power", cfg.channel.tx_power);
  take(ch, "c_min_bps", cfg.channel.c_min_bps);
  take(ch, "fading_draws", cfg.channel.fading_draws);
  take(ch, "refresh_period_s", cfg.channel.refresh_period_s);
  take(ch, "sigma2_los_db", cfg.channel.sigma2_los_db);
  take(ch, "sigma2_nlos_db", cfg.channel.sigma2_nlos_db);
  expect_empty(ch, "channel");

  ordered_json ctl = take_section(root, "controller");
  take(ctl, "kp", cfg.gains.kp);
  take(ctl, "ki", cfg.gains.ki);
  take(ctl, "kd", cfg.gains.kd);
  take(ctl, "g_max", cfg.bounds.g_max);
  take(ctl, "g_i_max", cfg.bounds.g_i_max);
  expect_empty(ctl, "controller");

  ordered_json ad = take_section(root, "adaptation");
  take(ad, "alpha", cfg.adaptation.alpha);
  take(ad, "window_s", cfg.adaptation.window_s);
  take(ad, "target_buffer_s", cfg.adaptation.target_buffer_s);
  take(ad, "segment_duration_s", cfg.adaptation.segment_duration_s);
  expect_empty(ad, "adaptation");

  ordered_json media = take_section(root, "media");
  take(media, "n_videos", cfg.n_videos);
  take(media, "video_duration_s", cfg.video_duration_s);
  take(media, "ladder_bps", cfg.ladder_bps);
  take(media, "vbr_sigma", cfg.vbr_sigma);
  expect_empty(media, "media");

  ordered_json pl = take_section(root, "placement");
  {
    std::string kind;
    take(pl, "kind", kind);
    if (!kind.empty()) cfg.placement.kind = placement_from_string(kind);
    take(pl, "lambda", cfg.placement.lambda);
  }
  expect_empty(pl, "placement");

  ordered_json ex = take_section(root, "experiment");
  {
    std::string kind;
    take(ex, "kind", kind);
    int users = cfg.plan.target_users;
    take(ex, "users", users);
    if (!kind.empty())
      cfg.plan = make_plan(experiment_from_string(kind), users);
    else
      cfg.plan.target_users = users;
    take(ex, "arrival_rate_per_s", cfg.plan.arrival_rate_per_s);
    take(ex, "churn_rate_per_s", cfg.plan.churn_rate_per_s);
    take(ex, "post_phase_s", cfg.plan.post_phase_s);
    take(ex, "baseline", cfg.plan.force_baseline);
  }
  expect_empty(ex, "experiment");

  expect_empty(root, "top level");

  if (cfg.slot_s <= 0.0) throw ConfigError("config: slot_s must be positive");
  if (cfg.helper_rows <= 0 || cfg.helper_cols <= 0)
    throw ConfigError("config: helper grid must be nonempty");
  if (cfg.trace_stride <= 0) throw ConfigError("config: trace_stride must be positive");
  return cfg;
}

std::string config_to_json_text(const SimConfig& cfg) {
  ordered_json root;
  root["simulation"] = {{"slot_s", cfg.slot_s},
                        {"area_w_m", cfg.area_w_m},
                        {"area_h_m", cfg.area_h_m},
                        {"helper_rows", cfg.helper_rows},
                        {"helper_cols", cfg.helper_cols},
                        {"seed", cfg.seed},
                        {"trace_stride", cfg.trace_stride},
                        {"audit", cfg.audit}};
  root["channel"] = {{"f0_ghz", cfg.channel.f0_ghz},
                     {"bandwidth_hz", cfg.channel.bandwidth_hz},
                     {"tx_power", cfg.channel.tx_power},
                     {"c_min_bps", cfg.channel.c_min_bps},
                     {"fading_draws", cfg.channel.fading_draws},
                     {"refresh_period_s", cfg.channel.refresh_period_s},
                     {"sigma2_los_db", cfg.channel.sigma2_los_db},
                     {"sigma2_nlos_db", cfg.channel.sigma2_nlos_db}};
  root["controller"] = {{"kp", cfg.gains.kp},
                        {"ki", cfg.gains.ki},
                        {"kd", cfg.gains.kd},
                        {"g_max", cfg.bounds.g_max},
                        {"g_i_max", cfg.bounds.g_i_max}};
  root["adaptation"] = {{"alpha", cfg.adaptation.alpha},
                        {"window_s", cfg.adaptation.window_s},
                        {"target_buffer_s", cfg.adaptation.target_buffer_s},
                        {"segment_duration_s", cfg.adaptation.segment_duration_s}};
  root["media"] = {{"n_videos", cfg.n_videos},
                   {"video_duration_s", cfg.video_duration_s},
                   {"ladder_bps", cfg.ladder_bps},
                   {"vbr_sigma", cfg.vbr_sigma}};
  root["placement"] = {
      {"kind", cfg.placement.kind == PlacementKind::kUniform ? "uniform" : "clustered"},
      {"lambda", cfg.placement.lambda}};
  root["experiment"] = {{"kind", experiment_name(cfg.plan.kind)},
                        {"users", cfg.plan.target_users},
                        {"arrival_rate_per_s", cfg.plan.arrival_rate_per_s},
                        {"churn_rate_per_s", cfg.plan.churn_rate_per_s},
                        {"post_phase_s", cfg.plan.post_phase_s},
                        {"baseline", cfg.plan.force_baseline}};
  return root.dump(2);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_hash(const SimConfig& cfg) {
  const std::string canon = config_to_json_text(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace scsim
