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

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scsim/config.hpp"
#include "scsim/engine.hpp"
#include "scsim/metrics.hpp"
#include "scsim/traceio.hpp"
#include "scsim/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace scsim;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitRuntime = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string experiment;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool baseline = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out_dir,
                  "Output directory (default $SCSIM_OUT or ./out)");
  cmd->add_option("--experiment", f.experiment,
                  "Experiment kind, rebuilds the run plan")
      ->check(CLI::IsMember({"1", "1*", "2", "3"}));
  cmd->add_option("--seed", f.seed, "Base RNG seed")
      ->each([p = &f](const std::string&) { p->seed_set = true; });
  cmd->add_flag("--baseline", f.baseline,
                "Force the rate-following baseline scheme");
}

ExperimentKind kind_of(const std::string& name) {
  if (name == "1") return ExperimentKind::kExp1;
  if (name == "1*") return ExperimentKind::kExp1Star;
  if (name == "2") return ExperimentKind::kExp2;
  return ExperimentKind::kExp3;
}

// Precedence: config file, then --experiment (rebuilding the plan for the
// requested kind), then the scalar overrides.
SimConfig resolve_config(const CommonFlags& f, int users) {
  SimConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (!f.experiment.empty()) {
    bool fb = cfg.plan.force_baseline;
    cfg.plan = make_plan(kind_of(f.experiment),
                         users > 0 ? users : cfg.plan.target_users);
    cfg.plan.force_baseline = fb;
  } else if (users > 0) {
    cfg.plan.target_users = users;
  }
  if (f.baseline) cfg.plan.force_baseline = true;
  if (f.seed_set) cfg.seed = f.seed;
  return cfg;
}

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SCSIM_OUT"); env && *env) return env;
  return "out";
}

ordered_json metrics_to_json(const MetricsReport& m) {
  return ordered_json{{"max_overshoot_s", m.max_overshoot_s},
                      {"min_buffer_s", m.min_buffer_s},
                      {"mean_buffer_s", m.mean_buffer_s},
                      {"rebuffer_mean_s", m.rebuffer_mean_s},
                      {"rebuffer_max_s", m.rebuffer_max_s},
                      {"prebuffer_mean_s", m.prebuffer_mean_s},
                      {"prebuffer_max_s", m.prebuffer_max_s},
                      {"prebuffer_count", m.prebuffer_count},
                      {"mean_media_rate_bps", m.mean_media_rate_bps},
                      {"fluctuation_fraction", m.fluctuation_fraction},
                      {"fairness_iqr_bps", m.fairness_iqr_bps},
                      {"users_total", m.users_total},
                      {"users_empty_after_trim", m.users_empty_after_trim}};
}

ordered_json stat_to_json(const Stat& s) {
  return ordered_json{
      {"mean", s.mean}, {"max", s.max}, {"p10", s.p10}, {"p90", s.p90}};
}

ordered_json aggregate_to_json(const AggregateSummary& a) {
  return ordered_json{
      {"runs", a.runs},
      {"max_overshoot_s", stat_to_json(a.max_overshoot_s)},
      {"min_buffer_s", stat_to_json(a.min_buffer_s)},
      {"mean_buffer_s", stat_to_json(a.mean_buffer_s)},
      {"rebuffer_mean_s", stat_to_json(a.rebuffer_mean_s)},
      {"rebuffer_max_s", stat_to_json(a.rebuffer_max_s)},
      {"prebuffer_mean_s", stat_to_json(a.prebuffer_mean_s)},
      {"prebuffer_max_s", stat_to_json(a.prebuffer_max_s)},
      {"mean_media_rate_bps", stat_to_json(a.mean_media_rate_bps)},
      {"fluctuation_fraction", stat_to_json(a.fluctuation_fraction)},
      {"fairness_iqr_bps", stat_to_json(a.fairness_iqr_bps)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

// One simulation plus its on-disk artifacts. Per-user traces are skipped for
// sweep points to keep grids light; summary.json is always written.
MetricsReport execute_run(const SimConfig& cfg, const fs::path& dir,
                          bool keep_traces, bool dump_alloc) {
  fs::create_directories(dir);
  Engine eng(cfg);
  std::ofstream alloc_os;
  if (dump_alloc) {
    alloc_os.open(dir / "alloc.csv", std::ios::binary);
    if (!alloc_os) throw std::runtime_error("cannot write alloc.csv");
    eng.set_allocation_observer(AllocationDumper(alloc_os));
  }
  RunTrace trace = eng.run();
  if (keep_traces) write_run_traces(dir, trace);
  MetricsReport rep = compute_metrics(trace, trim_for(trace));
  ordered_json summary{
      {"schema", "scsim-summary v1"},
      {"experiment", experiment_name(trace.kind)},
      {"seed", trace.seed},
      {"config_hash", config_hash(cfg)},
      {"metrics", metrics_to_json(rep)},
      {"config", ordered_json::parse(config_to_json_text(cfg))}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return rep;
}

int cmd_run(const CommonFlags& flags, int users, bool dump_alloc) {
  SimConfig cfg = resolve_config(flags, users);
  fs::path dir = resolve_out(flags.out_dir);
  execute_run(cfg, dir, true, dump_alloc);
  std::fprintf(stderr, "run: wrote %s\n", dir.string().c_str());
  return 0;
}

int cmd_sweep(const CommonFlags& flags, std::vector<int> user_grid, int reps,
              int jobs) {
  SimConfig base_cfg = resolve_config(flags, 0);
  if (user_grid.empty()) user_grid.push_back(base_cfg.plan.target_users);
  if (reps < 1) reps = 1;
  fs::path root = resolve_out(flags.out_dir);
  fs::create_directories(root);

  struct Job {
    int users;
    int rep;
  };
  std::vector<Job> queue;
  for (int users : user_grid)
    for (int rep = 0; rep < reps; ++rep) queue.push_back({users, rep});
  std::vector<MetricsReport> reports(queue.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mu;
  auto worker = [&] {
    while (!failed.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= queue.size()) return;
      const Job& job = queue[i];
      try {
        SimConfig cfg = resolve_config(flags, job.users);
        cfg.seed = base_cfg.seed + static_cast<std::uint64_t>(job.rep);
        char sub[64];
        std::snprintf(sub, sizeof(sub), "u%04d/rep%03d", job.users, job.rep);
        reports[i] = execute_run(cfg, root / sub, false, false);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) first_error = e.what();
        return;
      }
    }
  };
  int n_threads =
      jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min<int>(n_threads, static_cast<int>(queue.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("sweep: " + first_error);

  ordered_json points = ordered_json::array();
  std::string csv = "users,metric,mean,max,p10,p90\n";
  for (std::size_t g = 0; g < user_grid.size(); ++g) {
    std::span<const MetricsReport> slice(
        reports.data() + g * static_cast<std::size_t>(reps),
        static_cast<std::size_t>(reps));
    AggregateSummary agg = aggregate(slice);
    points.push_back(ordered_json{{"users", user_grid[g]},
                                  {"reps", reps},
                                  {"aggregate", aggregate_to_json(agg)}});
    auto row = [&](const char* name, const Stat& s) {
      char line[192];
      std::snprintf(line, sizeof(line), "%d,%s,%.17g,%.17g,%.17g,%.17g\n",
                    user_grid[g], name, s.mean, s.max, s.p10, s.p90);
      csv += line;
    };
    row("max_overshoot_s", agg.max_overshoot_s);
    row("min_buffer_s", agg.min_buffer_s);
    row("mean_buffer_s", agg.mean_buffer_s);
    row("rebuffer_mean_s", agg.rebuffer_mean_s);
    row("rebuffer_max_s", agg.rebuffer_max_s);
    row("prebuffer_mean_s", agg.prebuffer_mean_s);
    row("prebuffer_max_s", agg.prebuffer_max_s);
    row("mean_media_rate_bps", agg.mean_media_rate_bps);
    row("fluctuation_fraction", agg.fluctuation_fraction);
    row("fairness_iqr_bps", agg.fairness_iqr_bps);
  }
  ordered_json summary{{"schema", "scsim-sweep v1"},
                       {"base_seed", base_cfg.seed},
                       {"reps", reps},
                       {"config_hash", config_hash(base_cfg)},
                       {"points", points}};
  write_text(root / "sweep_summary.json", summary.dump(2) + "\n");
  write_text(root / "sweep_metrics.csv", csv);
  std::fprintf(stderr, "sweep: %zu runs -> %s\n", queue.size(),
               root.string().c_str());
  return 0;
}

int cmd_metrics(const std::string& in_dir, const std::string& out_file) {
  RunTrace run = read_run_traces(in_dir);
  MetricsReport rep = compute_metrics(run, trim_for(run));
  ordered_json doc{{"schema", "scsim-metrics v1"},
                   {"experiment", experiment_name(run.kind)},
                   {"seed", run.seed},
                   {"metrics", metrics_to_json(rep)}};
  std::string text = doc.dump(2) + "\n";
  if (out_file.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text(out_file, text);
  return 0;
}

int cmd_validate(std::uint64_t seed, int instances) {
  ValidateOptions opt;
  opt.seed = seed;
  if (instances > 0) opt.cascade_instances = instances;
  bool all_pass = true;
  for (const CheckResult& r : validate_all(opt)) {
    std::printf("[%s] %-28s %6.2fs  %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic small-cell adaptive-streaming simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  int run_users = 0;
  bool dump_alloc = false;
  CLI::App* run =
      app.add_subcommand("run", "Simulate one run and write traces");
  add_common_flags(run, run_flags);
  run->add_option("--users", run_users, "Target user count");
  run->add_flag("--dump-alloc", dump_alloc,
                "Also write per-slot allocations to alloc.csv");

  CommonFlags sweep_flags;
  std::vector<int> sweep_users;
  int reps = 1;
  int jobs = 0;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a user-count grid with several seeds per point");
  add_common_flags(sweep, sweep_flags);
  sweep->add_option("--users", sweep_users,
                    "Target user counts forming the grid (repeatable)");
  sweep->add_option("--reps", reps, "Repetitions per point, seeds base+rep");
  sweep->add_option("--jobs", jobs, "Worker threads (default: hardware)");

  std::string metrics_in, metrics_out;
  CLI::App* metrics =
      app.add_subcommand("metrics", "Recompute metrics from stored traces");
  metrics->add_option("--in", metrics_in, "Directory holding user_*.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  metrics->add_option("--out", metrics_out,
                      "Write the report here instead of stdout");

  std::uint64_t validate_seed = ValidateOptions{}.seed;
  int validate_instances = 0;
  CLI::App* validate =
      app.add_subcommand("validate", "Run the numerical validation suites");
  validate->add_option("--seed", validate_seed, "Validation RNG seed");
  validate->add_option("--instances", validate_instances,
                       "Cascade oracle instance count override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags, run_users, dump_alloc);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_users, reps, jobs);
    if (metrics->parsed()) return cmd_metrics(metrics_in, metrics_out);
    if (validate->parsed())
      return cmd_validate(validate_seed, validate_instances);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "scsim: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const sched::SolverFailure& e) {
    std::fprintf(stderr, "scsim: solver failure: %s\n%s", e.what(),
                 e.lp_text().c_str());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "scsim: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
