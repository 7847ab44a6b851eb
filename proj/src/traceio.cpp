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

#include "scsim/traceio.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace scsim {

namespace {

constexpr const char* kSchema = "# scsim-trace v1";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("trace: bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::istringstream is(body);
  std::string tok;
  while (is >> tok) {
    std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("trace: bad directive token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "1") return ExperimentKind::kExp1;
  if (name == "1*") return ExperimentKind::kExp1Star;
  if (name == "2") return ExperimentKind::kExp2;
  if (name == "3") return ExperimentKind::kExp3;
  throw std::runtime_error("trace: unknown experiment '" + name + "'");
}

Phase phase_from_name(const std::string& name) {
  if (name == "prebuffering") return Phase::kPrebuffering;
  if (name == "playing") return Phase::kPlaying;
  if (name == "rebuffering") return Phase::kRebuffering;
  if (name == "request_delay") return Phase::kRequestDelay;
  throw std::runtime_error("trace: unknown phase '" + name + "'");
}

ClientEventType event_from_name(const std::string& name) {
  if (name == "startup") return ClientEventType::kStartupComplete;
  if (name == "underrun") return ClientEventType::kUnderrun;
  if (name == "resume") return ClientEventType::kResume;
  if (name == "request") return ClientEventType::kRequest;
  if (name == "play") return ClientEventType::kPlayStart;
  throw std::runtime_error("trace: unknown event '" + name + "'");
}

}  // namespace

void write_user_trace(std::ostream& os, const RunTrace& run, const UserTrace& user) {
  os << kSchema << '\n';
  os << "# run experiment=" << experiment_name(run.kind) << " seed=" << run.seed
     << " slot_s=" << fmt(run.slot_s)
     << " target_buffer_s=" << fmt(run.target_buffer_s)
     << " arrival_phase_end_s=" << fmt(run.arrival_phase_end_s)
     << " duration_s=" << fmt(run.duration_s) << '\n';
  os << "# user id=" << user.user_id << " video=" << user.video
     << " arrival_s=" << fmt(user.arrival_s)
     << " depart_s=" << fmt(user.depart_s) << '\n';
  os << "# columns t,phase,buffer_s,representation_bps,throughput_bps,demand_bps\n";
  for (const TraceRow& r : user.rows) {
    os << fmt(r.t) << ',' << phase_name(r.phase) << ',' << fmt(r.buffer_s) << ','
       << fmt(r.representation_bps) << ',' << fmt(r.throughput_bps) << ','
       << fmt(r.demand_bps) << '\n';
  }
  os << "# events t,type,value\n";
  for (const ClientEvent& e : user.events)
    os << fmt(e.t) << ',' << event_name(e.type) << ',' << fmt(e.value) << '\n';
}

UserTrace read_user_trace(std::istream& is, RunTrace& run_meta) {
  UserTrace user;
  std::string line;
  if (!std::getline(is, line) || line != kSchema)
    throw std::runtime_error("trace: missing schema line");
  enum { kHead, kRows, kEvents } section = kHead;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::istringstream hdr(body);
      std::string tag;
      hdr >> tag;
      std::string rest;
      std::getline(hdr, rest);
      if (tag == "run") {
        auto kv = parse_kv(rest);
        run_meta.kind = experiment_from_name(kv.at("experiment"));
        run_meta.seed = std::stoull(kv.at("seed"));
        run_meta.slot_s = parse_double(kv.at("slot_s"));
        run_meta.target_buffer_s = parse_double(kv.at("target_buffer_s"));
        run_meta.arrival_phase_end_s = parse_double(kv.at("arrival_phase_end_s"));
        run_meta.duration_s = parse_double(kv.at("duration_s"));
      } else if (tag == "user") {
        auto kv = parse_kv(rest);
        user.user_id = std::stoi(kv.at("id"));
        user.video = std::stoi(kv.at("video"));
        user.arrival_s = parse_double(kv.at("arrival_s"));
        user.depart_s = parse_double(kv.at("depart_s"));
      } else if (tag == "columns") {
        section = kRows;
      } else if (tag == "events") {
        section = kEvents;
      } else {
        throw std::runtime_error("trace: unknown directive '" + tag + "'");
      }
      continue;
    }
    auto f = split(line, ',');
    if (section == kRows) {
      if (f.size() != 6) throw std::runtime_error("trace: bad row '" + line + "'");
      TraceRow r;
      r.t = parse_double(f[0]);
      r.phase = phase_from_name(f[1]);
      r.buffer_s = parse_double(f[2]);
      r.representation_bps = parse_double(f[3]);
      r.throughput_bps = parse_double(f[4]);
      r.demand_bps = parse_double(f[5]);
      user.rows.push_back(r);
    } else if (section == kEvents) {
      if (f.size() != 3) throw std::runtime_error("trace: bad event '" + line + "'");
      ClientEvent e;
      e.t = parse_double(f[0]);
      e.type = event_from_name(f[1]);
      e.value = parse_double(f[2]);
      user.events.push_back(e);
    } else {
      throw std::runtime_error("trace: data before column directive");
    }
  }
  return user;
}

std::string user_trace_filename(int user_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "user_%05d.csv", user_id);
  return buf;
}

int write_run_traces(const std::filesystem::path& dir, const RunTrace& run) {
  std::filesystem::create_directories(dir);
  for (const UserTrace& u : run.users) {
    std::ofstream os(dir / user_trace_filename(u.user_id), std::ios::binary);
    if (!os) throw std::runtime_error("trace: cannot write into " + dir.string());
    write_user_trace(os, run, u);
  }
  return static_cast<int>(run.users.size());
}

RunTrace read_run_traces(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("user_", 0) == 0 && name.size() > 4 &&
        name.compare(name.size() - 4, 4, ".csv") == 0)
      files.push_back(entry.path());
  }
  if (files.empty())
    throw std::runtime_error("trace: no user_*.csv files in " + dir.string());
  std::sort(files.begin(), files.end());
  RunTrace run;
  for (const auto& path : files) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("trace: cannot read " + path.string());
    run.users.push_back(read_user_trace(is, run));
  }
  std::sort(run.users.begin(), run.users.end(),
            [](const UserTrace& a, const UserTrace& b) { return a.user_id < b.user_id; });
  return run;
}

AllocationDumper::AllocationDumper(std::ostream& os) : os_(&os) {
  *os_ << "slot,user,demand_bps,allocated_bps,theta_star,c_min_star\n";
}

void AllocationDumper::operator()(int slot, const sched::SlotProblem& problem,
                                  const sched::Allocation& alloc) {
  for (std::size_t u = 0; u < problem.num_users(); ++u) {
    *os_ << slot << ',' << problem.user_ids[u] << ',' << fmt(problem.demands[u])
         << ',' << fmt(alloc.throughput[u]) << ',' << fmt(alloc.theta_star) << ','
         << fmt(alloc.c_min_star) << '\n';
  }
}

}  // namespace scsim
