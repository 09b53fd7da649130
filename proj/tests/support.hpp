#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "sdpbench/sdpbench.hpp"

namespace sdpbench::testing {

inline constexpr double kFast = 1e30;  // bandwidth/disk rate that makes transfers free

/// 1-core tiers with free links and disks unless the caller overrides them.
inline Topology free_topology(double latency = 0) {
  Topology t;
  t.tiers = {{TierKind::Edge, 1, 8 * kGiB, kFast, kFast},
             {TierKind::Fog, 1, 8 * kGiB, kFast, kFast},
             {TierKind::Cloud, 1, 8 * kGiB, kFast, kFast}};
  t.links = {{TierKind::Edge, TierKind::Fog, kFast, latency},
             {TierKind::Fog, TierKind::Cloud, kFast, latency},
             {TierKind::Fog, TierKind::Fog, kFast, latency}};
  return t;
}

inline FunctionSpec function(std::string name, Seconds base, double per_byte = 0, double ratio = 1.0,
                             std::uint32_t replicas = 1) {
  FunctionSpec f;
  f.name = std::move(name);
  f.base_time = base;
  f.per_byte_time = per_byte;
  f.output_ratio = ratio;
  f.replicas = replicas;
  return f;
}

/// Default calibration with every cost, latency and disk time driven to zero.
inline Calibration zero_cost_calibration() {
  auto c = default_calibration();
  for (auto& t : c.tiers) t.disk_read_rate = t.disk_write_rate = kFast;
  for (auto& l : c.links) {
    l.bandwidth = kFast;
    l.latency = 0;
  }
  c.backend.edge.base_time = 0;
  c.backend.edge.per_byte_time = 0;
  for (auto& [app, prof] : c.profiles)
    for (auto& [name, f] : prof.functions) {
      f.base_time = 0;
      f.per_byte_time = 0;
    }
  return c;
}

inline CellSpec cell(Application a, Strategy s, std::uint32_t users, std::uint64_t seed = 1, std::uint32_t fps = 1) {
  CellSpec c;
  c.application = a;
  c.strategy = s;
  c.load.n_users = users;
  c.load.seed = seed;
  c.load.fps = fps;
  return c;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("sdpbench_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(p);
  return p;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline std::string source_dir() { return SDPBENCH_SOURCE_DIR; }

/// Events of one kind, in log order.
inline std::vector<SimEvent> events_of(const EventLog& log, EventKind k, const std::string& subject = "") {
  std::vector<SimEvent> out;
  for (const auto& e : log.ordered())
    if (e.kind == k && (subject.empty() || e.subject == subject)) out.push_back(e);
  return out;
}

}  // namespace sdpbench::testing
