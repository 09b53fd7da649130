// Run summaries: timing means over completed requests, drop ratio, and the
// resource aggregates. Serialized as JSON and as one CSV row per cell.

#pragma once

#include <array>
#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdpbench/metrics/timings.hpp"

namespace sdpbench {

inline constexpr double kBytesPerKB = 1024.0;

struct ResourceSummary {
  std::array<double, 3> cpu_percent{};
  std::array<double, 3> memory_percent{};
  double cpu_mean = 0;  // unweighted mean over the three tiers
  double memory_mean = 0;
  double disk_read_kb = 0;  // summed over tiers
  double disk_write_kb = 0;
  double net_rx_kb = 0;
  double net_tx_kb = 0;
};

struct RunSummary {
  Application application = Application::Aeneas;
  Strategy strategy = Strategy::DFT;
  std::uint32_t users = 0;
  std::uint32_t fps = 0;
  std::uint64_t seed = 0;
  std::uint64_t injected = 0;
  std::uint64_t completed = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  double drop_ratio = 0;
  Seconds mean_P = 0, mean_D = 0, mean_C_T = 0, mean_DAT = 0, mean_NCT = 0;
  /// First arrival to the last logged event: the time the pipeline needed to
  /// work through the whole load, dropped units included.
  Seconds processing_time = 0;
  ResourceSummary resources;
  std::vector<RequestTimings> timings;
};

struct RunMeta {
  Application application = Application::Aeneas;
  Strategy strategy = Strategy::DFT;
  std::uint32_t users = 0;
  std::uint32_t fps = 0;
  std::uint64_t seed = 0;
};

inline ResourceSummary summarize_resources(const ResourceLedger& ledger) {
  ResourceSummary r;
  for (auto k : kAllTiers) {
    const auto i = index_of(k);
    r.cpu_percent[i] = cpu_utilization(ledger, k);
    r.memory_percent[i] = memory_utilization(ledger, k);
    r.cpu_mean += r.cpu_percent[i] / 3.0;
    r.memory_mean += r.memory_percent[i] / 3.0;
    const auto& c = ledger.counters(k);
    r.disk_read_kb += static_cast<double>(c.disk_read_bytes) / kBytesPerKB;
    r.disk_write_kb += static_cast<double>(c.disk_write_bytes) / kBytesPerKB;
    r.net_rx_kb += static_cast<double>(c.net_rx_bytes) / kBytesPerKB;
    r.net_tx_kb += static_cast<double>(c.net_tx_bytes) / kBytesPerKB;
  }
  return r;
}

inline RunSummary summarize_run(const EventLog& log, const ResourceLedger& ledger, const RunMeta& meta) {
  RunSummary s;
  s.application = meta.application;
  s.strategy = meta.strategy;
  s.users = meta.users;
  s.fps = meta.fps;
  s.seed = meta.seed;
  const auto traces = index_requests(log);
  std::optional<Seconds> first_arrival;
  for (const auto& [id, t] : traces) {
    if (!t.arrived) continue;
    ++s.injected;
    first_arrival = std::min(first_arrival.value_or(*t.arrived), *t.arrived);
    if (t.completed) {
      ++s.completed;
      s.timings.push_back(timings_from_trace(id, t));
    } else if (t.dropped) {
      ++s.dropped;
    } else {
      ++s.in_flight;
    }
  }
  s.drop_ratio = s.injected ? static_cast<double>(s.dropped) / static_cast<double>(s.injected) : 0.0;
  if (!s.timings.empty()) {
    for (const auto& t : s.timings) {
      s.mean_P += t.P;
      s.mean_D += t.D;
      s.mean_C_T += t.C_T;
      s.mean_DAT += t.DAT;
      s.mean_NCT += t.NCT;
    }
    const double n = static_cast<double>(s.timings.size());
    s.mean_P /= n;
    s.mean_D /= n;
    s.mean_C_T /= n;
    s.mean_DAT /= n;
    s.mean_NCT /= n;
  }
  if (first_arrival) {
    Seconds last = *first_arrival;
    for (const auto& e : log.events()) last = std::max(last, e.timestamp);
    s.processing_time = last - *first_arrival;
  }
  s.resources = summarize_resources(ledger);
  return s;
}

// ---------------------------------------------------------------------------
// Serialization.

/// Shortest decimal that round-trips, so reruns print identical text.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline nlohmann::ordered_json to_json(const RunSummary& s, bool with_requests = true) {
  nlohmann::ordered_json j;
  j["application"] = std::string(to_string(s.application));
  j["strategy"] = std::string(to_string(s.strategy));
  j["users"] = s.users;
  j["fps"] = s.fps;
  j["seed"] = s.seed;
  j["injected"] = s.injected;
  j["completed"] = s.completed;
  j["dropped"] = s.dropped;
  j["in_flight"] = s.in_flight;
  j["drop_ratio"] = s.drop_ratio;
  j["mean"] = {{"P", s.mean_P}, {"D", s.mean_D}, {"C_T", s.mean_C_T}, {"DAT", s.mean_DAT}, {"NCT", s.mean_NCT}};
  j["processing_time"] = s.processing_time;
  const auto& r = s.resources;
  nlohmann::ordered_json res;
  res["cpu_percent"] = r.cpu_mean;
  res["memory_percent"] = r.memory_mean;
  for (auto k : kAllTiers) {
    res["per_tier"][std::string(to_string(k))] = {{"cpu_percent", r.cpu_percent[index_of(k)]},
                                                  {"memory_percent", r.memory_percent[index_of(k)]}};
  }
  res["disk_read_kb"] = r.disk_read_kb;
  res["disk_write_kb"] = r.disk_write_kb;
  res["net_rx_kb"] = r.net_rx_kb;
  res["net_tx_kb"] = r.net_tx_kb;
  j["resources"] = std::move(res);
  if (with_requests) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : s.timings)
      arr.push_back({{"request_id", raw(t.request_id)},
                     {"P", t.P},
                     {"D", t.D},
                     {"C_T", t.C_T},
                     {"DAT", t.DAT},
                     {"NCT", t.NCT},
                     {"overlap", t.overlap}});
    j["requests"] = std::move(arr);
  }
  return j;
}

inline RunSummary summary_from_json(const nlohmann::json& j) {
  RunSummary s;
  s.application = parse_application(j.at("application").get<std::string>());
  s.strategy = parse_strategy(j.at("strategy").get<std::string>());
  s.users = j.at("users").get<std::uint32_t>();
  s.fps = j.at("fps").get<std::uint32_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.injected = j.at("injected").get<std::uint64_t>();
  s.completed = j.at("completed").get<std::uint64_t>();
  s.dropped = j.at("dropped").get<std::uint64_t>();
  s.in_flight = j.at("in_flight").get<std::uint64_t>();
  s.drop_ratio = j.at("drop_ratio").get<double>();
  const auto& m = j.at("mean");
  s.mean_P = m.at("P").get<double>();
  s.mean_D = m.at("D").get<double>();
  s.mean_C_T = m.at("C_T").get<double>();
  s.mean_DAT = m.at("DAT").get<double>();
  s.mean_NCT = m.at("NCT").get<double>();
  s.processing_time = j.at("processing_time").get<double>();
  const auto& r = j.at("resources");
  s.resources.cpu_mean = r.at("cpu_percent").get<double>();
  s.resources.memory_mean = r.at("memory_percent").get<double>();
  for (auto k : kAllTiers) {
    const auto& t = r.at("per_tier").at(std::string(to_string(k)));
    s.resources.cpu_percent[index_of(k)] = t.at("cpu_percent").get<double>();
    s.resources.memory_percent[index_of(k)] = t.at("memory_percent").get<double>();
  }
  s.resources.disk_read_kb = r.at("disk_read_kb").get<double>();
  s.resources.disk_write_kb = r.at("disk_write_kb").get<double>();
  s.resources.net_rx_kb = r.at("net_rx_kb").get<double>();
  s.resources.net_tx_kb = r.at("net_tx_kb").get<double>();
  return s;
}

inline const std::vector<std::string>& summary_csv_columns() {
  static const std::vector<std::string> cols{
      "application", "strategy",      "users",          "fps",          "seed",         "injected",
      "completed",   "dropped",       "in_flight",      "drop_ratio",   "mean_P",       "mean_D",
      "mean_C_T",    "mean_DAT",      "mean_NCT",       "processing_time", "cpu_percent", "memory_percent",
      "cpu_edge",    "cpu_fog",       "cpu_cloud",      "memory_edge",  "memory_fog",   "memory_cloud",
      "disk_read_kb", "disk_write_kb", "net_rx_kb",     "net_tx_kb"};
  return cols;
}

inline std::string summary_csv_header() {
  std::string out;
  for (const auto& c : summary_csv_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

inline std::string summary_csv_row(const RunSummary& s) {
  const auto& r = s.resources;
  std::vector<std::string> f{std::string(to_string(s.application)),
                             std::string(to_string(s.strategy)),
                             std::to_string(s.users),
                             std::to_string(s.fps),
                             std::to_string(s.seed),
                             std::to_string(s.injected),
                             std::to_string(s.completed),
                             std::to_string(s.dropped),
                             std::to_string(s.in_flight),
                             format_double(s.drop_ratio),
                             format_double(s.mean_P),
                             format_double(s.mean_D),
                             format_double(s.mean_C_T),
                             format_double(s.mean_DAT),
                             format_double(s.mean_NCT),
                             format_double(s.processing_time),
                             format_double(r.cpu_mean),
                             format_double(r.memory_mean)};
  for (double v : r.cpu_percent) f.push_back(format_double(v));
  for (double v : r.memory_percent) f.push_back(format_double(v));
  for (double v : {r.disk_read_kb, r.disk_write_kb, r.net_rx_kb, r.net_tx_kb}) f.push_back(format_double(v));
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
  return out;
}

}  // namespace sdpbench
