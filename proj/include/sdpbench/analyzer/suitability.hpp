// Suitability analysis over a metric matrix (7 metrics x 3 strategies, lower is better).
//
// Per metric the strategies at the minimum score for suitability, those at the
// maximum for not-suitability. Index = count / 7, as a whole percentage.

#pragma once

#include <array>
#include <bitset>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpbench/core/types.hpp"

namespace sdpbench {

enum class Metric : std::uint8_t { ProcessingTime, CPU, Memory, DiskRead, DiskWrite, NetReceive, NetTransmit };

inline constexpr std::array kAllMetrics{Metric::ProcessingTime, Metric::CPU,       Metric::Memory,
                                        Metric::DiskRead,       Metric::DiskWrite, Metric::NetReceive,
                                        Metric::NetTransmit};
inline constexpr std::size_t kMetricCount = kAllMetrics.size();

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::ProcessingTime: return "processing_time";
    case Metric::CPU: return "cpu";
    case Metric::Memory: return "memory";
    case Metric::DiskRead: return "disk_read";
    case Metric::DiskWrite: return "disk_write";
    case Metric::NetReceive: return "net_receive";
    case Metric::NetTransmit: return "net_transmit";
  }
  return "?";
}

inline std::string_view display_name(Metric m) {
  switch (m) {
    case Metric::ProcessingTime: return "Processing Time (s)";
    case Metric::CPU: return "CPU Utilization (%)";
    case Metric::Memory: return "Memory Utilization (%)";
    case Metric::DiskRead: return "Disk Read (KB)";
    case Metric::DiskWrite: return "Disk Writes (KB)";
    case Metric::NetReceive: return "Network Receive (KB)";
    case Metric::NetTransmit: return "Network Transmit (KB)";
  }
  return "?";
}

inline Metric parse_metric(std::string_view s) {
  const auto v = detail::lower(s);
  for (auto m : kAllMetrics)
    if (v == to_string(m)) return m;
  if (v == "processing_time_s" || v == "pt") return Metric::ProcessingTime;
  if (v == "cpu_percent") return Metric::CPU;
  if (v == "memory_percent" || v == "mem") return Metric::Memory;
  throw ParseError("unknown metric '" + std::string(s) + "'");
}

constexpr std::size_t index_of(Metric m) { return static_cast<std::size_t>(m); }

enum class Scenario : std::uint8_t { UsersScaling, FpsScaling };

inline std::string_view to_string(Scenario s) { return s == Scenario::UsersScaling ? "users" : "fps"; }

inline Scenario parse_scenario(std::string_view s) {
  const auto v = detail::lower(s);
  if (v == "users" || v == "usersscaling" || v == "users_scaling") return Scenario::UsersScaling;
  if (v == "fps" || v == "fpsscaling" || v == "fps_scaling") return Scenario::FpsScaling;
  throw ParseError("unknown scenario '" + std::string(s) + "'");
}

struct MetricMatrix {
  Application application = Application::Aeneas;
  Scenario scenario = Scenario::UsersScaling;
  std::array<std::array<double, 3>, kMetricCount> cells{};

  double& at(Metric m, Strategy s) { return cells[index_of(m)][index_of(s)]; }
  double at(Metric m, Strategy s) const { return cells[index_of(m)][index_of(s)]; }
};

using StrategySet = std::bitset<3>;

inline std::string set_label(const StrategySet& set) {
  std::string out;
  for (auto s : kAllStrategies)
    if (set.test(index_of(s))) out += (out.empty() ? "" : "/") + std::string(label(s));
  return out;
}

struct MinMax {
  StrategySet argmin;
  StrategySet argmax;
};

using Attribution = std::array<MinMax, kMetricCount>;

/// Relative tolerance under which two averages count as a tie.
inline constexpr double kTieTolerance = 0.01;

inline bool within_tolerance(double a, double b, double tol = kTieTolerance) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline MinMax attribute_row(const std::array<double, 3>& row, double tol = kTieTolerance) {
  double lo = row[0], hi = row[0];
  for (double v : row) {
    if (!std::isfinite(v)) throw std::invalid_argument("metric matrix has a non-finite cell");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  MinMax mm;
  if (within_tolerance(lo, hi, tol)) {
    mm.argmin.set();
    mm.argmax.set();
    return mm;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const bool near_lo = within_tolerance(row[i], lo, tol);
    const bool near_hi = within_tolerance(row[i], hi, tol);
    if (near_lo && near_hi) {
      // Close to both ends: it goes to whichever is nearer.
      (std::abs(row[i] - lo) <= std::abs(row[i] - hi) ? mm.argmin : mm.argmax).set(i);
    } else if (near_lo) {
      mm.argmin.set(i);
    } else if (near_hi) {
      mm.argmax.set(i);
    }
  }
  return mm;
}

inline Attribution attribute_min_max(const MetricMatrix& m, double tol = kTieTolerance) {
  Attribution a;
  for (auto metric : kAllMetrics) a[index_of(metric)] = attribute_row(m.cells[index_of(metric)], tol);
  return a;
}

struct StrategyScore {
  int min_count = 0;
  int max_count = 0;
  int suitability = 0;      // percent
  int not_suitability = 0;  // percent
  int net = 0;
};

struct SuitabilityResult {
  Application application = Application::Aeneas;
  Scenario scenario = Scenario::UsersScaling;
  Attribution attribution{};
  std::array<StrategyScore, 3> scores{};
  Strategy selected = Strategy::DFT;
};

inline int index_percent(int count) {
  return static_cast<int>(std::lround(static_cast<double>(count) / static_cast<double>(kMetricCount) * 100.0));
}

/// Picks one strategy from scored attributions.
///
/// Strategies carrying the highest not-suitability are set aside (unless all
/// carry it equally); among the rest the highest suitability wins, then the
/// lower not-suitability, then the one fastest on processing time, then DFT,
/// OSS, MQTT in that order.
inline Strategy select_from_scores(const std::array<StrategyScore, 3>& scores, const Attribution& attribution) {
  int worst = 0;
  bool all_equal = true;
  for (const auto& s : scores) {
    worst = std::max(worst, s.max_count);
    all_equal = all_equal && s.max_count == scores[0].max_count;
  }
  const auto& fastest = attribution[index_of(Metric::ProcessingTime)].argmin;
  std::optional<Strategy> best;
  for (auto s : kAllStrategies) {
    const auto& sc = scores[index_of(s)];
    if (!all_equal && sc.max_count == worst) continue;
    if (!best) {
      best = s;
      continue;
    }
    const auto& b = scores[index_of(*best)];
    if (sc.min_count != b.min_count) {
      if (sc.min_count > b.min_count) best = s;
    } else if (sc.max_count != b.max_count) {
      if (sc.max_count < b.max_count) best = s;
    } else if (fastest.test(index_of(s)) && !fastest.test(index_of(*best))) {
      best = s;
    }
  }
  return *best;
}

inline SuitabilityResult suitability_index(const MetricMatrix& m, double tol = kTieTolerance) {
  SuitabilityResult r;
  r.application = m.application;
  r.scenario = m.scenario;
  r.attribution = attribute_min_max(m, tol);
  for (const auto& mm : r.attribution)
    for (auto s : kAllStrategies) {
      if (mm.argmin.test(index_of(s))) ++r.scores[index_of(s)].min_count;
      if (mm.argmax.test(index_of(s))) ++r.scores[index_of(s)].max_count;
    }
  for (auto& sc : r.scores) {
    sc.suitability = index_percent(sc.min_count);
    sc.not_suitability = index_percent(sc.max_count);
    sc.net = sc.suitability - sc.not_suitability;
  }
  r.selected = select_from_scores(r.scores, r.attribution);
  return r;
}

/// One strategy per application: majority over scenarios, ties by summed net score.
inline Strategy select_suitable_sdp(const std::vector<SuitabilityResult>& results) {
  if (results.empty()) throw std::invalid_argument("select_suitable_sdp needs at least one scenario");
  std::array<int, 3> wins{}, net{};
  for (const auto& r : results) {
    ++wins[index_of(r.selected)];
    for (auto s : kAllStrategies) net[index_of(s)] += r.scores[index_of(s)].net;
  }
  Strategy best = kAllStrategies[0];
  for (auto s : kAllStrategies) {
    const auto i = index_of(s), b = index_of(best);
    if (wins[i] > wins[b] || (wins[i] == wins[b] && wins[i] > 0 && net[i] > net[b]) ||
        (wins[b] == 0 && wins[i] > 0))
      best = s;
  }
  return best;
}

/// Selection per application, in application order.
inline std::map<Application, Strategy> select_per_application(const std::vector<SuitabilityResult>& results) {
  std::map<Application, std::vector<SuitabilityResult>> by_app;
  for (const auto& r : results) by_app[r.application].push_back(r);
  std::map<Application, Strategy> out;
  for (const auto& [app, rs] : by_app) out[app] = select_suitable_sdp(rs);
  return out;
}

}  // namespace sdpbench
