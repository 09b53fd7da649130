// Feeding the analyzer (run summaries or an external metric table) and
// rendering its results: suitability report, cross-application averages,
// and plot data.

#pragma once

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdpbench/analyzer/suitability.hpp"
#include "sdpbench/metrics/summary.hpp"

namespace sdpbench {

/// Raised when some (application, strategy) cells needed for analysis are absent.
class CoverageError : public std::runtime_error {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : std::runtime_error(what), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

using MetricValues = std::array<double, kMetricCount>;

inline double metric_value(const RunSummary& s, Metric m) {
  const auto& r = s.resources;
  switch (m) {
    case Metric::ProcessingTime: return s.processing_time;
    case Metric::CPU: return r.cpu_mean;
    case Metric::Memory: return r.memory_mean;
    case Metric::DiskRead: return r.disk_read_kb;
    case Metric::DiskWrite: return r.disk_write_kb;
    case Metric::NetReceive: return r.net_rx_kb;
    case Metric::NetTransmit: return r.net_tx_kb;
  }
  return 0;
}

inline MetricValues metric_values(const RunSummary& s) {
  MetricValues v{};
  for (auto m : kAllMetrics) v[index_of(m)] = metric_value(s, m);
  return v;
}

inline std::string cell_label(Application a, Strategy s) {
  return std::string(to_string(a)) + "/" + std::string(to_string(s));
}

/// Averages grid summaries into one matrix per (application, scenario).
/// Video gets a users scenario (at its smallest fps) and, when more than one
/// fps was run, an fps scenario (at its smallest user count).
inline std::vector<MetricMatrix> matrices_from_summaries(const std::vector<RunSummary>& rows) {
  std::set<Application> apps;
  for (const auto& r : rows) apps.insert(r.application);
  std::vector<MetricMatrix> out;
  std::vector<std::string> missing;
  for (auto app : apps) {
    std::set<std::uint32_t> fps_values, user_values;
    for (const auto& r : rows)
      if (r.application == app) {
        fps_values.insert(r.fps);
        user_values.insert(r.users);
      }
    std::vector<Scenario> scenarios{Scenario::UsersScaling};
    if (app == Application::Video && fps_values.size() > 1) scenarios.push_back(Scenario::FpsScaling);
    for (auto sc : scenarios) {
      MetricMatrix m;
      m.application = app;
      m.scenario = sc;
      for (auto s : kAllStrategies) {
        MetricValues sum{};
        int n = 0;
        for (const auto& r : rows) {
          if (r.application != app || r.strategy != s) continue;
          if (app == Application::Video && sc == Scenario::UsersScaling && r.fps != *fps_values.begin()) continue;
          if (sc == Scenario::FpsScaling && r.users != *user_values.begin()) continue;
          const auto v = metric_values(r);
          for (std::size_t i = 0; i < kMetricCount; ++i) sum[i] += v[i];
          ++n;
        }
        if (n == 0) {
          missing.push_back(cell_label(app, s) + (sc == Scenario::FpsScaling ? " (fps)" : ""));
          continue;
        }
        for (auto metric : kAllMetrics) m.at(metric, s) = sum[index_of(metric)] / n;
      }
      out.push_back(m);
    }
  }
  if (!missing.empty()) {
    std::string msg = "incomplete coverage, missing:";
    for (const auto& x : missing) msg += " " + x;
    throw CoverageError(msg, missing);
  }
  return out;
}

// ---------------------------------------------------------------------------
// External metric table: application,scenario,metric,strategy,value

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
  }
  return out;
}

inline std::vector<MetricMatrix> matrices_from_metric_csv(std::istream& in, const std::string& origin = "input") {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty metric table");
  ++lineno;
  const auto header = split_csv_line(line);
  const std::vector<std::string> want{"application", "scenario", "metric", "strategy", "value"};
  if (header != want)
    throw ParseError(origin + ":1: header must be application,scenario,metric,strategy,value");
  std::map<std::pair<Application, Scenario>, MetricMatrix> acc;
  std::map<std::pair<Application, Scenario>, std::set<std::pair<Metric, Strategy>>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (f.size() != 5) throw ParseError(where + ": expected 5 fields, got " + std::to_string(f.size()));
    try {
      const auto app = parse_application(f[0]);
      const auto sc = parse_scenario(f[1]);
      const auto metric = parse_metric(f[2]);
      const auto strat = parse_strategy(f[3]);
      std::size_t used = 0;
      const double v = std::stod(f[4], &used);
      if (used != f[4].size()) throw ParseError("bad number '" + f[4] + "'");
      auto& m = acc[{app, sc}];
      m.application = app;
      m.scenario = sc;
      m.at(metric, strat) = v;
      seen[{app, sc}].insert({metric, strat});
    } catch (const std::invalid_argument&) {
      throw ParseError(where + ": bad number '" + f[4] + "'");
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  std::vector<std::string> missing;
  std::vector<MetricMatrix> out;
  for (auto& [key, m] : acc) {
    const auto& got = seen[key];
    std::set<Strategy> absent;
    for (auto metric : kAllMetrics)
      for (auto s : kAllStrategies)
        if (!got.count({metric, s})) absent.insert(s);
    for (auto s : absent)
      missing.push_back(cell_label(key.first, s) + " (" + std::string(to_string(key.second)) + ")");
    out.push_back(m);
  }
  if (!missing.empty()) {
    std::string msg = "incomplete coverage, missing:";
    for (const auto& x : missing) msg += " " + x;
    throw CoverageError(msg, missing);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline nlohmann::ordered_json to_json(const SuitabilityResult& r) {
  nlohmann::ordered_json j;
  j["application"] = std::string(to_string(r.application));
  j["scenario"] = std::string(to_string(r.scenario));
  for (auto m : kAllMetrics) {
    const auto& mm = r.attribution[index_of(m)];
    j["attribution"][std::string(to_string(m))] = {{"min", set_label(mm.argmin)}, {"max", set_label(mm.argmax)}};
  }
  for (auto s : kAllStrategies) {
    const auto& sc = r.scores[index_of(s)];
    j["scores"][std::string(label(s))] = {{"min_count", sc.min_count},
                                          {"max_count", sc.max_count},
                                          {"suitability", sc.suitability},
                                          {"not_suitability", sc.not_suitability},
                                          {"net", sc.net}};
  }
  j["selected"] = std::string(label(r.selected));
  return j;
}

inline nlohmann::ordered_json suitability_report_json(const std::vector<SuitabilityResult>& results) {
  nlohmann::ordered_json j;
  j["scenarios"] = nlohmann::ordered_json::array();
  for (const auto& r : results) j["scenarios"].push_back(to_json(r));
  for (const auto& [app, s] : select_per_application(results))
    j["suitable"][std::string(to_string(app))] = std::string(label(s));
  return j;
}

/// The strategies holding the top index in a column, e.g. "DFT (43%) OSS (43%)".
inline std::string top_index_label(const SuitabilityResult& r, bool suitability) {
  int top = 0;
  for (const auto& sc : r.scores) top = std::max(top, suitability ? sc.suitability : sc.not_suitability);
  std::string out;
  for (auto s : kAllStrategies) {
    const auto& sc = r.scores[index_of(s)];
    if ((suitability ? sc.suitability : sc.not_suitability) == top)
      out += (out.empty() ? "" : " ") + std::string(label(s)) + " (" + std::to_string(top) + "%)";
  }
  return out;
}

/// Text table in the min/max-of-average layout, one column pair per scenario.
inline std::string render_suitability_table(const std::vector<SuitabilityResult>& results) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Metric"};
  for (const auto& r : results) {
    std::string col(to_string(r.application));
    if (r.application == Application::Video) col += "/" + std::string(to_string(r.scenario));
    head.push_back(col + " min");
    head.push_back(col + " max");
  }
  rows.push_back(head);
  for (auto m : kAllMetrics) {
    std::vector<std::string> row{std::string(display_name(m))};
    for (const auto& r : results) {
      row.push_back(set_label(r.attribution[index_of(m)].argmin));
      row.push_back(set_label(r.attribution[index_of(m)].argmax));
    }
    rows.push_back(row);
  }
  std::vector<std::string> idx{"Suitability index"};
  for (const auto& r : results) {
    idx.push_back(top_index_label(r, true));
    idx.push_back(top_index_label(r, false));
  }
  rows.push_back(idx);
  std::vector<std::string> sel{"Suitable SDP"};
  for (const auto& r : results) {
    sel.push_back(std::string(label(r.selected)));
    sel.push_back("");
  }
  rows.push_back(sel);

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
      if (i + 1 < row.size()) out << " | ";
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Cross-application averages.

struct CrossAppReport {
  std::array<std::array<double, 3>, kMetricCount> mean{};
  double at(Metric m, Strategy s) const { return mean[index_of(m)][index_of(s)]; }
};

/// Unweighted mean over the three applications, per metric and strategy.
/// Processing time is given in seconds.
inline CrossAppReport cross_application_average(const std::map<std::pair<Application, Strategy>, MetricValues>& cells) {
  std::vector<std::string> missing;
  for (auto a : kAllApplications)
    for (auto s : kAllStrategies)
      if (!cells.count({a, s})) missing.push_back(cell_label(a, s));
  if (!missing.empty()) {
    std::string msg = "cross-application average needs every cell, missing:";
    for (const auto& x : missing) msg += " " + x;
    throw CoverageError(msg, missing);
  }
  CrossAppReport r;
  for (auto s : kAllStrategies)
    for (auto m : kAllMetrics) {
      double sum = 0;
      for (auto a : kAllApplications) sum += cells.at({a, s})[index_of(m)];
      r.mean[index_of(m)][index_of(s)] = sum / static_cast<double>(kAllApplications.size());
    }
  return r;
}

/// Processing time in minutes to two decimals; everything else as whole numbers.
inline std::string format_cross_app_cell(Metric m, double value) {
  char buf[64];
  if (m == Metric::ProcessingTime)
    std::snprintf(buf, sizeof buf, "%.2f", value / 60.0);
  else
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(value)));
  return buf;
}

inline std::string cross_app_row_name(Metric m) {
  return m == Metric::ProcessingTime ? "Processing Time (m)" : std::string(display_name(m));
}

inline std::string render_cross_app_table(const CrossAppReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "Metric";
  for (auto s : kAllStrategies) out << " | " << std::setw(8) << label(s);
  out << "\n";
  for (auto m : kAllMetrics) {
    out << std::left << std::setw(24) << cross_app_row_name(m);
    for (auto s : kAllStrategies) out << " | " << std::setw(8) << format_cross_app_cell(m, r.at(m, s));
    out << "\n";
  }
  return out.str();
}

}  // namespace sdpbench
