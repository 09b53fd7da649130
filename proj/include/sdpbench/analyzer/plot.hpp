// Grid CSV reading and plot-data extraction: one table per metric with the
// load level down the side and one column per strategy.

#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sdpbench/analyzer/tables.hpp"

namespace sdpbench {

struct GridTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ParseError("grid has no column '" + name + "'");
  }
};

inline GridTable parse_grid_csv(std::istream& in, const std::string& origin = "grid") {
  GridTable g;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty grid file");
  ++lineno;
  g.header = split_csv_line(line);
  for (const char* need : {"application", "strategy", "users", "fps"}) {
    bool found = false;
    for (const auto& h : g.header) found = found || h == need;
    if (!found) throw ParseError(origin + ":1: missing column '" + std::string(need) + "'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != g.header.size())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(g.header.size()) +
                       " fields, got " + std::to_string(f.size()));
    g.rows.push_back(std::move(f));
  }
  return g;
}

inline double grid_number(const GridTable& g, const std::vector<std::string>& row, const std::string& col) {
  const auto& s = row[g.column(col)];
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("column '" + col + "': bad number '" + s + "'");
  }
}

/// Rebuilds summaries from grid rows. Per-request timings are not in the grid.
inline std::vector<RunSummary> summaries_from_grid(const GridTable& g) {
  std::vector<RunSummary> out;
  for (const auto& row : g.rows) {
    auto num = [&](const char* col) { return grid_number(g, row, col); };
    auto count = [&](const char* col) { return static_cast<std::uint64_t>(num(col)); };
    RunSummary s;
    s.application = parse_application(row[g.column("application")]);
    s.strategy = parse_strategy(row[g.column("strategy")]);
    s.users = static_cast<std::uint32_t>(num("users"));
    s.fps = static_cast<std::uint32_t>(num("fps"));
    s.seed = count("seed");
    s.injected = count("injected");
    s.completed = count("completed");
    s.dropped = count("dropped");
    s.in_flight = count("in_flight");
    s.drop_ratio = num("drop_ratio");
    s.mean_P = num("mean_P");
    s.mean_D = num("mean_D");
    s.mean_C_T = num("mean_C_T");
    s.mean_DAT = num("mean_DAT");
    s.mean_NCT = num("mean_NCT");
    s.processing_time = num("processing_time");
    auto& r = s.resources;
    r.cpu_mean = num("cpu_percent");
    r.memory_mean = num("memory_percent");
    for (auto k : kAllTiers) {
      const std::string t(to_string(k));
      r.cpu_percent[index_of(k)] = grid_number(g, row, "cpu_" + t);
      r.memory_percent[index_of(k)] = grid_number(g, row, "memory_" + t);
    }
    r.disk_read_kb = num("disk_read_kb");
    r.disk_write_kb = num("disk_write_kb");
    r.net_rx_kb = num("net_rx_kb");
    r.net_tx_kb = num("net_tx_kb");
    out.push_back(s);
  }
  return out;
}

struct PlotFile {
  std::string name;  // e.g. aeneas_users_processing_time.csv
  std::string content;
};

inline const std::vector<std::string>& plot_metrics() {
  static const std::vector<std::string> m{"processing_time", "mean_D",        "mean_P",       "mean_C_T",
                                          "mean_DAT",        "mean_NCT",      "drop_ratio",   "cpu_percent",
                                          "memory_percent",  "disk_read_kb",  "disk_write_kb", "net_rx_kb",
                                          "net_tx_kb"};
  return m;
}

/// Values are copied verbatim from the grid, so plots match the summaries exactly.
/// Cells with no run stay empty and add a warning.
inline std::vector<PlotFile> plot_tables(const GridTable& g, std::vector<std::string>& warnings) {
  const auto c_app = g.column("application"), c_strat = g.column("strategy");
  std::vector<std::string> metrics;
  for (const auto& m : plot_metrics())
    for (const auto& h : g.header)
      if (h == m) metrics.push_back(m);

  std::set<Application> apps;
  for (const auto& row : g.rows) apps.insert(parse_application(row[c_app]));

  std::vector<PlotFile> out;
  for (auto app : apps) {
    std::set<std::uint32_t> users, fps;
    for (const auto& row : g.rows)
      if (parse_application(row[c_app]) == app) {
        users.insert(static_cast<std::uint32_t>(grid_number(g, row, "users")));
        fps.insert(static_cast<std::uint32_t>(grid_number(g, row, "fps")));
      }
    std::vector<Scenario> scenarios{Scenario::UsersScaling};
    if (fps.size() > 1) scenarios.push_back(Scenario::FpsScaling);
    for (auto sc : scenarios) {
      const bool by_users = sc == Scenario::UsersScaling;
      const auto& levels = by_users ? users : fps;
      // (level, strategy) -> row
      std::map<std::pair<std::uint32_t, Strategy>, const std::vector<std::string>*> cells;
      for (const auto& row : g.rows) {
        if (parse_application(row[c_app]) != app) continue;
        const auto u = static_cast<std::uint32_t>(grid_number(g, row, "users"));
        const auto f = static_cast<std::uint32_t>(grid_number(g, row, "fps"));
        if (by_users && f != *fps.begin()) continue;
        if (!by_users && u != *users.begin()) continue;
        cells[{by_users ? u : f, parse_strategy(row[c_strat])}] = &row;
      }
      for (const auto& metric : metrics) {
        const auto col = g.column(metric);
        std::string csv = "load,DFT,OSS,MQTT\n";
        for (auto level : levels) {
          csv += std::to_string(level);
          for (auto s : kAllStrategies) {
            csv += ",";
            auto it = cells.find({level, s});
            if (it == cells.end()) {
              warnings.push_back(std::string(to_string(app)) + " " + std::string(to_string(sc)) + "=" +
                                 std::to_string(level) + ": no " + std::string(label(s)) + " run for " + metric);
              continue;
            }
            csv += (*it->second)[col];
          }
          csv += "\n";
        }
        out.push_back({std::string(to_string(app)) + "_" + std::string(to_string(sc)) + "_" + metric + ".csv", csv});
      }
    }
  }
  return out;
}

}  // namespace sdpbench
