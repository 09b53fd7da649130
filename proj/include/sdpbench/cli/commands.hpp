// The run, analyze and report commands. Argument parsing lives in the tool;
// everything here takes plain options and streams so tests can drive it.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sdpbench/analyzer/plot.hpp"
#include "sdpbench/analyzer/tables.hpp"
#include "sdpbench/config/experiment.hpp"
#include "sdpbench/core/event_log.hpp"
#include "sdpbench/sim/runner.hpp"

namespace sdpbench::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kBadInput = 2, kRunaway = 3, kCoverage = 4 };

/// Writes through a temporary sibling and renames, so readers never see a half file.
inline void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    if (!os.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::optional<std::string> config;
  std::optional<std::string> sdp, app, users, fps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  bool write_events = true;
  bool progress = true;
};

/// Config file first, then flags, then SDPBENCH_OUT for the output directory.
inline ExperimentConfig resolve_config(const RunOptions& o, const char* env_out) {
  ExperimentConfig c = o.config ? load_experiment(*o.config) : ExperimentConfig{};
  auto flag = [](const char* name, auto parse) {
    try {
      return parse();
    } catch (const config::FieldError&) {
      throw;
    } catch (const std::exception& e) {
      throw config::FieldError(std::string("--") + name, e.what());
    }
  };
  if (o.sdp) c.strategies = flag("sdp", [&] { return parse_strategy_list(*o.sdp); });
  if (o.app) c.applications = flag("app", [&] { return parse_application_list(*o.app); });
  if (o.users) c.users = flag("users", [&] { return parse_int_list(*o.users); });
  if (o.fps) c.fps = flag("fps", [&] { return parse_int_list(*o.fps); });
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (env_out && *env_out) c.output_dir = env_out;
  if (o.threads) c.threads = *o.threads;
  check_grid(c);
  return c;
}

struct GridRun {
  std::vector<CellSpec> cells;
  std::vector<RunSummary> summaries;  // grid order
};

class CellFailure : public std::runtime_error {
 public:
  CellFailure(std::string cell, const std::string& what, int code)
      : std::runtime_error("cell " + cell + ": " + what), cell_(std::move(cell)), code_(code) {}
  const std::string& cell() const { return cell_; }
  int code() const { return code_; }

 private:
  std::string cell_;
  int code_;
};

/// Runs every cell on a pool of worker threads. Each cell has its own kernel
/// and writes only files carrying its own name.
inline GridRun run_grid(const ExperimentConfig& c, bool write_events, std::ostream* progress) {
  GridRun g;
  g.cells = expand_grid(c);
  g.summaries.resize(g.cells.size());
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);

  unsigned n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(g.cells.size()));
  std::atomic<std::size_t> next{0}, done{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<CellFailure> failure;
  std::size_t failed_index = 0;

  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= g.cells.size() || stop) return;
      const auto& cell = g.cells[i];
      const auto name = cell_name(cell);
      try {
        auto out = run_cell(c.calibration, cell);
        g.summaries[i] = summarize(out);
        if (write_events) {
          std::ostringstream ev;
          write_ndjson(out.ctx->log(), ev);
          write_atomic(dir / (name + ".events.ndjson"), ev.str());
        }
        write_atomic(dir / (name + ".summary.json"), to_json(g.summaries[i]).dump(2) + "\n");
      } catch (const RunawayError& e) {
        std::lock_guard lock(mu);
        if (!failure || i < failed_index) failure.emplace(name, e.what(), kRunaway), failed_index = i;
        stop = true;
        return;
      } catch (const std::invalid_argument& e) {
        std::lock_guard lock(mu);
        if (!failure || i < failed_index) failure.emplace(name, e.what(), kBadInput), failed_index = i;
        stop = true;
        return;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failure || i < failed_index) failure.emplace(name, e.what(), kFailure), failed_index = i;
        stop = true;
        return;
      }
      const auto k = ++done;
      if (progress) {
        std::lock_guard lock(mu);
        *progress << "[" << k << "/" << g.cells.size() << "] " << name << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) throw *failure;

  std::string grid = summary_csv_header() + "\n";
  for (const auto& s : g.summaries) grid += summary_csv_row(s) + "\n";
  write_atomic(dir / "grid.csv", grid);
  return g;
}

inline int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto c = resolve_config(o, std::getenv("SDPBENCH_OUT"));
    const auto g = run_grid(c, o.write_events, o.progress ? &err : nullptr);
    out << "ran " << g.cells.size() << " cell(s) into " << c.output_dir << "\n";
    return kOk;
  } catch (const CellFailure& e) {
    err << (e.code() == kRunaway ? "runaway simulation in " : "error in ") << e.what() << "\n";
    return e.code();
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

// ---------------------------------------------------------------------------
// analyze

/// Grid CSV, metric CSV (application,scenario,metric,strategy,value), a
/// summary JSON file or array, or a directory of *.summary.json files.
struct AnalyzerInput {
  std::vector<RunSummary> summaries;
  std::vector<MetricMatrix> matrices;
};

inline void read_analyzer_input(const fs::path& p, AnalyzerInput& in) {
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(p)) {
      const auto name = e.path().filename().string();
      if (name.size() > 13 && name.ends_with(".summary.json")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no *.summary.json files in '" + p.string() + "'");
    for (const auto& f : files) read_analyzer_input(f, in);
    return;
  }
  const auto text = slurp(p);
  if (p.extension() == ".json") {
    const auto j = config::parse_text(text, p.string());
    try {
      if (j.is_array())
        for (const auto& x : j) in.summaries.push_back(summary_from_json(x));
      else
        in.summaries.push_back(summary_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(p.string() + ": not a run summary: " + e.what());
    }
    return;
  }
  std::istringstream ss(text);
  if (text.rfind("application,scenario,metric", 0) == 0) {
    auto m = matrices_from_metric_csv(ss, p.string());
    in.matrices.insert(in.matrices.end(), m.begin(), m.end());
  } else {
    const auto g = parse_grid_csv(ss, p.string());
    auto rows = summaries_from_grid(g);
    in.summaries.insert(in.summaries.end(), rows.begin(), rows.end());
  }
}

/// Cross-application averages from the users-scaling matrices, when every
/// application and strategy is present.
inline std::optional<CrossAppReport> cross_app_from_matrices(const std::vector<MetricMatrix>& ms) {
  std::map<std::pair<Application, Strategy>, MetricValues> cells;
  for (const auto& m : ms) {
    if (m.scenario != Scenario::UsersScaling) continue;
    for (auto s : kAllStrategies) {
      MetricValues v{};
      for (auto metric : kAllMetrics) v[index_of(metric)] = m.at(metric, s);
      cells[{m.application, s}] = v;
    }
  }
  if (cells.size() != kAllApplications.size() * kAllStrategies.size()) return std::nullopt;
  return cross_application_average(cells);
}

inline int cmd_analyze(const std::vector<std::string>& inputs, const std::string& out_dir, std::ostream& out,
                       std::ostream& err) {
  try {
    AnalyzerInput in;
    for (const auto& p : inputs) read_analyzer_input(p, in);
    auto matrices = in.matrices;
    if (!in.summaries.empty()) {
      auto more = matrices_from_summaries(in.summaries);
      matrices.insert(matrices.end(), more.begin(), more.end());
    }
    if (matrices.empty()) throw ParseError("no input data");
    std::vector<SuitabilityResult> results;
    for (const auto& m : matrices) results.push_back(suitability_index(m));

    auto report = suitability_report_json(results);
    std::string table = render_suitability_table(results);
    if (auto cross = cross_app_from_matrices(matrices)) {
      table += "\n" + render_cross_app_table(*cross);
      for (auto m : kAllMetrics)
        for (auto s : kAllStrategies)
          report["cross_application"][std::string(to_string(m))][std::string(label(s))] = cross->at(m, s);
    }
    const fs::path dir(out_dir);
    write_atomic(dir / "suitability.json", report.dump(2) + "\n");
    write_atomic(dir / "suitability.txt", table);
    out << table;
    return kOk;
  } catch (const CoverageError& e) {
    err << e.what() << "\n";
    return kCoverage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

// ---------------------------------------------------------------------------
// report

inline int cmd_report(const std::string& grid_path, const std::string& out_dir, std::ostream& out,
                      std::ostream& err) {
  try {
    std::istringstream ss(slurp(grid_path));
    const auto g = parse_grid_csv(ss, grid_path);
    std::vector<std::string> warnings;
    const auto files = plot_tables(g, warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    for (const auto& f : files) write_atomic(fs::path(out_dir) / f.name, f.content);
    out << "wrote " << files.size() << " plot table(s) into " << out_dir << "\n";
    return kOk;
  } catch (const ParseError& e) {
    err << "grid error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace sdpbench::cli
