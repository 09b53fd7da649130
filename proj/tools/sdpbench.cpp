#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sdpbench/cli/commands.hpp"

namespace cli = sdpbench::cli;

int main(int argc, char** argv) {
  CLI::App app{"Serverless data pipeline benchmark: simulate DFT, OSS and MQTT pipelines over edge/fog/cloud"};
  app.require_subcommand(1);

  cli::RunOptions run;
  bool no_events = false, quiet = false;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment grid");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)");
  run_cmd->add_option("--sdp", run.sdp, "dft|oss|mqtt|all, comma separated");
  run_cmd->add_option("--app", run.app, "aeneas|pocketsphinx|video|all, comma separated");
  run_cmd->add_option("--users", run.users, "User counts, e.g. 10,50,100 or 10..300:10");
  run_cmd->add_option("--fps", run.fps, "Video fps values, e.g. 1..15");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--out", run.out, "Output directory (SDPBENCH_OUT wins)");
  run_cmd->add_option("--threads", run.threads, "Worker threads, 0 for one per core");
  run_cmd->add_flag("--no-events", no_events, "Skip the per-cell event logs");
  run_cmd->add_flag("--quiet", quiet, "No progress lines");

  std::vector<std::string> inputs;
  std::string analyze_out = "out";
  auto* analyze_cmd = app.add_subcommand("analyze", "Suitability report from summaries, a grid CSV or a metric table");
  analyze_cmd->add_option("inputs", inputs, "Files or directories")->required();
  analyze_cmd->add_option("--out", analyze_out, "Output directory (SDPBENCH_OUT wins)");

  std::string grid, report_out;
  auto* report_cmd = app.add_subcommand("report", "Plot-data CSVs from a grid CSV");
  report_cmd->add_option("grid", grid, "grid.csv from a run")->required();
  report_cmd->add_option("--out", report_out, "Output directory, default <grid dir>/plots (SDPBENCH_OUT wins)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kBadInput;
  }

  const char* env_out = std::getenv("SDPBENCH_OUT");
  const bool env_set = env_out && *env_out;
  if (*run_cmd) {
    run.write_events = !no_events;
    run.progress = !quiet;
    return cli::cmd_run(run, std::cout, std::cerr);
  }
  if (*analyze_cmd) return cli::cmd_analyze(inputs, env_set ? env_out : analyze_out, std::cout, std::cerr);
  if (report_out.empty()) report_out = (std::filesystem::path(grid).parent_path() / "plots").string();
  return cli::cmd_report(grid, env_set ? env_out : report_out, std::cout, std::cerr);
}
