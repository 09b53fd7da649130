// Runs one experiment cell: a fresh kernel, one backend, one request stream.

#pragma once

#include <memory>
#include <string>
#include <variant>

#include "sdpbench/backends/flow_queue.hpp"
#include "sdpbench/backends/object_store.hpp"
#include "sdpbench/backends/pubsub.hpp"
#include "sdpbench/core/validate.hpp"
#include "sdpbench/metrics/summary.hpp"
#include "sdpbench/workloads/profiles.hpp"

namespace sdpbench {

struct CellSpec {
  Application application = Application::Aeneas;
  Strategy strategy = Strategy::DFT;
  LoadSpec load;
  std::uint64_t event_budget = Kernel::kDefaultEventBudget;
};

inline std::string cell_name(const CellSpec& c) {
  return std::string(to_string(c.application)) + "_" + std::string(to_string(c.strategy)) + "_u" +
         std::to_string(c.load.n_users) + "_f" + std::to_string(c.load.fps);
}

/// A finished run. The context keeps the log, the ledger and the request table.
struct RunOutput {
  CellSpec cell;
  PipelineSpec pipeline;
  std::unique_ptr<RunContext> ctx;
  Seconds end_time = 0;
  std::uint64_t gateway_rejections = 0;
};

inline RunOutput run_cell(const Calibration& cal, const CellSpec& cell) {
  RunOutput out;
  out.cell = cell;
  out.pipeline = build_pipeline(cal, cell.application, cell.strategy, cell.load.fps);
  if (auto v = validate_pipeline(out.pipeline); !v.empty()) throw std::invalid_argument(v.front().message);
  if (auto v = validate_infrastructure(cal.tiers, cal.links); !v.empty())
    throw std::invalid_argument(v.front().message);

  out.ctx = std::make_unique<RunContext>(Topology{cal.tiers, cal.links}, cell.event_budget);
  auto& ctx = *out.ctx;
  const auto& params = cal.backend;
  const auto arrivals = generate_requests(cal.profile(cell.application), cell.load);
  RandomStreams streams(cell.load.seed);

  FaasPlatform faas(ctx, params.gateway);
  for (const auto& f : out.pipeline.stages) faas.register_function(f);

  // The intermediate-data service is resident for the whole run.
  ctx.ledger().mem_acquire(TierKind::Fog, params.engine_memory[index_of(cell.strategy)], 0);

  std::unique_ptr<DftBackend> dft;
  std::unique_ptr<OssBackend> oss;
  std::unique_ptr<MqttBackend> mqtt;
  std::function<void(const DataUnit&)> inject;
  switch (cell.strategy) {
    case Strategy::DFT:
      dft = std::make_unique<DftBackend>(ctx, out.pipeline, params, faas);
      inject = [&](const DataUnit& u) { dft->inject(u); };
      break;
    case Strategy::OSS:
      oss = std::make_unique<OssBackend>(ctx, out.pipeline, params, faas, streams.stream("oss.routing"));
      inject = [&](const DataUnit& u) { oss->inject(u); };
      break;
    case Strategy::MQTT:
      mqtt = std::make_unique<MqttBackend>(ctx, out.pipeline, params, faas);
      inject = [&](const DataUnit& u) { mqtt->inject(u); };
      break;
  }

  for (const auto& a : arrivals) {
    const DataUnit unit = ctx.new_request(a.at, a.size);
    ctx.kernel().schedule(a.at, [&ctx, &inject, unit] {
      // Sensors upload to the edge gateway from outside the modeled network.
      ctx.ledger().add_rx(TierKind::Edge, unit.size);
      ctx.request_arrived(unit);
      inject(unit);
    });
  }
  out.end_time = ctx.kernel().run_until_idle();
  ctx.ledger().set_window(arrivals.front().at, std::max(out.end_time, arrivals.front().at + kTimeResolution));
  out.gateway_rejections = faas.rejected();
  return out;
}

inline RunSummary summarize(const RunOutput& out) {
  const auto& c = out.cell;
  return summarize_run(out.ctx->log(), out.ctx->ledger(),
                       {c.application, c.strategy, c.load.n_users, c.load.fps, c.load.seed});
}

}  // namespace sdpbench
