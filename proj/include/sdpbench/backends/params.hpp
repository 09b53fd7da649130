// Knobs shared by the three pipeline backends.

#pragma once

#include <array>
#include <optional>

#include "sdpbench/core/types.hpp"
#include "sdpbench/faas/engine.hpp"
#include "sdpbench/sim/run_context.hpp"

namespace sdpbench {

enum class QueuePriority : std::uint8_t { FIFO, SmallestFirst, OldestFirst };

inline std::string_view to_string(QueuePriority p) {
  switch (p) {
    case QueuePriority::FIFO: return "fifo";
    case QueuePriority::SmallestFirst: return "smallest_first";
    case QueuePriority::OldestFirst: return "oldest_first";
  }
  return "?";
}

inline QueuePriority parse_queue_priority(std::string_view s) {
  const auto v = detail::lower(s);
  if (v == "fifo") return QueuePriority::FIFO;
  if (v == "smallest_first") return QueuePriority::SmallestFirst;
  if (v == "oldest_first") return QueuePriority::OldestFirst;
  throw ParseError("unknown queue priority '" + std::string(s) + "'");
}

struct DftParams {
  std::size_t queue_capacity = 100;
  std::optional<std::size_t> backpressure_threshold;  // defaults to capacity
  QueuePriority priority = QueuePriority::FIFO;
  Seconds per_unit_overhead = 0.05;
  double edge_compress_ratio = 0.5;
};

struct OssParams {
  double p_success = 0.9;
  double edge_compress_ratio = 0.5;
};

enum class ConnectorMode : std::uint8_t {
  Eager,     // forward to the gateway as soon as a message is available
  OnDemand,  // pop only when the target function has an idle replica
};

struct MqttParams {
  std::optional<std::size_t> topic_capacity = 64;
  ConnectorMode connector = ConnectorMode::Eager;
  double edge_compress_ratio = 1.0;
};

/// Everything a backend needs beyond the pipeline itself.
struct BackendParams {
  EdgeParams edge{0.1, 1e-6, 1.0};
  GatewayConfig gateway{};
  DftParams dft{};
  OssParams oss{};
  MqttParams mqtt{};
  /// Resident memory of the intermediate-data service on the fog node, per strategy.
  std::array<Bytes, 3> engine_memory{};
};

}  // namespace sdpbench
