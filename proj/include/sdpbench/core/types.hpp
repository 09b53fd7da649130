// Shared domain types for the serverless data pipeline emulator.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdpbench {

/// Virtual time in seconds. Resolution contract is 1e-9 s.
using Seconds = double;
using Bytes = std::uint64_t;

inline constexpr Seconds kTimeResolution = 1e-9;

enum class RequestId : std::uint64_t {};
enum class UnitId : std::uint64_t {};

/// Unit ids are allocated from this offset so the two id spaces never overlap.
inline constexpr std::uint64_t kUnitIdBase = 1ULL << 32;

constexpr std::uint64_t raw(RequestId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(UnitId id) { return static_cast<std::uint64_t>(id); }

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Enumerations and their textual names.

enum class TierKind : std::uint8_t { Edge, Fog, Cloud };
enum class Application : std::uint8_t { Aeneas, PocketSphinx, Video };
enum class Strategy : std::uint8_t { DFT, OSS, MQTT };
enum class InvocationMode : std::uint8_t { Sync, Async };
enum class StorageKind : std::uint8_t { FlowQueue, Bucket, Topic };
enum class RequestStatus : std::uint8_t { InFlight, Completed, Dropped };

inline constexpr std::array kAllTiers{TierKind::Edge, TierKind::Fog, TierKind::Cloud};
inline constexpr std::array kAllApplications{Application::Aeneas, Application::PocketSphinx,
                                             Application::Video};
inline constexpr std::array kAllStrategies{Strategy::DFT, Strategy::OSS, Strategy::MQTT};

constexpr std::size_t index_of(TierKind t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index_of(Strategy s) { return static_cast<std::size_t>(s); }
constexpr std::size_t index_of(Application a) { return static_cast<std::size_t>(a); }

constexpr std::string_view to_string(TierKind t) {
  switch (t) {
    case TierKind::Edge: return "edge";
    case TierKind::Fog: return "fog";
    case TierKind::Cloud: return "cloud";
  }
  return "?";
}

constexpr std::string_view to_string(Application a) {
  switch (a) {
    case Application::Aeneas: return "aeneas";
    case Application::PocketSphinx: return "pocketsphinx";
    case Application::Video: return "video";
  }
  return "?";
}

constexpr std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::DFT: return "dft";
    case Strategy::OSS: return "oss";
    case Strategy::MQTT: return "mqtt";
  }
  return "?";
}

/// Upper-case label used in report tables.
constexpr std::string_view label(Strategy s) {
  switch (s) {
    case Strategy::DFT: return "DFT";
    case Strategy::OSS: return "OSS";
    case Strategy::MQTT: return "MQTT";
  }
  return "?";
}

constexpr std::string_view to_string(InvocationMode m) {
  return m == InvocationMode::Sync ? "sync" : "async";
}

constexpr std::string_view to_string(StorageKind k) {
  switch (k) {
    case StorageKind::FlowQueue: return "flow_queue";
    case StorageKind::Bucket: return "bucket";
    case StorageKind::Topic: return "topic";
  }
  return "?";
}

constexpr std::string_view to_string(RequestStatus s) {
  switch (s) {
    case RequestStatus::InFlight: return "in_flight";
    case RequestStatus::Completed: return "completed";
    case RequestStatus::Dropped: return "dropped";
  }
  return "?";
}

namespace detail {
inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  return out;
}
}  // namespace detail

inline TierKind parse_tier(std::string_view s) {
  const auto v = detail::lower(s);
  for (auto t : kAllTiers)
    if (v == to_string(t)) return t;
  throw ParseError("unknown tier '" + std::string(s) + "'");
}

inline Application parse_application(std::string_view s) {
  const auto v = detail::lower(s);
  for (auto a : kAllApplications)
    if (v == to_string(a)) return a;
  throw ParseError("unknown application '" + std::string(s) + "'");
}

inline Strategy parse_strategy(std::string_view s) {
  auto v = detail::lower(s);
  if (v == "mq") v = "mqtt";
  for (auto st : kAllStrategies)
    if (v == to_string(st)) return st;
  throw ParseError("unknown strategy '" + std::string(s) + "'");
}

inline InvocationMode parse_invocation_mode(std::string_view s) {
  const auto v = detail::lower(s);
  if (v == "sync") return InvocationMode::Sync;
  if (v == "async") return InvocationMode::Async;
  throw ParseError("unknown invocation mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Infrastructure.

struct Tier {
  TierKind kind = TierKind::Fog;
  std::uint32_t cpu_cores = 1;
  Bytes mem_capacity = 0;
  double disk_read_rate = 0;   // bytes/second
  double disk_write_rate = 0;  // bytes/second
};

/// Directed link. A Fog->Fog link models intra-fog (loopback) traffic.
struct NetworkLink {
  TierKind from = TierKind::Edge;
  TierKind to = TierKind::Fog;
  double bandwidth = 0;  // bytes/second
  Seconds latency = 0;

  Seconds transfer_time(Bytes bytes) const {
    return latency + static_cast<double>(bytes) / bandwidth;
  }
};

// ---------------------------------------------------------------------------
// Payload and request bookkeeping.

struct DataUnit {
  UnitId unit_id{};
  RequestId request_id{};
  Bytes size = 0;
  std::size_t stage_index = 0;
  Seconds created_at = 0;
};

struct RequestRecord {
  RequestId request_id{};
  Seconds arrival_at_source = 0;
  std::optional<Seconds> completion_at_sink;
  RequestStatus status = RequestStatus::InFlight;
};

// ---------------------------------------------------------------------------
// Pipeline description.

struct FunctionSpec {
  std::string name;
  TierKind tier_placement = TierKind::Fog;
  Seconds base_time = 0;
  double per_byte_time = 0;  // seconds/byte
  Bytes mem_footprint = 0;
  double output_ratio = 1.0;
  std::uint32_t replicas = 1;
  InvocationMode invocation_mode = InvocationMode::Sync;
  Seconds cold_start_penalty = 0;
  /// Number of output units produced per input unit (video split stage).
  std::uint32_t fan_out = 1;

  Seconds service_time(Bytes input) const {
    return base_time + per_byte_time * static_cast<double>(input);
  }
  Bytes output_size(Bytes input) const;
};

/// Output size after the multiplicative transform, never below one byte.
inline Bytes FunctionSpec::output_size(Bytes input) const {
  const double scaled = static_cast<double>(input) * output_ratio;
  const auto rounded = static_cast<Bytes>(scaled + 0.5);
  return rounded == 0 ? 1 : rounded;
}

struct StorageUnitSpec {
  std::string name;
  StorageKind kind = StorageKind::FlowQueue;
  std::optional<std::size_t> capacity;  // nullopt means unbounded
  TierKind tier_placement = TierKind::Fog;
  /// Stage index this unit feeds; nullopt marks a terminal (sink-side) unit.
  std::optional<std::size_t> feeds_stage;
};

struct PipelineSpec {
  Application application = Application::Aeneas;
  Strategy strategy = Strategy::DFT;
  std::vector<FunctionSpec> stages;
  std::vector<StorageUnitSpec> storage_units;
  std::size_t function_count = 0;

  const StorageUnitSpec* input_of(std::size_t stage) const {
    for (const auto& su : storage_units)
      if (su.feeds_stage && *su.feeds_stage == stage) return &su;
    return nullptr;
  }
};

/// Function counts per (strategy, application).
constexpr std::size_t expected_function_count(Application app, Strategy strategy) {
  constexpr std::size_t table[3][3] = {
      {2, 3, 3},  // DFT
      {5, 6, 6},  // OSS
      {2, 3, 3},  // MQTT
  };
  return table[index_of(strategy)][index_of(app)];
}

constexpr StorageKind storage_kind_for(Strategy s) {
  switch (s) {
    case Strategy::DFT: return StorageKind::FlowQueue;
    case Strategy::OSS: return StorageKind::Bucket;
    case Strategy::MQTT: return StorageKind::Topic;
  }
  return StorageKind::FlowQueue;
}

}  // namespace sdpbench

template <>
struct std::hash<sdpbench::RequestId> {
  std::size_t operator()(sdpbench::RequestId id) const noexcept {
    return std::hash<std::uint64_t>{}(sdpbench::raw(id));
  }
};

template <>
struct std::hash<sdpbench::UnitId> {
  std::size_t operator()(sdpbench::UnitId id) const noexcept {
    return std::hash<std::uint64_t>{}(sdpbench::raw(id));
  }
};
