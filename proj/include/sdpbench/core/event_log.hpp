// Append-only event log and its NDJSON serialization.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sdpbench/core/types.hpp"

namespace sdpbench {

enum class EventKind : std::uint8_t {
  RequestArrived,
  FunctionStart,
  FunctionEnd,
  StorageArrive,
  StorageDepart,
  NetTransfer,
  DiskRead,
  DiskWrite,
  UnitDropped,
  RequestCompleted,
};

inline constexpr std::array kAllEventKinds{
    EventKind::RequestArrived, EventKind::FunctionStart, EventKind::FunctionEnd,
    EventKind::StorageArrive,  EventKind::StorageDepart, EventKind::NetTransfer,
    EventKind::DiskRead,       EventKind::DiskWrite,     EventKind::UnitDropped,
    EventKind::RequestCompleted};

constexpr std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::RequestArrived: return "RequestArrived";
    case EventKind::FunctionStart: return "FunctionStart";
    case EventKind::FunctionEnd: return "FunctionEnd";
    case EventKind::StorageArrive: return "StorageArrive";
    case EventKind::StorageDepart: return "StorageDepart";
    case EventKind::NetTransfer: return "NetTransfer";
    case EventKind::DiskRead: return "DiskRead";
    case EventKind::DiskWrite: return "DiskWrite";
    case EventKind::UnitDropped: return "UnitDropped";
    case EventKind::RequestCompleted: return "RequestCompleted";
  }
  return "?";
}

inline EventKind parse_event_kind(std::string_view s) {
  for (auto k : kAllEventKinds)
    if (s == to_string(k)) return k;
  throw ParseError("unknown event kind '" + std::string(s) + "'");
}

struct LinkRef {
  TierKind from = TierKind::Edge;
  TierKind to = TierKind::Fog;
  friend bool operator==(const LinkRef&, const LinkRef&) = default;
};

/// One log record. `bytes` is meaningful for NetTransfer and Disk* events,
/// `link` for NetTransfer, `tier` for Disk*, Function* and Storage* events.
struct SimEvent {
  Seconds timestamp = 0;
  EventKind kind = EventKind::RequestArrived;
  RequestId request_id{};
  UnitId unit_id{};
  std::string subject;
  Bytes bytes = 0;
  LinkRef link{};
  TierKind tier = TierKind::Fog;
  std::uint64_t seq = 0;  // assigned by the log
};

class CausalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EventLog {
 public:
  /// Appends `event`, rejecting it if it precedes an earlier event of the same request.
  void append(SimEvent event) {
    auto [it, inserted] = last_by_request_.try_emplace(event.request_id, event.timestamp);
    if (!inserted) {
      if (event.timestamp < it->second)
        throw CausalityError("event at t=" + std::to_string(event.timestamp) + " for request " +
                             std::to_string(raw(event.request_id)) + " precedes t=" +
                             std::to_string(it->second));
      it->second = event.timestamp;
    }
    event.seq = next_seq_++;
    events_.push_back(std::move(event));
  }

  const std::vector<SimEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Events in total (timestamp, seq) order.
  std::vector<SimEvent> ordered() const {
    auto out = events_;
    std::stable_sort(out.begin(), out.end(), [](const SimEvent& a, const SimEvent& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.seq < b.seq;
    });
    return out;
  }

 private:
  std::vector<SimEvent> events_;
  std::unordered_map<RequestId, Seconds> last_by_request_;
  std::uint64_t next_seq_ = 0;
};

// ---------------------------------------------------------------------------
// NDJSON: a `{"schema":"v1"}` header line, then one event per line.

inline constexpr std::string_view kEventLogSchema = "v1";

inline nlohmann::ordered_json to_json(const SimEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["timestamp"] = e.timestamp;
  j["kind"] = to_string(e.kind);
  j["request_id"] = raw(e.request_id);
  j["unit_id"] = raw(e.unit_id);
  j["subject"] = e.subject;
  switch (e.kind) {
    case EventKind::NetTransfer:
      j["bytes"] = e.bytes;
      j["link"] = {{"from", to_string(e.link.from)}, {"to", to_string(e.link.to)}};
      break;
    case EventKind::DiskRead:
    case EventKind::DiskWrite:
      j["bytes"] = e.bytes;
      j["tier"] = to_string(e.tier);
      break;
    case EventKind::FunctionStart:
    case EventKind::FunctionEnd:
    case EventKind::StorageArrive:
    case EventKind::StorageDepart:
    case EventKind::UnitDropped:
      j["tier"] = to_string(e.tier);
      break;
    default: break;
  }
  return j;
}

inline SimEvent event_from_json(const nlohmann::json& j) {
  SimEvent e;
  e.seq = j.value("seq", std::uint64_t{0});
  e.timestamp = j.at("timestamp").get<double>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.request_id = RequestId{j.at("request_id").get<std::uint64_t>()};
  e.unit_id = UnitId{j.at("unit_id").get<std::uint64_t>()};
  e.subject = j.value("subject", std::string{});
  e.bytes = j.value("bytes", Bytes{0});
  if (j.contains("link")) {
    e.link.from = parse_tier(j["link"].at("from").get<std::string>());
    e.link.to = parse_tier(j["link"].at("to").get<std::string>());
  }
  if (j.contains("tier")) e.tier = parse_tier(j["tier"].get<std::string>());
  return e;
}

inline void write_ndjson(const EventLog& log, std::ostream& os) {
  os << nlohmann::ordered_json{{"schema", kEventLogSchema}}.dump() << '\n';
  for (const auto& e : log.ordered()) os << to_json(e).dump() << '\n';
}

/// Reads a log written by write_ndjson. Events are re-appended in file order,
/// so causality violations in the file surface as CausalityError.
inline EventLog read_ndjson(std::istream& is) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what());
    }
    if (!header_seen) {
      if (!j.contains("schema") || j["schema"] != kEventLogSchema)
        throw ParseError("line 1: missing or unsupported schema header");
      header_seen = true;
      continue;
    }
    try {
      log.append(event_from_json(j));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!header_seen) throw ParseError("empty event log");
  return log;
}

}  // namespace sdpbench
