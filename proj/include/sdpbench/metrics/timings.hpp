// Per-request processing-time decomposition, read off the event log:
//   P    sum of function execution spans
//   D    completion at the sink minus arrival at the source
//   C_T  D - P
//   DAT  sum of residencies inside storage units
//   NCT  C_T - DAT

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdpbench/core/event_log.hpp"
#include "sdpbench/kernel/resource_ledger.hpp"

namespace sdpbench {

class RequestNotCompleted : public MetricError {
 public:
  using MetricError::MetricError;
};

struct Interval {
  Seconds start = 0;
  Seconds end = 0;
  Seconds length() const { return end - start; }
};

/// Everything the log says about one request.
struct RequestTrace {
  std::optional<Seconds> arrived;
  std::optional<Seconds> completed;
  bool dropped = false;
  std::vector<Interval> functions;
  std::vector<Interval> storage;
  std::set<UnitId> units;
};

struct RequestTimings {
  RequestId request_id{};
  Seconds P = 0;
  Seconds D = 0;
  Seconds C_T = 0;
  Seconds DAT = 0;
  Seconds NCT = 0;
  /// Set when the request was split into parallel units, so spans may overlap.
  bool overlap = false;
};

inline std::map<RequestId, RequestTrace> index_requests(const EventLog& log) {
  std::map<RequestId, RequestTrace> out;
  using Key = std::pair<UnitId, std::string>;
  std::map<Key, Seconds> open_fn, open_st;
  for (const auto& e : log.ordered()) {
    auto& t = out[e.request_id];
    switch (e.kind) {
      case EventKind::RequestArrived: t.arrived = e.timestamp; break;
      case EventKind::RequestCompleted: t.completed = e.timestamp; break;
      case EventKind::UnitDropped: t.dropped = true; break;
      case EventKind::FunctionStart:
        t.units.insert(e.unit_id);
        open_fn[{e.unit_id, e.subject}] = e.timestamp;
        break;
      case EventKind::FunctionEnd: {
        auto it = open_fn.find({e.unit_id, e.subject});
        if (it == open_fn.end()) throw MetricError("FunctionEnd without FunctionStart for " + e.subject);
        t.functions.push_back({it->second, e.timestamp});
        open_fn.erase(it);
        break;
      }
      case EventKind::StorageArrive:
        t.units.insert(e.unit_id);
        open_st[{e.unit_id, e.subject}] = e.timestamp;
        break;
      case EventKind::StorageDepart: {
        auto it = open_st.find({e.unit_id, e.subject});
        if (it == open_st.end()) throw MetricError("StorageDepart without StorageArrive for " + e.subject);
        t.storage.push_back({it->second, e.timestamp});
        open_st.erase(it);
        break;
      }
      default: break;
    }
  }
  return out;
}

inline RequestTimings timings_from_trace(RequestId id, const RequestTrace& t) {
  if (!t.arrived || !t.completed)
    throw RequestNotCompleted("request " + std::to_string(raw(id)) + " did not complete");
  RequestTimings r;
  r.request_id = id;
  for (const auto& i : t.functions) r.P += i.length();
  for (const auto& i : t.storage) r.DAT += i.length();
  r.D = *t.completed - *t.arrived;
  r.overlap = t.units.size() > 1;
  if (r.overlap) {
    r.C_T = std::max(r.D - r.P, 0.0);
    r.NCT = std::max(r.C_T - r.DAT, 0.0);
  } else {
    r.C_T = r.D - r.P;
    r.NCT = r.C_T - r.DAT;
  }
  return r;
}

inline RequestTrace trace_of(const EventLog& log, RequestId id) {
  auto all = index_requests(log);
  auto it = all.find(id);
  if (it == all.end()) throw RequestNotCompleted("request " + std::to_string(raw(id)) + " not in log");
  return it->second;
}

inline RequestTimings request_timings(const EventLog& log, RequestId id) {
  return timings_from_trace(id, trace_of(log, id));
}

inline Seconds computation_time(const EventLog& log, RequestId id) { return request_timings(log, id).P; }
inline Seconds total_duration(const EventLog& log, RequestId id) { return request_timings(log, id).D; }
inline Seconds communication_time(const EventLog& log, RequestId id) { return request_timings(log, id).C_T; }
inline Seconds disk_access_time(const EventLog& log, RequestId id) { return request_timings(log, id).DAT; }
inline Seconds network_communication_time(const EventLog& log, RequestId id) {
  return request_timings(log, id).NCT;
}

/// Timings of every completed request, in request-id order.
inline std::vector<RequestTimings> compute_timings(const EventLog& log) {
  std::vector<RequestTimings> out;
  for (const auto& [id, t] : index_requests(log))
    if (t.arrived && t.completed) out.push_back(timings_from_trace(id, t));
  return out;
}

}  // namespace sdpbench
