// State shared by every backend during one run: clock, log, ledger, topology,
// request table, and the helpers that move bytes across links and disks.

#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdpbench/core/event_log.hpp"
#include "sdpbench/core/types.hpp"
#include "sdpbench/kernel/kernel.hpp"
#include "sdpbench/kernel/resource_ledger.hpp"

namespace sdpbench {

struct Topology {
  std::vector<Tier> tiers;
  std::vector<NetworkLink> links;

  const NetworkLink& link(TierKind from, TierKind to) const {
    for (const auto& l : links)
      if (l.from == from && l.to == to) return l;
    throw std::out_of_range("no link " + std::string(to_string(from)) + "->" +
                            std::string(to_string(to)));
  }

  const Tier& tier(TierKind k) const {
    for (const auto& t : tiers)
      if (t.kind == k) return t;
    throw std::out_of_range("no tier " + std::string(to_string(k)));
  }
};

/// Unit accounting across the run. A fan-out replaces one unit by several.
struct UnitCounters {
  std::uint64_t injected = 0;   // units created at the source
  std::uint64_t spawned = 0;    // extra units created by fan-out
  std::uint64_t at_sink = 0;    // units that reached the destination
  std::uint64_t dropped = 0;    // units discarded anywhere
  std::uint64_t dropped_at_broker = 0;
  std::uint64_t dropped_at_gateway = 0;
};

class RunContext {
 public:
  RunContext(Topology topology, std::uint64_t event_budget = Kernel::kDefaultEventBudget)
      : topology_(std::move(topology)), kernel_(event_budget), ledger_(topology_.tiers) {}

  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  Kernel& kernel() { return kernel_; }
  EventLog& log() { return log_; }
  const EventLog& log() const { return log_; }
  ResourceLedger& ledger() { return ledger_; }
  const ResourceLedger& ledger() const { return ledger_; }
  const Topology& topology() const { return topology_; }
  Seconds now() const { return kernel_.now(); }

  void emit(EventKind kind, const DataUnit& unit, std::string subject, TierKind tier = TierKind::Fog,
            Bytes bytes = 0, LinkRef link = {}) {
    SimEvent e;
    e.timestamp = now();
    e.kind = kind;
    e.request_id = unit.request_id;
    e.unit_id = unit.unit_id;
    e.subject = std::move(subject);
    e.bytes = bytes;
    e.link = link;
    e.tier = tier;
    log_.append(std::move(e));
  }

  // -- requests and units ---------------------------------------------------

  /// Registers a request arriving at `at` and returns its single source unit.
  DataUnit new_request(Seconds at, Bytes size) {
    const RequestId rid{next_request_++};
    requests_.push_back(RequestRecord{rid, at, std::nullopt, RequestStatus::InFlight});
    pending_at_sink_.push_back(1);
    ++units_.injected;
    return DataUnit{UnitId{next_unit_++}, rid, size, 0, at};
  }

  /// Replaces `unit` by `count` equally sized children; the sink then waits for all of them.
  std::vector<DataUnit> fan_out(const DataUnit& unit, std::uint32_t count) {
    if (count <= 1) return {unit};
    std::vector<DataUnit> out;
    out.reserve(count);
    const Bytes each = std::max<Bytes>(1, unit.size / count);
    for (std::uint32_t i = 0; i < count; ++i)
      out.push_back(DataUnit{UnitId{next_unit_++}, unit.request_id, each, unit.stage_index, now()});
    pending_at_sink_[raw(unit.request_id)] += count - 1;
    units_.spawned += count - 1;
    return out;
  }

  RequestRecord& request(RequestId id) { return requests_.at(raw(id)); }
  const std::vector<RequestRecord>& requests() const { return requests_; }
  const UnitCounters& units() const { return units_; }

  void request_arrived(const DataUnit& unit) { emit(EventKind::RequestArrived, unit, "source", TierKind::Edge); }

  enum class DropSite { Broker, Gateway, Other };

  void drop(const DataUnit& unit, std::string subject, TierKind tier, DropSite site) {
    emit(EventKind::UnitDropped, unit, std::move(subject), tier);
    ++units_.dropped;
    if (site == DropSite::Broker) ++units_.dropped_at_broker;
    if (site == DropSite::Gateway) ++units_.dropped_at_gateway;
    auto& r = request(unit.request_id);
    if (r.status == RequestStatus::InFlight) r.status = RequestStatus::Dropped;
  }

  /// Final store at the destination; the request completes once all its units arrived.
  void deliver_to_sink(const DataUnit& unit, std::string subject) {
    emit(EventKind::DiskWrite, unit, subject, TierKind::Cloud, unit.size);
    ledger_.add_disk_write(TierKind::Cloud, unit.size);
    ++units_.at_sink;
    auto& left = pending_at_sink_[raw(unit.request_id)];
    if (left == 0) throw std::logic_error("unit delivered after its request finished");
    --left;
    auto& r = request(unit.request_id);
    if (left == 0 && r.status == RequestStatus::InFlight) {
      r.status = RequestStatus::Completed;
      r.completion_at_sink = now();
      emit(EventKind::RequestCompleted, unit, std::move(subject), TierKind::Cloud);
    }
  }

  // -- movement -------------------------------------------------------------

  /// Sends `unit` over the from->to link; `done` fires when the last byte arrives.
  void transfer(const DataUnit& unit, TierKind from, TierKind to, std::string subject,
                std::function<void()> done) {
    const auto& l = topology_.link(from, to);
    emit(EventKind::NetTransfer, unit, std::move(subject), from, unit.size, LinkRef{from, to});
    ledger_.add_net(from, to, unit.size);
    kernel_.schedule_after(l.transfer_time(unit.size), std::move(done));
  }

  Seconds disk_write(const DataUnit& unit, TierKind tier, std::string subject) {
    emit(EventKind::DiskWrite, unit, std::move(subject), tier, unit.size);
    ledger_.add_disk_write(tier, unit.size);
    return static_cast<double>(unit.size) / topology_.tier(tier).disk_write_rate;
  }

  Seconds disk_read(const DataUnit& unit, TierKind tier, std::string subject) {
    emit(EventKind::DiskRead, unit, std::move(subject), tier, unit.size);
    ledger_.add_disk_read(tier, unit.size);
    return static_cast<double>(unit.size) / topology_.tier(tier).disk_read_rate;
  }

  /// Engine-level CPU work that is not a function execution (processors, agents).
  void add_overhead(TierKind tier, Seconds cpu) {
    ledger_.add_cpu(tier, cpu);
    overhead_[index_of(tier)] += cpu;
  }
  Seconds overhead(TierKind tier) const { return overhead_[index_of(tier)]; }

 private:
  Topology topology_;
  Kernel kernel_;
  EventLog log_;
  ResourceLedger ledger_;
  std::vector<RequestRecord> requests_;
  std::vector<std::uint64_t> pending_at_sink_;
  UnitCounters units_;
  std::array<Seconds, 3> overhead_{};
  std::uint64_t next_request_ = 0;
  std::uint64_t next_unit_ = kUnitIdBase;
};

struct EdgeParams {
  Seconds base_time = 0;
  double per_byte_time = 0;
  /// Output/input size ratio of edge preprocessing (gzip-style compression).
  double compress_ratio = 1.0;
};

/// The gateway-node service: a single FIFO worker that preprocesses each unit
/// before it leaves the edge. Waiting here counts as network time downstream.
class EdgeAgent {
 public:
  EdgeAgent(RunContext& ctx, EdgeParams params) : ctx_(ctx), params_(params) {}

  void submit(DataUnit unit, std::function<void(DataUnit)> done) {
    backlog_.push_back({std::move(unit), std::move(done)});
    if (!busy_) next();
  }

 private:
  void next() {
    if (backlog_.empty()) {
      busy_ = false;
      return;
    }
    busy_ = true;
    auto job = std::move(backlog_.front());
    backlog_.pop_front();
    const Seconds t = params_.base_time + params_.per_byte_time * static_cast<double>(job.unit.size);
    ctx_.add_overhead(TierKind::Edge, t);
    ctx_.kernel().schedule_after(t, [this, job = std::move(job)]() mutable {
      DataUnit out = job.unit;
      out.size = std::max<Bytes>(
          1, static_cast<Bytes>(static_cast<double>(job.unit.size) * params_.compress_ratio + 0.5));
      job.done(out);
      next();
    });
  }

  struct Job {
    DataUnit unit;
    std::function<void(DataUnit)> done;
  };

  RunContext& ctx_;
  EdgeParams params_;
  std::deque<Job> backlog_;
  bool busy_ = false;
};

}  // namespace sdpbench
