// Data-flow-tool backend: an edge agent ships compressed units to a fog flow
// engine, where bounded queues with backpressure connect processors that call
// the functions synchronously; results go to a cloud flow engine and its sink.

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpbench/backends/params.hpp"

namespace sdpbench {

enum class Admission { Admitted, Deferred };

class FlowQueue {
 public:
  FlowQueue(RunContext& ctx, std::string name, std::size_t capacity,
            std::optional<std::size_t> threshold = std::nullopt,
            QueuePriority priority = QueuePriority::FIFO, TierKind tier = TierKind::Fog)
      : ctx_(ctx), name_(std::move(name)), capacity_(capacity),
        threshold_(threshold.value_or(capacity)), priority_(priority), tier_(tier) {
    if (capacity_ < 1) throw std::invalid_argument("flow queue '" + name_ + "' needs capacity >= 1");
    if (threshold_ < 1 || threshold_ > capacity_)
      throw std::invalid_argument("flow queue '" + name_ + "' needs 1 <= threshold <= capacity");
  }

  FlowQueue(const FlowQueue&) = delete;
  FlowQueue& operator=(const FlowQueue&) = delete;

  const std::string& name() const { return name_; }
  std::size_t occupancy() const { return items_.size(); }
  std::size_t max_occupancy() const { return max_occupancy_; }
  std::size_t deferred() const { return waiting_.size(); }
  bool empty() const { return items_.empty(); }

  /// Called whenever a unit lands in the queue.
  void on_available(std::function<void()> fn) { on_available_ = std::move(fn); }

  /// Admits the unit, or parks it until occupancy drops below the threshold.
  /// `admitted` runs at admission time in either case.
  Admission enqueue(DataUnit unit, std::function<void()> admitted = {}) {
    if (items_.size() < threshold_ && waiting_.empty()) {
      admit(std::move(unit));
      if (admitted) admitted();
      notify();
      return Admission::Admitted;
    }
    waiting_.push_back({std::move(unit), std::move(admitted)});
    return Admission::Deferred;
  }

  DataUnit dequeue() {
    if (items_.empty()) throw std::logic_error("dequeue from empty flow queue '" + name_ + "'");
    auto it = pick();
    DataUnit unit = it->unit;
    items_.erase(it);
    ctx_.emit(EventKind::StorageDepart, unit, name_, tier_);
    // Lift backpressure before handing the unit on, so producers see the freed slot.
    bool admitted_any = false;
    while (!waiting_.empty() && items_.size() < threshold_) {
      auto w = std::move(waiting_.front());
      waiting_.pop_front();
      admit(std::move(w.unit));
      if (w.admitted) w.admitted();
      admitted_any = true;
    }
    if (admitted_any) notify();
    return unit;
  }

 private:
  struct Item {
    DataUnit unit;
    Seconds arrived;
    std::uint64_t order;
  };
  struct Waiter {
    DataUnit unit;
    std::function<void()> admitted;
  };

  void admit(DataUnit unit) {
    ctx_.emit(EventKind::StorageArrive, unit, name_, tier_);
    items_.push_back(Item{std::move(unit), ctx_.now(), next_order_++});
    max_occupancy_ = std::max(max_occupancy_, items_.size());
  }

  void notify() {
    if (on_available_) on_available_();
  }

  std::vector<Item>::iterator pick() {
    switch (priority_) {
      case QueuePriority::FIFO:
        return items_.begin();
      case QueuePriority::SmallestFirst:
        return std::min_element(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
          return a.unit.size != b.unit.size ? a.unit.size < b.unit.size : a.order < b.order;
        });
      case QueuePriority::OldestFirst:
        return std::min_element(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
          return a.unit.created_at != b.unit.created_at ? a.unit.created_at < b.unit.created_at
                                                        : a.order < b.order;
        });
    }
    return items_.begin();
  }

  RunContext& ctx_;
  std::string name_;
  std::size_t capacity_;
  std::size_t threshold_;
  QueuePriority priority_;
  TierKind tier_;
  std::vector<Item> items_;  // kept in admission order
  std::deque<Waiter> waiting_;
  std::function<void()> on_available_;
  std::size_t max_occupancy_ = 0;
  std::uint64_t next_order_ = 0;
};

enum class ProcessorKind : std::uint8_t { Receive, Compress, Decompress, InvokeFunction, StoreSink };

struct Processor {
  std::string name;
  ProcessorKind kind = ProcessorKind::InvokeFunction;
  Seconds per_unit_overhead = 0;
};

class DftBackend {
 public:
  DftBackend(RunContext& ctx, const PipelineSpec& spec, const BackendParams& params, FaasPlatform& faas)
      : ctx_(ctx), spec_(spec), params_(params), faas_(faas),
        edge_(ctx, EdgeParams{params.edge.base_time, params.edge.per_byte_time,
                              params.dft.edge_compress_ratio}) {
    if (spec.strategy != Strategy::DFT) throw std::invalid_argument("DftBackend needs a DFT pipeline");
    stages_.resize(spec.stages.size());
    for (const auto& su : spec.storage_units) {
      if (!su.feeds_stage) continue;
      auto& st = stages_.at(*su.feeds_stage);
      st.queue = std::make_unique<FlowQueue>(ctx_, su.name, su.capacity.value_or(params.dft.queue_capacity),
                                             params.dft.backpressure_threshold, params.dft.priority,
                                             su.tier_placement);
    }
    for (std::size_t k = 0; k < stages_.size(); ++k) {
      auto& st = stages_[k];
      if (!st.queue) throw std::invalid_argument("stage " + spec.stages[k].name + " has no input queue");
      st.slots = spec.stages[k].replicas;
      st.processor = Processor{"invoke." + spec.stages[k].name, ProcessorKind::InvokeFunction,
                               params.dft.per_unit_overhead};
      st.queue->on_available([this, k] { pump(k); });
    }
  }

  DftBackend(const DftBackend&) = delete;
  DftBackend& operator=(const DftBackend&) = delete;

  /// A request's source unit has arrived at the edge.
  void inject(const DataUnit& unit) {
    edge_.submit(unit, [this, unit](DataUnit packed) {
      ctx_.transfer(packed, TierKind::Edge, TierKind::Fog, "minifi->nifi", [this, unit] {
        // Decompress on arrival; the content repository persists the flow file.
        ctx_.add_overhead(TierKind::Fog, params_.dft.per_unit_overhead);
        ctx_.disk_write(unit, TierKind::Fog, "nifi.content");
        stages_[0].queue->enqueue(unit);
      });
    });
  }

  const FlowQueue& queue(std::size_t stage) const { return *stages_.at(stage).queue; }

 private:
  struct Stage {
    std::unique_ptr<FlowQueue> queue;
    Processor processor;
    std::uint32_t slots = 1;
  };

  void pump(std::size_t k) {
    auto& st = stages_[k];
    while (st.slots > 0 && !st.queue->empty()) {
      --st.slots;
      process(k, st.queue->dequeue());
    }
  }

  void release_slot(std::size_t k) {
    ++stages_[k].slots;
    pump(k);
  }

  void process(std::size_t k, DataUnit unit) {
    const auto& fn = spec_.stages[k];
    ctx_.add_overhead(TierKind::Fog, stages_[k].processor.per_unit_overhead);
    ctx_.transfer(unit, TierKind::Fog, fn.tier_placement, "nifi->" + fn.name, [this, k, unit] {
      const auto& fn = spec_.stages[k];
      InvocationHooks hooks;
      hooks.on_end = [this, k](DataUnit out, Lease lease) {
        lease.release();
        const auto& fn = spec_.stages[k];
        ctx_.transfer(out, fn.tier_placement, TierKind::Fog, fn.name + "->nifi",
                      [this, k, out] { forward(k, out); });
      };
      faas_.engine_for(fn).invoke(fn.name, unit, InvocationMode::Sync, std::move(hooks));
    });
  }

  /// Routes a function result onward; the processor slot frees once every piece is admitted.
  void forward(std::size_t k, DataUnit out) {
    const auto& fn = spec_.stages[k];
    auto pieces = fn.fan_out > 1 ? ctx_.fan_out(out, fn.fan_out) : std::vector<DataUnit>{out};
    if (k + 1 == stages_.size()) {
      release_slot(k);
      for (const auto& p : pieces) send_to_cloud(p);
      return;
    }
    auto remaining = std::make_shared<std::size_t>(pieces.size());
    for (auto& p : pieces) {
      stages_[k + 1].queue->enqueue(p, [this, k, remaining] {
        if (--*remaining == 0) release_slot(k);
      });
    }
  }

  void send_to_cloud(const DataUnit& unit) {
    ctx_.transfer(unit, TierKind::Fog, TierKind::Cloud, "nifi->cloud", [this, unit] {
      // The cloud flow engine stores straight away: its queue has zero residency.
      ctx_.emit(EventKind::StorageArrive, unit, "q.sink", TierKind::Cloud);
      ctx_.emit(EventKind::StorageDepart, unit, "q.sink", TierKind::Cloud);
      ctx_.add_overhead(TierKind::Cloud, params_.dft.per_unit_overhead);
      ctx_.deliver_to_sink(unit, "store.sink");
    });
  }

  RunContext& ctx_;
  const PipelineSpec& spec_;
  const BackendParams& params_;
  FaasPlatform& faas_;
  EdgeAgent edge_;
  std::vector<Stage> stages_;
};

}  // namespace sdpbench
