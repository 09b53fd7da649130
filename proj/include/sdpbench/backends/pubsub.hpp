// Publish/subscribe backend: a fog broker holds one bounded topic per stage.
// A connector subscribed to each topic forwards messages to the gateway as
// asynchronous invocations; each function publishes its result onward.

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

enum class PublishOutcome { Accepted, Dropped };

class Topic {
 public:
  Topic(RunContext& ctx, std::string name, std::optional<std::size_t> capacity, TierKind tier = TierKind::Fog)
      : ctx_(ctx), name_(std::move(name)), capacity_(capacity), tier_(tier) {
    if (capacity_ && *capacity_ < 1) throw std::invalid_argument("topic '" + name_ + "' needs capacity >= 1");
  }

  Topic(const Topic&) = delete;
  Topic& operator=(const Topic&) = delete;

  const std::string& name() const { return name_; }
  TierKind tier() const { return tier_; }
  std::size_t pending() const { return pending_.size(); }
  std::size_t max_pending() const { return max_pending_; }
  std::uint64_t drop_count() const { return drops_; }
  bool empty() const { return pending_.empty(); }

  void on_message(std::function<void()> fn) { on_message_ = std::move(fn); }

  /// Drop-newest when the buffer is full.
  PublishOutcome publish(const DataUnit& unit) {
    if (capacity_ && pending_.size() >= *capacity_) {
      ++drops_;
      ctx_.drop(unit, name_, tier_, RunContext::DropSite::Broker);
      return PublishOutcome::Dropped;
    }
    ctx_.emit(EventKind::StorageArrive, unit, name_, tier_);
    ctx_.ledger().mem_acquire(tier_, unit.size, ctx_.now());
    pending_.push_back(unit);
    max_pending_ = std::max(max_pending_, pending_.size());
    if (on_message_) on_message_();
    return PublishOutcome::Accepted;
  }

  DataUnit pop() {
    if (pending_.empty()) throw std::logic_error("pop from empty topic '" + name_ + "'");
    DataUnit unit = pending_.front();
    pending_.pop_front();
    ctx_.ledger().mem_release(tier_, unit.size, ctx_.now());
    ctx_.emit(EventKind::StorageDepart, unit, name_, tier_);
    return unit;
  }

 private:
  RunContext& ctx_;
  std::string name_;
  std::optional<std::size_t> capacity_;
  TierKind tier_;
  std::deque<DataUnit> pending_;
  std::function<void()> on_message_;
  std::size_t max_pending_ = 0;
  std::uint64_t drops_ = 0;
};

struct ConnectorBinding {
  std::string topic;
  std::string function;
  InvocationMode mode = InvocationMode::Async;
};

/// The connector service for one topic. It handles one message at a time:
/// pull from the broker, post to the gateway, then take the next.
class Connector {
 public:
  using Dispatch = std::function<void(DataUnit)>;

  Connector(RunContext& ctx, Topic& topic, FaasEngine& engine, ConnectorBinding binding, ConnectorMode mode,
            Dispatch dispatch)
      : ctx_(ctx), topic_(topic), engine_(engine), binding_(std::move(binding)), mode_(mode),
        dispatch_(std::move(dispatch)) {
    topic_.on_message([this] { pump(); });
  }

  Connector(const Connector&) = delete;
  Connector& operator=(const Connector&) = delete;

  const ConnectorBinding& binding() const { return binding_; }

  /// Re-checks the topic; called on publish and, in on-demand mode, when a replica frees up.
  void pump() {
    if (busy_ || topic_.empty()) return;
    if (mode_ == ConnectorMode::OnDemand) {
      const auto& fn = engine_.function(binding_.function);
      if (engine_.busy(binding_.function) >= fn.replicas) return;
    }
    busy_ = true;
    DataUnit unit = topic_.pop();
    const auto tier = topic_.tier();
    ctx_.transfer(unit, tier, tier, topic_.name() + "->connector", [this, unit, tier] {
      ctx_.transfer(unit, tier, engine_.tier(), "connector->gateway", [this, unit] {
        busy_ = false;
        dispatch_(unit);
        pump();
      });
    });
  }

 private:
  RunContext& ctx_;
  Topic& topic_;
  FaasEngine& engine_;
  ConnectorBinding binding_;
  ConnectorMode mode_;
  Dispatch dispatch_;
  bool busy_ = false;
};

class MqttBackend {
 public:
  MqttBackend(RunContext& ctx, const PipelineSpec& spec, const BackendParams& params, FaasPlatform& faas)
      : ctx_(ctx), spec_(spec), params_(params), faas_(faas),
        edge_(ctx, EdgeParams{params.edge.base_time, params.edge.per_byte_time,
                              params.mqtt.edge_compress_ratio}) {
    if (spec.strategy != Strategy::MQTT) throw std::invalid_argument("MqttBackend needs an MQTT pipeline");
    inputs_.resize(spec.stages.size());
    for (const auto& su : spec.storage_units) {
      auto cap = su.capacity ? su.capacity : params.mqtt.topic_capacity;
      auto t = std::make_unique<Topic>(ctx_, su.name, cap, su.tier_placement);
      if (su.feeds_stage)
        inputs_.at(*su.feeds_stage) = t.get();
      else if (!sink_)
        sink_ = t.get();
      else
        throw std::invalid_argument("MQTT pipeline has more than one sink topic");
      topics_.push_back(std::move(t));
    }
    if (!sink_) throw std::invalid_argument("MQTT pipeline has no sink topic");
    for (std::size_t k = 0; k < inputs_.size(); ++k) {
      if (!inputs_[k]) throw std::invalid_argument("stage " + spec.stages[k].name + " has no input topic");
      const auto& fn = spec.stages[k];
      connectors_.push_back(std::make_unique<Connector>(
          ctx_, *inputs_[k], faas_.engine_for(fn), ConnectorBinding{inputs_[k]->name(), fn.name},
          params.mqtt.connector, [this, k](DataUnit u) { invoke(k, u); }));
    }
    // The sink subscriber stores each result in the cloud as soon as it is published.
    sink_->on_message([this] {
      while (!sink_->empty()) {
        auto unit = sink_->pop();
        ctx_.transfer(unit, sink_->tier(), TierKind::Cloud, "sink->cloud",
                      [this, unit] { ctx_.deliver_to_sink(unit, "cloud.store"); });
      }
    });
  }

  MqttBackend(const MqttBackend&) = delete;
  MqttBackend& operator=(const MqttBackend&) = delete;

  void inject(const DataUnit& unit) {
    edge_.submit(unit, [this](DataUnit packed) {
      ctx_.transfer(packed, TierKind::Edge, inputs_[0]->tier(), "edge->" + inputs_[0]->name(),
                    [this, packed] { inputs_[0]->publish(packed); });
    });
  }

  const Topic& topic(std::size_t stage) const { return *inputs_.at(stage); }
  const Topic& sink_topic() const { return *sink_; }

  std::uint64_t broker_drops() const {
    std::uint64_t n = 0;
    for (const auto& t : topics_) n += t->drop_count();
    return n;
  }

 private:
  void invoke(std::size_t k, const DataUnit& unit) {
    const auto& fn = spec_.stages[k];
    InvocationHooks hooks;
    hooks.on_end = [this, k](DataUnit out, Lease lease) {
      lease.release();
      if (params_.mqtt.connector == ConnectorMode::OnDemand) connectors_[k]->pump();
      publish_output(k, out);
    };
    faas_.engine_for(fn).invoke(fn.name, unit, InvocationMode::Async, std::move(hooks));
  }

  void publish_output(std::size_t k, const DataUnit& out) {
    const auto& fn = spec_.stages[k];
    Topic* next = k + 1 < inputs_.size() ? inputs_[k + 1] : sink_;
    auto pieces = fn.fan_out > 1 ? ctx_.fan_out(out, fn.fan_out) : std::vector<DataUnit>{out};
    for (const auto& p : pieces)
      ctx_.transfer(p, fn.tier_placement, next->tier(), fn.name + "->" + next->name(),
                    [next, p] { next->publish(p); });
  }

  RunContext& ctx_;
  const PipelineSpec& spec_;
  const BackendParams& params_;
  FaasPlatform& faas_;
  EdgeAgent edge_;
  std::vector<std::unique_ptr<Topic>> topics_;
  std::vector<Topic*> inputs_;
  Topic* sink_ = nullptr;
  std::vector<std::unique_ptr<Connector>> connectors_;
};

}  // namespace sdpbench
