// Serverless platform model for one tier: function replicas behind a gateway.
//
// Sync invocations wait for a replica without bound (the caller is blocked on
// the HTTP call). Async invocations go through the gateway queue, which has a
// bounded count and an optional byte budget; an async invocation that does
// not fit is rejected and its unit is dropped.

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "sdpbench/sim/run_context.hpp"

namespace sdpbench {

enum class InvocationOutcome { Accepted, Rejected };

struct GatewayConfig {
  std::optional<std::size_t> capacity = 32;  // pending async invocations
  std::optional<Bytes> memory_limit;         // pending async payload bytes
};

/// What one execution costs and produces.
struct ExecutionPlan {
  Seconds duration = 0;
  DataUnit output;
};

/// duration = base + per_byte * size; output size = size * output_ratio.
inline ExecutionPlan plan_execution(const FunctionSpec& fn, const DataUnit& unit) {
  ExecutionPlan p;
  p.duration = fn.service_time(unit.size);
  p.output = unit;
  p.output.size = fn.output_size(unit.size);
  p.output.stage_index = unit.stage_index + 1;
  return p;
}

/// Holds a replica until released. Copies share the hold; release is idempotent.
class Lease {
 public:
  Lease() = default;
  explicit Lease(std::function<void()> on_release)
      : state_(std::make_shared<State>(State{std::move(on_release), false})) {}

  void release() const {
    if (!state_ || state_->released) return;
    state_->released = true;
    auto fn = std::move(state_->on_release);
    fn();
  }
  bool released() const { return !state_ || state_->released; }

 private:
  struct State {
    std::function<void()> on_release;
    bool released;
  };
  std::shared_ptr<State> state_;
};

struct InvocationHooks {
  /// Runs after a replica is assigned and before FunctionStart (e.g. an object fetch).
  std::function<void(std::function<void()> proceed)> before_start;
  /// Runs at FunctionEnd. Without it the replica is released immediately.
  std::function<void(DataUnit output, Lease lease)> on_end;
};

struct Invocation {
  std::string function;
  DataUnit unit;
  InvocationMode mode = InvocationMode::Sync;
  Seconds enqueued_at = 0;
  InvocationHooks hooks;
};

class FaasEngine {
 public:
  FaasEngine(RunContext& ctx, TierKind tier, GatewayConfig gateway)
      : ctx_(ctx), tier_(tier), gateway_(gateway) {}

  FaasEngine(const FaasEngine&) = delete;
  FaasEngine& operator=(const FaasEngine&) = delete;

  TierKind tier() const { return tier_; }

  void register_function(FunctionSpec spec) {
    if (spec.replicas < 1) throw std::invalid_argument("function needs at least one replica");
    FunctionState fs;
    fs.spec = std::move(spec);
    auto name = fs.spec.name;
    functions_.insert_or_assign(std::move(name), std::move(fs));
  }

  bool has_function(const std::string& name) const { return functions_.count(name) != 0; }

  const FunctionSpec& function(const std::string& name) const { return state(name).spec; }

  InvocationOutcome invoke(const std::string& name, DataUnit unit, InvocationMode mode,
                           InvocationHooks hooks = {}) {
    auto& fs = state(name);
    Invocation inv{name, std::move(unit), mode, ctx_.now(), std::move(hooks)};
    if (fs.busy < fs.spec.replicas && fs.pending.empty()) {
      start(fs, std::move(inv));
      return InvocationOutcome::Accepted;
    }
    if (mode == InvocationMode::Async) {
      const bool count_full = gateway_.capacity && async_pending_ >= *gateway_.capacity;
      const bool bytes_full =
          gateway_.memory_limit && async_pending_bytes_ + inv.unit.size > *gateway_.memory_limit;
      if (count_full || bytes_full) {
        ++rejected_;
        ctx_.drop(inv.unit, "gateway/" + name, tier_, RunContext::DropSite::Gateway);
        return InvocationOutcome::Rejected;
      }
      ++async_pending_;
      async_pending_bytes_ += inv.unit.size;
      ctx_.ledger().mem_acquire(tier_, inv.unit.size, ctx_.now());
    }
    fs.pending.push_back(std::move(inv));
    return InvocationOutcome::Accepted;
  }

  std::size_t pending_async() const { return async_pending_; }
  std::size_t rejected() const { return rejected_; }
  std::uint32_t busy(const std::string& name) const { return state(name).busy; }
  std::uint32_t peak_busy(const std::string& name) const { return state(name).peak_busy; }
  std::size_t pending(const std::string& name) const { return state(name).pending.size(); }

 private:
  struct FunctionState {
    FunctionSpec spec;
    std::uint32_t busy = 0;
    std::uint32_t peak_busy = 0;
    std::uint32_t warm = 0;
    std::deque<Invocation> pending;
  };

  FunctionState& state(const std::string& name) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw std::out_of_range("function '" + name + "' not registered");
    return it->second;
  }
  const FunctionState& state(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw std::out_of_range("function '" + name + "' not registered");
    return it->second;
  }

  void start(FunctionState& fs, Invocation inv) {
    ++fs.busy;
    fs.peak_busy = std::max(fs.peak_busy, fs.busy);
    auto run = [this, &fs, inv]() mutable { execute(fs, std::move(inv)); };
    if (inv.hooks.before_start) {
      auto hook = inv.hooks.before_start;
      hook(std::move(run));
    } else {
      run();
    }
  }

  void execute(FunctionState& fs, Invocation inv) {
    auto plan = plan_execution(fs.spec, inv.unit);
    if (fs.warm < fs.spec.replicas) {
      ++fs.warm;
      plan.duration += fs.spec.cold_start_penalty;
    }
    ctx_.emit(EventKind::FunctionStart, inv.unit, fs.spec.name, tier_);
    ctx_.ledger().mem_acquire(tier_, fs.spec.mem_footprint, ctx_.now());
    ctx_.kernel().schedule_after(plan.duration, [this, &fs, inv = std::move(inv), plan]() mutable {
      ctx_.emit(EventKind::FunctionEnd, inv.unit, fs.spec.name, tier_);
      ctx_.ledger().mem_release(tier_, fs.spec.mem_footprint, ctx_.now());
      ctx_.ledger().add_cpu(tier_, plan.duration);
      Lease lease([this, &fs] { finish(fs); });
      if (inv.hooks.on_end)
        inv.hooks.on_end(plan.output, lease);
      else
        lease.release();
    });
  }

  void finish(FunctionState& fs) {
    --fs.busy;
    if (fs.pending.empty()) return;
    auto next = std::move(fs.pending.front());
    fs.pending.pop_front();
    if (next.mode == InvocationMode::Async) {
      --async_pending_;
      async_pending_bytes_ -= next.unit.size;
      ctx_.ledger().mem_release(tier_, next.unit.size, ctx_.now());
    }
    start(fs, std::move(next));
  }

  RunContext& ctx_;
  TierKind tier_;
  GatewayConfig gateway_;
  std::map<std::string, FunctionState> functions_;
  std::size_t async_pending_ = 0;
  Bytes async_pending_bytes_ = 0;
  std::size_t rejected_ = 0;
};

/// One engine per tier, created on demand.
class FaasPlatform {
 public:
  FaasPlatform(RunContext& ctx, GatewayConfig gateway) : ctx_(ctx), gateway_(gateway) {}

  FaasEngine& engine(TierKind tier) {
    auto& slot = engines_[index_of(tier)];
    if (!slot) slot = std::make_unique<FaasEngine>(ctx_, tier, gateway_);
    return *slot;
  }

  void register_function(const FunctionSpec& spec) { engine(spec.tier_placement).register_function(spec); }

  FaasEngine& engine_for(const FunctionSpec& spec) { return engine(spec.tier_placement); }

  std::size_t rejected() const {
    std::size_t n = 0;
    for (const auto& e : engines_)
      if (e) n += e->rejected();
    return n;
  }

 private:
  RunContext& ctx_;
  GatewayConfig gateway_;
  std::array<std::unique_ptr<FaasEngine>, 3> engines_{};
};

}  // namespace sdpbench
