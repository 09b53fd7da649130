#include <gtest/gtest.h>

#include "support.hpp"

using namespace sdpbench;
using namespace sdpbench::testing;

namespace {

struct Bench {
  RunContext ctx{free_topology()};
  FaasEngine engine{ctx, TierKind::Fog, GatewayConfig{}};

  DataUnit unit(Bytes size = 1000, Seconds at = 0) { return ctx.new_request(at, size); }

  std::vector<Seconds> starts(const std::string& fn = "") {
    std::vector<Seconds> out;
    for (const auto& e : events_of(ctx.log(), EventKind::FunctionStart, fn)) out.push_back(e.timestamp);
    return out;
  }
};

}  // namespace

TEST(Execute, ConstantModelIgnoresSize) {
  EXPECT_DOUBLE_EQ(plan_execution(function("f", 1.0), DataUnit{{}, {}, 12345, 0, 0}).duration, 1.0);
}

TEST(Execute, PerByteCostAddsToBase) {
  const auto p = plan_execution(function("f", 0.5, 1e-6), DataUnit{{}, {}, 1'000'000, 0, 0});
  EXPECT_DOUBLE_EQ(p.duration, 1.5);
}

TEST(Execute, OutputRatioScalesSize) {
  const auto p = plan_execution(function("f", 0, 0, 0.1), DataUnit{{}, {}, 1'000'000, 2, 0});
  EXPECT_EQ(p.output.size, 100'000u);
  EXPECT_EQ(p.output.stage_index, 3u);
}

TEST(Invoke, IdleReplicaStartsImmediately) {
  Bench b;
  b.engine.register_function(function("f", 2.0));
  b.ctx.kernel().schedule(3.0, [&] { b.engine.invoke("f", b.unit(), InvocationMode::Sync); });
  b.ctx.kernel().run_until_idle();
  EXPECT_EQ(b.starts(), (std::vector<Seconds>{3.0}));
  const auto ends = events_of(b.ctx.log(), EventKind::FunctionEnd);
  ASSERT_EQ(ends.size(), 1u);
  EXPECT_DOUBLE_EQ(ends[0].timestamp, 5.0);
  EXPECT_DOUBLE_EQ(b.ctx.ledger().counters(TierKind::Fog).cpu_busy_seconds, 2.0);
}

TEST(Invoke, BusyReplicaDelaysStartUntilItFrees) {
  Bench b;
  b.engine.register_function(function("f", 10.0));
  b.ctx.kernel().schedule(0, [&] { b.engine.invoke("f", b.unit(), InvocationMode::Sync); });
  b.ctx.kernel().schedule(4, [&] { b.engine.invoke("f", b.unit(), InvocationMode::Sync); });
  b.ctx.kernel().run_until_idle();
  EXPECT_EQ(b.starts(), (std::vector<Seconds>{0.0, 10.0}));
}

TEST(Invoke, FullGatewayRejectsAndDrops) {
  RunContext ctx(free_topology());
  FaasEngine engine(ctx, TierKind::Fog, GatewayConfig{0, std::nullopt});
  engine.register_function(function("f", 5.0));
  InvocationOutcome second{};
  DataUnit victim;
  ctx.kernel().schedule(0, [&] {
    EXPECT_EQ(engine.invoke("f", ctx.new_request(0, 10), InvocationMode::Async), InvocationOutcome::Accepted);
    victim = ctx.new_request(0, 10);
    second = engine.invoke("f", victim, InvocationMode::Async);
  });
  ctx.kernel().run_until_idle();
  EXPECT_EQ(second, InvocationOutcome::Rejected);
  EXPECT_EQ(engine.rejected(), 1u);
  const auto drops = events_of(ctx.log(), EventKind::UnitDropped);
  ASSERT_EQ(drops.size(), 1u);
  EXPECT_EQ(drops[0].unit_id, victim.unit_id);
  EXPECT_EQ(ctx.request(victim.request_id).status, RequestStatus::Dropped);
  EXPECT_EQ(ctx.units().dropped_at_gateway, 1u);
}

TEST(Invoke, ByteLimitRejectsLargePayloads) {
  RunContext ctx(free_topology());
  FaasEngine engine(ctx, TierKind::Fog, GatewayConfig{std::nullopt, 100});
  engine.register_function(function("f", 5.0));
  std::vector<InvocationOutcome> got;
  ctx.kernel().schedule(0, [&] {
    for (Bytes size : {10, 60, 60, 30}) got.push_back(engine.invoke("f", ctx.new_request(0, size), InvocationMode::Async));
  });
  ctx.kernel().run_until_idle();
  EXPECT_EQ(got, (std::vector<InvocationOutcome>{InvocationOutcome::Accepted, InvocationOutcome::Accepted,
                                                 InvocationOutcome::Rejected, InvocationOutcome::Accepted}));
}

TEST(Invoke, SyncInvocationsAreNeverRejected) {
  RunContext ctx(free_topology());
  FaasEngine engine(ctx, TierKind::Fog, GatewayConfig{0, std::nullopt});
  engine.register_function(function("f", 1.0));
  ctx.kernel().schedule(0, [&] {
    for (int i = 0; i < 5; ++i)
      EXPECT_EQ(engine.invoke("f", ctx.new_request(0, 1), InvocationMode::Sync), InvocationOutcome::Accepted);
  });
  ctx.kernel().run_until_idle();
  EXPECT_EQ(events_of(ctx.log(), EventKind::FunctionEnd).size(), 5u);
}

TEST(Invoke, UnknownFunctionThrows) {
  Bench b;
  EXPECT_THROW(b.engine.invoke("nope", b.unit(), InvocationMode::Sync), std::out_of_range);
  EXPECT_THROW(b.engine.register_function(function("f", 1, 0, 1, 0)), std::invalid_argument);
}

TEST(Invoke, LeaseHoldsTheReplicaUntilReleased) {
  Bench b;
  b.engine.register_function(function("f", 1.0));
  InvocationHooks hold;
  hold.on_end = [&](DataUnit, Lease lease) {
    b.ctx.kernel().schedule_after(4.0, [lease] { lease.release(); });
  };
  b.ctx.kernel().schedule(0, [&] {
    b.engine.invoke("f", b.unit(), InvocationMode::Sync, hold);
    b.engine.invoke("f", b.unit(), InvocationMode::Sync);
  });
  b.ctx.kernel().run_until_idle();
  EXPECT_EQ(b.starts(), (std::vector<Seconds>{0.0, 5.0}));
}

TEST(Invoke, BeforeStartDelaysTheFunctionButHoldsTheReplica) {
  Bench b;
  b.engine.register_function(function("f", 1.0));
  InvocationHooks fetch;
  fetch.before_start = [&](std::function<void()> go) { b.ctx.kernel().schedule_after(2.0, go); };
  b.ctx.kernel().schedule(0, [&] {
    b.engine.invoke("f", b.unit(), InvocationMode::Sync, fetch);
    b.engine.invoke("f", b.unit(), InvocationMode::Sync);
  });
  b.ctx.kernel().run_until_idle();
  EXPECT_EQ(b.starts(), (std::vector<Seconds>{2.0, 3.0}));
}

TEST(Invoke, ColdStartPenaltyAppliesOncePerReplica) {
  Bench b;
  auto f = function("f", 1.0, 0, 1.0, 2);
  f.cold_start_penalty = 0.5;
  b.engine.register_function(f);
  b.ctx.kernel().schedule(0, [&] {
    for (int i = 0; i < 4; ++i) b.engine.invoke("f", b.unit(), InvocationMode::Sync);
  });
  b.ctx.kernel().run_until_idle();
  EXPECT_EQ(b.starts(), (std::vector<Seconds>{0.0, 0.0, 1.5, 1.5}));
}

// Random invocation streams: replica cap, FIFO order per function, work conservation.
TEST(InvokeProperty, ReplicaCapFifoAndWorkConservation) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    RunContext ctx(free_topology());
    FaasEngine engine(ctx, TierKind::Fog, GatewayConfig{std::nullopt, std::nullopt});
    const std::uint32_t replicas = 1 + rng() % 3;
    engine.register_function(function("f", 0.5, 1e-3, 1.0, replicas));
    std::vector<std::pair<Seconds, UnitId>> submitted;
    const int n = 5 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      const Seconds at = std::uniform_real_distribution<double>(0, 5)(rng);
      const Bytes size = 1 + rng() % 2000;
      ctx.kernel().schedule(at, [&, size] {
        auto u = ctx.new_request(ctx.now(), size);
        submitted.push_back({ctx.now(), u.unit_id});
        engine.invoke("f", u, rng() % 2 ? InvocationMode::Sync : InvocationMode::Async);
      });
    }
    ctx.kernel().run_until_idle();
    EXPECT_LE(engine.peak_busy("f"), replicas);

    std::vector<UnitId> start_order;
    std::map<UnitId, Seconds> start_at, end_at;
    for (const auto& e : ctx.log().ordered()) {
      if (e.kind == EventKind::FunctionStart) {
        start_order.push_back(e.unit_id);
        start_at[e.unit_id] = e.timestamp;
      }
      if (e.kind == EventKind::FunctionEnd) end_at[e.unit_id] = e.timestamp;
    }
    std::vector<UnitId> submit_order;
    for (const auto& s : submitted) submit_order.push_back(s.second);
    EXPECT_EQ(start_order, submit_order);

    // A unit that waited must have started exactly when some replica ended.
    for (const auto& [at, id] : submitted) {
      if (start_at[id] <= at) continue;
      bool matched = false;
      for (const auto& [other, end] : end_at) matched = matched || end == start_at[id];
      EXPECT_TRUE(matched);
    }
  }
}
