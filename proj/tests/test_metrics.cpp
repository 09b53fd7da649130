#include <gtest/gtest.h>

#include "support.hpp"

using namespace sdpbench;
using namespace sdpbench::testing;

namespace {

struct LogBuilder {
  EventLog log;
  void add(Seconds t, EventKind k, std::uint64_t req, std::string subject = "x", std::uint64_t unit = 0) {
    SimEvent e;
    e.timestamp = t;
    e.kind = k;
    e.request_id = RequestId{req};
    e.unit_id = UnitId{kUnitIdBase + (unit ? unit : req)};
    e.subject = std::move(subject);
    log.append(e);
  }
};

/// Arrive 10.0, functions 1.5 s and 2.5 s, storage 1.0 s and 0.5 s, complete 17.2.
LogBuilder reference_log() {
  LogBuilder b;
  b.add(10.0, EventKind::RequestArrived, 0);
  b.add(10.2, EventKind::StorageArrive, 0, "q1");
  b.add(11.2, EventKind::StorageDepart, 0, "q1");
  b.add(11.3, EventKind::FunctionStart, 0, "f1");
  b.add(12.8, EventKind::FunctionEnd, 0, "f1");
  b.add(13.0, EventKind::StorageArrive, 0, "q2");
  b.add(13.5, EventKind::StorageDepart, 0, "q2");
  b.add(13.6, EventKind::FunctionStart, 0, "f2");
  b.add(16.1, EventKind::FunctionEnd, 0, "f2");
  b.add(17.2, EventKind::RequestCompleted, 0, "sink");
  return b;
}

}  // namespace

TEST(Timings, EmptyRequestHasNoComputation) {
  LogBuilder b;
  b.add(1, EventKind::RequestArrived, 0);
  b.add(1, EventKind::RequestCompleted, 0);
  const auto t = request_timings(b.log, RequestId{0});
  EXPECT_EQ(t.P, 0.0);
  EXPECT_EQ(t.D, 0.0);
  EXPECT_EQ(t.DAT, 0.0);
}

TEST(Timings, ReferenceDecomposition) {
  const auto b = reference_log();
  const RequestId id{0};
  EXPECT_NEAR(computation_time(b.log, id), 4.0, 1e-12);
  EXPECT_NEAR(total_duration(b.log, id), 7.2, 1e-12);
  EXPECT_NEAR(communication_time(b.log, id), 3.2, 1e-12);
  EXPECT_NEAR(disk_access_time(b.log, id), 1.5, 1e-12);
  EXPECT_NEAR(network_communication_time(b.log, id), 1.7, 1e-12);
  EXPECT_FALSE(request_timings(b.log, id).overlap);
}

TEST(Timings, IncompleteRequestIsAnError) {
  LogBuilder b;
  b.add(0, EventKind::RequestArrived, 0);
  b.add(1, EventKind::UnitDropped, 0);
  EXPECT_THROW(computation_time(b.log, RequestId{0}), RequestNotCompleted);
  EXPECT_THROW(total_duration(b.log, RequestId{5}), RequestNotCompleted);
  EXPECT_TRUE(compute_timings(b.log).empty());
}

TEST(Timings, UnmatchedEndIsAnError) {
  LogBuilder b;
  b.add(0, EventKind::RequestArrived, 0);
  b.add(1, EventKind::FunctionEnd, 0, "f");
  EXPECT_THROW(index_requests(b.log), MetricError);
}

TEST(Timings, ParallelFramesClampAndFlag) {
  LogBuilder b;
  b.add(0, EventKind::RequestArrived, 0);
  for (std::uint64_t u = 1; u <= 3; ++u) b.add(0, EventKind::FunctionStart, 0, "yolo", u);
  for (std::uint64_t u = 1; u <= 3; ++u) b.add(2, EventKind::FunctionEnd, 0, "yolo", u);
  b.add(2.5, EventKind::RequestCompleted, 0);
  const auto t = request_timings(b.log, RequestId{0});
  EXPECT_NEAR(t.P, 6.0, 1e-12);
  EXPECT_TRUE(t.overlap);
  EXPECT_EQ(t.C_T, 0.0);
  EXPECT_EQ(t.NCT, 0.0);
}

TEST(Summary, DropRatio) {
  LogBuilder none;
  for (std::uint64_t r = 0; r < 10; ++r) {
    none.add(0, EventKind::RequestArrived, r);
    none.add(1, EventKind::RequestCompleted, r);
  }
  ResourceLedger ledger(free_topology().tiers);
  ledger.set_window(0, 1);
  EXPECT_EQ(summarize_run(none.log, ledger, {}).drop_ratio, 0.0);

  LogBuilder some;
  for (std::uint64_t r = 0; r < 100; ++r) {
    some.add(0, EventKind::RequestArrived, r);
    some.add(1, r < 2 ? EventKind::UnitDropped : EventKind::RequestCompleted, r);
  }
  const auto s = summarize_run(some.log, ledger, {});
  EXPECT_DOUBLE_EQ(s.drop_ratio, 0.02);
  EXPECT_EQ(s.completed, 98u);
  EXPECT_EQ(s.timings.size(), 98u);
}

TEST(Summary, ProcessingTimeSpansDroppedWork) {
  LogBuilder b;
  b.add(2, EventKind::RequestArrived, 0);
  b.add(3, EventKind::UnitDropped, 0);
  b.add(2, EventKind::RequestArrived, 1);
  b.add(9, EventKind::UnitDropped, 1);
  ResourceLedger ledger(free_topology().tiers);
  ledger.set_window(0, 1);
  const auto s = summarize_run(b.log, ledger, {});
  EXPECT_EQ(s.completed, 0u);
  EXPECT_DOUBLE_EQ(s.processing_time, 7.0);
  EXPECT_EQ(s.mean_D, 0.0);
}

// Brute-force oracle over the raw event list, without index_requests.
TEST(Summary, MeansMatchABruteForceScan) {
  for (auto strategy : kAllStrategies) {
    for (auto app : {Application::Aeneas, Application::PocketSphinx}) {
      const auto out = run_cell(default_calibration(), cell(app, strategy, 20, 3));
      const auto s = summarize(out);
      const auto& events = out.ctx->log().events();
      double sum_P = 0, sum_D = 0, sum_DAT = 0;
      std::size_t completed = 0;
      for (std::uint64_t r = 0; r < 20; ++r) {
        double arrived = -1, done = -1, p = 0, dat = 0;
        for (const auto& e : events) {
          if (raw(e.request_id) != r) continue;
          if (e.kind == EventKind::RequestArrived) arrived = e.timestamp;
          if (e.kind == EventKind::RequestCompleted) done = e.timestamp;
          if (e.kind == EventKind::FunctionEnd || e.kind == EventKind::StorageDepart) {
            const auto open = e.kind == EventKind::FunctionEnd ? EventKind::FunctionStart : EventKind::StorageArrive;
            double start = -1;
            for (const auto& o : events)
              if (o.kind == open && o.unit_id == e.unit_id && o.subject == e.subject && o.seq < e.seq)
                start = o.timestamp;
            (e.kind == EventKind::FunctionEnd ? p : dat) += e.timestamp - start;
          }
        }
        if (done < 0) continue;
        ++completed;
        sum_P += p;
        sum_D += done - arrived;
        sum_DAT += dat;
      }
      ASSERT_EQ(completed, s.completed);
      ASSERT_GT(completed, 0u);
      const double n = static_cast<double>(completed);
      EXPECT_NEAR(s.mean_P, sum_P / n, 1e-9);
      EXPECT_NEAR(s.mean_D, sum_D / n, 1e-9);
      EXPECT_NEAR(s.mean_DAT, sum_DAT / n, 1e-9);
      EXPECT_NEAR(s.mean_D, s.mean_P + s.mean_C_T, 1e-9);
      EXPECT_NEAR(s.mean_C_T, s.mean_DAT + s.mean_NCT, 1e-9);
    }
  }
}

// With no edge work and idle services, network time is exactly the modeled link time.
TEST(Timings, NetworkTimeEqualsLinkModel) {
  auto cal = default_calibration();
  cal.backend.edge.base_time = 0;
  cal.backend.edge.per_byte_time = 0;
  const auto out = run_cell(cal, cell(Application::Aeneas, Strategy::MQTT, 1));
  const Topology topo{cal.tiers, cal.links};
  double link_time = 0;
  for (const auto& e : events_of(out.ctx->log(), EventKind::NetTransfer))
    link_time += topo.link(e.link.from, e.link.to).transfer_time(e.bytes);
  const auto t = request_timings(out.ctx->log(), RequestId{0});
  EXPECT_NEAR(t.NCT, link_time, 1e-9);
  EXPECT_GT(link_time, 0.0);
}

TEST(Timings, FreeTransportLeavesNoCommunication) {
  const auto out = run_cell(zero_cost_calibration(), cell(Application::PocketSphinx, Strategy::DFT, 1));
  const auto t = request_timings(out.ctx->log(), RequestId{0});
  EXPECT_NEAR(t.C_T, 0.0, 1e-9);
  EXPECT_NEAR(t.NCT, 0.0, 1e-9);
}

TEST(Timings, BurstMaxDurationBoundsTheMean) {
  const auto out = run_cell(default_calibration(), cell(Application::PocketSphinx, Strategy::DFT, 30));
  const auto s = summarize(out);
  double max_D = 0;
  for (const auto& t : s.timings) max_D = std::max(max_D, t.D);
  EXPECT_GE(max_D, s.mean_D);
}

TEST(Summary, JsonAndCsvRoundTrip) {
  const auto s = summarize(run_cell(default_calibration(), cell(Application::Aeneas, Strategy::OSS, 5)));
  const auto back = summary_from_json(nlohmann::json::parse(to_json(s).dump()));
  EXPECT_EQ(back.completed, s.completed);
  EXPECT_EQ(back.mean_D, s.mean_D);
  EXPECT_EQ(back.resources.net_tx_kb, s.resources.net_tx_kb);
  EXPECT_EQ(back.resources.cpu_percent, s.resources.cpu_percent);
  EXPECT_EQ(summary_csv_row(back), summary_csv_row(s));
  const auto header = summary_csv_header();
  const auto row = summary_csv_row(s);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Summary, ResourcesAreReportedInKilobytes) {
  ResourceLedger ledger(free_topology().tiers);
  ledger.add_disk_write(TierKind::Fog, 2048);
  ledger.add_disk_write(TierKind::Cloud, 1024);
  ledger.add_net(TierKind::Edge, TierKind::Fog, 4096);
  ledger.set_window(0, 1);
  const auto r = summarize_resources(ledger);
  EXPECT_DOUBLE_EQ(r.disk_write_kb, 3.0);
  EXPECT_DOUBLE_EQ(r.net_tx_kb, 4.0);
  EXPECT_DOUBLE_EQ(r.net_rx_kb, 4.0);
}

// Every completed request satisfies both identities on fan-out-free pipelines.
TEST(Identity, HoldsOnEveryCompletedRequest) {
  for (auto strategy : kAllStrategies)
    for (auto app : {Application::Aeneas, Application::PocketSphinx}) {
      const auto s = summarize(run_cell(default_calibration(), cell(app, strategy, 25, 8)));
      for (const auto& t : s.timings) {
        EXPECT_FALSE(t.overlap);
        EXPECT_NEAR(t.D, t.P + t.C_T, 1e-9);
        EXPECT_NEAR(t.C_T, t.DAT + t.NCT, 1e-9);
        EXPECT_GE(t.NCT, -1e-9);
        EXPECT_GE(t.DAT, 0.0);
      }
    }
}

TEST(Conservation, InjectedEqualsCompletedPlusDroppedPlusInFlight) {
  for (auto strategy : kAllStrategies)
    for (auto app : kAllApplications) {
      const auto out = run_cell(default_calibration(), cell(app, strategy, app == Application::Video ? 10 : 60));
      const auto s = summarize(out);
      EXPECT_EQ(s.injected, s.completed + s.dropped + s.in_flight);
      EXPECT_EQ(s.in_flight, 0u);
      const auto& u = out.ctx->units();
      EXPECT_EQ(u.injected + u.spawned, u.at_sink + u.dropped);
    }
}
