#include <gtest/gtest.h>

#include "support.hpp"

using namespace sdpbench;
using namespace sdpbench::testing;

namespace {

LoadSpec load(std::uint32_t users, ArrivalPattern p = ArrivalPattern::Burst, double rate = 1.0,
              std::uint64_t seed = 1) {
  LoadSpec l;
  l.n_users = users;
  l.pattern = p;
  l.rate = rate;
  l.seed = seed;
  return l;
}

}  // namespace

TEST(Workload, BurstArrivesAtOnce) {
  const auto r = generate_requests(default_calibration().profile(Application::Aeneas), load(10));
  ASSERT_EQ(r.size(), 10u);
  for (const auto& a : r) {
    EXPECT_EQ(a.at, 0.0);
    EXPECT_EQ(a.size, 1'000'000u);
  }
}

TEST(Workload, PoissonIsReproducibleAndOrdered) {
  const auto& prof = default_calibration().profile(Application::PocketSphinx);
  const auto a = generate_requests(prof, load(300, ArrivalPattern::Poisson, 1.0, 99));
  const auto b = generate_requests(prof, load(300, ArrivalPattern::Poisson, 1.0, 99));
  ASSERT_EQ(a.size(), 300u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].at, b[i].at);
    EXPECT_EQ(a[i].size, b[i].size);
    if (i) EXPECT_GE(a[i].at, a[i - 1].at);
  }
  // 299 gaps at 1/s: the last arrival sits near 299 s.
  EXPECT_GT(a.back().at, 200.0);
  EXPECT_LT(a.back().at, 400.0);
  const auto c = generate_requests(prof, load(300, ArrivalPattern::Poisson, 1.0, 100));
  EXPECT_NE(a.back().at, c.back().at);
}

TEST(Workload, SizesFollowTheSeed) {
  auto prof = default_calibration().profile(Application::Video);
  prof.unit_size = {SizeKind::LogNormal, std::log(1e6), 0.5};
  const auto a = generate_requests(prof, load(50, ArrivalPattern::Burst, 1, 3));
  const auto b = generate_requests(prof, load(50, ArrivalPattern::Burst, 1, 3));
  const auto c = generate_requests(prof, load(50, ArrivalPattern::Burst, 1, 4));
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].size, b[i].size);
    differs = differs || a[i].size != c[i].size;
  }
  EXPECT_TRUE(differs);
}

TEST(Workload, UniformSizesStayInRange) {
  auto prof = default_calibration().profile(Application::Aeneas);
  prof.unit_size = {SizeKind::Uniform, 1000, 2000};
  for (const auto& a : generate_requests(prof, load(200))) {
    EXPECT_GE(a.size, 1000u);
    EXPECT_LE(a.size, 2000u);
  }
}

TEST(Workload, InvalidLoadsAreRejected) {
  const auto cal = default_calibration();
  auto bad_fps = load(1);
  bad_fps.fps = 16;
  EXPECT_THROW(generate_requests(cal.profile(Application::Video), bad_fps), LoadError);
  bad_fps.fps = 0;
  EXPECT_THROW(generate_requests(cal.profile(Application::Video), bad_fps), LoadError);
  EXPECT_THROW(generate_requests(cal.profile(Application::Aeneas), load(0)), LoadError);
  EXPECT_THROW(generate_requests(cal.profile(Application::Aeneas), load(5, ArrivalPattern::Poisson, 0)),
               LoadError);
}

TEST(Workload, FpsOnlyMattersForVideo) {
  auto l = load(1);
  l.fps = 99;
  EXPECT_NO_THROW(generate_requests(default_calibration().profile(Application::Aeneas), l));
}

TEST(VideoMultiplier, FramesPerChunk) {
  EXPECT_EQ(video_stage_multiplier(1), 10u);
  EXPECT_EQ(video_stage_multiplier(15), 150u);
  EXPECT_EQ(video_stage_multiplier(4, 2.5), 10u);
  EXPECT_THROW(video_stage_multiplier(16), LoadError);
  EXPECT_THROW(video_stage_multiplier(3, 0), LoadError);
}

TEST(VideoMultiplier, EveryFrameReachesTheJsonStage) {
  for (auto s : kAllStrategies) {
    for (std::uint32_t fps : {1u, 3u}) {
      const auto out = run_cell(zero_cost_calibration(), cell(Application::Video, s, 2, 1, fps));
      std::map<RequestId, int> yolo, json;
      for (const auto& e : events_of(out.ctx->log(), EventKind::FunctionEnd)) {
        if (e.subject == "yolo") ++yolo[e.request_id];
        if (e.subject == "to_json") ++json[e.request_id];
      }
      ASSERT_EQ(json.size(), 2u) << to_string(s);
      for (const auto& [id, n] : json) {
        EXPECT_EQ(n, static_cast<int>(10 * fps)) << to_string(s);
        EXPECT_EQ(yolo[id], n);
      }
      EXPECT_EQ(out.ctx->units().at_sink, 2u * 10 * fps);
    }
  }
}

TEST(VideoMultiplier, FrameSizeIsChunkOverFrameCount) {
  auto cal = zero_cost_calibration();
  cal.backend.dft.edge_compress_ratio = 1.0;
  const auto out = run_cell(cal, cell(Application::Video, Strategy::DFT, 1, 1, 5));
  const auto yolo_in = events_of(out.ctx->log(), EventKind::StorageArrive, "q.yolo");
  ASSERT_EQ(yolo_in.size(), 50u);
  // The split output equals its input (ratio 1), shared by 50 frames.
  const auto transfers = events_of(out.ctx->log(), EventKind::NetTransfer, "nifi->yolo");
  ASSERT_EQ(transfers.size(), 50u);
  for (const auto& t : transfers) EXPECT_EQ(t.bytes, 50'000'000u / 50);
}

TEST(Profiles, TagsAndDefaultSizes) {
  const auto cal = default_calibration();
  EXPECT_EQ(cal.profile(Application::Aeneas).tags, (std::set<AppTag>{AppTag::BI}));
  EXPECT_EQ(cal.profile(Application::PocketSphinx).tags, (std::set<AppTag>{AppTag::BI, AppTag::CI}));
  EXPECT_EQ(cal.profile(Application::Video).tags, (std::set<AppTag>{AppTag::BI, AppTag::CI}));
  EXPECT_EQ(cal.profile(Application::Aeneas).unit_size.a, 1e6);
  EXPECT_EQ(cal.profile(Application::PocketSphinx).unit_size.a, 5e6);
  EXPECT_EQ(cal.profile(Application::Video).unit_size.a, 50e6);
  EXPECT_EQ(cal.profile(Application::Video).clip_seconds, 10.0);
}

TEST(Profiles, EveryPairBuildsTheRightStageCount) {
  const auto cal = default_calibration();
  for (auto a : kAllApplications)
    for (auto s : kAllStrategies) {
      const auto spec = build_pipeline(cal, a, s);
      EXPECT_EQ(spec.stages.size(), expected_function_count(a, s));
      EXPECT_TRUE(validate_pipeline(spec).empty());
    }
}

TEST(Profiles, MissingFunctionCostIsReported) {
  auto cal = default_calibration();
  cal.profiles[Application::Aeneas].functions.erase("aeneas_align");
  EXPECT_THROW(build_pipeline(cal, Application::Aeneas, Strategy::DFT), std::out_of_range);
}

TEST(Seeds, SameSeedSameRun) {
  const auto cal = default_calibration();
  auto c = cell(Application::PocketSphinx, Strategy::OSS, 30, 17);
  c.load.pattern = ArrivalPattern::Poisson;
  c.load.rate = 2.0;
  const auto a = run_cell(cal, c);
  const auto b = run_cell(cal, c);
  std::ostringstream sa, sb;
  write_ndjson(a.ctx->log(), sa);
  write_ndjson(b.ctx->log(), sb);
  EXPECT_EQ(sa.str(), sb.str());
}
