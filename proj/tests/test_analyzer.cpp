#include <gtest/gtest.h>

#include "sdpbench/cli/commands.hpp"
#include "support.hpp"

using namespace sdpbench;
using namespace sdpbench::testing;

namespace {

StrategySet set_of(std::initializer_list<Strategy> ss) {
  StrategySet out;
  for (auto s : ss) out.set(index_of(s));
  return out;
}

std::vector<MetricMatrix> fixture(const std::string& name) {
  std::ifstream in(source_dir() + "/tests/fixtures/" + name);
  return matrices_from_metric_csv(in, name);
}

const SuitabilityResult& find(const std::vector<SuitabilityResult>& rs, Application a, Scenario s) {
  for (const auto& r : rs)
    if (r.application == a && r.scenario == s) return r;
  throw std::out_of_range("no result");
}

int suit(const SuitabilityResult& r, Strategy s) { return r.scores[index_of(s)].suitability; }
int unsuit(const SuitabilityResult& r, Strategy s) { return r.scores[index_of(s)].not_suitability; }

MetricMatrix random_matrix(std::mt19937_64& rng) {
  MetricMatrix m;
  std::uniform_real_distribution<double> d(1, 100);
  for (auto& row : m.cells)
    for (auto& v : row) v = rng() % 5 == 0 ? row[0] : d(rng);
  return m;
}

}  // namespace

TEST(Attribution, CpuTieSharesTheMinimum) {
  const auto mm = attribute_row({31, 28, 28});
  EXPECT_EQ(mm.argmin, set_of({Strategy::OSS, Strategy::MQTT}));
  EXPECT_EQ(mm.argmax, set_of({Strategy::DFT}));
}

TEST(Attribution, ConstantRowIsBothEnds) {
  const auto mm = attribute_row({5, 5, 5});
  EXPECT_EQ(mm.argmin.count(), 3u);
  EXPECT_EQ(mm.argmax.count(), 3u);
}

TEST(Attribution, IncreasingRow) {
  const auto mm = attribute_row({1, 2, 3});
  EXPECT_EQ(mm.argmin, set_of({Strategy::DFT}));
  EXPECT_EQ(mm.argmax, set_of({Strategy::MQTT}));
}

TEST(Attribution, WithinOnePercentIsATie) {
  EXPECT_EQ(attribute_row({100, 100.9, 150}).argmin, set_of({Strategy::DFT, Strategy::OSS}));
  EXPECT_EQ(attribute_row({100, 101.5, 150}).argmin, set_of({Strategy::DFT}));
  EXPECT_THROW(attribute_row({1, std::nan(""), 2}), std::invalid_argument);
}

TEST(Suitability, IndexRounding) {
  EXPECT_EQ(index_percent(0), 0);
  EXPECT_EQ(index_percent(2), 29);
  EXPECT_EQ(index_percent(3), 43);
  EXPECT_EQ(index_percent(4), 57);
  EXPECT_EQ(index_percent(5), 71);
  EXPECT_EQ(index_percent(7), 100);
}

// Min/max attributions per application, encoded as ranks 1 (min) .. 3 (max).
TEST(MinMaxFixture, IndicesAndSelections) {
  std::vector<SuitabilityResult> rs;
  for (const auto& m : fixture("minmax_ordinal.csv")) rs.push_back(suitability_index(m));
  ASSERT_EQ(rs.size(), 4u);

  const auto& ae = find(rs, Application::Aeneas, Scenario::UsersScaling);
  EXPECT_EQ(suit(ae, Strategy::MQTT), 43);
  EXPECT_EQ(unsuit(ae, Strategy::DFT), 43);
  // OSS holds two max cells; the counting rule gives 29.
  EXPECT_EQ(unsuit(ae, Strategy::OSS), 29);
  EXPECT_EQ(ae.selected, Strategy::MQTT);

  const auto& ps = find(rs, Application::PocketSphinx, Scenario::UsersScaling);
  EXPECT_EQ(suit(ps, Strategy::MQTT), 57);
  EXPECT_EQ(unsuit(ps, Strategy::MQTT), 43);
  EXPECT_EQ(ps.selected, Strategy::DFT);

  const auto& vu = find(rs, Application::Video, Scenario::UsersScaling);
  EXPECT_EQ(suit(vu, Strategy::OSS), 57);
  EXPECT_EQ(unsuit(vu, Strategy::MQTT), 57);
  EXPECT_EQ(vu.selected, Strategy::OSS);

  const auto& vf = find(rs, Application::Video, Scenario::FpsScaling);
  EXPECT_EQ(suit(vf, Strategy::OSS), 71);
  EXPECT_EQ(unsuit(vf, Strategy::MQTT), 43);
  EXPECT_EQ(vf.selected, Strategy::OSS);

  const auto picks = select_per_application(rs);
  EXPECT_EQ(picks.at(Application::Aeneas), Strategy::MQTT);
  EXPECT_EQ(picks.at(Application::PocketSphinx), Strategy::DFT);
  EXPECT_EQ(picks.at(Application::Video), Strategy::OSS);
}

TEST(Selection, WorstNotSuitabilityIsSetAside) {
  std::array<StrategyScore, 3> sc{};
  sc[0] = {4, 3, 57, 43, 14};
  sc[1] = {2, 2, 29, 29, 0};
  sc[2] = {1, 2, 14, 29, -14};
  EXPECT_EQ(select_from_scores(sc, Attribution{}), Strategy::OSS);
}

TEST(Selection, EqualNotSuitabilityKeepsEveryone) {
  std::array<StrategyScore, 3> sc{};
  sc[0] = {1, 2, 14, 29, -14};
  sc[1] = {3, 2, 43, 29, 14};
  sc[2] = {3, 2, 43, 29, 14};
  Attribution at{};
  EXPECT_EQ(select_from_scores(sc, at), Strategy::OSS);
  at[index_of(Metric::ProcessingTime)].argmin = set_of({Strategy::MQTT});
  EXPECT_EQ(select_from_scores(sc, at), Strategy::MQTT);
}

TEST(Selection, MajorityOverScenariosThenNet) {
  SuitabilityResult a, b;
  a.selected = Strategy::DFT;
  b.selected = Strategy::OSS;
  a.scores[index_of(Strategy::OSS)].net = 10;
  b.scores[index_of(Strategy::DFT)].net = 3;
  EXPECT_EQ(select_suitable_sdp({a, b}), Strategy::OSS);
  EXPECT_EQ(select_suitable_sdp({a, a, b}), Strategy::DFT);
  EXPECT_THROW(select_suitable_sdp({}), std::invalid_argument);
}

TEST(CrossApp, PerApplicationCellsAverageToTheReportedRow) {
  const auto cross = sdpbench::cli::cross_app_from_matrices(fixture("cross_app_cells.csv"));
  ASSERT_TRUE(cross.has_value());
  const std::map<Metric, std::array<std::string, 3>> want{
      {Metric::ProcessingTime, {"20.97", "23.97", "21.77"}}, {Metric::CPU, {"69", "61", "52"}},
      {Metric::Memory, {"97", "85", "86"}},                  {Metric::DiskRead, {"4", "19", "3"}},
      {Metric::DiskWrite, {"102", "197", "95"}},             {Metric::NetReceive, {"15", "31", "33"}},
      {Metric::NetTransmit, {"22", "43", "63"}}};
  for (const auto& [m, row] : want)
    for (auto s : kAllStrategies)
      EXPECT_EQ(format_cross_app_cell(m, cross->at(m, s)), row[index_of(s)]) << to_string(m) << " " << label(s);
}

TEST(CrossApp, EqualInputsAverageToThemselves) {
  std::map<std::pair<Application, Strategy>, MetricValues> cells;
  for (auto a : kAllApplications)
    for (auto s : kAllStrategies) cells[{a, s}].fill(7.5);
  const auto r = cross_application_average(cells);
  EXPECT_DOUBLE_EQ(r.at(Metric::DiskWrite, Strategy::OSS), 7.5);
}

TEST(CrossApp, MissingCellIsListed) {
  std::map<std::pair<Application, Strategy>, MetricValues> cells;
  cells[{Application::Aeneas, Strategy::DFT}] = {};
  try {
    cross_application_average(cells);
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.missing().size(), 8u);
    EXPECT_NE(std::string(e.what()).find("video/mqtt"), std::string::npos);
  }
}

TEST(MetricCsv, ParseErrorsCarryTheLine) {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      matrices_from_metric_csv(in, "t.csv");
      ADD_FAILURE() << "no error for " << text;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("", "empty");
  expect_error("a,b\n", "t.csv:1");
  expect_error("application,scenario,metric,strategy,value\naeneas,users,cpu,dft\n", "t.csv:2");
  expect_error("application,scenario,metric,strategy,value\naeneas,users,cpu,dft,abc\n", "t.csv:2");
  expect_error("application,scenario,metric,strategy,value\naeneas,users,cpu,xyz,1\n", "t.csv:2");
  expect_error("application,scenario,metric,strategy,value\naeneas,users,cpu,dft,1x\n", "t.csv:2");
}

TEST(MetricCsv, PartialMatrixIsACoverageError) {
  std::istringstream in("application,scenario,metric,strategy,value\naeneas,users,cpu,dft,1\n");
  EXPECT_THROW(matrices_from_metric_csv(in), CoverageError);
}

TEST(Summaries, SingleStrategyGridIsIncomplete) {
  RunSummary s;
  s.application = Application::Aeneas;
  s.strategy = Strategy::DFT;
  try {
    matrices_from_summaries({s});
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.missing(), (std::vector<std::string>{"aeneas/oss", "aeneas/mqtt"}));
  }
}

TEST(Summaries, VideoGetsAnFpsScenarioOnlyWithSeveralFps) {
  std::vector<RunSummary> rows;
  for (auto s : kAllStrategies)
    for (std::uint32_t fps : {1u, 5u}) {
      RunSummary r;
      r.application = Application::Video;
      r.strategy = s;
      r.users = 10;
      r.fps = fps;
      r.processing_time = fps * (1.0 + index_of(s));
      rows.push_back(r);
    }
  const auto ms = matrices_from_summaries(rows);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_DOUBLE_EQ(ms[0].at(Metric::ProcessingTime, Strategy::OSS), 2.0);  // fps 1 only
  EXPECT_DOUBLE_EQ(ms[1].at(Metric::ProcessingTime, Strategy::OSS), 6.0);  // mean over fps
}

TEST(AnalyzerProperty, ScalingARowChangesNothing) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto m = random_matrix(rng);
    const auto base = suitability_index(m);
    const auto row = rng() % kMetricCount;
    const double k = std::exp(std::uniform_real_distribution<double>(-5, 5)(rng));
    for (auto& v : m.cells[row]) v *= k;
    const auto scaled = suitability_index(m);
    for (std::size_t r = 0; r < kMetricCount; ++r) {
      EXPECT_EQ(scaled.attribution[r].argmin, base.attribution[r].argmin);
      EXPECT_EQ(scaled.attribution[r].argmax, base.attribution[r].argmax);
    }
    EXPECT_EQ(scaled.selected, base.selected);
  }
}

TEST(AnalyzerProperty, IndexBoundsAndDisjointEnds) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto r = suitability_index(random_matrix(rng));
    for (const auto& sc : r.scores) {
      EXPECT_GE(sc.suitability, 0);
      EXPECT_LE(sc.suitability, 100);
      EXPECT_GE(sc.not_suitability, 0);
      EXPECT_LE(sc.not_suitability, 100);
    }
    for (const auto& mm : r.attribution) {
      if (mm.argmin.all() && mm.argmax.all()) continue;
      EXPECT_TRUE((mm.argmin & mm.argmax).none());
      EXPECT_TRUE(mm.argmin.any());
      EXPECT_TRUE(mm.argmax.any());
    }
  }
}

TEST(Report, JsonAndTextMentionEverySelection) {
  std::vector<SuitabilityResult> rs;
  for (const auto& m : fixture("minmax_ordinal.csv")) rs.push_back(suitability_index(m));
  const auto j = suitability_report_json(rs);
  const auto text = render_suitability_table(rs);
  EXPECT_NE(text.find("MQTT (43%)"), std::string::npos) << text;
  EXPECT_NE(text.find("OSS (71%)"), std::string::npos) << text;
  EXPECT_FALSE(j.dump().empty());
}
