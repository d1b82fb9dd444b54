// Copyright 2026 The EPD Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "epd/bench.hpp"
#include "epd/error.hpp"
#include "test_support.hpp"

namespace epd {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

TEST(SyntheticScenes, AreaBoundsAndTightBoxes) {
  const std::vector<ShapeKind> shapes{ShapeKind::kEllipse, ShapeKind::kRectangle,
                                      ShapeKind::kBlobPolygon};
  Rng rng(1);
  const auto scenes = generate_synthetic_scenes(30, shapes, {160, 120}, rng);
  ASSERT_EQ(scenes.size(), 30u);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Scene& s = scenes[i];
    const double frac = static_cast<double>(s.mask.area()) / (160.0 * 120.0);
    EXPECT_GE(frac, kMinSceneArea);
    EXPECT_LE(frac, kMaxSceneArea);
    EXPECT_NO_THROW(s.validate());
    EXPECT_FALSE(s.expression.empty());
    const std::string kind(to_string(shapes[i % 3]));
    EXPECT_EQ(s.image_uri.substr(s.image_uri.size() - kind.size()), kind);
    if (shapes[i % 3] == ShapeKind::kRectangle) {
      // A filled rectangle covers its tight box exactly.
      EXPECT_EQ(static_cast<double>(s.mask.area()), s.gt_bbox.width() * s.gt_bbox.height());
    }
  }
  EXPECT_EQ(scenes[0].scene_id, "synth-0000");
}

TEST(SyntheticScenes, EllipseAreaMatchesAnalyticArea) {
  Rng rng(2);
  const std::vector<ShapeKind> shapes{ShapeKind::kEllipse};
  for (const Scene& s : generate_synthetic_scenes(20, shapes, {400, 300}, rng)) {
    // The tight box spans the two axes to within a pixel on each side.
    const double analytic = std::numbers::pi * 0.25 * s.gt_bbox.width() * s.gt_bbox.height();
    EXPECT_NEAR(static_cast<double>(s.mask.area()) / analytic, 1.0, 0.05);
  }
}

TEST(SyntheticScenes, DeterministicForSeed) {
  const std::vector<ShapeKind> shapes{ShapeKind::kBlobPolygon, ShapeKind::kEllipse};
  Rng a(5), b(5);
  const auto x = generate_synthetic_scenes(6, shapes, {96, 64}, a);
  const auto y = generate_synthetic_scenes(6, shapes, {96, 64}, b);
  EXPECT_EQ(scenes_to_json_text(x), scenes_to_json_text(y));
  EXPECT_THROW(generate_synthetic_scenes(0, shapes, {96, 64}, a), Error);
  EXPECT_EQ(shape_kind_from_string("blob-polygon"), ShapeKind::kBlobPolygon);
}

TraceEntry entry(Point2 p, Label label, double conf) {
  TraceEntry e;
  e.candidate.point = p;
  e.verdict.label = label;
  e.verdict.confidence = conf;
  return e;
}

TEST(PointMetrics, HandCountedConfusion) {
  const Scene scene = testing::ellipse_scene(100, 100, 50, 50, 30, 30, "c");
  const std::vector<std::vector<TraceEntry>> traces{{
      entry({50, 50}, Label::kPositive, 0.9),   // tp
      entry({2, 2}, Label::kPositive, 0.9),     // fp
      entry({3, 3}, Label::kNegative, 0.9),     // tn
      entry({55, 50}, Label::kNegative, 0.95),  // fn
      entry({52, 52}, Label::kPositive, 0.5),   // dropped at eta 0.6
  }};
  const std::vector<const Scene*> scenes{&scene};
  const MetricsReport r = point_metrics(traces, scenes, 0.6);
  EXPECT_EQ(r.confusion.tp, 1u);
  EXPECT_EQ(r.confusion.fp, 1u);
  EXPECT_EQ(r.confusion.tn, 1u);
  EXPECT_EQ(r.confusion.fn, 1u);
  EXPECT_EQ(r.accuracy, 0.5);
  EXPECT_EQ(r.precision, 0.5);
  EXPECT_EQ(r.recall, 0.5);
  EXPECT_EQ(r.f1, 0.5);
  EXPECT_EQ(r.available, 4.0);
  EXPECT_FALSE(r.undefined);
  const MetricsReport high = point_metrics(traces, scenes, 0.92);
  EXPECT_EQ(high.confusion.total(), 1u);
  EXPECT_EQ(high.confusion.fn, 1u);
  EXPECT_TRUE(std::isnan(high.precision));
  EXPECT_EQ(high.recall, 0.0);
  EXPECT_TRUE(std::isnan(high.f1));
}

TEST(PointMetrics, NothingRetainedIsUndefined) {
  const Scene scene = testing::ellipse_scene(100, 100, 50, 50, 30, 30, "c");
  const std::vector<std::vector<TraceEntry>> traces{{entry({50, 50}, Label::kPositive, 0.9)}};
  const std::vector<const Scene*> scenes{&scene};
  const MetricsReport r = point_metrics(traces, scenes, 1.0);
  EXPECT_TRUE(r.undefined);
  EXPECT_TRUE(std::isnan(r.accuracy));
  EXPECT_EQ(r.available, 0.0);
}

struct SmallBench {
  std::vector<Scene> scenes;
  SmallBench() {
    Rng rng(3);
    const std::vector<ShapeKind> shapes{ShapeKind::kEllipse};
    scenes = generate_synthetic_scenes(10, shapes, {160, 120}, rng);
  }
  std::vector<MetricsReport> run(double noise, std::vector<PerturbationRegime> regimes,
                                 unsigned jobs = 1, int seeds = 20) const {
    RunConfig cfg;
    cfg.oracle.noise = noise;
    ComparisonOptions opts;
    opts.master_seed = 11;
    opts.seeds_per_scene = seeds;
    opts.jobs = jobs;
    const std::vector<SamplingStrategy> strategies{SamplingStrategy::kSpiral,
                                                   SamplingStrategy::kRandom};
    return run_comparison(scenes, strategies, regimes, cfg, opts);
  }
};

PerturbationRegime regime(PerturbationKind k) {
  PerturbationRegime r;
  r.kind = k;
  return r;
}

TEST(Comparison, NoiselessAccuracyIsOne) {
  const SmallBench b;
  for (const MetricsReport& r : b.run(0.0, {regime(PerturbationKind::kTight)})) {
    EXPECT_EQ(r.accuracy, 1.0) << r.strategy << " " << r.eta;
    EXPECT_EQ(r.hit_rate, 1.0);
    EXPECT_EQ(r.delta_vs_tight, 0.0);
    EXPECT_EQ(r.n_instances, 200);
  }
}

TEST(Comparison, HalfNoiseIsChance) {
  const SmallBench b;
  for (const MetricsReport& r : b.run(0.5, {regime(PerturbationKind::kTight)}, 4, 30)) {
    if (r.eta != 0.0) continue;
    ASSERT_GE(r.confusion.total(), 2000u);
    EXPECT_NEAR(r.accuracy, 0.5, 0.05) << r.strategy;
  }
}

TEST(Comparison, AvailabilityFallsWithEta) {
  const SmallBench b;
  const auto table = b.run(0.1, {regime(PerturbationKind::kTight)});
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].strategy != table[i - 1].strategy) continue;
    EXPECT_LE(table[i].available, table[i - 1].available);
  }
  ASSERT_EQ(table.size(), 8u);  // 2 strategies x 4 etas
  EXPECT_EQ(table[0].available, 8.0);  // eta 0 retains every verdict
}

TEST(Comparison, ThreadCountDoesNotChangeResults) {
  const SmallBench b;
  const std::vector<PerturbationRegime> regimes{regime(PerturbationKind::kTight),
                                                regime(PerturbationKind::kSeverePerSide)};
  const auto one = report_csv(b.run(0.2, regimes, 1, 5));
  const auto many = report_csv(b.run(0.2, regimes, 6, 5));
  EXPECT_EQ(one, many);
}

TEST(Comparison, DeltaIsAgainstTightRegime) {
  const SmallBench b;
  const auto table = b.run(0.2, {regime(PerturbationKind::kTight),
                                 regime(PerturbationKind::kMildOneSide)}, 2, 5);
  for (const MetricsReport& r : table) {
    for (const MetricsReport& t : table) {
      if (t.strategy == r.strategy && t.eta == r.eta && t.regime.kind == PerturbationKind::kTight) {
        EXPECT_DOUBLE_EQ(r.delta_vs_tight, r.hit_rate - t.hit_rate);
      }
    }
  }
}

TEST(Report, CsvStructureAndNa) {
  MetricsReport r;
  r.strategy = "spiral";
  r.regime = regime(PerturbationKind::kSeverePerSide);
  r.eta = 0.7;
  r.accuracy = 0.75;
  r.precision = std::nan("");
  r.recall = 0.5;
  r.f1 = std::nan("");
  r.available = 2.5;
  r.hit_rate = 1.0;
  r.delta_vs_tight = -0.125;
  const std::vector<MetricsReport> table{r};
  const auto lines = split(report_csv(table), '\n');
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0], kReportColumns);
  const auto cells = split(lines[1], ',');
  ASSERT_EQ(cells.size(), 10u);
  EXPECT_EQ(cells[0], "spiral");
  EXPECT_EQ(cells[1], "severe_per_side");
  EXPECT_EQ(cells[2], "0.7");
  EXPECT_EQ(cells[3], "0.750000");
  EXPECT_EQ(cells[4], "NA");
  EXPECT_EQ(cells[6], "NA");
  EXPECT_EQ(cells[9], "-0.125000");
  const std::string text = report_text(table);
  EXPECT_NE(text.find("strategy"), std::string::npos);
  EXPECT_NE(text.find("NA"), std::string::npos);
}

TEST(Report, EmitWritesFilesOrThrowsIo) {
  MetricsReport r;
  r.strategy = "random";
  const std::vector<MetricsReport> table{r};
  const auto dir = testing::make_temp_dir("report");
  emit_report(table, dir / "r.csv", dir / "r.txt");
  EXPECT_EQ(testing::read_file(dir / "r.csv"), report_csv(table));
  EXPECT_EQ(testing::read_file(dir / "r.txt"), report_text(table));
  try {
    emit_report(table, dir / "missing" / "r.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace epd
