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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epd/config.hpp"
#include "epd/geometry.hpp"
#include "epd/rng.hpp"
#include "epd/sampler.hpp"
#include "epd/scene.hpp"
#include "epd/verification.hpp"

namespace epd {

enum class ShapeKind { kEllipse, kRectangle, kBlobPolygon };

std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(std::string_view name);

inline constexpr double kMinSceneArea = 0.05;
inline constexpr double kMaxSceneArea = 0.60;

// Scene i uses shapes[i % shapes.size()]. Foreground area lies in
// [5%, 60%] of the frame; pixels are filled by their centers.
std::vector<Scene> generate_synthetic_scenes(int count, std::span<const ShapeKind> shapes,
                                             const ImageDims& dims, Rng& rng);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

struct MetricsReport {
  std::string strategy;
  PerturbationRegime regime;
  double eta = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double available = 0.0;  // mean retained points per instance
  bool undefined = false;  // nothing retained: metrics are NaN
  int n_instances = 0;
  Confusion confusion;
  double hit_rate = 0.0;        // emitted positives inside the mask
  double delta_vs_tight = 0.0;  // hit_rate minus the tight-regime hit_rate
};

// Retained verdicts of each trace against mask containment in the matching
// scene. Ratios with a zero denominator are NaN; `undefined` is set when no
// point is retained at all.
MetricsReport point_metrics(std::span<const std::vector<TraceEntry>> traces,
                            std::span<const Scene* const> scenes, double eta);

struct ComparisonOptions {
  std::uint64_t master_seed = 0;
  int seeds_per_scene = 20;
  std::vector<double> etas{0.0, 0.6, 0.7, 0.8};
  unsigned jobs = 1;
};

// Full factorial over strategies x regimes x scenes x seeds. Every candidate
// is verified once (no early stop); metrics use the full sweep and hit-rate
// the early-stopped prefix at each eta. Perturbations and oracle noise use
// common random numbers across strategies, so cells differ only by strategy.
std::vector<MetricsReport> run_comparison(std::span<const Scene> scenes,
                                          std::span<const SamplingStrategy> strategies,
                                          std::span<const PerturbationRegime> regimes,
                                          const RunConfig& config,
                                          const ComparisonOptions& options);

inline constexpr std::string_view kReportColumns =
    "strategy,regime,eta,accuracy,precision,recall,f1,available,hit_rate,delta_vs_tight";

void write_csv(std::span<const MetricsReport> table, std::ostream& out);
void write_text_table(std::span<const MetricsReport> table, std::ostream& out);
std::string report_csv(std::span<const MetricsReport> table);
std::string report_text(std::span<const MetricsReport> table);

// Writes the CSV and, when `text_path` is non-empty, the aligned table.
// Throws kIo when a file cannot be written.
void emit_report(std::span<const MetricsReport> table, const std::filesystem::path& csv_path,
                 const std::filesystem::path& text_path = {});

}  // namespace epd
