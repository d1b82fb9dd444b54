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

#include "epd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "epd/error.hpp"
#include "epd/json_format.hpp"
#include "epd/pipeline.hpp"

namespace epd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxShapeAttempts = 1000;

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}

BinaryMask fill_ellipse(const ImageDims& dims, double cx, double cy, double a, double b) {
  BinaryMask m(dims.width, dims.height);
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      const double u = (x + 0.5 - cx) / a;
      const double v = (y + 0.5 - cy) / b;
      if (u * u + v * v <= 1.0) m.set(x, y, true);
    }
  }
  return m;
}

BinaryMask fill_rectangle(const ImageDims& dims, int x0, int y0, int x1, int y1) {
  BinaryMask m(dims.width, dims.height);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.set(x, y, true);
  }
  return m;
}

// Even-odd rule at pixel centers.
BinaryMask fill_polygon(const ImageDims& dims, const std::vector<Point2>& poly) {
  BinaryMask m(dims.width, dims.height);
  const std::size_t n = poly.size();
  for (int y = 0; y < dims.height; ++y) {
    const double py = y + 0.5;
    for (int x = 0; x < dims.width; ++x) {
      const double px = x + 0.5;
      bool inside = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        if ((a.y > py) != (b.y > py) &&
            px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x) {
          inside = !inside;
        }
      }
      if (inside) m.set(x, y, true);
    }
  }
  return m;
}

BinaryMask random_shape(ShapeKind kind, const ImageDims& dims, Rng& rng) {
  const double w = dims.width;
  const double h = dims.height;
  switch (kind) {
    case ShapeKind::kEllipse: {
      const double a = rng.uniform(0.08 * w, 0.48 * w);
      const double b = rng.uniform(0.08 * h, 0.48 * h);
      const double cx = rng.uniform(a, w - a);
      const double cy = rng.uniform(b, h - b);
      return fill_ellipse(dims, cx, cy, a, b);
    }
    case ShapeKind::kRectangle: {
      const int rw = std::max(1, static_cast<int>(rng.uniform(0.1 * w, 0.9 * w)));
      const int rh = std::max(1, static_cast<int>(rng.uniform(0.1 * h, 0.9 * h)));
      const int x0 = static_cast<int>(rng.uniform_index(dims.width - rw + 1));
      const int y0 = static_cast<int>(rng.uniform_index(dims.height - rh + 1));
      return fill_rectangle(dims, x0, y0, x0 + rw, y0 + rh);
    }
    case ShapeKind::kBlobPolygon: {
      const int n = 8 + static_cast<int>(rng.uniform_index(9));
      const double radius = rng.uniform(0.15, 0.48) * std::min(w, h);
      const double cx = rng.uniform(radius, w - radius);
      const double cy = rng.uniform(radius, h - radius);
      const double spacing = 2.0 * std::numbers::pi / n;
      std::vector<Point2> poly;
      for (int i = 0; i < n; ++i) {
        const double ang = i * spacing + rng.uniform(-0.35, 0.35) * spacing;
        const double r = radius * rng.uniform(0.45, 1.0);
        poly.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
      }
      return fill_polygon(dims, poly);
    }
  }
  return BinaryMask(dims.width, dims.height);
}

std::string describe(ShapeKind kind, const BBox& box, double area_fraction,
                     const ImageDims& dims, Rng& rng) {
  const std::string_view color = kMarkerPalette[rng.uniform_index(kMarkerPalette.size())];
  const char* size = area_fraction < 0.15 ? "small" : area_fraction < 0.35 ? "medium" : "large";
  const Point2 c = box.center();
  const char* vert = c.y < dims.height / 3.0 ? "top" : c.y < 2.0 * dims.height / 3.0 ? "middle" : "bottom";
  const char* horz = c.x < dims.width / 3.0 ? "left" : c.x < 2.0 * dims.width / 3.0 ? "center" : "right";
  const char* noun = kind == ShapeKind::kEllipse     ? "oval"
                     : kind == ShapeKind::kRectangle ? "box"
                                                     : "blob";
  std::string out = "the ";
  out += size;
  out += ' ';
  out += color;
  out += ' ';
  out += noun;
  out += " in the ";
  out += vert;
  out += ' ';
  out += horz;
  return out;
}

Confusion count_confusion(const std::vector<std::pair<bool, bool>>& pairs) {
  Confusion c;
  for (const auto& [truth, pred] : pairs) {
    if (pred && truth) ++c.tp;
    if (pred && !truth) ++c.fp;
    if (!pred && !truth) ++c.tn;
    if (!pred && truth) ++c.fn;
  }
  return c;
}

// Independent recount of the confusion matrix plus the metric identities.
void check_report(const MetricsReport& r, const std::vector<std::pair<bool, bool>>& pairs) {
  const auto count = [&](bool truth, bool pred) {
    return static_cast<std::size_t>(std::count(pairs.begin(), pairs.end(), std::pair{truth, pred}));
  };
  const Confusion& c = r.confusion;
  if (c.tp != count(true, true) || c.fp != count(false, true) || c.tn != count(false, false) ||
      c.fn != count(true, false) || c.total() != pairs.size()) {
    throw std::logic_error("confusion matrix recount mismatch");
  }
  if (c.total() > 0 &&
      std::abs(r.accuracy - static_cast<double>(c.tp + c.tn) / c.total()) > 1e-12) {
    throw std::logic_error("accuracy identity violated");
  }
  if (std::isfinite(r.precision) && std::isfinite(r.recall) && r.precision + r.recall > 0 &&
      std::abs(r.f1 - 2 * r.precision * r.recall / (r.precision + r.recall)) > 1e-9) {
    throw std::logic_error("f1 identity violated");
  }
}

std::string cell(double v) { return std::isnan(v) ? "NA" : format_fixed6(v); }

std::string regime_label(const PerturbationRegime& r) { return std::string(to_string(r.kind)); }

std::vector<std::vector<std::string>> report_rows(std::span<const MetricsReport> table) {
  std::vector<std::vector<std::string>> rows;
  for (const MetricsReport& r : table) {
    rows.push_back({r.strategy, regime_label(r.regime), format_shortest(r.eta), cell(r.accuracy),
                    cell(r.precision), cell(r.recall), cell(r.f1), cell(r.available),
                    cell(r.hit_rate), cell(r.delta_vs_tight)});
  }
  return rows;
}

void require_rows(std::span<const MetricsReport> table) {
  if (table.empty()) throw Error(ErrorKind::kInvalidParameter, "empty report table", "bench");
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kEllipse: return "ellipse";
    case ShapeKind::kRectangle: return "rectangle";
    case ShapeKind::kBlobPolygon: return "blob-polygon";
  }
  return "ellipse";
}

ShapeKind shape_kind_from_string(std::string_view name) {
  for (ShapeKind k : {ShapeKind::kEllipse, ShapeKind::kRectangle, ShapeKind::kBlobPolygon}) {
    if (to_string(k) == name) return k;
  }
  if (name == "blob") return ShapeKind::kBlobPolygon;
  throw Error(ErrorKind::kInvalidParameter, "unknown shape '" + std::string(name) + "'");
}

std::vector<Scene> generate_synthetic_scenes(int count, std::span<const ShapeKind> shapes,
                                             const ImageDims& dims, Rng& rng) {
  if (count < 1) throw Error(ErrorKind::kInvalidParameter, "scene count must be >= 1", "bench");
  if (shapes.empty()) throw Error(ErrorKind::kInvalidParameter, "no shapes requested", "bench");
  if (dims.width < 8 || dims.height < 8) {
    throw Error(ErrorKind::kInvalidParameter, "scene frame must be at least 8x8", "bench");
  }
  const double frame_area = static_cast<double>(dims.width) * dims.height;
  std::vector<Scene> scenes;
  scenes.reserve(count);
  for (int i = 0; i < count; ++i) {
    const ShapeKind kind = shapes[i % shapes.size()];
    BinaryMask mask;
    double fraction = 0.0;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxShapeAttempts) {
        throw Error(ErrorKind::kInsufficientData, "could not place a shape in the frame", "bench");
      }
      mask = random_shape(kind, dims, rng);
      fraction = mask.area() / frame_area;
      if (fraction >= kMinSceneArea && fraction <= kMaxSceneArea) break;
    }
    Scene s;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%04d", i);
    s.scene_id = id;
    s.dims = dims;
    s.gt_bbox = mask.tight_bbox();
    s.mask = std::move(mask);
    s.expression = describe(kind, s.gt_bbox, fraction, dims, rng);
    s.image_uri = "synthetic://" + s.scene_id + "/" + std::string(to_string(kind));
    s.validate();
    scenes.push_back(std::move(s));
  }
  return scenes;
}

MetricsReport point_metrics(std::span<const std::vector<TraceEntry>> traces,
                            std::span<const Scene* const> scenes, double eta) {
  if (traces.size() != scenes.size()) {
    throw Error(ErrorKind::kInvalidParameter, "traces and scenes are not aligned", "bench");
  }
  std::vector<std::pair<bool, bool>> pairs;  // (in mask, predicted positive)
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (const TraceEntry& e : traces[i]) {
      if (!is_retained(e.verdict, eta)) continue;
      pairs.emplace_back(scenes[i]->contains(e.candidate.point),
                         e.verdict.label == Label::kPositive);
    }
  }
  MetricsReport r;
  r.eta = eta;
  r.n_instances = static_cast<int>(traces.size());
  r.confusion = count_confusion(pairs);
  const Confusion& c = r.confusion;
  r.available = traces.empty() ? kNaN : static_cast<double>(pairs.size()) / traces.size();
  r.undefined = pairs.empty();
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  if (std::isnan(r.precision) || std::isnan(r.recall)) {
    r.f1 = kNaN;
  } else {
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  }
  check_report(r, pairs);
  return r;
}

std::vector<MetricsReport> run_comparison(std::span<const Scene> scenes,
                                          std::span<const SamplingStrategy> strategies,
                                          std::span<const PerturbationRegime> regimes,
                                          const RunConfig& config,
                                          const ComparisonOptions& options) {
  if (scenes.empty() || strategies.empty() || regimes.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "comparison needs scenes, strategies and regimes",
                "bench");
  }
  if (options.seeds_per_scene < 1 || options.etas.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "comparison needs seeds and thresholds", "bench");
  }
  config.validate();

  const std::size_t n_scenes = scenes.size();
  const std::size_t n_seeds = options.seeds_per_scene;
  const std::size_t per_cell = n_scenes * n_seeds;
  const std::size_t n_tasks = strategies.size() * regimes.size() * per_cell;
  std::vector<std::vector<TraceEntry>> traces(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);

  const auto run_task = [&](std::size_t t) {
    const std::size_t q = t % n_seeds;
    const std::size_t si = (t / n_seeds) % n_scenes;
    const std::size_t ri = (t / per_cell) % regimes.size();
    const std::size_t st = t / (per_cell * regimes.size());
    const Scene& scene = scenes[si];

    Rng perturb_rng(Rng::derive_seed(options.master_seed, {1, ri, si, q}));
    const BBox box = perturb_bbox(scene.gt_bbox, regimes[ri], scene.dims, perturb_rng);
    const std::uint64_t run_seed = Rng::derive_seed(options.master_seed, {2, si, q});

    RunConfig cfg = config;
    cfg.sampler.strategy = strategies[st];
    cfg.sampler.seed = run_seed;
    const CandidateStage stage = generate_candidates(box, cfg, run_seed);

    const StageSeeds seeds = StageSeeds::derive(run_seed);
    MaskOracle oracle(scene, cfg.oracle.noise, seeds.oracle);
    EarlyStopPolicy sweep = cfg.policy;
    sweep.max_queries = static_cast<int>(stage.candidates.external.size() +
                                         stage.candidates.internal.size());
    QueryContext ctx;
    ctx.image_uri = scene.image_uri;
    ctx.expression = scene.expression;
    ctx.top_k = cfg.oracle.top_k;
    ctx.marker_shape = cfg.oracle.marker_shape;
    ctx.marker_size_px = cfg.oracle.marker_size_px;
    Rng marker_rng(seeds.markers);
    traces[t] = sweep_candidates(stage.candidates, oracle, sweep, ctx, marker_rng);
  };

  // Tasks are claimed in index order, so after a failure every lower-index
  // task still completes and the reported error does not depend on timing.
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      try {
        run_task(t);
      } catch (...) {
        errors[t] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, n_tasks));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<const Scene*> cell_scenes(per_cell);
  for (std::size_t i = 0; i < per_cell; ++i) cell_scenes[i] = &scenes[i / n_seeds];

  std::vector<MetricsReport> table;
  for (std::size_t st = 0; st < strategies.size(); ++st) {
    for (std::size_t ri = 0; ri < regimes.size(); ++ri) {
      const std::span<const std::vector<TraceEntry>> cell(
          traces.data() + (st * regimes.size() + ri) * per_cell, per_cell);
      for (double eta : options.etas) {
        MetricsReport r = point_metrics(cell, cell_scenes, eta);
        r.strategy = std::string(to_string(strategies[st]));
        r.regime = regimes[ri];

        EarlyStopPolicy policy = config.policy;
        policy.eta = eta;
        std::size_t emitted = 0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < per_cell; ++i) {
          const VerificationResult res = replay_early_stop(cell[i], policy);
          if (!res.complete) continue;
          for (int p = 0; p < policy.pos_target; ++p) {
            ++emitted;
            if (cell_scenes[i]->contains(res.positives[p].point)) ++hits;
          }
        }
        r.hit_rate = ratio(hits, emitted);
        table.push_back(std::move(r));
      }
    }
  }

  for (MetricsReport& r : table) {
    r.delta_vs_tight = kNaN;
    for (const MetricsReport& base : table) {
      if (base.strategy == r.strategy && base.eta == r.eta &&
          base.regime.kind == PerturbationKind::kTight) {
        r.delta_vs_tight = r.hit_rate - base.hit_rate;
        break;
      }
    }
  }
  return table;
}

void write_csv(std::span<const MetricsReport> table, std::ostream& out) {
  require_rows(table);
  out << kReportColumns << '\n';
  for (const auto& row : report_rows(table)) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_text_table(std::span<const MetricsReport> table, std::ostream& out) {
  require_rows(table);
  std::vector<std::vector<std::string>> rows;
  {
    std::vector<std::string> header;
    std::stringstream ss{std::string(kReportColumns)};
    for (std::string col; std::getline(ss, col, ',');) header.push_back(col);
    rows.push_back(std::move(header));
  }
  for (auto& row : report_rows(table)) rows.push_back(std::move(row));
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      // Text columns left-aligned, numbers right-aligned.
      const std::string pad(width[i] - row[i].size(), ' ');
      line += i < 2 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

std::string report_csv(std::span<const MetricsReport> table) {
  std::ostringstream ss;
  write_csv(table, ss);
  return ss.str();
}

std::string report_text(std::span<const MetricsReport> table) {
  std::ostringstream ss;
  write_text_table(table, ss);
  return ss.str();
}

void emit_report(std::span<const MetricsReport> table, const std::filesystem::path& csv_path,
                 const std::filesystem::path& text_path) {
  const auto write_file = [](const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    out.flush();
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string(), "bench");
  };
  write_file(csv_path, report_csv(table));
  if (!text_path.empty()) write_file(text_path, report_text(table));
}

}  // namespace epd
