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

#include "epd/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "epd/error.hpp"
#include "epd/kernels.hpp"

namespace epd {

namespace {

constexpr int kMaxHalvings = 3;

[[noreturn]] void insufficient(const std::string& what) {
  throw Error(ErrorKind::kInsufficientSamples, what, "sampler");
}

Point2 clamp_to(const BBox& box, const Point2& p) {
  return {std::clamp(p.x, box.x_min, box.x_max), std::clamp(p.y, box.y_min, box.y_max)};
}

}  // namespace

std::string_view to_string(DensityMapping m) {
  return m == DensityMapping::kLiteral ? "literal" : "inverse";
}

std::string_view to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::kSpiral: return "spiral";
    case SamplingStrategy::kRay: return "ray";
    case SamplingStrategy::kRandom: return "random";
  }
  return "spiral";
}

DensityMapping density_mapping_from_string(std::string_view name) {
  if (name == "inverse") return DensityMapping::kInverse;
  if (name == "literal") return DensityMapping::kLiteral;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown density_mapping '" + std::string(name) + "'");
}

SamplingStrategy sampling_strategy_from_string(std::string_view name) {
  if (name == "spiral") return SamplingStrategy::kSpiral;
  if (name == "ray") return SamplingStrategy::kRay;
  if (name == "random") return SamplingStrategy::kRandom;
  throw Error(ErrorKind::kInvalidParameter, "unknown strategy '" + std::string(name) + "'");
}

void SamplerConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidParameter, "sampler: " + what, "sampler");
  };
  if (!(k_min > 0.0) || !(k_min <= k_max) || !std::isfinite(k_max)) {
    fail("require 0 < k_min <= k_max");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) fail("epsilon must lie in [0, 1)");
  if (budget_k < 1) fail("budget_k must be >= 1");
}

std::vector<double> dynamic_coefficients(const RadialProfile& profile,
                                         const SamplerConfig& config) {
  config.validate();
  std::vector<double> weights(profile.g_norm.size());
  if (config.density_mapping == DensityMapping::kInverse) {
    std::transform(profile.g_norm.begin(), profile.g_norm.end(), weights.begin(),
                   [](double g) { return 1.0 - g; });
  } else {
    weights = profile.g_norm;
  }
  std::vector<double> coeffs(weights.size());
  kernels::blend(weights, config.k_min, config.k_max, coeffs);
  return coeffs;
}

std::size_t nearest_arc_index(std::span<const double> cumulative_arc, double s) {
  const auto it = std::lower_bound(cumulative_arc.begin(), cumulative_arc.end(), s);
  if (it == cumulative_arc.begin()) return 0;
  if (it == cumulative_arc.end()) return cumulative_arc.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - cumulative_arc.begin());
  const std::size_t lo = hi - 1;
  return (s - cumulative_arc[lo]) <= (cumulative_arc[hi] - s) ? lo : hi;
}

Point2 interpolate_at(const SpiralPath& path, double s) {
  const auto& arc = path.cumulative_arc;
  if (arc.empty()) {
    throw Error(ErrorKind::kInsufficientData, "empty path", "sampler");
  }
  if (s <= arc.front()) return path.points.front();
  if (s >= arc.back()) return path.points.back();
  const auto it = std::upper_bound(arc.begin(), arc.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - arc.begin());
  const std::size_t lo = hi - 1;
  const double seg = arc[hi] - arc[lo];
  if (!(seg > 0.0)) return path.points[lo];
  const double t = (s - arc[lo]) / seg;
  const Point2& a = path.points[lo];
  const Point2& b = path.points[hi];
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

SampleRun adaptive_sample(const SpiralPath& path, std::span<const double> coeffs,
                          const BBox& bbox, const SamplerConfig& config, Rng& rng) {
  config.validate();
  if (path.points.size() < 2) {
    throw Error(ErrorKind::kInsufficientData, "path needs at least 2 points", "sampler");
  }
  if (coeffs.size() != path.points.size()) {
    throw Error(ErrorKind::kInvalidParameter,
                "coefficients are not aligned with the path", "sampler");
  }
  center_and_axes(bbox);
  const double total = path.total_arc();
  const std::size_t needed = 2 * static_cast<std::size_t>(config.budget_k);

  double beta = std::max(bbox.width(), bbox.height());
  for (int halvings = 0; halvings <= kMaxHalvings; ++halvings, beta *= 0.5) {
    SampleRun run;
    run.beta = beta;
    run.halvings = halvings;
    run.bias = rng.uniform(0.0, beta);
    const double jitter = config.epsilon * beta;
    for (double s = run.bias; s <= total;) {
      const double k = coeffs[nearest_arc_index(path.cumulative_arc, s)];
      const double delta = rng.uniform(-jitter, jitter);
      const double moved = std::clamp(s + delta, 0.0, total);
      run.samples.push_back({interpolate_at(path, moved), moved, s, k,
                             static_cast<int>(run.samples.size())});
      s += beta * k;
    }
    if (run.samples.size() < needed) continue;
    std::stable_sort(run.samples.begin(), run.samples.end(),
                     [](const ArcSample& l, const ArcSample& r) {
                       return l.arc_position < r.arc_position;
                     });
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
      run.samples[i].sequence_index = static_cast<int>(i);
    }
    return run;
  }
  insufficient("fewer than 2K samples fit on the spiral after " +
               std::to_string(kMaxHalvings) + " step halvings");
}

CandidateSet split_internal_external(std::span<const ArcSample> samples,
                                     const BBox& bbox, const SamplerConfig& config) {
  config.validate();
  const std::size_t k = static_cast<std::size_t>(config.budget_k);
  if (samples.size() < 2 * k) insufficient("need at least 2K samples to split");

  std::vector<double> dc(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dc[i] = normalized_distances(samples[i].point, bbox).center;
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  auto seq = [&](std::size_t i) { return samples[i].sequence_index; };

  // Farthest first; equal distances keep ascending sequence index.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (dc[l] != dc[r]) return dc[l] > dc[r];
    return seq(l) < seq(r);
  });
  std::vector<std::size_t> outer(order.begin(), order.begin() + k);
  std::vector<std::size_t> rest(order.begin() + k, order.end());
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t l, std::size_t r) {
    if (dc[l] != dc[r]) return dc[l] < dc[r];
    return seq(l) < seq(r);
  });

  CandidateSet set;
  for (std::size_t i : outer) {
    set.external.push_back({samples[i].point, 0.0, 0.0, Origin::kExternal, seq(i)});
  }
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = rest[j];
    set.internal.push_back({samples[i].point, 0.0, 0.0, Origin::kInternal, seq(i)});
  }
  set.sample_trace.assign(samples.begin(), samples.end());
  return set;
}

CandidateSet ray_based_candidates(const BBox& bbox, const SamplerConfig& config) {
  config.validate();
  const CenterAxes ca = center_and_axes(bbox);
  const int k = config.budget_k;
  // Step j (1-based) sits j quarter-extents from its origin; beyond the
  // second step a ray would cross the center and leave its half of the box.
  const int steps = (k + 3) / 4;
  if (steps > 2) insufficient("ray construction fits at most 8 candidates per set");

  const double qx = 0.5 * ca.a;  // width / 4
  const double qy = 0.5 * ca.b;  // height / 4
  const Point2 c = ca.center;
  CandidateSet set;
  set.beta = std::max(bbox.width(), bbox.height());
  for (int j = 0; j < k; ++j) {
    const double step = j / 4 + 1;
    Point2 edge_pt;
    Point2 center_pt;
    switch (j % 4) {
      case 0:  // top edge inward / center upward
        edge_pt = {c.x, bbox.y_min + step * qy};
        center_pt = {c.x, c.y - step * qy};
        break;
      case 1:  // bottom
        edge_pt = {c.x, bbox.y_max - step * qy};
        center_pt = {c.x, c.y + step * qy};
        break;
      case 2:  // left
        edge_pt = {bbox.x_min + step * qx, c.y};
        center_pt = {c.x - step * qx, c.y};
        break;
      default:  // right
        edge_pt = {bbox.x_max - step * qx, c.y};
        center_pt = {c.x + step * qx, c.y};
        break;
    }
    // Second-ring points sit on the boundary; keep rounding from leaving the box.
    edge_pt = clamp_to(bbox, edge_pt);
    center_pt = clamp_to(bbox, center_pt);
    set.external.push_back({edge_pt, 0.0, 0.0, Origin::kRay, j});
    set.internal.push_back({center_pt, 0.0, 0.0, Origin::kRay, k + j});
  }
  return set;
}

CandidateSet random_candidates(const BBox& bbox, const SamplerConfig& config, Rng& rng) {
  config.validate();
  center_and_axes(bbox);
  const int k = config.budget_k;
  CandidateSet set;
  set.beta = std::max(bbox.width(), bbox.height());
  for (int i = 0; i < 2 * k; ++i) {
    const Point2 pt{rng.uniform(bbox.x_min, bbox.x_max),
                    rng.uniform(bbox.y_min, bbox.y_max)};
    if (i < k) {
      set.external.push_back({pt, 0.0, 0.0, Origin::kExternal, i});
    } else {
      set.internal.push_back({pt, 0.0, 0.0, Origin::kInternal, i});
    }
  }
  return set;
}

void score_candidates(CandidateSet& set, const BBox& bbox, const EntropyParams& params) {
  params.validate();
  for (auto* list : {&set.external, &set.internal}) {
    for (ScoredPoint& sp : *list) {
      sp = score_point(sp.point, bbox, params, sp.origin, sp.sequence_index);
    }
  }
}

CandidateSet spiral_candidates(const SpiralPath& path, const BBox& bbox,
                               const SamplerConfig& config, Rng& rng) {
  const std::vector<double> coeffs = dynamic_coefficients(path.radial, config);
  const SampleRun run = adaptive_sample(path, coeffs, bbox, config, rng);
  CandidateSet set = split_internal_external(run.samples, bbox, config);
  set.beta = run.beta;
  return set;
}

}  // namespace epd
