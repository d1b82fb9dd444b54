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
#include <span>
#include <string_view>
#include <vector>

#include "epd/entropy_field.hpp"
#include "epd/geometry.hpp"
#include "epd/rng.hpp"
#include "epd/spiral.hpp"

namespace epd {

// How the normalized growth rate maps to step coefficients.
//   kInverse: fast radial growth -> small steps (denser sampling).
//   kLiteral: k = k_min + (k_max - k_min) * g_norm.
enum class DensityMapping { kInverse, kLiteral };

enum class SamplingStrategy { kSpiral, kRay, kRandom };

std::string_view to_string(DensityMapping m);
std::string_view to_string(SamplingStrategy s);
DensityMapping density_mapping_from_string(std::string_view name);
SamplingStrategy sampling_strategy_from_string(std::string_view name);

struct SamplerConfig {
  double k_min = 0.5;
  double k_max = 1.5;
  double epsilon = 0.2;
  int budget_k = 4;
  DensityMapping density_mapping = DensityMapping::kInverse;
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::kSpiral;

  void validate() const;
};

struct ArcSample {
  Point2 point;
  double arc_position = 0.0;  // perturbed, clamped position s'_j
  double nominal_position = 0.0;  // s_j before perturbation
  double coefficient = 0.0;   // k at the nearest path vertex of s_j
  int sequence_index = 0;     // generation order
};

struct SampleRun {
  std::vector<ArcSample> samples;  // ordered by arc_position
  double beta = 0.0;               // base step actually used
  double bias = 0.0;
  int halvings = 0;
};

struct CandidateSet {
  std::vector<ScoredPoint> external;  // boundary-proximal
  std::vector<ScoredPoint> internal;  // center-proximal
  std::vector<ArcSample> sample_trace;
  double beta = 0.0;
};

std::vector<double> dynamic_coefficients(const RadialProfile& profile,
                                         const SamplerConfig& config);

// Index of the path vertex whose cumulative arc length is closest to s; ties
// go to the lower index.
std::size_t nearest_arc_index(std::span<const double> cumulative_arc, double s);

// Point at arc length s by linear interpolation between bracketing vertices.
Point2 interpolate_at(const SpiralPath& path, double s);

// Throws kInsufficientSamples if fewer than 2K samples fit after halving the
// base step three times.
SampleRun adaptive_sample(const SpiralPath& path, std::span<const double> coeffs,
                          const BBox& bbox, const SamplerConfig& config, Rng& rng);

// Separates samples by normalized center distance: the K farthest become
// external candidates, the K nearest of the rest internal. Scores are left at
// zero; see score_candidates.
CandidateSet split_internal_external(std::span<const ArcSample> samples,
                                     const BBox& bbox, const SamplerConfig& config);

CandidateSet ray_based_candidates(const BBox& bbox, const SamplerConfig& config);

// Uniform points in the box; the baseline of the robustness benchmark.
CandidateSet random_candidates(const BBox& bbox, const SamplerConfig& config, Rng& rng);

// Annotates every candidate with membership probability and entropy.
void score_candidates(CandidateSet& set, const BBox& bbox, const EntropyParams& params);

// Spiral strategy end to end: coefficients, adaptive sampling, separation.
CandidateSet spiral_candidates(const SpiralPath& path, const BBox& bbox,
                               const SamplerConfig& config, Rng& rng);

}  // namespace epd
