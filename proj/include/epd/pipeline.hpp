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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epd/config.hpp"
#include "epd/geometry.hpp"
#include "epd/sampler.hpp"
#include "epd/scene.hpp"
#include "epd/spiral.hpp"
#include "epd/verification.hpp"

namespace epd {

// Stage names used to tag errors.
inline constexpr const char* kStageGeometry = "geometry";
inline constexpr const char* kStageSpiral = "spiral";
inline constexpr const char* kStageSampler = "sampler";
inline constexpr const char* kStageEntropy = "entropy_field";
inline constexpr const char* kStageVerification = "verification";

struct PromptRequest {
  BBox bbox;
  bool relative = false;  // bbox given on the 0..alpha scale
  ImageDims dims;
  std::string expression;
  std::string image_uri;
};

struct PromptBundle {
  BBox bbox;
  std::vector<Point2> positive_points;
  std::vector<Point2> negative_points;
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;
  std::string config_digest;
};

// Everything produced before the first oracle query.
struct CandidateStage {
  BBox bbox;  // absolute
  Orientation orientation;
  std::optional<SpiralPath> path;  // spiral strategy only
  CandidateSet candidates;         // scored
};

// Independent RNG streams, one per stochastic stage.
struct StageSeeds {
  std::uint64_t orientation;
  std::uint64_t sampler;
  std::uint64_t markers;
  std::uint64_t oracle;

  static StageSeeds derive(std::uint64_t seed);
};

// Validates the box (converting it from relative form first when flagged)
// and clips nothing: a box reaching outside the frame is rejected.
BBox resolve_bbox(const PromptRequest& request, double alpha);

// Geometry, spiral, sampling and entropy annotation for an absolute box.
CandidateStage generate_candidates(const BBox& bbox, const RunConfig& config,
                                   std::uint64_t seed);

QueryContext query_context(const PromptRequest& request, const OracleConfig& oracle);

// Full discovery run. Throws InsufficientEvidenceError (with the partial
// trace) when the query budget runs out first.
PromptBundle discover_prompts(const PromptRequest& request, const RunConfig& config,
                              Oracle& oracle);

// Mask oracle when `scene` is given and the config asks for one, remote
// oracle otherwise.
std::unique_ptr<Oracle> make_oracle(const OracleConfig& config, const Scene* scene,
                                    std::uint64_t seed);

std::string prompt_bundle_to_json(const PromptBundle& bundle);
std::string spiral_path_to_json(const SpiralPath& path, const BBox& bbox,
                                const Orientation& orientation);
std::string candidate_set_to_json(const CandidateStage& stage);

}  // namespace epd
