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

#include "epd/pipeline.hpp"

#include <algorithm>
#include <utility>

#include "epd/entropy_field.hpp"
#include "epd/error.hpp"
#include "epd/json_format.hpp"
#include "epd/remote_vqa.hpp"
#include "epd/rng.hpp"

namespace epd {

namespace {

// Runs one stage, attributing untagged errors to it.
template <typename F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(stage);
    throw;
  }
}

enum StreamId : std::uint64_t { kOrientation = 1, kSampler = 2, kMarkers = 3, kOracle = 4 };

void write_scored(JsonWriter& w, const ScoredPoint& sp) {
  w.begin_object();
  w.key("point").point(sp.point);
  w.key("p").fixed(sp.p);
  w.key("entropy").fixed(sp.entropy);
  w.key("origin").string(to_string(sp.origin));
  w.key("sequence_index").integer(sp.sequence_index);
  w.end_object();
}

}  // namespace

StageSeeds StageSeeds::derive(std::uint64_t seed) {
  return {Rng::derive_seed(seed, {kOrientation}), Rng::derive_seed(seed, {kSampler}),
          Rng::derive_seed(seed, {kMarkers}), Rng::derive_seed(seed, {kOracle})};
}

BBox resolve_bbox(const PromptRequest& request, double alpha) {
  return staged(kStageGeometry, [&] {
    if (!request.dims.is_valid()) {
      throw Error(ErrorKind::kInvalidGeometry, "image dimensions must be positive");
    }
    const BBox box = request.relative
                         ? convert_relative_to_absolute(request.bbox, request.dims, alpha)
                         : request.bbox;
    center_and_axes(box);
    if (!request.dims.frame().contains(box)) {
      throw Error(ErrorKind::kInvalidGeometry, "bbox extends outside the image frame");
    }
    return box;
  });
}

CandidateStage generate_candidates(const BBox& bbox, const RunConfig& config,
                                   std::uint64_t seed) {
  staged("config", [&] { config.validate(); });
  staged(kStageGeometry, [&] { center_and_axes(bbox); });
  const StageSeeds seeds = StageSeeds::derive(seed);

  CandidateStage stage;
  stage.bbox = bbox;
  SamplerConfig sampler = config.sampler;
  sampler.seed = seed;

  switch (config.sampler.strategy) {
    case SamplingStrategy::kSpiral: {
      SpiralConfig sc = config.spiral;
      Rng orient_rng(seeds.orientation);
      if (config.random_direction || config.random_terminal) {
        const Orientation drawn = choose_configuration(orient_rng);
        if (config.random_direction) sc.orientation.direction = drawn.direction;
        if (config.random_terminal) sc.orientation.terminal = drawn.terminal;
      }
      stage.orientation = sc.orientation;
      stage.path = staged(kStageSpiral, [&] { return generate_spiral(bbox, sc); });
      Rng rng(seeds.sampler);
      stage.candidates =
          staged(kStageSampler, [&] { return spiral_candidates(*stage.path, bbox, sampler, rng); });
      break;
    }
    case SamplingStrategy::kRay:
      stage.orientation = config.spiral.orientation;
      stage.candidates = staged(kStageSampler, [&] { return ray_based_candidates(bbox, sampler); });
      break;
    case SamplingStrategy::kRandom: {
      stage.orientation = config.spiral.orientation;
      Rng rng(seeds.sampler);
      stage.candidates =
          staged(kStageSampler, [&] { return random_candidates(bbox, sampler, rng); });
      break;
    }
  }
  staged(kStageEntropy, [&] { score_candidates(stage.candidates, bbox, config.entropy); });
  return stage;
}

QueryContext query_context(const PromptRequest& request, const OracleConfig& oracle) {
  QueryContext ctx;
  ctx.image_uri = request.image_uri;
  ctx.expression = request.expression;
  ctx.top_k = oracle.top_k;
  ctx.marker_shape = oracle.marker_shape;
  ctx.marker_size_px = oracle.marker_size_px;
  return ctx;
}

PromptBundle discover_prompts(const PromptRequest& request, const RunConfig& config,
                              Oracle& oracle) {
  const std::uint64_t seed = config.sampler.seed;
  const BBox bbox = resolve_bbox(request, config.alpha);
  const CandidateStage stage = generate_candidates(bbox, config, seed);

  Rng marker_rng(StageSeeds::derive(seed).markers);
  const QueryContext ctx = query_context(request, config.oracle);
  VerificationResult result = staged(kStageVerification, [&] {
    return run_verification_loop(stage.candidates, oracle, config.policy, ctx, marker_rng);
  });

  PromptBundle bundle;
  bundle.bbox = bbox;
  for (int i = 0; i < config.policy.pos_target; ++i) {
    bundle.positive_points.push_back(result.positives[i].point);
  }
  for (int i = 0; i < config.policy.neg_target; ++i) {
    bundle.negative_points.push_back(result.negatives[i].point);
  }
  bundle.trace = std::move(result.trace);
  bundle.seed = seed;
  bundle.config_digest = config_digest(config);
  return bundle;
}

std::unique_ptr<Oracle> make_oracle(const OracleConfig& config, const Scene* scene,
                                    std::uint64_t seed) {
  if (config.kind == OracleKind::kMask) {
    if (scene == nullptr) {
      throw Error(ErrorKind::kInvalidParameter, "the mask oracle needs a scene",
                  kStageVerification);
    }
    return std::make_unique<MaskOracle>(*scene, config.noise,
                                        StageSeeds::derive(seed).oracle);
  }
  return std::make_unique<RemoteVqaOracle>(
      RemoteVqaConfig{config.endpoint, config.timeout_s, config.max_in_flight});
}

std::string prompt_bundle_to_json(const PromptBundle& bundle) {
  JsonWriter w;
  w.begin_object();
  w.key("bbox").bbox(bundle.bbox);
  w.key("positive_points").begin_array();
  for (const Point2& p : bundle.positive_points) w.point(p);
  w.end_array();
  w.key("negative_points").begin_array();
  for (const Point2& p : bundle.negative_points) w.point(p);
  w.end_array();
  w.key("trace").begin_array();
  for (const TraceEntry& e : bundle.trace) {
    w.begin_object();
    w.key("point").point(e.candidate.point);
    w.key("p").fixed(e.candidate.p);
    w.key("entropy").fixed(e.candidate.entropy);
    w.key("origin").string(to_string(e.candidate.origin));
    w.key("verdict_label").string(to_string(e.verdict.label));
    w.key("confidence").fixed(e.verdict.confidence);
    w.key("query_index").integer(e.query_index);
    w.end_object();
  }
  w.end_array();
  w.key("seed").unsigned_integer(bundle.seed);
  w.key("config_digest").string(bundle.config_digest);
  w.end_object();
  return w.str();
}

std::string spiral_path_to_json(const SpiralPath& path, const BBox& bbox,
                                const Orientation& orientation) {
  JsonWriter w;
  w.begin_object();
  w.key("bbox").bbox(bbox);
  w.key("direction").string(to_string(orientation.direction));
  w.key("terminal").string(to_string(orientation.terminal));
  w.key("n_points").integer(static_cast<std::int64_t>(path.points.size()));
  w.key("total_arc").fixed(path.total_arc());
  w.key("points").begin_array();
  for (const Point2& p : path.points) w.point(p);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string candidate_set_to_json(const CandidateStage& stage) {
  JsonWriter w;
  w.begin_object();
  w.key("bbox").bbox(stage.bbox);
  if (stage.path) {
    w.key("direction").string(to_string(stage.orientation.direction));
    w.key("terminal").string(to_string(stage.orientation.terminal));
  }
  w.key("beta").fixed(stage.candidates.beta);
  w.key("external").begin_array();
  for (const ScoredPoint& sp : stage.candidates.external) write_scored(w, sp);
  w.end_array();
  w.key("internal").begin_array();
  for (const ScoredPoint& sp : stage.candidates.internal) write_scored(w, sp);
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace epd
