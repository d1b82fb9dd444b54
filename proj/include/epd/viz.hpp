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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epd/geometry.hpp"
#include "epd/sampler.hpp"
#include "epd/spiral.hpp"

namespace epd {

// Box width : height.
enum class Aspect { k1x1, k1x1_5, k1x2 };

std::string_view to_string(Aspect aspect);  // "1:1", "1:1.5", "1:2"
Aspect aspect_from_string(std::string_view name);
double aspect_height_ratio(Aspect aspect);  // height / width

struct PanelSpec {
  Aspect aspect = Aspect::k1x1;
  Orientation orientation;
  int canvas_px = 200;  // panel width; the box is inset by 10% of it
};

inline constexpr int kLegendHeight = 28;

// Box of the panel's aspect, centered in the canvas.
BBox panel_bbox(const PanelSpec& spec);

// Standalone SVG 1.1 document for one panel. The path must have been
// generated over panel_bbox(spec); `candidates` may be null.
std::string render_panel(const SpiralPath& path, const CandidateSet* candidates,
                         const PanelSpec& spec, const SpiralConfig& config);

// Fig. layout: rows 1:2, 1:1.5, 1:1 from top, columns the eight
// orientations (four clockwise, then four counterclockwise).
std::vector<PanelSpec> standard_grid_specs(int canvas_px = 200);

// 3 x 8 grid; each panel gets its own spiral and, when `with_candidates`,
// candidates sampled from a stream derived from (seed, panel index).
// Throws kInvalidParameter unless exactly 24 specs are given.
std::string render_grid(const std::vector<PanelSpec>& specs, const SpiralConfig& config,
                        const SamplerConfig& sampler, std::uint64_t seed,
                        bool with_candidates = true);

}  // namespace epd
