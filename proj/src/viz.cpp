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

#include "epd/viz.hpp"

#include <algorithm>

#include "epd/error.hpp"
#include "epd/json_format.hpp"
#include "epd/rng.hpp"

namespace epd {

namespace {

constexpr const char* kStyle =
    "<style>"
    ".bbox{fill:none;stroke:#222;stroke-width:1;stroke-dasharray:4 2}"
    ".spiral{fill:none;stroke:#4a6fa5;stroke-width:0.6;stroke-opacity:0.8}"
    ".cand-external{fill:#d62728;stroke:#fff;stroke-width:0.5}"
    ".cand-internal{fill:#2ca02c;stroke:#fff;stroke-width:0.5}"
    ".legend{font-family:monospace;font-size:9px;fill:#222}"
    "</style>";

constexpr double kGlyphRadius = 3.0;

std::string num(double v) { return format_fixed6(v); }

std::string panel_height(const PanelSpec& spec) {
  return std::to_string(spec.canvas_px + kLegendHeight);
}

void append_panel_body(std::string& out, const SpiralPath& path,
                       const CandidateSet* candidates, const PanelSpec& spec,
                       const SpiralConfig& config) {
  const BBox box = panel_bbox(spec);
  out += "<rect class=\"bbox\" x=\"" + num(box.x_min) + "\" y=\"" + num(box.y_min) +
         "\" width=\"" + num(box.width()) + "\" height=\"" + num(box.height()) + "\"/>\n";

  out += "<polyline class=\"spiral\" points=\"";
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    if (i) out += ' ';
    out += num(path.points[i].x);
    out += ',';
    out += num(path.points[i].y);
  }
  out += "\"/>\n";

  if (candidates != nullptr) {
    for (const ScoredPoint& sp : candidates->external) {
      out += "<circle class=\"cand-external\" cx=\"" + num(sp.point.x) + "\" cy=\"" +
             num(sp.point.y) + "\" r=\"" + num(kGlyphRadius) + "\"/>\n";
    }
    for (const ScoredPoint& sp : candidates->internal) {
      out += "<rect class=\"cand-internal\" x=\"" + num(sp.point.x - kGlyphRadius) +
             "\" y=\"" + num(sp.point.y - kGlyphRadius) + "\" width=\"" +
             num(2 * kGlyphRadius) + "\" height=\"" + num(2 * kGlyphRadius) + "\"/>\n";
    }
  }

  const int y0 = spec.canvas_px + 11;
  out += "<text class=\"legend\" x=\"4\" y=\"" + std::to_string(y0) + "\">" +
         std::string(to_string(spec.orientation.direction)) + " " +
         std::string(to_string(spec.orientation.terminal)) + " | " +
         std::string(to_string(spec.aspect)) + "</text>\n";
  out += "<text class=\"legend\" x=\"4\" y=\"" + std::to_string(y0 + 11) + "\">turns=" +
         std::to_string(config.n_turns) + " N=" + std::to_string(config.n_points) +
         " n=" + format_shortest(config.exponent_n) + " k=" +
         format_shortest(config.k_sigmoid) + "</text>\n";
}

void validate_spec(const PanelSpec& spec) {
  if (spec.canvas_px < 20) {
    throw Error(ErrorKind::kInvalidParameter, "panel canvas must be at least 20 px", "viz");
  }
}

}  // namespace

std::string_view to_string(Aspect aspect) {
  switch (aspect) {
    case Aspect::k1x1: return "1:1";
    case Aspect::k1x1_5: return "1:1.5";
    case Aspect::k1x2: return "1:2";
  }
  return "1:1";
}

Aspect aspect_from_string(std::string_view name) {
  for (Aspect a : {Aspect::k1x1, Aspect::k1x1_5, Aspect::k1x2}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown aspect '" + std::string(name) + "'", "viz");
}

double aspect_height_ratio(Aspect aspect) {
  switch (aspect) {
    case Aspect::k1x1: return 1.0;
    case Aspect::k1x1_5: return 1.5;
    case Aspect::k1x2: return 2.0;
  }
  return 1.0;
}

BBox panel_bbox(const PanelSpec& spec) {
  validate_spec(spec);
  const double c = spec.canvas_px;
  const double h = 0.8 * c;
  const double w = h / aspect_height_ratio(spec.aspect);
  return {0.5 * (c - w), 0.1 * c, 0.5 * (c + w), 0.9 * c};
}

std::string render_panel(const SpiralPath& path, const CandidateSet* candidates,
                         const PanelSpec& spec, const SpiralConfig& config) {
  validate_spec(spec);
  const std::string w = std::to_string(spec.canvas_px);
  const std::string h = panel_height(spec);
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
      w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += kStyle;
  out += '\n';
  append_panel_body(out, path, candidates, spec, config);
  out += "</svg>\n";
  return out;
}

std::vector<PanelSpec> standard_grid_specs(int canvas_px) {
  std::vector<PanelSpec> specs;
  for (Aspect a : {Aspect::k1x2, Aspect::k1x1_5, Aspect::k1x1}) {
    for (const Orientation& o : all_configurations()) specs.push_back({a, o, canvas_px});
  }
  return specs;
}

std::string render_grid(const std::vector<PanelSpec>& specs, const SpiralConfig& config,
                        const SamplerConfig& sampler, std::uint64_t seed,
                        bool with_candidates) {
  constexpr int kRows = 3;
  constexpr int kCols = 8;
  if (specs.size() != kRows * kCols) {
    throw Error(ErrorKind::kInvalidParameter,
                "grid needs exactly 24 panel specs, got " + std::to_string(specs.size()), "viz");
  }
  int cell_w = 0;
  int cell_h = 0;
  for (const PanelSpec& s : specs) {
    validate_spec(s);
    cell_w = std::max(cell_w, s.canvas_px);
    cell_h = std::max(cell_h, s.canvas_px + kLegendHeight);
  }
  const std::string w = std::to_string(cell_w * kCols);
  const std::string h = std::to_string(cell_h * kRows);
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
      w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += kStyle;
  out += '\n';
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const PanelSpec& spec = specs[i];
    SpiralConfig sc = config;
    sc.orientation = spec.orientation;
    const BBox box = panel_bbox(spec);
    const SpiralPath path = generate_spiral(box, sc);
    CandidateSet cands;
    if (with_candidates) {
      Rng rng(Rng::derive_seed(seed, {i}));
      cands = spiral_candidates(path, box, sampler, rng);
    }
    const int row = static_cast<int>(i) / kCols;
    const int col = static_cast<int>(i) % kCols;
    out += "<g class=\"panel\" id=\"panel-" + std::to_string(row) + "-" + std::to_string(col) +
           "\" transform=\"translate(" + std::to_string(col * cell_w) + "," +
           std::to_string(row * cell_h) + ")\">\n";
    append_panel_body(out, path, with_candidates ? &cands : nullptr, spec, sc);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace epd
