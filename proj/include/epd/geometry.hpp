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
#include <optional>
#include <string_view>

#include "epd/rng.hpp"

namespace epd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Axis-aligned box in absolute pixels. Valid boxes satisfy
// x_min < x_max and y_min < y_max with all coordinates finite.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  Point2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

  bool is_valid() const;
  // Closed-box containment: boundary points count as inside.
  bool contains(const Point2& pt) const;
  bool contains(const BBox& other) const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct ImageDims {
  int width = 0;
  int height = 0;

  bool is_valid() const { return width >= 1 && height >= 1; }
  BBox frame() const { return {0.0, 0.0, double(width), double(height)}; }
};

struct CenterAxes {
  Point2 center;
  double a = 0.0;  // half-width
  double b = 0.0;  // half-height
};

struct NormalizedDistances {
  double center = 0.0;  // distance to center over the half-diagonal
  double edge = 0.0;    // distance to the nearest edge over min(a, b)
};

enum class Side { kLeft = 0, kTop = 1, kRight = 2, kBottom = 3 };

enum class PerturbationKind { kTight, kMildOneSide, kSeverePerSide };

std::string_view to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(std::string_view name);

struct PerturbationRegime {
  PerturbationKind kind = PerturbationKind::kTight;
  double mild_fraction = 0.10;
  double severe_min = 0.05;
  double severe_max = 0.15;
  // Test hooks: pin the randomly drawn side / per-side factors
  // (ordered left, top, right, bottom).
  std::optional<Side> forced_side;
  std::optional<std::array<double, 4>> forced_factors;
};

// Throws kInvalidGeometry for zero-area or non-finite boxes.
CenterAxes center_and_axes(const BBox& bbox);

// Throws kOutOfRegion when pt lies outside the closed box.
NormalizedDistances normalized_distances(const Point2& pt, const BBox& bbox);

// Maps a box given on the [0, alpha] grid back to absolute pixels, clipped to
// the image frame.
BBox convert_relative_to_absolute(const BBox& relative, const ImageDims& dims,
                                  double alpha);
BBox convert_absolute_to_relative(const BBox& absolute, const ImageDims& dims,
                                  double alpha);

BBox clip_to_frame(const BBox& bbox, const ImageDims& dims);

BBox perturb_bbox(const BBox& bbox, const PerturbationRegime& regime,
                  const ImageDims& dims, Rng& rng);

}  // namespace epd
