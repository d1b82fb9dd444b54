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

#include "epd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epd/error.hpp"

namespace epd {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_image(const ImageDims& dims) {
  if (!dims.is_valid()) {
    throw Error(ErrorKind::kInvalidParameter,
                "image dimensions must be positive, got " +
                    std::to_string(dims.width) + "x" + std::to_string(dims.height));
  }
}

}  // namespace

bool BBox::is_valid() const {
  return finite(x_min) && finite(y_min) && finite(x_max) && finite(y_max) &&
         x_min < x_max && y_min < y_max;
}

bool BBox::contains(const Point2& pt) const {
  return pt.x >= x_min && pt.x <= x_max && pt.y >= y_min && pt.y <= y_max;
}

bool BBox::contains(const BBox& other) const {
  return other.x_min >= x_min && other.x_max <= x_max && other.y_min >= y_min &&
         other.y_max <= y_max;
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kTight: return "tight";
    case PerturbationKind::kMildOneSide: return "mild_one_side";
    case PerturbationKind::kSeverePerSide: return "severe_per_side";
  }
  return "tight";
}

PerturbationKind perturbation_kind_from_string(std::string_view name) {
  if (name == "tight") return PerturbationKind::kTight;
  if (name == "mild_one_side" || name == "mild") return PerturbationKind::kMildOneSide;
  if (name == "severe_per_side" || name == "severe") return PerturbationKind::kSeverePerSide;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown perturbation regime '" + std::string(name) + "'");
}

CenterAxes center_and_axes(const BBox& bbox) {
  if (!bbox.is_valid()) {
    throw Error(ErrorKind::kInvalidGeometry,
                "degenerate or non-finite bounding box", "geometry");
  }
  return {bbox.center(), 0.5 * bbox.width(), 0.5 * bbox.height()};
}

NormalizedDistances normalized_distances(const Point2& pt, const BBox& bbox) {
  const CenterAxes ca = center_and_axes(bbox);
  if (!finite(pt.x) || !finite(pt.y) || !bbox.contains(pt)) {
    throw Error(ErrorKind::kOutOfRegion, "point lies outside the bounding box",
                "geometry");
  }
  const double half_diagonal = std::hypot(ca.a, ca.b);
  const double dc = std::hypot(pt.x - ca.center.x, pt.y - ca.center.y) / half_diagonal;
  const double nearest_edge = std::min({pt.x - bbox.x_min, bbox.x_max - pt.x,
                                        pt.y - bbox.y_min, bbox.y_max - pt.y});
  const double de = nearest_edge / std::min(ca.a, ca.b);
  return {std::clamp(dc, 0.0, 1.0), std::clamp(de, 0.0, 1.0)};
}

BBox clip_to_frame(const BBox& bbox, const ImageDims& dims) {
  const double w = dims.width;
  const double h = dims.height;
  return {std::clamp(bbox.x_min, 0.0, w), std::clamp(bbox.y_min, 0.0, h),
          std::clamp(bbox.x_max, 0.0, w), std::clamp(bbox.y_max, 0.0, h)};
}

BBox convert_relative_to_absolute(const BBox& relative, const ImageDims& dims,
                                  double alpha) {
  if (!(alpha > 0.0) || !finite(alpha)) {
    throw Error(ErrorKind::kInvalidParameter, "alpha must be positive", "geometry");
  }
  require_image(dims);
  // Multiply before dividing so exact ratios stay exact.
  const double w = dims.width;
  const double h = dims.height;
  BBox abs{relative.x_min * w / alpha, relative.y_min * h / alpha, relative.x_max * w / alpha,
           relative.y_max * h / alpha};
  return clip_to_frame(abs, dims);
}

BBox convert_absolute_to_relative(const BBox& absolute, const ImageDims& dims,
                                  double alpha) {
  if (!(alpha > 0.0) || !finite(alpha)) {
    throw Error(ErrorKind::kInvalidParameter, "alpha must be positive", "geometry");
  }
  require_image(dims);
  const BBox clipped = clip_to_frame(absolute, dims);
  const double w = dims.width;
  const double h = dims.height;
  return {clipped.x_min * alpha / w, clipped.y_min * alpha / h, clipped.x_max * alpha / w,
          clipped.y_max * alpha / h};
}

BBox perturb_bbox(const BBox& bbox, const PerturbationRegime& regime,
                  const ImageDims& dims, Rng& rng) {
  center_and_axes(bbox);
  require_image(dims);
  const double w = bbox.width();
  const double h = bbox.height();

  // Outward expansion fractions ordered left, top, right, bottom.
  std::array<double, 4> factors{0.0, 0.0, 0.0, 0.0};
  switch (regime.kind) {
    case PerturbationKind::kTight:
      break;
    case PerturbationKind::kMildOneSide: {
      const Side side = regime.forced_side
                            ? *regime.forced_side
                            : static_cast<Side>(rng.uniform_index(4));
      factors[static_cast<int>(side)] = regime.mild_fraction;
      break;
    }
    case PerturbationKind::kSeverePerSide:
      if (regime.forced_factors) {
        factors = *regime.forced_factors;
      } else {
        for (double& f : factors) f = rng.uniform(regime.severe_min, regime.severe_max);
      }
      break;
  }
  for (double f : factors) {
    if (!(f >= 0.0) || !finite(f)) {
      throw Error(ErrorKind::kInvalidParameter,
                  "perturbation factors must be non-negative", "geometry");
    }
  }

  const BBox expanded{bbox.x_min - factors[0] * w, bbox.y_min - factors[1] * h,
                      bbox.x_max + factors[2] * w, bbox.y_max + factors[3] * h};
  return clip_to_frame(expanded, dims);
}

}  // namespace epd
