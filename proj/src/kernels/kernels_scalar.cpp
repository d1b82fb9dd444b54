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

#include <cmath>

#include "epd/kernels.hpp"

namespace epd::kernels::scalar {

void segment_lengths(std::span<const Point2> points, std::span<double> out) {
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dx = points[i + 1].x - points[i].x;
    const double dy = points[i + 1].y - points[i].y;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = points[i].x - center.x;
    const double dy = points[i].y - center.y;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

MinMax min_max(std::span<const double> values) {
  MinMax mm{values[0], values[0]};
  for (double v : values) {
    mm.min = v < mm.min ? v : mm.min;
    mm.max = v > mm.max ? v : mm.max;
  }
  return mm;
}

void min_max_normalize(std::span<const double> values, std::span<double> out) {
  if (values.empty()) return;
  const MinMax mm = min_max(values);
  const double range = mm.max - mm.min;
  if (!(range > 0.0)) {
    for (double& v : out) v = 0.0;
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - mm.min) / range;
  }
}

void gradient(std::span<const double> values, double dt, std::span<double> out) {
  const std::size_t n = values.size();
  const double two_dt = 2.0 * dt;
  out[0] = (values[1] - values[0]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (values[i + 1] - values[i - 1]) / two_dt;
  }
  out[n - 1] = (values[n - 1] - values[n - 2]) / dt;
}

void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out) {
  const double range = hi - lo;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    double k = lo + w * range;
    k = w == 1.0 ? hi : k;
    k = k < lo ? lo : k;
    k = k > hi ? hi : k;
    out[i] = k;
  }
}

}  // namespace epd::kernels::scalar
