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

// Data-parallel inner loops of the spiral and sampler stages.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// The variants perform the same IEEE operations in the same order (sqrt,
// add, sub, mul, div, min, max are all correctly rounded and the build
// disables FMA contraction), so results are bit-identical across ISAs; the
// equivalence tests assert exact equality.

#include <span>
#include <string_view>

#include "epd/geometry.hpp"

namespace epd::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

// Best ISA supported by the running CPU.
Isa detected_isa();
// ISA used by the dispatching entry points below.
Isa active_isa();
// Overrides dispatch (tests, benchmarking). Requesting an ISA the CPU lacks
// throws kInvalidParameter.
void set_active_isa(Isa isa);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
};

// out[i] = |p[i+1] - p[i]|, out.size() == points.size() - 1.
void segment_lengths(std::span<const Point2> points, std::span<double> out);

// out[i] = |p[i] - center|.
void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out);

// Requires a non-empty input.
MinMax min_max(std::span<const double> values);

// out[i] = (v[i] - min) / (max - min); all zeros when max == min.
void min_max_normalize(std::span<const double> values, std::span<double> out);

// Central differences (v[i+1] - v[i-1]) / (2 dt) in the interior and one-sided
// differences at both ends. Requires at least 2 values.
void gradient(std::span<const double> values, double dt, std::span<double> out);

// out[i] = lo + w[i] * (hi - lo), exact at w == 0 and w == 1, clamped to
// [lo, hi]. Requires lo <= hi.
void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out);

// Per-ISA entry points, exposed for equivalence tests.
namespace scalar {
void segment_lengths(std::span<const Point2> points, std::span<double> out);
void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out);
MinMax min_max(std::span<const double> values);
void min_max_normalize(std::span<const double> values, std::span<double> out);
void gradient(std::span<const double> values, double dt, std::span<double> out);
void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out);
}  // namespace scalar

namespace avx2 {
void segment_lengths(std::span<const Point2> points, std::span<double> out);
void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out);
MinMax min_max(std::span<const double> values);
void min_max_normalize(std::span<const double> values, std::span<double> out);
void gradient(std::span<const double> values, double dt, std::span<double> out);
void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out);
}  // namespace avx2

}  // namespace epd::kernels
