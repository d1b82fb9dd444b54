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

// Compiled with -mavx2; only reached through dispatch after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "epd/kernels.hpp"

namespace epd::kernels::avx2 {

static_assert(sizeof(Point2) == 2 * sizeof(double));

namespace {

// Loads points[i..i+3] and returns (x, y) lanes in order 0, 2, 1, 3.
inline void load_xy(const Point2* p, __m256d& x, __m256d& y) {
  const __m256d lo = _mm256_loadu_pd(&p[0].x);
  const __m256d hi = _mm256_loadu_pd(&p[2].x);
  x = _mm256_unpacklo_pd(lo, hi);
  y = _mm256_unpackhi_pd(lo, hi);
}

// Undoes the 0, 2, 1, 3 lane order of load_xy.
inline __m256d restore_order(__m256d v) {
  return _mm256_permute4x64_pd(v, _MM_SHUFFLE(3, 1, 2, 0));
}

inline __m256d hypot_lanes(__m256d dx, __m256d dy) {
  return _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
}

}  // namespace

void segment_lengths(std::span<const Point2> points, std::span<double> out) {
  if (points.size() < 2) return;
  const std::size_t n = points.size() - 1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x0, y0, x1, y1;
    load_xy(points.data() + i, x0, y0);
    load_xy(points.data() + i + 1, x1, y1);
    const __m256d d = hypot_lanes(_mm256_sub_pd(x1, x0), _mm256_sub_pd(y1, y0));
    _mm256_storeu_pd(out.data() + i, restore_order(d));
  }
  scalar::segment_lengths(points.subspan(i), out.subspan(i));
}

void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out) {
  const std::size_t n = points.size();
  const __m256d cx = _mm256_set1_pd(center.x);
  const __m256d cy = _mm256_set1_pd(center.y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x, y;
    load_xy(points.data() + i, x, y);
    const __m256d d = hypot_lanes(_mm256_sub_pd(x, cx), _mm256_sub_pd(y, cy));
    _mm256_storeu_pd(out.data() + i, restore_order(d));
  }
  scalar::center_distances(points.subspan(i), center, out.subspan(i));
}

MinMax min_max(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 4) return scalar::min_max(values);
  __m256d vmin = _mm256_loadu_pd(values.data());
  __m256d vmax = vmin;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    vmin = _mm256_min_pd(v, vmin);
    vmax = _mm256_max_pd(v, vmax);
  }
  alignas(32) double lmin[4];
  alignas(32) double lmax[4];
  _mm256_store_pd(lmin, vmin);
  _mm256_store_pd(lmax, vmax);
  MinMax mm{lmin[0], lmax[0]};
  for (int l = 1; l < 4; ++l) {
    mm.min = lmin[l] < mm.min ? lmin[l] : mm.min;
    mm.max = lmax[l] > mm.max ? lmax[l] : mm.max;
  }
  for (; i < n; ++i) {
    mm.min = values[i] < mm.min ? values[i] : mm.min;
    mm.max = values[i] > mm.max ? values[i] : mm.max;
  }
  return mm;
}

void min_max_normalize(std::span<const double> values, std::span<double> out) {
  const std::size_t n = values.size();
  if (n == 0) return;
  const MinMax mm = min_max(values);
  const double range = mm.max - mm.min;
  if (!(range > 0.0)) {
    for (double& v : out) v = 0.0;
    return;
  }
  const __m256d vmin = _mm256_set1_pd(mm.min);
  const __m256d vrange = _mm256_set1_pd(range);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_sub_pd(v, vmin), vrange));
  }
  for (; i < n; ++i) out[i] = (values[i] - mm.min) / range;
}

void gradient(std::span<const double> values, double dt, std::span<double> out) {
  const std::size_t n = values.size();
  out[0] = (values[1] - values[0]) / dt;
  const __m256d two_dt = _mm256_set1_pd(2.0 * dt);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d next = _mm256_loadu_pd(values.data() + i + 1);
    const __m256d prev = _mm256_loadu_pd(values.data() + i - 1);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_sub_pd(next, prev), two_dt));
  }
  const double s = 2.0 * dt;
  for (; i + 1 < n; ++i) out[i] = (values[i + 1] - values[i - 1]) / s;
  out[n - 1] = (values[n - 1] - values[n - 2]) / dt;
}

void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out) {
  const std::size_t n = weights.size();
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d vrange = _mm256_set1_pd(hi - lo);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(weights.data() + i);
    __m256d k = _mm256_add_pd(vlo, _mm256_mul_pd(w, vrange));
    k = _mm256_blendv_pd(k, vhi, _mm256_cmp_pd(w, one, _CMP_EQ_OQ));
    k = _mm256_max_pd(vlo, k);
    k = _mm256_min_pd(vhi, k);
    _mm256_storeu_pd(out.data() + i, k);
  }
  scalar::blend(weights.subspan(i), lo, hi, out.subspan(i));
}

}  // namespace epd::kernels::avx2
