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

#include <atomic>

#include "epd/error.hpp"
#include "epd/kernels.hpp"

namespace epd::kernels {

namespace {

Isa probe() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::kAvx2 && detected_isa() != Isa::kAvx2) {
    throw Error(ErrorKind::kInvalidParameter, "CPU does not support AVX2");
  }
  active().store(isa, std::memory_order_relaxed);
}

void segment_lengths(std::span<const Point2> points, std::span<double> out) {
  if (active_isa() == Isa::kAvx2) return avx2::segment_lengths(points, out);
  scalar::segment_lengths(points, out);
}

void center_distances(std::span<const Point2> points, Point2 center,
                      std::span<double> out) {
  if (active_isa() == Isa::kAvx2) return avx2::center_distances(points, center, out);
  scalar::center_distances(points, center, out);
}

MinMax min_max(std::span<const double> values) {
  if (active_isa() == Isa::kAvx2) return avx2::min_max(values);
  return scalar::min_max(values);
}

void min_max_normalize(std::span<const double> values, std::span<double> out) {
  if (active_isa() == Isa::kAvx2) return avx2::min_max_normalize(values, out);
  scalar::min_max_normalize(values, out);
}

void gradient(std::span<const double> values, double dt, std::span<double> out) {
  if (active_isa() == Isa::kAvx2) return avx2::gradient(values, dt, out);
  scalar::gradient(values, dt, out);
}

void blend(std::span<const double> weights, double lo, double hi,
           std::span<double> out) {
  if (active_isa() == Isa::kAvx2) return avx2::blend(weights, lo, hi, out);
  scalar::blend(weights, lo, hi, out);
}

}  // namespace epd::kernels
