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

#include <span>
#include <string_view>
#include <vector>

#include "epd/geometry.hpp"

namespace epd {

enum class LogBase { kNatural, kBase2 };

std::string_view to_string(LogBase base);
LogBase log_base_from_string(std::string_view name);

// Logistic calibration p = sigmoid(a - b * d_c + c * d_e). The defaults put
// p ~ 0.90 at the box center and p ~ 0.10 at the corners.
struct EntropyParams {
  double a = 0.0;
  double b = 2.2;
  double c = 2.2;
  LogBase log_base = LogBase::kNatural;

  void validate() const;
};

enum class Origin { kInternal, kExternal, kRay };

std::string_view to_string(Origin origin);

struct ScoredPoint {
  Point2 point;
  double p = 0.0;
  double entropy = 0.0;
  Origin origin = Origin::kInternal;
  int sequence_index = 0;
};

double logistic(double z);

double membership_probability(const NormalizedDistances& nd,
                              const EntropyParams& params);

// Binary entropy with 0 log 0 := 0. Inputs outside [0, 1] are clamped.
double shannon_entropy(double p, LogBase base);

double max_entropy(LogBase base);

// Fills p and entropy for a point inside bbox.
ScoredPoint score_point(const Point2& pt, const BBox& bbox,
                        const EntropyParams& params, Origin origin,
                        int sequence_index);

// Top-min(K, n) by entropy descending; equal entropies keep ascending
// sequence_index order.
std::vector<ScoredPoint> rank_by_entropy(std::span<const ScoredPoint> points,
                                         int budget_k);

}  // namespace epd
