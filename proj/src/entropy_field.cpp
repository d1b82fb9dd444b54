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

#include "epd/entropy_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epd/error.hpp"

namespace epd {

std::string_view to_string(LogBase base) {
  return base == LogBase::kBase2 ? "base2" : "natural";
}

LogBase log_base_from_string(std::string_view name) {
  if (name == "natural") return LogBase::kNatural;
  if (name == "base2") return LogBase::kBase2;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown log_base '" + std::string(name) + "'");
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kInternal: return "internal";
    case Origin::kExternal: return "external";
    case Origin::kRay: return "ray";
  }
  return "internal";
}

void EntropyParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || b < 0.0 ||
      c < 0.0) {
    throw Error(ErrorKind::kInvalidParameter,
                "entropy parameters must be finite with b >= 0 and c >= 0");
  }
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double membership_probability(const NormalizedDistances& nd,
                              const EntropyParams& params) {
  return logistic(params.a - params.b * nd.center + params.c * nd.edge);
}

double shannon_entropy(double p, LogBase base) {
  if (std::isnan(p)) {
    throw Error(ErrorKind::kInvalidParameter, "probability is NaN");
  }
  if (p <= 0.0 || p >= 1.0) return 0.0;
  const double h = -p * std::log(p) - (1.0 - p) * std::log1p(-p);
  return base == LogBase::kBase2 ? h / std::numbers::ln2 : h;
}

double max_entropy(LogBase base) {
  return base == LogBase::kBase2 ? 1.0 : std::numbers::ln2;
}

ScoredPoint score_point(const Point2& pt, const BBox& bbox,
                        const EntropyParams& params, Origin origin,
                        int sequence_index) {
  const double p = membership_probability(normalized_distances(pt, bbox), params);
  return {pt, p, shannon_entropy(p, params.log_base), origin, sequence_index};
}

std::vector<ScoredPoint> rank_by_entropy(std::span<const ScoredPoint> points,
                                         int budget_k) {
  if (budget_k < 1) {
    throw Error(ErrorKind::kInvalidParameter, "candidate budget K must be >= 1");
  }
  std::vector<ScoredPoint> out(points.begin(), points.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredPoint& l, const ScoredPoint& r) {
                     if (l.entropy != r.entropy) return l.entropy > r.entropy;
                     return l.sequence_index < r.sequence_index;
                   });
  if (out.size() > static_cast<std::size_t>(budget_k)) out.resize(budget_k);
  return out;
}

}  // namespace epd
