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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epd/geometry.hpp"

namespace epd {

// Decimal with exactly 6 fractional digits, correctly rounded from the
// binary value; negative zero prints as 0.000000.
std::string format_fixed6(double v);

// Shortest round-trip decimal ("160", "0.35355339059327373").
std::string format_shortest(double v);

// Compact JSON emitter for outputs that must be byte-stable: numbers are
// written through the formatters above instead of the JSON library's.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& string(std::string_view s);
  JsonWriter& fixed(double v);
  JsonWriter& integer(std::int64_t v);
  JsonWriter& unsigned_integer(std::uint64_t v);
  JsonWriter& boolean(bool v);
  JsonWriter& raw(std::string_view token);

  JsonWriter& point(const Point2& p);
  JsonWriter& bbox(const BBox& b);

  const std::string& str() const { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

// `[x_min, y_min, x_max, y_max]`.
BBox bbox_from_json(const nlohmann::json& j);
nlohmann::json bbox_to_json(const BBox& b);

// Parses "x0,y0,x1,y1".
BBox parse_bbox_list(std::string_view text);
// Parses "WxH".
ImageDims parse_dims(std::string_view text);

}  // namespace epd
