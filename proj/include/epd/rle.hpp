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

#include "epd/geometry.hpp"

namespace epd {

// Dense binary mask, row-major, one byte per pixel (0 or 1).
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), data(std::size_t(w) * h, 0) {}

  bool at(int x, int y) const { return data[std::size_t(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[std::size_t(y) * width + x] = v ? 1 : 0; }
  std::size_t area() const;

  // Tight pixel-extent bounds [min_col, min_row, max_col + 1, max_row + 1].
  // Throws kInvalidGeometry for an empty mask.
  BBox tight_bbox() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

// Row-major run lengths. The first run counts background pixels (possibly
// zero) and runs alternate from there. Serialized as
// {"size": [H, W], "counts": [...]}.
struct RleMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

// Same run convention in column-major order, as used by COCO annotations.
struct CocoRle {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const CocoRle&, const CocoRle&) = default;
};

RleMask encode_rle(const BinaryMask& mask);
// Throws kInvalidParameter when the runs do not cover exactly H * W pixels.
BinaryMask decode_rle(const RleMask& rle);

CocoRle encode_coco(const BinaryMask& mask);
BinaryMask decode_coco(const CocoRle& rle);

// COCO's compressed counts string: signed 5-bit groups with a continuation
// bit, offset by 48 into printable ASCII; runs from index 3 on are stored as
// deltas against the run two positions earlier.
std::string coco_counts_to_string(const std::vector<std::uint32_t>& counts);
std::vector<std::uint32_t> coco_counts_from_string(std::string_view s);

}  // namespace epd
