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

#include "epd/rle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "epd/error.hpp"

namespace epd {

namespace {

[[noreturn]] void bad_rle(const std::string& what) {
  throw Error(ErrorKind::kInvalidParameter, "rle: " + what);
}

// Run lengths over a pixel sequence, first run counting zeros.
template <typename PixelAt>
std::vector<std::uint32_t> runs(std::size_t n, PixelAt pixel) {
  std::vector<std::uint32_t> counts;
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t v = pixel(i);
    if (v != current) {
      counts.push_back(run);
      run = 0;
      current = v;
    }
    ++run;
  }
  counts.push_back(run);
  return counts;
}

template <typename SetPixel>
void unroll(const std::vector<std::uint32_t>& counts, std::size_t n, SetPixel set) {
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t c : counts) {
    if (pos + c > n) bad_rle("runs exceed the mask size");
    if (value) {
      for (std::size_t i = pos; i < pos + c; ++i) set(i);
    }
    pos += c;
    value ^= 1;
  }
  if (pos != n) bad_rle("runs do not cover the mask");
}

void check_size(int h, int w) {
  if (h < 1 || w < 1) bad_rle("size must be positive");
}

}  // namespace

std::size_t BinaryMask::area() const {
  std::size_t n = 0;
  for (std::uint8_t v : data) n += v != 0;
  return n;
}

BBox BinaryMask::tight_bbox() const {
  int x0 = width, y0 = height, x1 = -1, y1 = -1;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw Error(ErrorKind::kInvalidGeometry, "mask has no foreground");
  return {double(x0), double(y0), double(x1 + 1), double(y1 + 1)};
}

RleMask encode_rle(const BinaryMask& mask) {
  return {mask.height, mask.width,
          runs(mask.data.size(), [&](std::size_t i) { return mask.data[i] ? 1 : 0; })};
}

BinaryMask decode_rle(const RleMask& rle) {
  check_size(rle.height, rle.width);
  BinaryMask mask(rle.width, rle.height);
  unroll(rle.counts, mask.data.size(), [&](std::size_t i) { mask.data[i] = 1; });
  return mask;
}

CocoRle encode_coco(const BinaryMask& mask) {
  const std::size_t h = mask.height;
  auto pixel = [&](std::size_t i) -> std::uint8_t {
    return mask.at(static_cast<int>(i / h), static_cast<int>(i % h)) ? 1 : 0;
  };
  return {mask.height, mask.width, runs(mask.data.size(), pixel)};
}

BinaryMask decode_coco(const CocoRle& rle) {
  check_size(rle.height, rle.width);
  BinaryMask mask(rle.width, rle.height);
  const std::size_t h = rle.height;
  unroll(rle.counts, mask.data.size(), [&](std::size_t i) {
    mask.set(static_cast<int>(i / h), static_cast<int>(i % h), true);
  });
  return mask;
}

std::string coco_counts_to_string(const std::vector<std::uint32_t>& counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t x = counts[i];
    if (i > 2) x -= static_cast<std::int64_t>(counts[i - 2]);
    bool more = true;
    while (more) {
      std::int64_t c = x & 0x1f;
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      out.push_back(static_cast<char>(c + 48));
    }
  }
  return out;
}

std::vector<std::uint32_t> coco_counts_from_string(std::string_view s) {
  std::vector<std::uint32_t> counts;
  std::size_t i = 0;
  while (i < s.size()) {
    std::int64_t x = 0;
    int k = 0;
    bool more = true;
    while (more) {
      if (i >= s.size()) bad_rle("truncated counts string");
      const std::int64_t c = static_cast<std::int64_t>(s[i]) - 48;
      if (c < 0 || c > 63) bad_rle("invalid character in counts string");
      x |= (c & 0x1f) << (5 * k);
      more = (c & 0x20) != 0;
      ++i;
      ++k;
      if (!more && (c & 0x10)) x |= -(std::int64_t{1} << (5 * k));
    }
    if (counts.size() > 2) x += counts[counts.size() - 2];
    if (x < 0 || x > std::numeric_limits<std::uint32_t>::max()) {
      bad_rle("run length out of range");
    }
    counts.push_back(static_cast<std::uint32_t>(x));
  }
  return counts;
}

}  // namespace epd
