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

#include <filesystem>
#include <string>
#include <vector>

#include "epd/geometry.hpp"
#include "epd/rle.hpp"

namespace epd {

// A benchmark instance: image frame, ground-truth mask and its tight box,
// plus the referring expression. The image itself is only an opaque URI.
struct Scene {
  std::string scene_id;
  ImageDims dims;
  BinaryMask mask;
  BBox gt_bbox;
  std::string expression;
  std::string image_uri;

  // Checks mask/dims agreement, non-empty foreground and gt_bbox tightness.
  void validate() const;

  // Mask value at the pixel containing pt. Points on the far frame edge
  // (x == width or y == height) map to the last column/row. Throws
  // kOutOfRegion outside the frame.
  bool contains(const Point2& pt) const;
};

std::vector<Scene> load_scenes(const std::filesystem::path& path);
void save_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes);

// JSON text of a scene list (the scene file format).
std::string scenes_to_json_text(const std::vector<Scene>& scenes);
std::vector<Scene> scenes_from_json_text(const std::string& text);

}  // namespace epd
