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

#include "epd/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epd/error.hpp"
#include "epd/json_format.hpp"

namespace epd {

using nlohmann::json;

namespace {

[[noreturn]] void bad_scene(const std::string& id, const std::string& what) {
  throw Error(ErrorKind::kInvalidParameter, "scene '" + id + "': " + what);
}

json mask_to_json(const BinaryMask& mask) {
  const RleMask rle = encode_rle(mask);
  return {{"size", {rle.height, rle.width}}, {"counts", rle.counts}};
}

BinaryMask mask_from_json(const json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("counts")) {
    throw Error(ErrorKind::kInvalidParameter, "mask needs 'size' and 'counts'");
  }
  const auto size = j.at("size").get<std::vector<int>>();
  if (size.size() != 2) throw Error(ErrorKind::kInvalidParameter, "mask size must be [H, W]");
  const json& counts = j.at("counts");
  // A string holds COCO's compressed column-major counts; an integer list
  // holds row-major runs.
  if (counts.is_string()) {
    return decode_coco({size[0], size[1], coco_counts_from_string(counts.get<std::string>())});
  }
  return decode_rle({size[0], size[1], counts.get<std::vector<std::uint32_t>>()});
}

json scene_to_json(const Scene& s) {
  json j = json::object();
  j["scene_id"] = s.scene_id;
  j["dims"] = {s.dims.width, s.dims.height};
  j["mask"] = mask_to_json(s.mask);
  j["gt_bbox"] = bbox_to_json(s.gt_bbox);
  j["expression"] = s.expression;
  if (!s.image_uri.empty()) j["image_uri"] = s.image_uri;
  return j;
}

Scene scene_from_json(const json& j) {
  static const std::vector<std::string> kKeys{"scene_id", "dims",       "mask",
                                              "gt_bbox",  "expression", "image_uri"};
  if (!j.is_object()) throw Error(ErrorKind::kInvalidParameter, "scene must be an object");
  Scene s;
  s.scene_id = j.value("scene_id", std::string{});
  for (const auto& [k, v] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end()) {
      bad_scene(s.scene_id, "unknown key '" + k + "'");
    }
  }
  try {
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims.size() != 2) bad_scene(s.scene_id, "dims must be [W, H]");
    s.dims = {dims[0], dims[1]};
    s.mask = mask_from_json(j.at("mask"));
    s.expression = j.value("expression", std::string{});
    s.image_uri = j.value("image_uri", std::string{});
    if (j.contains("gt_bbox")) {
      s.gt_bbox = bbox_from_json(j.at("gt_bbox"));
    } else if (s.mask.area() > 0) {
      s.gt_bbox = s.mask.tight_bbox();
    }
  } catch (const json::exception& e) {
    bad_scene(s.scene_id, e.what());
  }
  s.validate();
  return s;
}

}  // namespace

void Scene::validate() const {
  if (!dims.is_valid()) bad_scene(scene_id, "dims must be positive");
  if (mask.width != dims.width || mask.height != dims.height) {
    bad_scene(scene_id, "mask size does not match dims");
  }
  if (mask.area() == 0) bad_scene(scene_id, "mask has no foreground");
  if (!(mask.tight_bbox() == gt_bbox)) {
    bad_scene(scene_id, "gt_bbox is not the tight bounding box of the mask");
  }
}

bool Scene::contains(const Point2& pt) const {
  if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || pt.x < 0.0 || pt.y < 0.0 ||
      pt.x > dims.width || pt.y > dims.height) {
    throw Error(ErrorKind::kOutOfRegion, "point lies outside the image frame", "verification");
  }
  const int x = std::min(static_cast<int>(std::floor(pt.x)), dims.width - 1);
  const int y = std::min(static_cast<int>(std::floor(pt.y)), dims.height - 1);
  return mask.at(x, y);
}

std::string scenes_to_json_text(const std::vector<Scene>& scenes) {
  json arr = json::array();
  for (const Scene& s : scenes) arr.push_back(scene_to_json(s));
  return arr.dump();
}

std::vector<Scene> scenes_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidParameter, std::string("scene file: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorKind::kInvalidParameter, "scene file must hold a list");
  std::vector<Scene> out;
  for (const json& s : j) out.push_back(scene_from_json(s));
  return out;
}

std::vector<Scene> load_scenes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open scene file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenes_from_json_text(ss.str());
}

void save_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write scene file " + path.string());
  out << scenes_to_json_text(scenes) << '\n';
}

}  // namespace epd
