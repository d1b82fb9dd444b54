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

#include "epd/json_format.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "epd/error.hpp"

namespace epd {

namespace {

[[noreturn]] void bad_number(std::string_view what) {
  throw Error(ErrorKind::kInvalidParameter, std::string(what));
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    bad_number("not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string format_fixed6(double v) {
  if (!std::isfinite(v)) bad_number("cannot format a non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  std::string s(buf, res.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string format_shortest(double v) {
  if (!std::isfinite(v)) bad_number("cannot format a non-finite number");
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_.push_back(',');
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_.push_back('{');
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_.push_back('}');
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_.push_back('[');
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_.push_back(']');
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separate();
  out_ += nlohmann::json(std::string(k)).dump();
  out_.push_back(':');
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::string(std::string_view s) {
  separate();
  out_ += nlohmann::json(std::string(s)).dump();
  return *this;
}

JsonWriter& JsonWriter::fixed(double v) { return raw(format_fixed6(v)); }

JsonWriter& JsonWriter::integer(std::int64_t v) { return raw(std::to_string(v)); }

JsonWriter& JsonWriter::unsigned_integer(std::uint64_t v) {
  return raw(std::to_string(v));
}

JsonWriter& JsonWriter::boolean(bool v) { return raw(v ? "true" : "false"); }

JsonWriter& JsonWriter::raw(std::string_view token) {
  separate();
  out_ += token;
  return *this;
}

JsonWriter& JsonWriter::point(const Point2& p) {
  return begin_array().fixed(p.x).fixed(p.y).end_array();
}

JsonWriter& JsonWriter::bbox(const BBox& b) {
  return begin_array().fixed(b.x_min).fixed(b.y_min).fixed(b.x_max).fixed(b.y_max).end_array();
}

BBox bbox_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorKind::kInvalidParameter, "bbox must be an array of 4 numbers");
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorKind::kInvalidParameter, "bbox must be an array of 4 numbers");
    }
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

nlohmann::json bbox_to_json(const BBox& b) {
  return nlohmann::json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

BBox parse_bbox_list(std::string_view text) {
  double v[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 3) == (comma == std::string_view::npos)) {
      bad_number("bbox must be four comma-separated numbers: '" + std::string(text) + "'");
    }
    const std::size_t end = i < 3 ? comma : text.size();
    v[i] = parse_double(text.substr(start, end - start));
    start = end + 1;
  }
  return {v[0], v[1], v[2], v[3]};
}

ImageDims parse_dims(std::string_view text) {
  const std::size_t x = text.find_first_of("xX");
  if (x == std::string_view::npos) bad_number("dims must look like WIDTHxHEIGHT");
  int w = 0, h = 0;
  const auto r1 = std::from_chars(text.data(), text.data() + x, w);
  const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), h);
  if (r1.ec != std::errc() || r1.ptr != text.data() + x || r2.ec != std::errc() ||
      r2.ptr != text.data() + text.size() || w < 1 || h < 1) {
    bad_number("dims must look like WIDTHxHEIGHT with positive integers");
  }
  return {w, h};
}

}  // namespace epd
