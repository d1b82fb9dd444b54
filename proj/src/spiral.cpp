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

#include "epd/spiral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "epd/error.hpp"
#include "epd/kernels.hpp"

namespace epd {

namespace {

constexpr std::array<Terminal, 4> kTerminalOrder{Terminal::kTop, Terminal::kBottom,
                                                 Terminal::kLeft, Terminal::kRight};

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::kClockwise ? "clockwise" : "counterclockwise";
}

std::string_view to_string(Terminal t) {
  switch (t) {
    case Terminal::kTop: return "top";
    case Terminal::kBottom: return "bottom";
    case Terminal::kLeft: return "left";
    case Terminal::kRight: return "right";
  }
  return "right";
}

Direction direction_from_string(std::string_view name) {
  if (name == "clockwise" || name == "cw") return Direction::kClockwise;
  if (name == "counterclockwise" || name == "ccw") return Direction::kCounterclockwise;
  throw Error(ErrorKind::kInvalidParameter, "unknown direction '" + std::string(name) + "'");
}

Terminal terminal_from_string(std::string_view name) {
  for (Terminal t : kTerminalOrder) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown terminal '" + std::string(name) + "'");
}

void SpiralConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidParameter, "spiral: " + what, "spiral");
  };
  if (n_turns < 1) fail("n_turns must be >= 1");
  if (n_points < 2) fail("n_points must be >= 2");
  if (!(exponent_n >= 2.0) || !std::isfinite(exponent_n)) fail("exponent_n must be >= 2");
  if (!(k_sigmoid > 0.0) || !std::isfinite(k_sigmoid)) fail("k_sigmoid must be > 0");
  if (!(t0 > 0.0 && t0 < 1.0)) fail("t0 must lie in (0, 1)");
}

double radial_schedule(double t, double k_sigmoid, double t0) {
  return 1.0 / (1.0 + std::exp(-k_sigmoid * (t - t0)));
}

double superellipse_radius(const Point2& pt, const BBox& bbox, double exponent_n) {
  const CenterAxes ca = center_and_axes(bbox);
  const double u = std::abs(pt.x - ca.center.x) / ca.a;
  const double v = std::abs(pt.y - ca.center.y) / ca.b;
  return std::pow(std::pow(u, exponent_n) + std::pow(v, exponent_n), 1.0 / exponent_n);
}

double superellipse_scale(double cos_theta, double sin_theta, double r,
                          double exponent_n) {
  const double x_norm = std::abs(r * cos_theta);
  const double y_norm = std::abs(r * sin_theta);
  const double phi =
      std::pow(std::pow(x_norm, exponent_n) + std::pow(y_norm, exponent_n),
               1.0 / exponent_n);
  return r / phi;
}

double terminal_phase(Terminal terminal) {
  using std::numbers::pi;
  switch (terminal) {
    case Terminal::kRight: return 0.0;
    case Terminal::kBottom: return 0.5 * pi;
    case Terminal::kLeft: return pi;
    case Terminal::kTop: return 1.5 * pi;
  }
  return 0.0;
}

SpiralPath generate_spiral(const BBox& bbox, const SpiralConfig& config) {
  config.validate();
  const CenterAxes ca = center_and_axes(bbox);
  const int n = config.n_points;
  const double sign = config.orientation.direction == Direction::kClockwise ? 1.0 : -1.0;
  const double phase = terminal_phase(config.orientation.terminal);
  const double sweep = 2.0 * std::numbers::pi * config.n_turns;

  SpiralPath path;
  path.points.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    const double theta = sign * sweep * t + phase;
    const double r = radial_schedule(t, config.k_sigmoid, config.t0);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Ellipse point, then rescale radially onto the superellipse of radius r.
    const double x_ellipse = ca.a * r * c;
    const double y_ellipse = ca.b * r * s;
    const double scale = superellipse_scale(c, s, r, config.exponent_n);
    path.points[i] = {ca.center.x + x_ellipse * scale, ca.center.y + y_ellipse * scale};
  }
  path.cumulative_arc = cumulative_arc_length(path.points);
  if (n >= 3) path.radial = radial_profile(path.points, bbox);
  return path;
}

RadialProfile radial_profile(std::span<const Point2> points, const BBox& bbox) {
  if (points.size() < 3) {
    throw Error(ErrorKind::kInsufficientData,
                "radial profile needs at least 3 path points", "spiral");
  }
  const CenterAxes ca = center_and_axes(bbox);
  const std::size_t n = points.size();
  const double dt = 1.0 / static_cast<double>(n - 1);

  RadialProfile profile;
  profile.d.resize(n);
  profile.d_norm.resize(n);
  profile.g.resize(n);
  profile.g_norm.resize(n);
  kernels::center_distances(points, ca.center, profile.d);
  kernels::min_max_normalize(profile.d, profile.d_norm);
  kernels::gradient(profile.d_norm, dt, profile.g);
  kernels::min_max_normalize(profile.g, profile.g_norm);
  return profile;
}

std::vector<double> cumulative_arc_length(std::span<const Point2> points) {
  std::vector<double> arc(points.size(), 0.0);
  if (points.size() < 2) return arc;
  std::vector<double> seg(points.size() - 1);
  kernels::segment_lengths(points, seg);
  for (std::size_t i = 0; i < seg.size(); ++i) arc[i + 1] = arc[i] + seg[i];
  return arc;
}

Orientation choose_configuration(Rng& rng) {
  return all_configurations()[rng.uniform_index(8)];
}

std::array<Orientation, 8> all_configurations() {
  std::array<Orientation, 8> out;
  int i = 0;
  for (Direction d : {Direction::kClockwise, Direction::kCounterclockwise}) {
    for (Terminal t : kTerminalOrder) out[i++] = {d, t};
  }
  return out;
}

}  // namespace epd
