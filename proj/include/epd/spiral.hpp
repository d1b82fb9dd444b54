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

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "epd/geometry.hpp"
#include "epd/rng.hpp"

namespace epd {

// Screen-space rotation sense (image y axis points down).
enum class Direction { kClockwise, kCounterclockwise };

// Side of the box the final spiral point aims at.
enum class Terminal { kTop, kBottom, kLeft, kRight };

std::string_view to_string(Direction d);
std::string_view to_string(Terminal t);
Direction direction_from_string(std::string_view name);
Terminal terminal_from_string(std::string_view name);

struct Orientation {
  Direction direction = Direction::kClockwise;
  Terminal terminal = Terminal::kRight;

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

struct SpiralConfig {
  int n_turns = 8;
  int n_points = 3000;
  double exponent_n = 5.0;
  double k_sigmoid = 8.0;
  double t0 = 0.5;
  Orientation orientation;

  void validate() const;
};

struct RadialProfile {
  std::vector<double> d;       // distance to the box center
  std::vector<double> d_norm;  // min-max normalized d
  std::vector<double> g;       // d(d_norm)/dt
  std::vector<double> g_norm;  // min-max normalized g
};

struct SpiralPath {
  std::vector<Point2> points;
  std::vector<double> cumulative_arc;  // S_0 = 0
  RadialProfile radial;

  double total_arc() const { return cumulative_arc.empty() ? 0.0 : cumulative_arc.back(); }
};

// Sigmoidal radial schedule r(t) = 1 / (1 + exp(-k (t - t0))).
double radial_schedule(double t, double k_sigmoid, double t0);

// Superellipse radius ((|dx|/a)^n + (|dy|/b)^n)^(1/n) of pt about the box
// center.
double superellipse_radius(const Point2& pt, const BBox& bbox, double exponent_n);

// Factor that moves the ellipse point (r cos, r sin) onto the superellipse
// of radius r: r / (|r cos|^n + |r sin|^n)^(1/n).
double superellipse_scale(double cos_theta, double sin_theta, double r,
                          double exponent_n);

// Angle of the final spiral vertex for a terminal side.
double terminal_phase(Terminal terminal);

SpiralPath generate_spiral(const BBox& bbox, const SpiralConfig& config);

// Requires at least 3 points.
RadialProfile radial_profile(std::span<const Point2> points, const BBox& bbox);

std::vector<double> cumulative_arc_length(std::span<const Point2> points);

Orientation choose_configuration(Rng& rng);

// The 8 (direction, terminal) combinations: four clockwise then four
// counterclockwise, terminals ordered top, bottom, left, right.
std::array<Orientation, 8> all_configurations();

}  // namespace epd
