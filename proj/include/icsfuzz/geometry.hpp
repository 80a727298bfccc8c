// Copyright 2026 The icsfuzz Authors
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

#ifndef ICSFUZZ__GEOMETRY_HPP_
#define ICSFUZZ__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace icsfuzz
{

/// Intersection areas at or below this value count as "no overlap".
inline constexpr double kAreaEpsilon = 1e-9;

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

/// Planar footprint of an actor: a rectangle rotated by yaw about its center.
class OrientedBox
{
public:
  /// Throws std::invalid_argument on non-positive extents or non-finite values.
  OrientedBox(Point2 center, double half_length, double half_width, double yaw);

  Point2 center() const { return center_; }
  double half_length() const { return half_length_; }
  double half_width() const { return half_width_; }
  double yaw() const { return yaw_; }
  double area() const { return 4.0 * half_length_ * half_width_; }

  /// Unit vector along the length axis.
  Point2 axis_long() const { return {std::cos(yaw_), std::sin(yaw_)}; }
  /// Unit vector along the width axis (long axis rotated +90 deg).
  Point2 axis_lat() const { return {-std::sin(yaw_), std::cos(yaw_)}; }

  OrientedBox moved_to(Point2 center) const;
  OrientedBox rotated_to(double yaw) const;

  /// Closed membership test.
  bool contains(Point2 p) const;

  friend bool operator==(const OrientedBox &, const OrientedBox &) = default;

private:
  Point2 center_;
  double half_length_;
  double half_width_;
  double yaw_;
};

/// Corners in counter-clockwise order, starting at (+long, -lat).
std::array<Point2, 4> corners(const OrientedBox & box);

/// Strict separating-axis test over the four face normals. Boxes that only
/// touch along an edge or at a corner do not overlap.
bool overlaps(const OrientedBox & a, const OrientedBox & b);

/// Area of the convex intersection polygon.
double intersection_area(const OrientedBox & a, const OrientedBox & b);

double iou(const OrientedBox & a, const OrientedBox & b);

/// Smallest projection overlap over the four SAT axes; 0 when separated.
double penetration_depth(const OrientedBox & a, const OrientedBox & b);

double center_distance(const OrientedBox & a, const OrientedBox & b);

/// Sutherland-Hodgman clip of a convex polygon against a convex CCW clip polygon.
std::vector<Point2> clip_convex(
  const std::vector<Point2> & subject, const std::vector<Point2> & clip);

/// Shoelace area; positive for CCW input.
double polygon_area(const std::vector<Point2> & polygon);

}  // namespace icsfuzz

#endif  // ICSFUZZ__GEOMETRY_HPP_
