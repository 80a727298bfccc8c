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

#include "icsfuzz/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace icsfuzz
{

double normalize_angle(double radians)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians + std::numbers::pi, two_pi);
  if (wrapped < 0.0) {
    wrapped += two_pi;
  }
  wrapped -= std::numbers::pi;
  // fmod can round up to exactly +pi
  if (wrapped >= std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

OrientedBox::OrientedBox(Point2 center, double half_length, double half_width, double yaw)
: center_(center), half_length_(half_length), half_width_(half_width), yaw_(0.0)
{
  if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(yaw)) {
    throw std::invalid_argument("OrientedBox: non-finite center or yaw");
  }
  if (!(half_length > 0.0) || !(half_width > 0.0) || !std::isfinite(half_length) ||
      !std::isfinite(half_width)) {
    throw std::invalid_argument("OrientedBox: half extents must be positive and finite");
  }
  yaw_ = normalize_angle(yaw);
}

OrientedBox OrientedBox::moved_to(Point2 center) const
{
  return OrientedBox(center, half_length_, half_width_, yaw_);
}

OrientedBox OrientedBox::rotated_to(double yaw) const
{
  return OrientedBox(center_, half_length_, half_width_, yaw);
}

bool OrientedBox::contains(Point2 p) const
{
  const Point2 rel = p - center_;
  return std::abs(dot(rel, axis_long())) <= half_length_ &&
         std::abs(dot(rel, axis_lat())) <= half_width_;
}

std::array<Point2, 4> corners(const OrientedBox & box)
{
  const Point2 l = box.half_length() * box.axis_long();
  const Point2 w = box.half_width() * box.axis_lat();
  const Point2 c = box.center();
  return {c + l - w, c + l + w, c - l + w, c - l - w};
}

namespace
{

struct Interval
{
  double lo;
  double hi;
};

Interval project(const OrientedBox & box, Point2 axis)
{
  const double mid = dot(box.center(), axis);
  const double r = box.half_length() * std::abs(dot(box.axis_long(), axis)) +
                   box.half_width() * std::abs(dot(box.axis_lat(), axis));
  return {mid - r, mid + r};
}

// Overlap length of the two projections on each of the four face normals.
std::array<double, 4> axis_overlaps(const OrientedBox & a, const OrientedBox & b)
{
  const std::array<Point2, 4> axes{a.axis_long(), a.axis_lat(), b.axis_long(), b.axis_lat()};
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Interval pa = project(a, axes[i]);
    const Interval pb = project(b, axes[i]);
    out[i] = std::min(pa.hi, pb.hi) - std::max(pa.lo, pb.lo);
  }
  return out;
}

}  // namespace

bool overlaps(const OrientedBox & a, const OrientedBox & b)
{
  const auto ov = axis_overlaps(a, b);
  return std::all_of(ov.begin(), ov.end(), [](double o) { return o > 0.0; });
}

double penetration_depth(const OrientedBox & a, const OrientedBox & b)
{
  const auto ov = axis_overlaps(a, b);
  const double depth = *std::min_element(ov.begin(), ov.end());
  return depth > 0.0 ? depth : 0.0;
}

double polygon_area(const std::vector<Point2> & polygon)
{
  if (polygon.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * twice;
}

std::vector<Point2> clip_convex(
  const std::vector<Point2> & subject, const std::vector<Point2> & clip)
{
  std::vector<Point2> output = subject;
  for (std::size_t e = 0; e < clip.size() && !output.empty(); ++e) {
    const Point2 p0 = clip[e];
    const Point2 p1 = clip[(e + 1) % clip.size()];
    const Point2 edge = p1 - p0;
    // inside is the left side of a CCW edge
    auto side = [&](Point2 q) { return cross(edge, q - p0); };

    std::vector<Point2> input;
    input.swap(output);
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Point2 cur = input[i];
      const Point2 prev = input[(i + input.size() - 1) % input.size()];
      const double s_cur = side(cur);
      const double s_prev = side(prev);
      if (s_cur >= 0.0) {
        if (s_prev < 0.0) {
          output.push_back(prev + (s_prev / (s_prev - s_cur)) * (cur - prev));
        }
        output.push_back(cur);
      } else if (s_prev >= 0.0) {
        output.push_back(prev + (s_prev / (s_prev - s_cur)) * (cur - prev));
      }
    }
  }
  return output;
}

double intersection_area(const OrientedBox & a, const OrientedBox & b)
{
  // clip in a canonical order so the result is bitwise symmetric
  const bool swap = std::tuple(b.center().x, b.center().y, b.half_length(), b.half_width(), b.yaw()) <
                    std::tuple(a.center().x, a.center().y, a.half_length(), a.half_width(), a.yaw());
  const auto ca = corners(swap ? b : a);
  const auto cb = corners(swap ? a : b);
  const std::vector<Point2> subject(ca.begin(), ca.end());
  const std::vector<Point2> clip(cb.begin(), cb.end());
  const double area = polygon_area(clip_convex(subject, clip));
  return std::clamp(area, 0.0, std::min(a.area(), b.area()));
}

double iou(const OrientedBox & a, const OrientedBox & b)
{
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double center_distance(const OrientedBox & a, const OrientedBox & b)
{
  return norm(b.center() - a.center());
}

}  // namespace icsfuzz
