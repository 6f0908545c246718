// Copyright 2026 The Junction Authors
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

#ifndef JUNCTION__GEOMETRY_HPP_
#define JUNCTION__GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace junction
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Straight-line distance between two points [m].
double euclidean_distance(Vec2 p1, Vec2 p2);

struct LineSegment
{
  Vec2 start;
  Vec2 end;
};

/// Circular arc around `center`. `sweep` is signed: positive is counter-clockwise.
struct ArcSegment
{
  Vec2 center;
  double radius{0.0};
  double start_angle{0.0};  // [rad]
  double sweep{0.0};        // [rad]
};

using Segment = std::variant<LineSegment, ArcSegment>;

double segment_length(const Segment & segment);
Vec2 segment_point(const Segment & segment, double local_s);
Vec2 segment_tangent(const Segment & segment, double local_s);

/// Arc-length parameterised chain of lines and arcs. Immutable once built.
class Path
{
public:
  Path() = default;
  /// Throws Error(kInvalidArgument) on gaps between consecutive segments or zero-length pieces.
  explicit Path(std::vector<Segment> segments);

  [[nodiscard]] double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  [[nodiscard]] bool empty() const { return segments_.empty(); }
  [[nodiscard]] std::span<const Segment> segments() const { return segments_; }
  /// Arc length at which segment `i` begins.
  [[nodiscard]] double segment_offset(std::size_t i) const { return cumulative_[i]; }

  /// Position at arc length `s`, clamped to [0, length()].
  [[nodiscard]] Vec2 point_at(double s) const;
  /// Unit tangent at arc length `s`, clamped to [0, length()].
  [[nodiscard]] Vec2 tangent_at(double s) const;

  [[nodiscard]] Vec2 start_point() const { return point_at(0.0); }
  [[nodiscard]] Vec2 end_point() const { return point_at(length()); }

private:
  [[nodiscard]] std::size_t locate(double s) const;

  std::vector<Segment> segments_;
  std::vector<double> cumulative_;  // size segments_ + 1
};

/// Incremental path construction that tracks the current pose.
class PathBuilder
{
public:
  PathBuilder(Vec2 start, double heading);

  /// Straight piece along the current heading.
  PathBuilder & straight(double length);
  /// Arc tangent to the current heading; positive sweep turns left.
  PathBuilder & turn(double radius, double sweep);
  /// Arc about an explicit centre starting at the current point. The join may be a corner.
  PathBuilder & arc_about(Vec2 center, double sweep);

  [[nodiscard]] Vec2 position() const { return position_; }
  [[nodiscard]] double heading() const { return heading_; }
  [[nodiscard]] Path build() const { return Path(segments_); }

private:
  std::vector<Segment> segments_;
  Vec2 position_;
  double heading_;
};

/// First crossing of two planned paths.
struct Conflict
{
  Vec2 point;
  double s_first{0.0};   // arc length on the first path
  double s_second{0.0};  // arc length on the second path
};

/// First geometric intersection of two paths, ordered by arc length along `second`.
/// Overlapping collinear lines or concentric arcs report the start of the overlap.
std::optional<Conflict> conflict_point(const Path & first, const Path & second);

}  // namespace junction

#endif  // JUNCTION__GEOMETRY_HPP_
