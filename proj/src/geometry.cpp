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

#include "junction/geometry.hpp"

#include "junction/error.hpp"

#include <algorithm>
#include <numbers>

namespace junction
{
namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kJoinTolerance = 1e-6;  // [m]
constexpr double kHitTolerance = 1e-9;   // [m]

struct Hit
{
  Vec2 point;
  double s_first;
  double s_second;
};

Vec2 arc_point(const ArcSegment & arc, double angle)
{
  return {arc.center.x + arc.radius * std::cos(angle), arc.center.y + arc.radius * std::sin(angle)};
}

// Local arc length of the point at polar angle `theta`, or nullopt if it is off the arc.
std::optional<double> arc_local_s(const ArcSegment & arc, double theta)
{
  double d = arc.sweep >= 0.0 ? theta - arc.start_angle : arc.start_angle - theta;
  d = std::fmod(d, kTwoPi);
  if (d < 0.0) {
    d += kTwoPi;
  }
  const double length = std::abs(arc.sweep) * arc.radius;
  double s = d * arc.radius;
  if ((kTwoPi - d) * arc.radius <= kHitTolerance * 10.0) {
    s = 0.0;
  }
  if (s > length + kHitTolerance * 10.0) {
    return std::nullopt;
  }
  return std::min(s, length);
}

std::optional<double> line_local_s(const LineSegment & line, Vec2 p)
{
  const Vec2 d = line.end - line.start;
  const double len = norm(d);
  const Vec2 rel = p - line.start;
  if (std::abs(cross(d, rel)) / len > kHitTolerance * 10.0) {
    return std::nullopt;
  }
  const double s = dot(rel, d) / len;
  if (s < -kHitTolerance * 10.0 || s > len + kHitTolerance * 10.0) {
    return std::nullopt;
  }
  return std::clamp(s, 0.0, len);
}

std::optional<double> local_s(const Segment & segment, Vec2 p)
{
  if (const auto * line = std::get_if<LineSegment>(&segment)) {
    return line_local_s(*line, p);
  }
  const auto & arc = std::get<ArcSegment>(segment);
  if (std::abs(euclidean_distance(p, arc.center) - arc.radius) > kHitTolerance * 10.0) {
    return std::nullopt;
  }
  return arc_local_s(arc, std::atan2(p.y - arc.center.y, p.x - arc.center.x));
}

void push_if_on_both(
  const Segment & a, const Segment & b, Vec2 p, std::vector<Hit> & hits)
{
  const auto sa = local_s(a, p);
  const auto sb = local_s(b, p);
  if (sa && sb) {
    hits.push_back({p, *sa, *sb});
  }
}

// Endpoints of each piece that lie on the other; covers collinear and concentric overlaps.
void overlap_hits(const Segment & a, const Segment & b, std::vector<Hit> & hits)
{
  for (const Vec2 p : {segment_point(a, 0.0), segment_point(a, segment_length(a)),
                       segment_point(b, 0.0), segment_point(b, segment_length(b))}) {
    push_if_on_both(a, b, p, hits);
  }
}

void intersect(const LineSegment & l1, const LineSegment & l2, std::vector<Hit> & hits)
{
  const Vec2 d1 = l1.end - l1.start;
  const Vec2 d2 = l2.end - l2.start;
  const double denom = cross(d1, d2);
  if (std::abs(denom) <= 1e-12 * norm(d1) * norm(d2)) {
    overlap_hits(Segment{l1}, Segment{l2}, hits);
    return;
  }
  const Vec2 q = l2.start - l1.start;
  const double t = cross(q, d2) / denom;
  const double u = cross(q, d1) / denom;
  const double tol1 = kHitTolerance / norm(d1);
  const double tol2 = kHitTolerance / norm(d2);
  if (t < -tol1 || t > 1.0 + tol1 || u < -tol2 || u > 1.0 + tol2) {
    return;
  }
  const double tc = std::clamp(t, 0.0, 1.0);
  const double uc = std::clamp(u, 0.0, 1.0);
  hits.push_back({l1.start + tc * d1, tc * norm(d1), uc * norm(d2)});
}

// Returns hits with s_first on the line and s_second on the arc.
void intersect(const LineSegment & line, const ArcSegment & arc, std::vector<Hit> & hits)
{
  const Vec2 d = line.end - line.start;
  const Vec2 f = line.start - arc.center;
  const double a = dot(d, d);
  const double b = 2.0 * dot(f, d);
  const double c = dot(f, f) - arc.radius * arc.radius;
  double disc = b * b - 4.0 * a * c;
  const double len = std::sqrt(a);
  if (disc < 0.0) {
    // Grazing contact within tolerance still counts as a single touch point.
    const double t = -b / (2.0 * a);
    const Vec2 p = line.start + t * d;
    if (std::abs(euclidean_distance(p, arc.center) - arc.radius) > kHitTolerance) {
      return;
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double roots[2] = {(-b - root) / (2.0 * a), (-b + root) / (2.0 * a)};
  const int count = disc == 0.0 ? 1 : 2;
  const double tol = kHitTolerance / len;
  for (int i = 0; i < count; ++i) {
    const double t = roots[i];
    if (t < -tol || t > 1.0 + tol) {
      continue;
    }
    const double tc = std::clamp(t, 0.0, 1.0);
    const Vec2 p = line.start + tc * d;
    const auto s_arc = arc_local_s(arc, std::atan2(p.y - arc.center.y, p.x - arc.center.x));
    if (s_arc) {
      hits.push_back({p, tc * len, *s_arc});
    }
  }
}

void intersect(const ArcSegment & a1, const ArcSegment & a2, std::vector<Hit> & hits)
{
  const Vec2 delta = a2.center - a1.center;
  const double d = norm(delta);
  if (d <= kHitTolerance) {
    if (std::abs(a1.radius - a2.radius) <= kHitTolerance) {
      overlap_hits(Segment{a1}, Segment{a2}, hits);
    }
    return;
  }
  if (d > a1.radius + a2.radius + kHitTolerance || d < std::abs(a1.radius - a2.radius) - kHitTolerance) {
    return;
  }
  const double along = (a1.radius * a1.radius - a2.radius * a2.radius + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, a1.radius * a1.radius - along * along));
  const Vec2 unit = (1.0 / d) * delta;
  const Vec2 base = a1.center + along * unit;
  const Vec2 normal{-unit.y, unit.x};
  const Vec2 candidates[2] = {base + h * normal, base - h * normal};
  const int count = h == 0.0 ? 1 : 2;
  for (int i = 0; i < count; ++i) {
    const Vec2 p = candidates[i];
    const auto s1 = arc_local_s(a1, std::atan2(p.y - a1.center.y, p.x - a1.center.x));
    const auto s2 = arc_local_s(a2, std::atan2(p.y - a2.center.y, p.x - a2.center.x));
    if (s1 && s2) {
      hits.push_back({p, *s1, *s2});
    }
  }
}

void intersect(const Segment & a, const Segment & b, std::vector<Hit> & hits)
{
  const std::size_t before = hits.size();
  if (const auto * la = std::get_if<LineSegment>(&a)) {
    if (const auto * lb = std::get_if<LineSegment>(&b)) {
      intersect(*la, *lb, hits);
    } else {
      intersect(*la, std::get<ArcSegment>(b), hits);
    }
    return;
  }
  const auto & aa = std::get<ArcSegment>(a);
  if (const auto * lb = std::get_if<LineSegment>(&b)) {
    intersect(*lb, aa, hits);
    for (std::size_t i = before; i < hits.size(); ++i) {
      std::swap(hits[i].s_first, hits[i].s_second);
    }
    return;
  }
  intersect(aa, std::get<ArcSegment>(b), hits);
}

}  // namespace

double euclidean_distance(Vec2 p1, Vec2 p2)
{
  return std::hypot(p1.x - p2.x, p1.y - p2.y);
}

double segment_length(const Segment & segment)
{
  if (const auto * line = std::get_if<LineSegment>(&segment)) {
    return euclidean_distance(line->start, line->end);
  }
  const auto & arc = std::get<ArcSegment>(segment);
  return std::abs(arc.sweep) * arc.radius;
}

Vec2 segment_point(const Segment & segment, double local_s)
{
  if (const auto * line = std::get_if<LineSegment>(&segment)) {
    const double len = euclidean_distance(line->start, line->end);
    return line->start + (local_s / len) * (line->end - line->start);
  }
  const auto & arc = std::get<ArcSegment>(segment);
  const double dir = arc.sweep >= 0.0 ? 1.0 : -1.0;
  return arc_point(arc, arc.start_angle + dir * local_s / arc.radius);
}

Vec2 segment_tangent(const Segment & segment, double local_s)
{
  if (const auto * line = std::get_if<LineSegment>(&segment)) {
    const Vec2 d = line->end - line->start;
    return (1.0 / norm(d)) * d;
  }
  const auto & arc = std::get<ArcSegment>(segment);
  const double dir = arc.sweep >= 0.0 ? 1.0 : -1.0;
  const double angle = arc.start_angle + dir * local_s / arc.radius;
  return {-dir * std::sin(angle), dir * std::cos(angle)};
}

Path::Path(std::vector<Segment> segments) : segments_(std::move(segments))
{
  cumulative_.reserve(segments_.size() + 1);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double len = segment_length(segments_[i]);
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw Error(ErrorCode::kInvalidArgument, "path segment " + std::to_string(i) + " has no length");
    }
    if (i > 0) {
      const Vec2 prev_end = segment_point(segments_[i - 1], segment_length(segments_[i - 1]));
      if (euclidean_distance(prev_end, segment_point(segments_[i], 0.0)) > kJoinTolerance) {
        throw Error(
          ErrorCode::kInvalidArgument, "path segment " + std::to_string(i) + " does not join its predecessor");
      }
    }
    cumulative_.push_back(cumulative_.back() + len);
  }
}

std::size_t Path::locate(double s) const
{
  const auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end() - 1, s);
  return static_cast<std::size_t>(std::distance(cumulative_.begin() + 1, it));
}

Vec2 Path::point_at(double s) const
{
  if (segments_.empty()) {
    return {};
  }
  s = std::clamp(s, 0.0, length());
  const std::size_t i = locate(s);
  return segment_point(segments_[i], s - cumulative_[i]);
}

Vec2 Path::tangent_at(double s) const
{
  if (segments_.empty()) {
    return {1.0, 0.0};
  }
  s = std::clamp(s, 0.0, length());
  const std::size_t i = locate(s);
  return segment_tangent(segments_[i], s - cumulative_[i]);
}

PathBuilder::PathBuilder(Vec2 start, double heading) : position_(start), heading_(heading) {}

PathBuilder & PathBuilder::straight(double length)
{
  const Vec2 end = position_ + length * Vec2{std::cos(heading_), std::sin(heading_)};
  segments_.emplace_back(LineSegment{position_, end});
  position_ = end;
  return *this;
}

PathBuilder & PathBuilder::turn(double radius, double sweep)
{
  const double side = sweep >= 0.0 ? 1.0 : -1.0;
  // Centre lies on the left for a left turn, on the right otherwise.
  const Vec2 center = position_ + radius * Vec2{-side * std::sin(heading_), side * std::cos(heading_)};
  return arc_about(center, sweep);
}

PathBuilder & PathBuilder::arc_about(Vec2 center, double sweep)
{
  ArcSegment arc;
  arc.center = center;
  arc.radius = euclidean_distance(position_, center);
  arc.start_angle = std::atan2(position_.y - center.y, position_.x - center.x);
  arc.sweep = sweep;
  segments_.emplace_back(arc);
  const Segment & seg = segments_.back();
  position_ = segment_point(seg, segment_length(seg));
  const Vec2 t = segment_tangent(seg, segment_length(seg));
  heading_ = std::atan2(t.y, t.x);
  return *this;
}

std::optional<Conflict> conflict_point(const Path & first, const Path & second)
{
  std::optional<Conflict> best;
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < first.segments().size(); ++i) {
    for (std::size_t j = 0; j < second.segments().size(); ++j) {
      hits.clear();
      intersect(first.segments()[i], second.segments()[j], hits);
      for (const Hit & h : hits) {
        const Conflict c{h.point, first.segment_offset(i) + h.s_first, second.segment_offset(j) + h.s_second};
        if (!best || c.s_second < best->s_second ||
            (c.s_second == best->s_second && c.s_first < best->s_first)) {
          best = c;
        }
      }
    }
  }
  return best;
}

}  // namespace junction
