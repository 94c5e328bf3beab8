// Copyright 2026 The manipsem Authors
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

#include "manipsem/relations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace manipsem {

namespace {

constexpr std::array<std::string_view, 14> kSsrNames = {
    "Ab", "Be", "To", "Bo", "Ar", "ArT", "In", "Su", "Cr", "Wi", "Pwi", "Co", "Pco", "NoRelation"};
constexpr std::array<std::string_view, 6> kDsrNames = {"Gc", "Ma", "Mt", "Ht", "Fmt", "S"};

bool overlaps(double lo_a, double hi_a, double lo_b, double hi_b) {
  return std::min(hi_a, hi_b) - std::max(lo_a, lo_b) > 0.0;
}

bool xz_overlap(const Aabb& a, const Aabb& b) {
  return overlaps(a.min_corner.x(), a.max_corner.x(), b.min_corner.x(), b.max_corner.x()) &&
         overlaps(a.min_corner.z(), a.max_corner.z(), b.min_corner.z(), b.max_corner.z());
}

// Some point of `from` lies within `band` of the surface of `into`.
bool reaches_boundary(const ObjectShape& from, const ObjectShape& into, double band) {
  for (const auto& p : from.cloud) {
    if (!into.aabb.contains(p, band)) continue;
    if (std::abs(max_plane_distance(into.hull, p)) <= band) return true;
  }
  return false;
}

// Vertical gap of a over b; negative when they overlap in y.
double rise(const Aabb& a, const Aabb& b) { return a.min_corner.y() - b.max_corner.y(); }

SsrLabel contact_label(const Aabb& a, const Aabb& b, double band) {
  if (xz_overlap(a, b)) {
    const double up = rise(a, b);
    const double down = rise(b, a);
    if (up >= -band && up >= down) return SsrLabel::To;
    if (down >= -band) return SsrLabel::Bo;
  }
  return SsrLabel::ArT;
}

SsrLabel disjoint_label(const Aabb& a, const Aabb& b, const RelationConfig& cfg) {
  if (xz_overlap(a, b)) {
    if (rise(a, b) > 0.0) return SsrLabel::Ab;
    if (rise(b, a) > 0.0) return SsrLabel::Be;
  }
  if (aabb_distance(a, b) <= cfg.theta_near) return SsrLabel::Ar;
  return SsrLabel::NoRelation;
}

bool box_inside(const Aabb& inner, const Aabb& outer) {
  return (inner.min_corner.array() >= outer.min_corner.array()).all() &&
         (inner.max_corner.array() <= outer.max_corner.array()).all();
}

SsrLabel classify_boxes(const ObjectShape& a, const ObjectShape& b, const RelationConfig& cfg) {
  const double band = cfg.tol.touch;
  const bool interpenetrate = overlaps(a.aabb.min_corner.x(), a.aabb.max_corner.x(),
                                       b.aabb.min_corner.x(), b.aabb.max_corner.x()) &&
                              overlaps(a.aabb.min_corner.y(), a.aabb.max_corner.y(),
                                       b.aabb.min_corner.y(), b.aabb.max_corner.y()) &&
                              overlaps(a.aabb.min_corner.z(), a.aabb.max_corner.z(),
                                       b.aabb.min_corner.z(), b.aabb.max_corner.z());
  if (interpenetrate) {
    if (box_inside(a.aabb, b.aabb)) return SsrLabel::In;
    if (box_inside(b.aabb, a.aabb)) return SsrLabel::Su;
  }
  if (aabb_distance(a.aabb, b.aabb) <= band) return contact_label(a.aabb, b.aabb, band);
  return disjoint_label(a.aabb, b.aabb, cfg);
}

}  // namespace

std::string_view to_string(SsrLabel label) { return kSsrNames[static_cast<int>(label)]; }
std::string_view to_string(DsrLabel label) { return kDsrNames[static_cast<int>(label)]; }

std::optional<SsrLabel> parse_ssr(std::string_view text) {
  for (std::size_t i = 0; i < kSsrNames.size(); ++i) {
    if (kSsrNames[i] == text) return static_cast<SsrLabel>(i);
  }
  return std::nullopt;
}

std::optional<DsrLabel> parse_dsr(std::string_view text) {
  for (std::size_t i = 0; i < kDsrNames.size(); ++i) {
    if (kDsrNames[i] == text) return static_cast<DsrLabel>(i);
  }
  return std::nullopt;
}

void RelationConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(tol.geom, "epsilon_geom");
  positive(tol.boundary, "epsilon_boundary");
  positive(tol.touch, "epsilon_touch");
  positive(theta_near, "theta_near");
  positive(delta_move, "delta_move");
  positive(delta_rel, "delta_rel");
  if (window < 2) throw std::invalid_argument("window must be >= 2");
}

SsrLabel classify_ssr(const ObjectShape& a, const ObjectShape& b, const RelationConfig& cfg,
                      ShapeModel model) {
  if (model == ShapeModel::Aabb) return classify_boxes(a, b, cfg);

  const RelMatrix m = relation_matrix(a, b, cfg.tol.boundary);
  if (m.a_in_b0 && m.a0_has_b) return SsrLabel::Cr;
  if (m.a_in_b0) {
    if (m.a_in_bminus) return SsrLabel::Pwi;
    if (!cfg.alias_in_su && reaches_boundary(a, b, cfg.tol.touch)) return SsrLabel::In;
    return SsrLabel::Wi;
  }
  if (m.a0_has_b) {
    if (m.aminus_has_b) return SsrLabel::Pco;
    if (!cfg.alias_in_su && reaches_boundary(b, a, cfg.tol.touch)) return SsrLabel::Su;
    return SsrLabel::Co;
  }
  if (touch(a, b, cfg.tol)) return contact_label(a.aabb, b.aabb, cfg.tol.touch);
  return disjoint_label(a.aabb, b.aabb, cfg);
}

int moving_steps(std::span<const Point3> track, double delta) {
  int n = 0;
  for (std::size_t i = 1; i < track.size(); ++i) {
    if ((track[i] - track[i - 1]).norm() > delta) ++n;
  }
  return n;
}

bool is_moving(std::span<const Point3> track, double delta) {
  if (track.size() < 2) return false;
  return 2 * moving_steps(track, delta) >= static_cast<int>(track.size() - 1);
}

DsrLabel classify_dsr(std::span<const Point3> track_a, std::span<const Point3> track_b,
                      std::span<const bool> touching, const RelationConfig& cfg) {
  const std::size_t n = track_a.size();
  if (n < 2 || track_b.size() != n || touching.size() != n) {
    throw WindowTooShort("DSR needs two equal tracks of at least 2 frames");
  }
  const double steps = static_cast<double>(n - 1);
  const bool moving_a = is_moving(track_a, cfg.delta_move);
  const bool moving_b = is_moving(track_b, cfg.delta_move);
  const double drift = (track_a.back() - track_b.back()).norm() -
                       (track_a.front() - track_b.front()).norm();
  const bool in_touch = std::all_of(touching.begin(), touching.end(), [](bool t) { return t; });

  if (in_touch) {
    if (moving_a && moving_b && std::abs(drift) / steps < cfg.delta_rel) return DsrLabel::Mt;
    if (moving_a != moving_b) return DsrLabel::Fmt;
    if (!moving_a && !moving_b) return DsrLabel::Ht;
  }
  const double span = static_cast<double>(n);
  if (drift < -cfg.delta_rel * span) return DsrLabel::Gc;
  if (drift > cfg.delta_rel * span) return DsrLabel::Ma;
  return DsrLabel::S;
}

}  // namespace manipsem
