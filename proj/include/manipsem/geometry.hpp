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

#ifndef MANIPSEM_GEOMETRY_HPP_
#define MANIPSEM_GEOMETRY_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace manipsem {

/// Meters, y is the vertical axis.
using Point3 = Eigen::Vector3d;
using PointCloud = std::vector<Point3, Eigen::aligned_allocator<Point3>>;

class DegenerateCloud : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCloud : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tolerance used by the geometric and relational layers.
struct Tolerances {
  double geom = 1e-9;      // convexity / coplanarity slack, relative to extent
  double boundary = 1e-7;  // band around a face plane classified as Boundary
  double touch = 5e-3;     // max surface gap still counted as contact
};

/// aX + bY + cZ + d = 0 with (a, b, c) unit length and pointing outward.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitY();
  double offset = 0.0;

  double signed_distance(const Point3& p) const { return normal.dot(p) + offset; }

  static Plane through(const Point3& p, const Eigen::Vector3d& unit_normal) {
    return {unit_normal, -unit_normal.dot(p)};
  }
};

struct ConvexHull {
  PointCloud vertices;
  std::vector<std::array<int, 3>> faces;  // counter-clockwise seen from outside
  std::vector<Plane> face_planes;         // parallel to faces

  double volume() const;
  Point3 centroid() const;
  std::size_t edge_count() const;
};

struct Aabb {
  Point3 min_corner = Point3::Zero();
  Point3 max_corner = Point3::Zero();

  bool contains(const Point3& p, double tol = 0.0) const {
    return (p.array() >= min_corner.array() - tol).all() &&
           (p.array() <= max_corner.array() + tol).all();
  }
  Eigen::Vector3d extent() const { return max_corner - min_corner; }
  Point3 center() const { return 0.5 * (min_corner + max_corner); }
  std::array<Point3, 8> corners() const;
};

enum class RegionClass { Interior, Boundary, Exterior };

/// Non-emptiness of the six intersections between a and the regions of b
/// (row 1) and between b and the regions of a (row 2).
struct RelMatrix {
  bool a_in_b0 = false;
  bool a_on_db = false;
  bool a_in_bminus = false;
  bool a0_has_b = false;
  bool da_has_b = false;
  bool aminus_has_b = false;

  RelMatrix transposed() const {
    return {a0_has_b, da_has_b, aminus_has_b, a_in_b0, a_on_db, a_in_bminus};
  }
  bool operator==(const RelMatrix&) const = default;
};

/// Gift wrapping over planar facets. Coplanar input points collapse into one
/// polygonal facet that is fan-triangulated, so only extreme points survive
/// as vertices. Throws DegenerateCloud for fewer than four points or a
/// coplanar/collinear cloud.
ConvexHull compute_convex_hull(std::span<const Point3> points, double geom_tol = 1e-9);

RegionClass classify_point(const ConvexHull& hull, const Point3& p, double tol = 1e-7);

/// Largest signed distance of p over all face planes; <= 0 means inside.
double max_plane_distance(const ConvexHull& hull, const Point3& p);

/// Euclidean distance from p to the hull surface, zero when inside.
double distance_to_hull(const ConvexHull& hull, const Point3& p);

Aabb compute_aabb(std::span<const Point3> points);

double aabb_distance(const Aabb& a, const Aabb& b);

/// The inputs to every pairwise predicate: a cloud with its hull and AABB.
/// Thin or flat clouds get an AABB inflated by the touch tolerance in the
/// collapsed dimensions; `proxy` records that fallback.
struct ObjectShape {
  PointCloud cloud;
  ConvexHull hull;
  Aabb aabb;
  bool proxy = false;

  static ObjectShape from_cloud(PointCloud cloud, const Tolerances& tol = {});
  /// Boxes are represented by their 8 corners.
  static ObjectShape from_box(const Aabb& box);
  /// The AABB model: the hull replaced by the box itself.
  ObjectShape as_aabb_model() const;

  Point3 centroid() const;
};

RelMatrix relation_matrix(const ObjectShape& a, const ObjectShape& b, double tol = 1e-7);

/// Smallest distance from any point of one cloud to the other hull, checked
/// both ways. Zero when either cloud has a point inside the other hull.
double surface_distance(const ObjectShape& a, const ObjectShape& b);

/// Surface contact: interiors mutually empty of the other's points and the
/// clouds within `tol.touch` of each other.
bool touch(const ObjectShape& a, const ObjectShape& b, const Tolerances& tol = {});

/// Any contact: surface contact or interpenetration. The edge test of the
/// touch graph.
bool in_contact(const ObjectShape& a, const ObjectShape& b, const Tolerances& tol = {});

}  // namespace manipsem

#endif  // MANIPSEM_GEOMETRY_HPP_
