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

#include "manipsem/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <utility>

namespace manipsem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lexicographic_less(const Point3& a, const Point3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d& n) {
  const Eigen::Vector3d axis = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                     : Eigen::Vector3d::UnitY();
  return n.cross(axis).normalized();
}

// Gift-wrapping state over one input cloud. Facets are convex polygons of
// input indices, counter-clockwise seen from outside.
class FacetWrapper {
 public:
  FacetWrapper(std::span<const Point3> pts, double eps) : pts_(pts), eps_(eps) {}

  std::vector<std::vector<int>> run() {
    std::vector<int> first = initial_facet();
    std::deque<std::pair<int, int>> open;
    add_facet(std::move(first), open);

    const std::size_t cap = 8 * pts_.size() * pts_.size() + 64;
    std::size_t steps = 0;
    while (!open.empty()) {
      if (++steps > cap) throw DegenerateCloud("gift wrapping did not close");
      auto [a, b] = open.front();
      open.pop_front();
      if (edge_owner_.count({b, a})) continue;
      const Eigen::Vector3d n = facet_normals_.at(edge_owner_.at({a, b}));
      std::vector<int> next = wrap_across(a, b, n);
      if (!contains_directed(next, b, a)) {
        throw DegenerateCloud("inconsistent facet while wrapping");
      }
      add_facet(std::move(next), open);
    }
    return facets_;
  }

  const std::vector<Eigen::Vector3d>& normals() const { return facet_normals_; }

 private:
  // Rotates the supporting plane (outward normal `n`) about the line through
  // `a` with direction `e` until it meets the point set on the far side.
  // `inside` points from the line into the region already swept.
  int pivot(const Point3& a, const Eigen::Vector3d& e, const Eigen::Vector3d& n,
            const Eigen::Vector3d& inside) const {
    int best = -1;
    double best_angle = -1.0;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      Eigen::Vector3d v = pts_[i] - a;
      v -= v.dot(e) * e;
      if (v.norm() <= eps_) continue;
      const double angle = std::atan2(-v.dot(n), v.dot(inside));
      if (angle > best_angle + 1e-15 ||
          (best >= 0 && std::abs(angle - best_angle) <= 1e-15 &&
           lexicographic_less(pts_[i], pts_[best]))) {
        best = i;
        best_angle = angle;
      }
    }
    return best;
  }

  // Unit normal of the plane through `a` containing directions `e` and the
  // vector to `p`, oriented so no point lies outside; zero if none works.
  Eigen::Vector3d supporting_normal(const Point3& a, const Eigen::Vector3d& e,
                                    const Point3& p) const {
    Eigen::Vector3d n = e.cross(p - a);
    if (n.norm() <= eps_ * eps_) return Eigen::Vector3d::Zero();
    n.normalize();
    double hi = -kInf, lo = kInf;
    for (const auto& q : pts_) {
      const double d = n.dot(q - a);
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    if (hi <= eps_ && lo < -eps_) return n;
    if (lo >= -eps_ && hi > eps_) return -n;
    return Eigen::Vector3d::Zero();
  }

  std::vector<int> coplanar_polygon(const Point3& origin, const Eigen::Vector3d& n) const {
    const Eigen::Vector3d u = any_perpendicular(n);
    const Eigen::Vector3d w = n.cross(u);
    struct Projected {
      double x, y;
      int index;
    };
    std::vector<Projected> in_plane;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      const Eigen::Vector3d d = pts_[i] - origin;
      if (std::abs(d.dot(n)) <= eps_) in_plane.push_back({d.dot(u), d.dot(w), i});
    }
    std::sort(in_plane.begin(), in_plane.end(), [&](const Projected& l, const Projected& r) {
      if (l.x != r.x) return l.x < r.x;
      if (l.y != r.y) return l.y < r.y;
      return l.index < r.index;
    });
    auto cross = [](const Projected& o, const Projected& p, const Projected& q) {
      return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
    };
    // Andrew's monotone chain; collinear points are dropped.
    std::vector<Projected> chain(2 * in_plane.size() + 1);
    std::size_t k = 0;
    for (const auto& p : in_plane) {
      while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= eps_) --k;
      chain[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = in_plane.rbegin() + 1; it != in_plane.rend(); ++it) {
      while (k >= lower && cross(chain[k - 2], chain[k - 1], *it) <= eps_) --k;
      chain[k++] = *it;
    }
    std::vector<int> polygon;
    for (std::size_t i = 0; i + 1 < k; ++i) polygon.push_back(chain[i].index);
    return polygon;
  }

  std::vector<int> initial_facet() {
    int start = 0;
    for (int i = 1; i < static_cast<int>(pts_.size()); ++i) {
      if (lexicographic_less(pts_[i], pts_[start])) start = i;
    }
    const Point3& a = pts_[start];
    // x = min(x) supports the cloud; pivot it about a vertical line through a.
    const Eigen::Vector3d n0 = -Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e0 = Eigen::Vector3d::UnitZ();
    const int p1 = pivot(a, e0, n0, n0.cross(e0));
    if (p1 < 0) throw DegenerateCloud("all points coincide");
    Eigen::Vector3d n1 = supporting_normal(a, e0, pts_[p1]);
    if (n1.isZero()) n1 = n0;

    std::vector<int> polygon = coplanar_polygon(a, n1);
    if (polygon.size() >= 3) {
      pending_normal_ = n1;
      return polygon;
    }

    // The plane holds only a line of points; pivot about that line.
    const Eigen::Vector3d e1 = (pts_[p1] - a).normalized();
    const int p2 = pivot(a, e1, n1, n1.cross(e1));
    if (p2 < 0) throw DegenerateCloud("collinear cloud");
    const Eigen::Vector3d n2 = supporting_normal(a, e1, pts_[p2]);
    if (n2.isZero()) throw DegenerateCloud("coplanar cloud");
    polygon = coplanar_polygon(a, n2);
    if (polygon.size() < 3) throw DegenerateCloud("collinear cloud");
    pending_normal_ = n2;
    return polygon;
  }

  std::vector<int> wrap_across(int a, int b, const Eigen::Vector3d& n) {
    const Eigen::Vector3d e = (pts_[b] - pts_[a]).normalized();
    const Eigen::Vector3d inside = n.cross(e);
    const int p = pivot(pts_[a], e, n, inside);
    if (p < 0) throw DegenerateCloud("no pivot point");
    const Eigen::Vector3d n2 = supporting_normal(pts_[a], e, pts_[p]);
    if (n2.isZero()) throw DegenerateCloud("coplanar cloud");
    pending_normal_ = n2;
    return coplanar_polygon(pts_[a], n2);
  }

  static bool contains_directed(const std::vector<int>& poly, int from, int to) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (poly[i] == from && poly[(i + 1) % poly.size()] == to) return true;
    }
    return false;
  }

  void add_facet(std::vector<int> poly, std::deque<std::pair<int, int>>& open) {
    if (poly.size() < 3) throw DegenerateCloud("degenerate facet");
    std::vector<int> key = poly;
    std::sort(key.begin(), key.end());
    if (!seen_.insert(key).second) return;
    const int id = static_cast<int>(facets_.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const std::pair<int, int> edge{poly[i], poly[(i + 1) % poly.size()]};
      if (!edge_owner_.emplace(edge, id).second) {
        throw DegenerateCloud("edge claimed by two facets");
      }
      open.push_back(edge);
    }
    facets_.push_back(std::move(poly));
    facet_normals_.push_back(pending_normal_);
  }

  std::span<const Point3> pts_;
  double eps_;
  Eigen::Vector3d pending_normal_ = Eigen::Vector3d::Zero();
  std::vector<std::vector<int>> facets_;
  std::vector<Eigen::Vector3d> facet_normals_;
  std::map<std::pair<int, int>, int> edge_owner_;
  std::set<std::vector<int>> seen_;
};

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
Point3 closest_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_aabb_distance(const Aabb& box, const Point3& p) {
  const Eigen::Vector3d below = (box.min_corner - p).cwiseMax(0.0);
  const Eigen::Vector3d above = (p - box.max_corner).cwiseMax(0.0);
  return (below + above).norm();
}

// Smallest point-to-hull distance from `cloud` to `hull`, stopping early once
// it drops to `stop_below`; points farther than `limit` are not resolved.
double cloud_gap(const PointCloud& cloud, const ObjectShape& other, double limit,
                 double stop_below) {
  double best = kInf;
  for (const auto& p : cloud) {
    const double bound = std::min(best, limit);
    if (point_aabb_distance(other.aabb, p) > bound) continue;
    const double plane_bound = max_plane_distance(other.hull, p);
    if (plane_bound <= 0.0) return 0.0;
    if (plane_bound > bound) continue;
    best = std::min(best, distance_to_hull(other.hull, p));
    if (best <= stop_below) return best;
  }
  return best;
}

}  // namespace

double ConvexHull::volume() const {
  const Point3 c = centroid();
  double v = 0.0;
  for (const auto& f : faces) {
    v += (vertices[f[0]] - c).dot((vertices[f[1]] - c).cross(vertices[f[2]] - c));
  }
  return v / 6.0;
}

Point3 ConvexHull::centroid() const {
  Point3 sum = Point3::Zero();
  for (const auto& v : vertices) sum += v;
  return vertices.empty() ? sum : Point3(sum / static_cast<double>(vertices.size()));
}

std::size_t ConvexHull::edge_count() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : faces) {
    for (int i = 0; i < 3; ++i) {
      edges.insert(std::minmax(f[i], f[(i + 1) % 3]));
    }
  }
  return edges.size();
}

std::array<Point3, 8> Aabb::corners() const {
  std::array<Point3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = Point3((i & 1) ? max_corner.x() : min_corner.x(),
                    (i & 2) ? max_corner.y() : min_corner.y(),
                    (i & 4) ? max_corner.z() : min_corner.z());
  }
  return out;
}

ConvexHull compute_convex_hull(std::span<const Point3> points, double geom_tol) {
  if (points.size() < 4) throw DegenerateCloud("fewer than 4 points");
  for (const auto& p : points) {
    if (!p.allFinite()) throw DegenerateCloud("non-finite coordinate");
  }
  const Aabb box = compute_aabb(points);
  const double scale = std::max(1.0, box.extent().maxCoeff());
  FacetWrapper wrapper(points, geom_tol * scale);
  const auto facets = wrapper.run();
  const auto& normals = wrapper.normals();

  ConvexHull hull;
  std::map<int, int> remap;
  auto vertex = [&](int source) {
    auto [it, inserted] = remap.emplace(source, static_cast<int>(hull.vertices.size()));
    if (inserted) hull.vertices.push_back(points[source]);
    return it->second;
  };
  // Stable vertex order: sorted by source index.
  std::set<int> used;
  for (const auto& f : facets) used.insert(f.begin(), f.end());
  for (int s : used) vertex(s);

  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    const auto& poly = facets[fi];
    const Plane plane = Plane::through(points[poly[0]], normals[fi]);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      hull.faces.push_back({remap[poly[0]], remap[poly[i]], remap[poly[i + 1]]});
      hull.face_planes.push_back(plane);
    }
  }
  return hull;
}

double max_plane_distance(const ConvexHull& hull, const Point3& p) {
  double worst = -kInf;
  for (const auto& plane : hull.face_planes) worst = std::max(worst, plane.signed_distance(p));
  return worst;
}

RegionClass classify_point(const ConvexHull& hull, const Point3& p, double tol) {
  bool on_plane = false;
  for (const auto& plane : hull.face_planes) {
    const double d = plane.signed_distance(p);
    if (d > tol) return RegionClass::Exterior;
    if (d >= -tol) on_plane = true;
  }
  return on_plane ? RegionClass::Boundary : RegionClass::Interior;
}

double distance_to_hull(const ConvexHull& hull, const Point3& p) {
  if (max_plane_distance(hull, p) <= 0.0) return 0.0;
  double best = kInf;
  for (const auto& f : hull.faces) {
    const Point3 q =
        closest_on_triangle(p, hull.vertices[f[0]], hull.vertices[f[1]], hull.vertices[f[2]]);
    best = std::min(best, (p - q).norm());
  }
  return best;
}

Aabb compute_aabb(std::span<const Point3> points) {
  if (points.empty()) throw EmptyCloud("cannot bound an empty cloud");
  Aabb box{points.front(), points.front()};
  for (const auto& p : points) {
    box.min_corner = box.min_corner.cwiseMin(p);
    box.max_corner = box.max_corner.cwiseMax(p);
  }
  return box;
}

double aabb_distance(const Aabb& a, const Aabb& b) {
  const Eigen::Vector3d gap =
      (a.min_corner - b.max_corner).cwiseMax(b.min_corner - a.max_corner).cwiseMax(0.0);
  return gap.norm();
}

ObjectShape ObjectShape::from_cloud(PointCloud cloud, const Tolerances& tol) {
  ObjectShape shape;
  shape.aabb = compute_aabb(cloud);
  try {
    shape.hull = compute_convex_hull(cloud, tol.geom);
  } catch (const DegenerateCloud&) {
    Aabb inflated = shape.aabb;
    const double scale = std::max(1.0, inflated.extent().maxCoeff());
    for (int axis = 0; axis < 3; ++axis) {
      if (inflated.extent()[axis] <= tol.geom * scale) {
        inflated.min_corner[axis] -= tol.touch;
        inflated.max_corner[axis] += tol.touch;
      }
    }
    const auto corners = inflated.corners();
    shape.hull = compute_convex_hull(corners, tol.geom);
    shape.aabb = inflated;
    shape.proxy = true;
  }
  shape.cloud = std::move(cloud);
  return shape;
}

ObjectShape ObjectShape::from_box(const Aabb& box) {
  const auto corners = box.corners();
  ObjectShape shape;
  shape.cloud.assign(corners.begin(), corners.end());
  shape.aabb = box;
  shape.hull = compute_convex_hull(corners);
  return shape;
}

ObjectShape ObjectShape::as_aabb_model() const {
  ObjectShape model = from_box(aabb);
  model.cloud = cloud;
  model.proxy = proxy;
  return model;
}

Point3 ObjectShape::centroid() const {
  Point3 sum = Point3::Zero();
  for (const auto& p : cloud) sum += p;
  return cloud.empty() ? sum : Point3(sum / static_cast<double>(cloud.size()));
}

RelMatrix relation_matrix(const ObjectShape& a, const ObjectShape& b, double tol) {
  RelMatrix m;
  auto fill_row = [tol](const ObjectShape& from, const ObjectShape& into, bool& in0, bool& on,
                        bool& out) {
    for (const auto& p : from.cloud) {
      if (in0 && on && out) return;
      // A point outside the AABB is outside the hull.
      if (!into.aabb.contains(p, tol)) {
        out = true;
        continue;
      }
      switch (classify_point(into.hull, p, tol)) {
        case RegionClass::Interior: in0 = true; break;
        case RegionClass::Boundary: on = true; break;
        case RegionClass::Exterior: out = true; break;
      }
    }
  };
  fill_row(a, b, m.a_in_b0, m.a_on_db, m.a_in_bminus);
  fill_row(b, a, m.a0_has_b, m.da_has_b, m.aminus_has_b);
  return m;
}

double surface_distance(const ObjectShape& a, const ObjectShape& b) {
  return std::min(cloud_gap(a.cloud, b, kInf, 0.0), cloud_gap(b.cloud, a, kInf, 0.0));
}

namespace {

bool gap_within(const ObjectShape& a, const ObjectShape& b, double limit) {
  if (aabb_distance(a.aabb, b.aabb) > limit) return false;
  return cloud_gap(a.cloud, b, limit, limit) <= limit ||
         cloud_gap(b.cloud, a, limit, limit) <= limit;
}

bool any_interior(const PointCloud& cloud, const ObjectShape& other, double tol) {
  for (const auto& p : cloud) {
    if (!other.aabb.contains(p, tol)) continue;
    if (classify_point(other.hull, p, tol) == RegionClass::Interior) return true;
  }
  return false;
}

}  // namespace

bool touch(const ObjectShape& a, const ObjectShape& b, const Tolerances& tol) {
  if (!gap_within(a, b, tol.touch)) return false;
  return !any_interior(a.cloud, b, tol.boundary) && !any_interior(b.cloud, a, tol.boundary);
}

bool in_contact(const ObjectShape& a, const ObjectShape& b, const Tolerances& tol) {
  return gap_within(a, b, tol.touch);
}

}  // namespace manipsem
