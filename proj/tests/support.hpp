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

// Test-only fixtures and brute-force oracles. Nothing here calls into the
// hull construction or plane classification it is used to check.

#ifndef MANIPSEM_TESTS_SUPPORT_HPP_
#define MANIPSEM_TESTS_SUPPORT_HPP_

#include "manipsem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace manipsem::testing {

inline PointCloud box_corners(const Point3& lo, const Point3& hi) {
  PointCloud out;
  for (int i = 0; i < 8; ++i) {
    out.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                     (i & 4) ? hi.z() : lo.z());
  }
  return out;
}

inline PointCloud cube(const Point3& center, double side) {
  const Point3 h = Point3::Constant(side / 2);
  return box_corners(center - h, center + h);
}

/// Corners plus `per_edge` evenly spaced samples on each of the 12 edges.
inline PointCloud box_wireframe(const Point3& lo, const Point3& hi, int per_edge) {
  PointCloud out = box_corners(lo, hi);
  const auto c = box_corners(lo, hi);
  for (int i = 0; i < 8; ++i) {
    for (int bit : {1, 2, 4}) {
      if (i & bit) continue;
      const Point3& a = c[i];
      const Point3& b = c[i | bit];
      for (int k = 1; k <= per_edge; ++k) {
        const double t = static_cast<double>(k) / (per_edge + 1);
        out.push_back(a + t * (b - a));
      }
    }
  }
  return out;
}

inline PointCloud random_cloud(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PointCloud out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng), u(rng));
  return out;
}

/// Region of p against an axis-aligned box, by interval arithmetic.
inline RegionClass box_region(const Point3& lo, const Point3& hi, const Point3& p, double tol) {
  bool outside = false;
  bool near = false;
  for (int k = 0; k < 3; ++k) {
    if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) outside = true;
    if (std::abs(p[k] - lo[k]) <= tol || std::abs(p[k] - hi[k]) <= tol) near = true;
  }
  if (outside) return RegionClass::Exterior;
  return near ? RegionClass::Boundary : RegionClass::Interior;
}

/// Every plane through a triple of `vertices` that has all of them on one
/// side, oriented outward.
inline std::vector<Plane> supporting_planes(const PointCloud& vertices, double eps) {
  std::vector<Plane> planes;
  const int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Eigen::Vector3d normal = (vertices[j] - vertices[i]).cross(vertices[k] - vertices[i]);
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        double hi = -1e300, lo = 1e300;
        for (const auto& v : vertices) {
          const double d = normal.dot(v - vertices[i]);
          hi = std::max(hi, d);
          lo = std::min(lo, d);
        }
        if (hi <= eps) {
          planes.push_back(Plane::through(vertices[i], normal));
        } else if (lo >= -eps) {
          planes.push_back(Plane::through(vertices[i], -normal));
        }
      }
    }
  }
  return planes;
}

inline RegionClass classify_against(const std::vector<Plane>& planes, const Point3& p,
                                    double tol) {
  bool on = false;
  for (const auto& plane : planes) {
    const double d = plane.signed_distance(p);
    if (d > tol) return RegionClass::Exterior;
    if (std::abs(d) <= tol) on = true;
  }
  return on ? RegionClass::Boundary : RegionClass::Interior;
}

/// Indices of points that lie on some supporting plane through a point
/// triple. Exact for clouds in general position.
inline std::set<int> brute_force_hull_indices(const PointCloud& pts, double eps) {
  std::set<int> out;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Eigen::Vector3d normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        bool pos = false, neg = false;
        for (const auto& q : pts) {
          const double d = normal.dot(q - pts[i]);
          if (d > eps) pos = true;
          if (d < -eps) neg = true;
          if (pos && neg) break;
        }
        if (!(pos && neg)) {
          out.insert(i);
          out.insert(j);
          out.insert(k);
        }
      }
    }
  }
  return out;
}

}  // namespace manipsem::testing

#endif  // MANIPSEM_TESTS_SUPPORT_HPP_
