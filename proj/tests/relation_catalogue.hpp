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

#ifndef MANIPSEM_TESTS_RELATION_CATALOGUE_HPP_
#define MANIPSEM_TESTS_RELATION_CATALOGUE_HPP_

#include "manipsem/relations.hpp"
#include "support.hpp"

#include <vector>

namespace manipsem::testing {

struct CatalogueEntry {
  SsrLabel expected;
  PointCloud a;
  PointCloud b;
};

// One hand-built cube pair per label, corners only. Expected labels follow
// from the placement: unit cubes stacked, side by side, or nested in a cube of
// side 3 spanning [0, 3]^3.
inline std::vector<CatalogueEntry> relation_catalogue() {
  const PointCloud unit = cube({0.5, 0.5, 0.5}, 1.0);
  const PointCloud big = cube({1.5, 1.5, 1.5}, 3.0);
  std::vector<CatalogueEntry> out;
  out.push_back({SsrLabel::Ab, cube({0.5, 2.5, 0.5}, 1.0), unit});
  out.push_back({SsrLabel::Be, unit, cube({0.5, 2.5, 0.5}, 1.0)});
  out.push_back({SsrLabel::To, cube({0.5, 1.5, 0.5}, 1.0), unit});
  out.push_back({SsrLabel::Bo, unit, cube({0.5, 1.5, 0.5}, 1.0)});
  out.push_back({SsrLabel::Ar, cube({1.6, 0.5, 0.5}, 1.0), unit});
  out.push_back({SsrLabel::ArT, cube({1.5, 0.5, 0.5}, 1.0), unit});
  out.push_back({SsrLabel::In, cube({0.5, 1.5, 1.5}, 1.0), big});
  out.push_back({SsrLabel::Su, big, cube({0.5, 1.5, 1.5}, 1.0)});
  out.push_back({SsrLabel::Cr, cube({1.0, 1.0, 1.0}, 1.0), unit});
  out.push_back({SsrLabel::Wi, cube({1.5, 1.5, 1.5}, 1.0), big});
  out.push_back({SsrLabel::Pwi, cube({1.5, 3.0, 1.5}, 1.0), big});
  out.push_back({SsrLabel::Co, big, cube({1.5, 1.5, 1.5}, 1.0)});
  out.push_back({SsrLabel::Pco, big, cube({1.5, 3.0, 1.5}, 1.0)});
  out.push_back({SsrLabel::NoRelation, cube({5.0, 0.5, 0.5}, 1.0), unit});
  return out;
}

}  // namespace manipsem::testing

#endif  // MANIPSEM_TESTS_RELATION_CATALOGUE_HPP_
