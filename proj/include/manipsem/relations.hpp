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

#ifndef MANIPSEM_RELATIONS_HPP_
#define MANIPSEM_RELATIONS_HPP_

#include "manipsem/geometry.hpp"

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace manipsem {

/// Static spatial relation from a to b.
enum class SsrLabel { Ab, Be, To, Bo, Ar, ArT, In, Su, Cr, Wi, Pwi, Co, Pco, NoRelation };

/// Dynamic spatial relation over a window of frames.
enum class DsrLabel { Gc, Ma, Mt, Ht, Fmt, S };

inline constexpr std::array<SsrLabel, 13> kSsrLabels = {
    SsrLabel::Ab, SsrLabel::Be, SsrLabel::To,  SsrLabel::Bo,  SsrLabel::Ar,
    SsrLabel::ArT, SsrLabel::In, SsrLabel::Su, SsrLabel::Cr,  SsrLabel::Wi,
    SsrLabel::Pwi, SsrLabel::Co, SsrLabel::Pco};

std::string_view to_string(SsrLabel label);
std::string_view to_string(DsrLabel label);
std::optional<SsrLabel> parse_ssr(std::string_view text);
std::optional<DsrLabel> parse_dsr(std::string_view text);

class WindowTooShort : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RelationConfig {
  Tolerances tol;
  double theta_near = 0.15;   // m, widest gap still called Around
  double delta_move = 2e-3;   // m/frame, below this an object is at rest
  double delta_rel = 1e-3;    // m/frame, distance drift still "together"
  int window = 10;            // frames per DSR evaluation
  bool alias_in_su = false;   // report Wi/Co instead of In/Su

  /// Throws std::invalid_argument when a threshold is not strictly positive.
  void validate() const;
};

/// Hull mode uses the convex-hull set calculus; Aabb mode reproduces the
/// box-only model, which cannot express Cr, Wi, Pwi, Co or Pco.
enum class ShapeModel { Hull, Aabb };

SsrLabel classify_ssr(const ObjectShape& a, const ObjectShape& b, const RelationConfig& cfg = {},
                      ShapeModel model = ShapeModel::Hull);

/// The label of (b, a) given the label of (a, b).
constexpr SsrLabel ssr_dual(SsrLabel label) {
  switch (label) {
    case SsrLabel::Ab: return SsrLabel::Be;
    case SsrLabel::Be: return SsrLabel::Ab;
    case SsrLabel::To: return SsrLabel::Bo;
    case SsrLabel::Bo: return SsrLabel::To;
    case SsrLabel::Wi: return SsrLabel::Co;
    case SsrLabel::Co: return SsrLabel::Wi;
    case SsrLabel::Pwi: return SsrLabel::Pco;
    case SsrLabel::Pco: return SsrLabel::Pwi;
    case SsrLabel::In: return SsrLabel::Su;
    case SsrLabel::Su: return SsrLabel::In;
    default: return label;
  }
}

/// True for labels that imply the two objects are in contact.
constexpr bool is_contact_label(SsrLabel label) {
  switch (label) {
    case SsrLabel::To: case SsrLabel::Bo: case SsrLabel::ArT: case SsrLabel::In:
    case SsrLabel::Su: case SsrLabel::Cr: case SsrLabel::Wi: case SsrLabel::Pwi:
    case SsrLabel::Co: case SsrLabel::Pco:
      return true;
    default:
      return false;
  }
}

/// Frame-to-frame steps of a centroid track longer than `delta`.
int moving_steps(std::span<const Point3> track, double delta);

/// At least half of the steps are longer than `delta`. Short bursts (a hand
/// pulling away at the end of a window) and centroid jitter do not count.
bool is_moving(std::span<const Point3> track, double delta);

/// Kinetic relation between two centroid tracks of equal length (>= 2).
/// `touching` holds one flag per frame; the pair counts as touching only when
/// every frame does.
DsrLabel classify_dsr(std::span<const Point3> track_a, std::span<const Point3> track_b,
                      std::span<const bool> touching, const RelationConfig& cfg = {});

}  // namespace manipsem

#endif  // MANIPSEM_RELATIONS_HPP_
