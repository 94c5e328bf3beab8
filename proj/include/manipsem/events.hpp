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

#ifndef MANIPSEM_EVENTS_HPP_
#define MANIPSEM_EVENTS_HPP_

#include "manipsem/relations.hpp"
#include "manipsem/trace.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace manipsem {

enum class Side { Left, Right };
enum class Primitive { T, U, Mt, Fmt };
enum class PlaceKind { Object, Ground, Air };

std::string_view to_string(Side side);
std::string_view to_string(Primitive primitive);
std::optional<Primitive> parse_primitive(std::string_view text);

struct Subject {
  Side side = Side::Left;
  std::optional<std::string> carried;  // set: "Me", the hand with this object

  bool is_me() const { return carried.has_value(); }
  bool operator==(const Subject&) const = default;
};

struct Place {
  PlaceKind kind = PlaceKind::Air;
  std::string id;  // entity id for Object and Ground
  bool operator==(const Place&) const = default;
};

struct AtomicAction {
  Subject subject;
  Primitive primitive = Primitive::T;
  std::string object;  // entity id, the ground included
  SsrLabel relation = SsrLabel::NoRelation;
  Place place;
  int start = 0;
  int end = 0;

  bool operator==(const AtomicAction&) const = default;
};

struct EventConfig {
  RelationConfig rel;
  int debounce = 3;  // frames an edge change must persist
  /// A touched object moving with the hand faster than this (m/frame) over
  /// the debounce span is taken as grasped at once; slower joint motion
  /// needs a full DSR window.
  double grasp_speed = 5e-3;

  void validate() const;
};

using Edge = std::pair<std::string, std::string>;  // first < second
using TouchGraph = std::set<Edge>;

Edge make_edge(const std::string& a, const std::string& b);

/// Pairs of objects in contact (surface touch or interpenetration).
TouchGraph touch_graph(const Frame& frame, const EventConfig& cfg = {});
TouchGraph touch_graph(const std::vector<std::string>& ids, const std::vector<ObjectShape>& shapes,
                       const Tolerances& tol);

struct HandStream {
  Side side = Side::Left;
  std::string hand_id;  // empty when the hand never appears
  std::vector<AtomicAction> actions;
  std::map<std::string, int> roles;  // object id -> 1..3
  std::vector<int> contacts;         // debounced hand contacts per frame
  std::vector<std::string> warnings;

  /// "O1".."O3", "G" for the ground, the id itself when unassigned.
  std::string object_token(const std::string& id, const std::string& ground_id) const;
  std::string place_token(const Place& place, const std::string& ground_id) const;
};

struct Extraction {
  std::array<HandStream, 2> hands;
  std::map<std::string, std::string> labels;  // id -> label
  std::string ground_id;
  int frame_count = 0;

  const HandStream& hand(Side side) const { return hands[static_cast<int>(side)]; }
};

Extraction extract_atomic_actions(const SceneTrace& trace, const EventConfig& cfg = {});

struct Snippet {
  Side side = Side::Left;
  int start = 0;
  int end = 0;
  std::vector<AtomicAction> actions;
};

struct Segmentation {
  std::vector<Snippet> snippets;
  std::vector<std::pair<int, int>> idle;  // inclusive frame spans
};

Segmentation segment_actions(const HandStream& stream, int frame_count);

}  // namespace manipsem

#endif  // MANIPSEM_EVENTS_HPP_
