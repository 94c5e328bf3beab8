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

#include "doctest.h"
#include "manipsem/events.hpp"
#include "manipsem/synth.hpp"
#include "support.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace manipsem;
using namespace manipsem::testing;

namespace {

ObjectInstance box_object(std::string id, Role role, const Point3& lo, const Point3& hi) {
  return {id, id, role, box_corners(lo, hi), std::nullopt};
}

ObjectInstance ground_box() {
  ObjectInstance g{"table", "table", Role::Ground, {}, Aabb{{-1.5, -0.05, -1.5}, {1.5, 0, 1.5}}};
  const auto c = g.box->corners();
  g.points.assign(c.begin(), c.end());
  return g;
}

struct Box {
  Point3 lo, hi;
};

Box bounds(const ObjectInstance& o) {
  Box b{o.points.front(), o.points.front()};
  for (const auto& p : o.points) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

// Box pairs: in contact iff the per-axis gap vector is no longer than eps.
TouchGraph box_oracle(const Frame& frame, double eps) {
  TouchGraph g;
  for (std::size_t i = 0; i < frame.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.objects.size(); ++j) {
      const Box a = bounds(frame.objects[i]);
      const Box b = bounds(frame.objects[j]);
      double sq = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double gap = std::max({a.lo[k] - b.hi[k], b.lo[k] - a.hi[k], 0.0});
        sq += gap * gap;
      }
      if (std::sqrt(sq) <= eps) g.insert(make_edge(frame.objects[i].id, frame.objects[j].id));
    }
  }
  return g;
}

std::string two_frames() {
  return R"({"t": 0.0, "objects": [{"id": "h", "label": "hand", "role": "hand_left", "points": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}, {"id": "g", "label": "table", "role": "ground", "box": [[-1,-1,-1],[1,0,1]]}]}
{"t": 0.1, "objects": [{"id": "h", "label": "hand", "role": "hand_left", "points": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}, {"id": "g", "label": "table", "role": "ground", "box": [[-1,-1,-1],[1,0,1]]}]}
)";
}

int hand_balance(const HandStream& s) {
  int n = 0;
  for (const auto& a : s.actions) {
    if (a.subject.is_me()) continue;
    if (a.primitive == Primitive::T) ++n;
    if (a.primitive == Primitive::U) --n;
  }
  return n;
}

}  // namespace

TEST_CASE("load_trace: two valid frames") {
  std::istringstream in(two_frames());
  const SceneTrace t = load_trace(in, "two");
  REQUIRE(t.frames.size() == 2);
  CHECK(t.frames[0].objects.size() == 2);
  CHECK(t.rate_hz == doctest::Approx(10.0));
  CHECK(t.frames[1].find("g")->box.has_value());
}

TEST_CASE("load_trace: malformed inputs") {
  SUBCASE("duplicate hand_left") {
    std::istringstream in(
        R"({"t": 0, "objects": [{"id": "a", "label": "hand", "role": "hand_left", "points": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}, {"id": "b", "label": "hand", "role": "hand_left", "points": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}]})");
    CHECK_THROWS_AS(load_trace(in, "x"), SchemaError);
  }
  SUBCASE("broken json reports its line") {
    std::istringstream in(two_frames() + "{\"t\": 0.2, \"objects\": [\n");
    try {
      load_trace(in, "x");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("timestamps must increase") {
    std::string text = two_frames();
    text.replace(text.find("0.1"), 3, "0.0");
    std::istringstream in(text);
    CHECK_THROWS_AS(load_trace(in, "x"), MonotonicityError);
  }
  SUBCASE("unknown role and missing field") {
    std::istringstream bad_role(R"({"t": 0, "objects": [{"id": "a", "label": "x", "role": "tool", "points": []}]})");
    CHECK_THROWS_AS(load_trace(bad_role, "x"), SchemaError);
    std::istringstream no_points(R"({"t": 0, "objects": [{"id": "a", "label": "x", "role": "object"}]})");
    CHECK_THROWS_AS(load_trace(no_points, "x"), SchemaError);
  }
  SUBCASE("too few points") {
    std::istringstream in(R"({"t": 0, "objects": [{"id": "a", "label": "x", "role": "object", "points": [[0,0,0],[1,0,0],[0,1,0]]}]})");
    CHECK_THROWS_AS(load_trace(in, "x"), SchemaError);
  }
}

TEST_CASE("load_trace: write then load is the identity") {
  const auto st = generate_synthetic_trace({"Lift", 0.005, 0, 3, true});
  std::stringstream buf;
  buf.precision(17);
  write_trace(buf, st.trace);
  const SceneTrace back = load_trace(buf, "back");
  REQUIRE(back.frames.size() == st.trace.frames.size());
  for (std::size_t f = 0; f < back.frames.size(); f += 17) {
    const auto& a = st.trace.frames[f];
    const auto& b = back.frames[f];
    CHECK(a.t == b.t);
    REQUIRE(a.objects.size() == b.objects.size());
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
      CHECK(a.objects[i].id == b.objects[i].id);
      CHECK(a.objects[i].points == b.objects[i].points);
    }
  }
}

TEST_CASE("touch_graph: hand on a cup resting on the table") {
  Frame f{0.0,
          {ground_box(), box_object("cup", Role::Object, {0, 0, 0}, {0.08, 0.12, 0.08}),
           box_object("hand", Role::HandLeft, {0, 0.12, 0}, {0.08, 0.16, 0.08})}};
  const TouchGraph g = touch_graph(f);
  CHECK(g == box_oracle(f, Tolerances{}.touch));
  CHECK(g == TouchGraph{make_edge("cup", "hand"), make_edge("cup", "table")});
}

TEST_CASE("touch_graph: objects half a metre apart") {
  Frame f{0.0,
          {box_object("a", Role::Object, {0, 0.2, 0}, {0.1, 0.3, 0.1}),
           box_object("b", Role::Object, {0.6, 0.2, 0}, {0.7, 0.3, 0.1}),
           box_object("hand", Role::HandLeft, {0, 0.2, 0.6}, {0.1, 0.3, 0.7})}};
  CHECK(touch_graph(f).empty());
  CHECK(box_oracle(f, Tolerances{}.touch).empty());
}

TEST_CASE("touch_graph: cup inside a bowl") {
  Frame f{0.0,
          {ground_box(), box_object("bowl", Role::Object, {0, 0, 0}, {0.3, 0.15, 0.3}),
           box_object("cup", Role::Object, {0.1, 0.05, 0.1}, {0.18, 0.17, 0.18})}};
  const TouchGraph g = touch_graph(f);
  CHECK(g == box_oracle(f, Tolerances{}.touch));
  CHECK(g == TouchGraph{make_edge("bowl", "cup"), make_edge("bowl", "table")});
}

TEST_CASE("extraction matches the scripted tokens of every scenario") {
  for (const auto& name : scenario_names()) {
    for (bool companion : {false, true}) {
      CAPTURE(name);
      CAPTURE(companion);
      const auto st = generate_synthetic_trace({name, 0.0, 0, 11, companion});
      const auto ex = extract_atomic_actions(st.trace, st.config);
      for (int s = 0; s < 2; ++s) {
        CHECK(collapsed_tokens(ex.hands[s], ex.ground_id) == st.actions[s]);
      }
    }
  }
}

TEST_CASE("screwing: first AA and the lift") {
  const auto st = generate_synthetic_trace({"Screw", 0.0, 0, 2, true});
  const auto ex = extract_atomic_actions(st.trace, st.config);
  const auto& left = ex.hand(Side::Left);
  REQUIRE(left.actions.size() >= 3);
  const AtomicAction& touch = left.actions[0];
  CHECK_FALSE(touch.subject.is_me());
  CHECK(touch.primitive == Primitive::T);
  CHECK(ex.labels.at(touch.object) == "screwdriver");
  CHECK(touch.relation == SsrLabel::To);
  CHECK(touch.place.kind == PlaceKind::Ground);
  CHECK(ex.labels.at(touch.place.id) == "table");

  const AtomicAction& lift = left.actions[1];
  CHECK(lift.subject.carried == touch.object);
  CHECK(lift.primitive == Primitive::U);
  CHECK(lift.object == ex.ground_id);
  CHECK(lift.relation == SsrLabel::Ab);
  CHECK(left.actions[2].primitive == Primitive::Mt);
  CHECK(left.actions[2].place.kind == PlaceKind::Air);
  CHECK(left.roles.at(touch.object) == 1);
}

TEST_CASE("screwing trace: 1000 frames, one snippet per hand") {
  const auto st = generate_synthetic_trace({"Screw", 0.0, 1000, 4, true});
  std::stringstream buf;
  buf.precision(17);
  write_trace(buf, st.trace);
  const SceneTrace t = load_trace(buf, "screw");
  CHECK(t.frames.size() == 1000);
  std::set<std::string> bodies;
  for (const auto& f : t.frames) {
    for (const auto& o : f.objects) {
      if (o.role != Role::Ground) bodies.insert(o.id);
    }
  }
  CHECK(bodies.size() == 4);

  const auto ex = extract_atomic_actions(t, st.config);
  const auto left = segment_actions(ex.hand(Side::Left), ex.frame_count);
  const auto right = segment_actions(ex.hand(Side::Right), ex.frame_count);
  REQUIRE(left.snippets.size() == 1);
  REQUIRE(right.snippets.size() == 1);
  CHECK(left.snippets[0].actions.size() == ex.hand(Side::Left).actions.size());
  CHECK(right.snippets[0].actions.size() == 2);
}

TEST_CASE("hand T minus U equals the open contacts at the end") {
  for (const auto& name : scenario_names()) {
    const auto st = generate_synthetic_trace({name, 0.0, 0, 5, true});
    // Cut each trace at several points so some contacts stay open.
    for (int cut : {60, 120, 200, 0}) {
      SceneTrace t = st.trace;
      if (cut > 0 && cut < static_cast<int>(t.frames.size())) t.frames.resize(cut);
      const auto ex = extract_atomic_actions(t, st.config);
      for (const auto& h : ex.hands) {
        CAPTURE(name);
        CAPTURE(cut);
        CHECK(hand_balance(h) == h.contacts.back());
      }
    }
  }
}

TEST_CASE("snippets start with a hand T from a free hand and end free") {
  for (const auto& name : scenario_names()) {
    for (std::uint64_t seed : {1, 2}) {
      const auto st = generate_synthetic_trace({name, 0.005, 0, seed, seed == 2});
      const auto ex = extract_atomic_actions(st.trace, st.config);
      for (const auto& h : ex.hands) {
        const auto seg = segment_actions(h, ex.frame_count);
        for (const auto& sn : seg.snippets) {
          CAPTURE(name);
          REQUIRE_FALSE(sn.actions.empty());
          CHECK(sn.actions.front().primitive == Primitive::T);
          CHECK_FALSE(sn.actions.front().subject.is_me());
          CHECK(sn.actions.front().start == sn.start);
          CHECK((sn.start == 0 || h.contacts[sn.start - 1] == 0));
          // A trace may stop mid-grasp; that snippet runs to the last frame.
          CHECK((h.contacts[sn.end] == 0 || sn.end == ex.frame_count - 1));
        }
        for (const auto& [a, b] : seg.idle) {
          for (int f = a; f <= b; ++f) CHECK(h.contacts[f] == 0);
        }
      }
    }
  }
}

TEST_CASE("replay through the text format gives the same actions") {
  for (const char* name : {"Pour", "Wipe", "Hammer"}) {
    const auto st = generate_synthetic_trace({name, 0.01, 0, 9, true});
    std::stringstream buf;
    buf.precision(17);
    write_trace(buf, st.trace);
    const SceneTrace back = load_trace(buf, "replay");
    const auto a = extract_atomic_actions(st.trace, st.config);
    const auto b = extract_atomic_actions(back, st.config);
    for (int s = 0; s < 2; ++s) {
      CHECK(a.hands[s].actions == b.hands[s].actions);
      CHECK(a.hands[s].roles == b.hands[s].roles);
    }
  }
}

TEST_CASE("static disjoint scene yields no actions") {
  SceneTrace t;
  for (int f = 0; f < 40; ++f) {
    t.frames.push_back(
        {f / 30.0,
         {ground_box(), box_object("cup", Role::Object, {0, 0.3, 0}, {0.1, 0.4, 0.1}),
          box_object("hand_left", Role::HandLeft, {0.5, 0.3, 0}, {0.6, 0.34, 0.1}),
          box_object("hand_right", Role::HandRight, {-0.6, 0.3, 0}, {-0.5, 0.34, 0.1})}});
  }
  for (double eps : {0.005, 0.05}) {
    EventConfig cfg;
    cfg.rel.tol.touch = eps;
    cfg.rel.tol.boundary = eps;
    const auto ex = extract_atomic_actions(t, cfg);
    CHECK(ex.hands[0].actions.empty());
    CHECK(ex.hands[1].actions.empty());
    const auto seg = segment_actions(ex.hands[0], ex.frame_count);
    CHECK(seg.snippets.empty());
    REQUIRE(seg.idle.size() == 1);
    CHECK(seg.idle[0] == std::pair{0, 39});
  }
}

TEST_CASE("an unused hand is idle for the whole trace") {
  const auto st = generate_synthetic_trace({"Wipe", 0.0, 0, 1, false});
  const auto ex = extract_atomic_actions(st.trace, st.config);
  CHECK(ex.hand(Side::Right).hand_id.empty());
  const auto seg = segment_actions(ex.hand(Side::Right), ex.frame_count);
  CHECK(seg.snippets.empty());
  REQUIRE(seg.idle.size() == 1);
  CHECK(seg.idle[0] == std::pair{0, ex.frame_count - 1});
}

TEST_CASE("contacts under 2 cm jitter debounce to the clean event sequence") {
  // Top grasps only: these keep every non-contact gap above the jitter band.
  for (std::string name : {"Place", "Lift", "Hold"}) {
    CAPTURE(name);
    const auto clean = generate_synthetic_trace({name, 0.0, 0, 21, false});
    const auto noisy = generate_synthetic_trace({name, 0.02, 0, 21, false});
    const auto a = extract_atomic_actions(clean.trace, clean.config).hands[0].actions;
    const auto b = extract_atomic_actions(noisy.trace, noisy.config).hands[0].actions;
    std::vector<const AtomicAction*> ta, tb;
    for (const auto& x : a) {
      if (x.primitive == Primitive::T || x.primitive == Primitive::U) ta.push_back(&x);
    }
    for (const auto& x : b) {
      if (x.primitive == Primitive::T || x.primitive == Primitive::U) tb.push_back(&x);
    }
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
      CHECK(ta[i]->primitive == tb[i]->primitive);
      CHECK(ta[i]->object == tb[i]->object);
      CHECK(ta[i]->subject == tb[i]->subject);
      // The 5 cm contact band fires up to 5 frames early at 1 cm/frame.
      CHECK(std::abs(ta[i]->start - tb[i]->start) <= 10);
    }
  }
}

TEST_CASE("a fourth touched object reuses O3 with a warning") {
  SceneTrace t;
  auto scene = [&](int k, bool down) {
    Frame f{static_cast<double>(t.frames.size()) / 30.0, {ground_box()}};
    for (int i = 0; i < 4; ++i) {
      const double x = 0.3 * i;
      f.objects.push_back(box_object("cup" + std::to_string(i + 1), Role::Object, {x, 0, 0},
                                     {x + 0.08, 0.12, 0.08}));
    }
    const double x = 0.3 * k;
    const double y = down ? 0.12 : 0.3;
    f.objects.push_back(
        box_object("hand", Role::HandLeft, {x, y, 0}, {x + 0.08, y + 0.04, 0.08}));
    t.frames.push_back(std::move(f));
  };
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 8; ++i) scene(k, false);
    for (int i = 0; i < 8; ++i) scene(k, true);
  }
  for (int i = 0; i < 8; ++i) scene(3, false);

  const auto ex = extract_atomic_actions(t);
  const HandStream& h = ex.hand(Side::Left);
  CHECK(h.actions.size() == 8);
  CHECK(h.roles.at("cup1") == 1);
  CHECK(h.roles.at("cup3") == 3);
  CHECK(h.roles.at("cup4") == 3);
  CHECK(h.warnings.size() == 1);
  CHECK(h.object_token("cup4", ex.ground_id) == "O3");
  CHECK(h.object_token(ex.ground_id, ex.ground_id) == "G");
  CHECK(h.place_token({PlaceKind::Air, ""}, ex.ground_id) == "Air");
  CHECK(h.place_token({PlaceKind::Object, "cup2"}, ex.ground_id) == "O2");
}

TEST_CASE("config validation") {
  EventConfig cfg;
  cfg.debounce = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.debounce = 3;
  cfg.grasp_speed = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
