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

#include "manipsem/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace manipsem {

namespace {

using Vec = Eigen::Vector3d;

constexpr double kSpeed = 0.01;  // m/frame for scripted moves
constexpr double kRate = 30.0;   // Hz

struct Body {
  std::string id;
  std::string label;
  Role role = Role::Object;
  Vec half = Vec::Constant(0.05);
  Point3 center = Point3::Zero();
  std::vector<Vec> unit;  // sample positions in [0, 1]^3

  double top() const { return center.y() + half.y(); }
  double bottom() const { return center.y() - half.y(); }
  Aabb box() const { return {center - half, center + half}; }
};

// Points of an m x m grid on each face of the unit cube.
std::vector<Vec> face_grid(int m) {
  std::vector<Vec> out;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        const bool on_face = i == 0 || j == 0 || k == 0 || i == m - 1 || j == m - 1 || k == m - 1;
        if (on_face) out.emplace_back(i / double(m - 1), j / double(m - 1), k / double(m - 1));
      }
    }
  }
  return out;
}

class Stage {
 public:
  explicit Stage(std::mt19937_64& rng) : rng_(rng) {}

  int add(std::string id, std::string label, Role role, const Vec& size, const Point3& center,
          int grid = 4) {
    if (!frames_.empty()) throw std::logic_error("bodies must exist before the first frame");
    Body b;
    b.id = std::move(id);
    b.label = std::move(label);
    b.role = role;
    b.half = size / 2;
    b.center = center;
    b.unit = face_grid(grid);
    bodies_.push_back(std::move(b));
    return static_cast<int>(bodies_.size()) - 1;
  }

  // Resting on the table at (x, z).
  int object(std::string id, std::string label, const Vec& size, double x, double z,
             int grid = 4) {
    return add(std::move(id), std::move(label), Role::Object, size, {x, size.y() / 2, z}, grid);
  }

  Body& operator[](int i) { return bodies_[i]; }
  const std::vector<Body>& bodies() const { return bodies_; }
  const std::vector<std::vector<Point3>>& frames() const { return frames_; }
  int frame_count() const { return static_cast<int>(frames_.size()); }

  void snap() {
    std::vector<Point3> c;
    for (const auto& b : bodies_) c.push_back(b.center);
    frames_.push_back(std::move(c));
  }

  void hold(int n) {
    for (int i = 0; i < n; ++i) snap();
  }

  // Rest long enough for any contact change to pass the debounce.
  void settle() { hold(6 + static_cast<int>(rng_() % 3)); }

  void move(const std::vector<int>& group, const Vec& delta, double speed = kSpeed) {
    const int n = std::max(1, static_cast<int>(std::ceil(delta.norm() / speed - 1e-9)));
    for (int i = 0; i < n; ++i) {
      for (int g : group) bodies_[g].center += delta / n;
      snap();
    }
  }

  void go(const std::vector<int>& group, const Point3& target) {
    move(group, target - bodies_[group.front()].center);
  }

  // Out along `offset` and back, `cycles` times.
  void oscillate(const std::vector<int>& group, const Vec& offset, int period, int cycles) {
    const auto base = centers(group);
    for (int t = 1; t <= period * cycles; ++t) {
      const double s = 0.5 * (1.0 - std::cos(2 * std::numbers::pi * t / period));
      for (std::size_t i = 0; i < group.size(); ++i) bodies_[group[i]].center = base[i] + s * offset;
      snap();
    }
  }

  // Circle in the xz plane through the start position.
  void orbit(const std::vector<int>& group, double radius, int period, int cycles) {
    const auto base = centers(group);
    for (int t = 1; t <= period * cycles; ++t) {
      const double a = 2 * std::numbers::pi * t / period;
      const Vec d(radius * std::sin(a), 0.0, radius * (1.0 - std::cos(a)));
      for (std::size_t i = 0; i < group.size(); ++i) bodies_[group[i]].center = base[i] + d;
      snap();
    }
  }

  // Hand from its current spot onto the top of `o`, via a point above.
  void top_grasp(int h, int o) {
    const Point3 target(bodies_[o].center.x(), bodies_[o].top() + bodies_[h].half.y(),
                        bodies_[o].center.z());
    go({h}, target + Vec(0, 0.1, 0));
    move({h}, Vec(0, -0.1, 0));
    settle();
  }

  // Hand against the -x (sign -1) or +x (sign +1) face of `o`, high
  // enough to stay clear of the table.
  void side_grasp(int h, int o, double sign) {
    const Body& b = bodies_[o];
    const double x = b.center.x() + sign * (b.half.x() + bodies_[h].half.x());
    const double y = std::min(std::max(b.center.y(), b.bottom() + bodies_[h].half.y() + 0.06),
                              b.top() - 0.5 * bodies_[h].half.y());
    const Point3 target(x, y, b.center.z());
    const Point3 pre = target + Vec(sign * 0.1, 0, 0);
    go({h}, Point3(pre.x(), bodies_[h].center.y(), pre.z()));
    go({h}, pre);
    move({h}, target - pre);
    settle();
  }

  void release_up(int h) {
    move({h}, Vec(0, 0.1, 0), 2 * kSpeed);
    hold(4);
  }

  void release_side(int h, double sign) {
    move({h}, Vec(sign * 0.1, 0, 0), 2 * kSpeed);
    hold(4);
  }

  // Carried object `o` (with hand `h`) lifted, moved over (x, z) and
  // lowered until its bottom is at `surface`.
  void carry_to(int h, int o, double x, double z, double clearance, double surface) {
    const std::vector<int> g{h, o};
    move(g, Vec(0, clearance - bodies_[o].bottom(), 0));
    move(g, Vec(x - bodies_[o].center.x(), 0, z - bodies_[o].center.z()));
    move(g, Vec(0, surface - bodies_[o].bottom(), 0));
  }

  // `points` samples per body: the grid, or the corners when fewer are
  // asked for, topped up with random samples on the bottom faces.
  void top_up(int points) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& b : bodies_) {
      if (static_cast<int>(b.unit.size()) > points) b.unit = face_grid(2);
      while (static_cast<int>(b.unit.size()) < points) b.unit.emplace_back(u(rng_), 0.0, u(rng_));
    }
  }

  std::vector<Point3> centers(const std::vector<int>& group) const {
    std::vector<Point3> out;
    for (int g : group) out.push_back(bodies_[g].center);
    return out;
  }

 private:
  std::mt19937_64& rng_;
  std::vector<Body> bodies_;
  std::vector<std::vector<Point3>> frames_;
};

// Grammar tokens for the expected streams.
struct Tokens {
  std::string hand;  // "Hand_L" or "Hand_R"
  std::vector<std::string> out;

  void h(const char* prim, const char* obj, const char* rel, const char* place) {
    out.push_back(hand + " " + prim + " " + obj + " " + rel + " " + place);
  }
  void me(const char* carried, const char* prim, const char* obj, const char* rel,
          const char* place) {
    out.push_back(hand + " " + carried + " " + prim + " " + obj + " " + rel + " " + place);
  }
};

struct Layout {
  Point3 origin;
  int left = -1;
  int right = -1;
  int right_cup = -1;  // companion Place target, present from frame 0
};

using Script = std::function<std::string(Stage&, Layout&, Tokens&, std::mt19937_64&)>;

const Vec kHand(0.08, 0.04, 0.08);
const Vec kCup(0.08, 0.12, 0.08);

int add_left(Stage& s, const Layout& l) {
  return s.add("hand_left", "hand", Role::HandLeft, kHand, l.origin + Vec(-0.35, 0.35, 0.0));
}

std::string idle(Stage& s, Layout& l, Tokens&, std::mt19937_64&) {
  const Point3 o = l.origin;
  l.left = add_left(s, l);
  s.object("cup", "cup", kCup, o.x(), o.z());
  s.hold(5);
  s.move({l.left}, Vec(0.2, 0, 0));
  s.move({l.left}, Vec(0, 0, 0.2));
  s.move({l.left}, Vec(-0.2, 0.05, -0.2));
  s.hold(5);
  return "Idle";
}

std::string approach(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.side_grasp(l.left, cup, -1);
  s.hold(8);
  t.h("T", "O1", "ArT", "Ground");
  return "Approach";
}

std::string retreat(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.side_grasp(l.left, cup, -1);
  s.hold(8);
  s.release_side(l.left, -1);
  s.move({l.left}, Vec(-0.1, 0.2, 0));
  t.h("T", "O1", "ArT", "Ground");
  t.h("U", "O1", "Ar", "Ground");
  return "Retreat";
}

std::string hold(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.top_grasp(l.left, cup);
  s.hold(10);
  t.h("T", "O1", "To", "Ground");
  return "Hold";
}

void pick(Tokens& t, const char* rel) {
  t.h("T", "O1", rel, "Ground");
  t.me("O1", "U", "G", "Ab", "Ground");
  t.me("O1", "Mt", "G", "Ab", "Air");
}

std::string lift(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.top_grasp(l.left, cup);
  s.move({l.left, cup}, Vec(0, 0.25, 0));
  s.hold(4);
  pick(t, "To");
  return "Lift";
}

std::string place(Stage& s, Layout& l, Tokens& t, std::mt19937_64& rng) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.top_grasp(l.left, cup);
  const double dx = 0.2 + 0.01 * static_cast<double>(rng() % 10);
  s.carry_to(l.left, cup, s[cup].center.x() + dx, s[cup].center.z(), 0.15, 0.0);
  s.settle();
  s.release_up(l.left);
  pick(t, "To");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ab", "Ground");
  return "Place";
}

std::string drink(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int cup = s.object("cup", "cup", kCup, l.origin.x(), l.origin.z());
  s.hold(3);
  s.side_grasp(l.left, cup, -1);
  s.move({l.left, cup}, Vec(0, 0.3, 0));
  s.hold(3);
  s.move({l.left, cup}, Vec(0, -0.3, 0));
  s.settle();
  s.release_side(l.left, -1);
  pick(t, "ArT");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ar", "Ground");
  return "Drink";
}

std::string pour(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  const int cup = s.object("cup", "cup", Vec(0.08, 0.1, 0.08), o.x(), o.z());
  const int bowl = s.object("bowl", "bowl", Vec(0.2, 0.15, 0.2), o.x() + 0.35, o.z());
  s.hold(3);
  s.side_grasp(l.left, cup, -1);
  const double beside = s[bowl].box().min_corner.x() - s[cup].half.x();
  s.carry_to(l.left, cup, beside - 0.1, o.z(), 0.2, 0.07);
  s.move({l.left, cup}, Vec(0.1, 0, 0));
  s.settle();
  s.oscillate({l.left, cup}, Vec(0, 0.04, 0), 10, 6);
  s.move({l.left, cup}, Vec(-0.05, 0, 0));
  s.carry_to(l.left, cup, o.x() - 0.1, o.z(), 0.2, 0.0);
  s.settle();
  s.release_side(l.left, -1);
  pick(t, "ArT");
  t.me("O1", "T", "O2", "ArT", "Ground");
  t.me("O1", "Fmt", "O2", "ArT", "Ground");
  t.me("O1", "U", "O2", "Ar", "Ground");
  t.me("O1", "Mt", "G", "Ab", "Air");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ar", "Ground");
  return "Pour";
}

std::string stir(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  s.object("bowl", "bowl", Vec(0.3, 0.1, 0.3), o.x(), o.z());
  const int spoon =
      s.add("spoon", "spoon", Role::Object, Vec(0.02, 0.2, 0.02), Point3(o.x(), 0.14, o.z()));
  s.hold(3);
  s.top_grasp(l.left, spoon);
  s.orbit({l.left, spoon}, 0.025, 12, 5);
  s.settle();
  s.release_up(l.left);
  t.h("T", "O1", "To", "O2");
  t.me("O1", "Fmt", "O2", "Pwi", "Ground");
  t.h("U", "O1", "Ab", "O2");
  return "Stir";
}

std::string wipe(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const int sponge =
      s.object("sponge", "sponge", Vec(0.08, 0.06, 0.06), l.origin.x(), l.origin.z());
  s.hold(3);
  s.top_grasp(l.left, sponge);
  s.oscillate({l.left, sponge}, Vec(0.15, 0, 0), 20, 3);
  s.settle();
  s.release_up(l.left);
  t.h("T", "O1", "To", "Ground");
  t.me("O1", "Fmt", "G", "To", "Ground");
  t.h("U", "O1", "Ab", "Ground");
  return "Wipe";
}

// Pick the tool, bring it onto `target`, work, bring it back.
void tool_on(Stage& s, Layout& l, int tool, int target, const std::function<void()>& work) {
  s.hold(3);
  s.top_grasp(l.left, tool);
  const Point3 home = s[tool].center;
  s.carry_to(l.left, tool, s[target].center.x(), s[target].center.z(), s[target].top() + 0.07,
             s[target].top());
  s.settle();
  work();
  s.carry_to(l.left, tool, home.x(), home.z(), s[target].top() + 0.07, 0.0);
  s.settle();
  s.release_up(l.left);
}

void tool_tokens(Tokens& t, const char* work_rel) {
  pick(t, "To");
  t.me("O1", "T", "O2", "To", "Ground");
  t.me("O1", "Fmt", "O2", work_rel, "Ground");
  t.me("O1", "U", "O2", "Ab", "Ground");
  t.me("O1", "Mt", "G", "Ab", "Air");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ab", "Ground");
}

std::string saw(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  const int tool = s.object("saw", "saw", Vec(0.2, 0.06, 0.03), o.x(), o.z());
  const int wood = s.object("wood", "wood", Vec(0.1, 0.08, 0.1), o.x() + 0.35, o.z());
  tool_on(s, l, tool, wood, [&] { s.oscillate({l.left, tool}, Vec(0.06, 0, 0), 14, 4); });
  tool_tokens(t, "To");
  return "Saw";
}

std::string cut(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  const int knife = s.object("knife", "knife", Vec(0.07, 0.15, 0.2), o.x(), o.z(), 5);
  const int bread = s.object("bread", "bread", Vec(0.16, 0.16, 0.08), o.x() + 0.35, o.z(), 5);
  tool_on(s, l, knife, bread, [&] {
    s.move({l.left, knife}, Vec(0, -0.09, 0));
    s.oscillate({l.left, knife}, Vec(0, 0.04, 0), 10, 6);
    s.move({l.left, knife}, Vec(0, 0.09, 0));
  });
  tool_tokens(t, "Cr");
  return "Cut";
}

std::string screw(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  const int driver = s.object("screwdriver", "screwdriver", Vec(0.03, 0.16, 0.03), o.x(), o.z());
  const int disk =
      s.object("hard_disk", "hard_disk", Vec(0.16, 0.14, 0.16), o.x() + 0.35, o.z());
  if (l.right >= 0) {
    s[l.right].center = s[disk].center + Vec(0.35, 0.3, 0.0);
    s.side_grasp(l.right, disk, +1);
  }
  tool_on(s, l, driver, disk, [&] {
    s.move({l.left, driver}, Vec(0, -0.08, 0));
    s.oscillate({l.left, driver}, Vec(0, 0.04, 0), 10, 6);
    s.move({l.left, driver}, Vec(0, 0.08, 0));
  });
  if (l.right >= 0) s.release_side(l.right, +1);
  tool_tokens(t, "Pwi");
  return "Screw";
}

std::string hammer(Stage& s, Layout& l, Tokens& t, std::mt19937_64&) {
  l.left = add_left(s, l);
  const Point3 o = l.origin;
  const int tool = s.object("hammer", "hammer", Vec(0.04, 0.1, 0.04), o.x(), o.z());
  const int nail = s.object("nail", "nail", Vec(0.02, 0.06, 0.02), o.x() + 0.35, o.z());
  tool_on(s, l, tool, nail, [&] {
    s.move({l.left, tool}, Vec(0, 0.1, 0), 2 * kSpeed);
    s.move({l.left, tool}, Vec(0, -0.1, 0), 2 * kSpeed);
    s.hold(4);
  });
  pick(t, "To");
  t.me("O1", "T", "O2", "To", "Ground");
  t.me("O1", "U", "O2", "Ab", "Ground");
  t.me("O1", "T", "O2", "To", "Ground");
  t.me("O1", "U", "O2", "Ab", "Ground");
  t.me("O1", "Mt", "G", "Ab", "Air");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ab", "Ground");
  return "Hammer";
}

const std::vector<std::pair<std::string, Script>>& scripts() {
  static const std::vector<std::pair<std::string, Script>> table = {
      {"Idle", idle},   {"Approach", approach}, {"Retreat", retreat}, {"Lift", lift},
      {"Place", place}, {"Hold", hold},         {"Stir", stir},       {"Pour", pour},
      {"Cut", cut},     {"Drink", drink},       {"Wipe", wipe},       {"Hammer", hammer},
      {"Saw", saw},     {"Screw", screw}};
  return table;
}

// Right-hand companions: Retreat on the screwing target, Place of a cup
// next to any other action.
void companion(Stage& s, Layout& l, Tokens& t, const std::string& main) {
  if (main == "Screw") {
    t.h("T", "O1", "ArT", "Ground");
    t.h("U", "O1", "Ar", "Ground");
    return;
  }
  const int cup = l.right_cup;
  s.go({l.right}, s[cup].center + Vec(0.3, 0.35, 0.1));
  s.top_grasp(l.right, cup);
  const std::vector<int> g{l.right, cup};
  s.move(g, Vec(0, 0.15, 0));
  s.move(g, Vec(0, 0, 0.2));
  s.move(g, Vec(0, -0.15, 0));
  s.settle();
  s.release_up(l.right);
  t.h("T", "O1", "To", "Ground");
  t.me("O1", "U", "G", "Ab", "Ground");
  t.me("O1", "Mt", "G", "Ab", "Air");
  t.me("O1", "T", "G", "To", "Ground");
  t.h("U", "O1", "Ab", "Ground");
}

PointCloud sample(const Body& b, double noise, std::mt19937_64& rng) {
  PointCloud out;
  out.reserve(b.unit.size());
  const Vec lo = b.center - b.half;
  const Vec size = 2 * b.half;
  std::uniform_real_distribution<double> jitter(-noise, noise);
  for (const auto& u : b.unit) {
    Point3 p = lo + u.cwiseProduct(size);
    if (noise > 0) p += Vec(jitter(rng), jitter(rng), jitter(rng));
    out.push_back(p);
  }
  return out;
}

Aabb ground_box() { return {Point3(-1.5, -0.05, -1.5), Point3(1.5, 0.0, 1.5)}; }

SceneTrace render(const Stage& stage, double noise, std::mt19937_64& rng, const std::string& id,
                  bool with_ground) {
  SceneTrace trace;
  trace.id = id;
  trace.rate_hz = kRate;
  const auto& bodies = stage.bodies();
  for (int f = 0; f < stage.frame_count(); ++f) {
    Frame frame;
    frame.t = f / kRate;
    if (with_ground) {
      ObjectInstance g;
      g.id = "table";
      g.label = "table";
      g.role = Role::Ground;
      g.box = ground_box();
      const auto corners = g.box->corners();
      g.points.assign(corners.begin(), corners.end());
      frame.objects.push_back(std::move(g));
    }
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      Body b = bodies[i];
      b.center = stage.frames()[f][i];
      ObjectInstance inst;
      inst.id = b.id;
      inst.label = b.label;
      inst.role = b.role;
      inst.points = sample(b, noise, rng);
      frame.objects.push_back(std::move(inst));
    }
    trace.frames.push_back(std::move(frame));
  }
  return trace;
}

std::vector<RelationSample> sample_relations(const Stage& stage, const Tolerances& tol) {
  std::vector<RelationSample> out;
  std::mt19937_64 unused(0);
  const SceneTrace clean = render(stage, 0.0, unused, "", true);
  RelationConfig cfg;
  cfg.tol = tol;
  for (int f = 0; f < stage.frame_count(); f += 10) {
    const auto& objs = clean.frames[f].objects;
    std::vector<ObjectShape> shapes;
    for (const auto& o : objs) shapes.push_back(o.shape(tol));
    for (std::size_t i = 0; i < objs.size(); ++i) {
      for (std::size_t j = i + 1; j < objs.size(); ++j) {
        out.push_back({f, objs[i].id, objs[j].id, classify_ssr(shapes[i], shapes[j], cfg)});
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : scripts()) out.push_back(name);
    return out;
  }();
  return names;
}

EventConfig config_for_noise(double noise) {
  EventConfig cfg;
  cfg.rel.tol.touch = std::max(cfg.rel.tol.touch, 2.5 * noise);
  cfg.rel.tol.boundary = std::max(cfg.rel.tol.boundary, 2.5 * noise);
  cfg.rel.delta_move = std::max(cfg.rel.delta_move, 0.4 * noise);
  return cfg;
}

SyntheticTrace generate_synthetic_trace(const ScenarioSpec& spec) {
  const auto& table = scripts();
  auto it = std::find_if(table.begin(), table.end(),
                         [&](const auto& e) { return e.first == spec.scenario; });
  if (it == table.end()) throw UnknownScenario("unknown scenario '" + spec.scenario + "'");
  if (spec.noise < 0) throw std::invalid_argument("noise must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> spread(-0.3, 0.3);
  Stage stage(rng);
  Layout layout;
  layout.origin = Point3(spread(rng), 0.0, spread(rng));
  if (spec.companion) {
    layout.right = stage.add("hand_right", "hand", Role::HandRight, kHand,
                             layout.origin + Vec(0.35, 0.35, 0.5));
    if (spec.scenario != "Screw") {
      layout.right_cup = stage.object("cup_right", "cup", kCup, layout.origin.x(),
                                      layout.origin.z() + 0.4);
    }
  }
  for (int k = 0; k < spec.extra_objects; ++k) {
    stage.object("box_" + std::to_string(k + 1), "box", Vec(0.08, 0.08, 0.08),
                 layout.origin.x() - 0.8, layout.origin.z() - 0.6 + 0.2 * k);
  }

  SyntheticTrace out;
  Tokens left{"Hand_L", {}};
  Tokens right{"Hand_R", {}};
  out.action_names[0] = it->second(stage, layout, left, rng);
  out.action_names[1] = "Idle";
  if (spec.companion) {
    companion(stage, layout, right, out.action_names[0]);
    out.action_names[1] = out.action_names[0] == "Screw" ? "Retreat" : "Place";
  }
  stage.hold(std::max(4, spec.frames - stage.frame_count()));
  out.actions[0] = std::move(left.out);
  out.actions[1] = std::move(right.out);

  if (spec.points != 0 && spec.points < 8) throw std::invalid_argument("points must be 0 or >= 8");
  if (spec.points > 0) stage.top_up(spec.points);

  out.config = config_for_noise(spec.noise);
  std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  out.trace = render(stage, spec.noise, noise_rng,
                     spec.scenario + "-" + std::to_string(spec.seed), true);
  out.relations = sample_relations(stage, config_for_noise(0.0).rel.tol);
  return out;
}

SyntheticTrace generate_relation_scene(int index, std::uint64_t seed) {
  static constexpr std::array<SsrLabel, 14> kOrder = {
      SsrLabel::Ab, SsrLabel::Be,  SsrLabel::To, SsrLabel::Bo, SsrLabel::Ar,
      SsrLabel::ArT, SsrLabel::In, SsrLabel::Su, SsrLabel::Cr, SsrLabel::Wi,
      SsrLabel::Pwi, SsrLabel::Co, SsrLabel::Pco, SsrLabel::NoRelation};
  const SsrLabel label = kOrder[static_cast<std::size_t>(index) % kOrder.size()];
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(index));
  auto r = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  // Built for the primary label; duals swap the two boxes.
  SsrLabel primary = label;
  bool swap = false;
  switch (label) {
    case SsrLabel::Be: primary = SsrLabel::Ab; swap = true; break;
    case SsrLabel::Bo: primary = SsrLabel::To; swap = true; break;
    case SsrLabel::Su: primary = SsrLabel::In; swap = true; break;
    case SsrLabel::Co: primary = SsrLabel::Wi; swap = true; break;
    case SsrLabel::Pco: primary = SsrLabel::Pwi; swap = true; break;
    default: break;
  }

  Vec hb(r(0.05, 0.15), r(0.05, 0.15), r(0.05, 0.15));
  Vec ha(r(0.03, 0.1), r(0.03, 0.1), r(0.03, 0.1));
  Point3 ca = Point3::Zero();
  switch (primary) {
    case SsrLabel::Ab:
    case SsrLabel::To: {
      const double gap = primary == SsrLabel::Ab ? r(0.02, 0.1) : 0.0;
      ca = Point3(r(-hb.x(), hb.x()) * 0.9, hb.y() + gap + ha.y(), r(-hb.z(), hb.z()) * 0.9);
      break;
    }
    case SsrLabel::Ar:
    case SsrLabel::ArT:
    case SsrLabel::NoRelation: {
      const double gap = primary == SsrLabel::Ar    ? r(0.02, 0.12)
                         : primary == SsrLabel::ArT ? 0.0
                                                    : r(0.2, 0.5);
      ca = Point3(hb.x() + gap + ha.x(), r(-hb.y(), hb.y()) * 0.5, r(-hb.z(), hb.z()) * 0.5);
      break;
    }
    case SsrLabel::Wi:
    case SsrLabel::In: {
      hb = Vec(r(0.1, 0.15), r(0.1, 0.15), r(0.1, 0.15));
      for (int i = 0; i < 3; ++i) ha[i] = r(0.02, hb[i] - 0.04);
      for (int i = 0; i < 3; ++i) ca[i] = r(-1, 1) * (hb[i] - ha[i] - 0.02);
      if (primary == SsrLabel::In) ca.x() = -hb.x() + ha.x();
      break;
    }
    case SsrLabel::Cr: {
      for (int i = 0; i < 3; ++i) {
        ha[i] = hb[i] * r(0.8, 1.2);
        ca[i] = hb[i] * r(0.4, 0.6);
      }
      break;
    }
    case SsrLabel::Pwi: {
      hb = Vec(r(0.1, 0.15), r(0.1, 0.15), r(0.1, 0.15));
      ha = Vec(r(0.01, 0.02), r(0.05, 0.1), r(0.01, 0.02));
      const double depth = r(0.02, 0.05);
      ca = Point3(r(-0.005, 0.005), hb.y() - depth + ha.y(), r(-0.005, 0.005));
      break;
    }
    default: break;
  }

  Stage stage(rng);
  const int a = stage.add(swap ? "b" : "a", "block", Role::Object, 2 * ha, ca);
  stage.add(swap ? "a" : "b", "block", Role::Object, 2 * hb, Point3::Zero());
  const Vec drift(0.0, 0.0, r(-0.004, 0.004) / 29.0);
  stage.snap();
  for (int f = 1; f < 30; ++f) {
    stage[a].center += drift;
    stage.snap();
  }

  SyntheticTrace out;
  std::mt19937_64 unused(0);
  out.trace = render(stage, 0.0, unused, "relation-" + std::to_string(index), false);
  for (int f = 0; f < 30; f += 10) out.relations.push_back({f, "a", "b", label});
  out.action_names = {"Idle", "Idle"};
  return out;
}

std::string aa_tokens(const AtomicAction& aa, const HandStream& stream,
                      const std::string& ground_id) {
  std::string out = aa.subject.side == Side::Left ? "Hand_L" : "Hand_R";
  if (aa.subject.carried) out += " " + stream.object_token(*aa.subject.carried, ground_id);
  out += " ";
  out += to_string(aa.primitive);
  out += " " + stream.object_token(aa.object, ground_id);
  out += " ";
  out += to_string(aa.relation);
  out += " " + stream.place_token(aa.place, ground_id);
  return out;
}

std::vector<std::string> collapsed_tokens(const HandStream& stream, const std::string& ground_id) {
  std::vector<std::string> out;
  for (const auto& aa : stream.actions) {
    std::string tok = aa_tokens(aa, stream, ground_id);
    const bool motion = aa.primitive == Primitive::Mt || aa.primitive == Primitive::Fmt;
    if (motion && !out.empty() && out.back() == tok) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace manipsem
