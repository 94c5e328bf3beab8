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

#include "manipsem/events.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace manipsem {

namespace {

constexpr std::array<std::string_view, 4> kPrimitiveNames = {"T", "U", "Mt", "Fmt"};

struct EdgeRun {
  int present = 0;
  int absent = 0;
};

struct Change {
  Edge edge;
  Primitive primitive;
};

// Centroids and debounced edges of every frame seen so far.
struct History {
  std::vector<std::unordered_map<std::string, Point3>> centroids;
  std::vector<TouchGraph> stable;
  std::vector<TouchGraph> raw;

  std::optional<std::vector<Point3>> track(const std::string& id, int from, int to) const {
    std::vector<Point3> out;
    for (int f = from; f <= to; ++f) {
      auto it = centroids[f].find(id);
      if (it == centroids[f].end()) return std::nullopt;
      out.push_back(it->second);
    }
    return out;
  }

  bool touching_throughout(const Edge& e, int from, int to) const {
    for (int f = from; f <= to; ++f) {
      if (!stable[f].count(e)) return false;
    }
    return true;
  }
};

class Extractor {
 public:
  Extractor(const SceneTrace& trace, const EventConfig& cfg) : trace_(trace), cfg_(cfg) {
    out_.frame_count = static_cast<int>(trace.frames.size());
    out_.hands[0].side = Side::Left;
    out_.hands[1].side = Side::Right;
    for (auto& h : out_.hands) h.contacts.assign(trace.frames.size(), 0);
  }

  Extraction run() {
    for (int f = 0; f < out_.frame_count; ++f) step(f);
    return std::move(out_);
  }

 private:
  void load_frame(int f) {
    const Frame& frame = trace_.frames[f];
    ids_.clear();
    shapes_.clear();
    hand_side_.clear();
    std::unordered_map<std::string, Point3> centroids;
    for (const auto& o : frame.objects) {
      ids_.push_back(o.id);
      shapes_.emplace(o.id, o.shape(cfg_.rel.tol));
      centroids.emplace(o.id, shapes_.at(o.id).centroid());
      out_.labels.emplace(o.id, o.label);
      if (o.role == Role::Ground) out_.ground_id = o.id;
      if (o.role == Role::HandLeft || o.role == Role::HandRight) {
        const Side side = o.role == Role::HandLeft ? Side::Left : Side::Right;
        hand_side_.emplace(o.id, side);
        hand_ids_.emplace(o.id, side);
        auto& stream = out_.hands[static_cast<int>(side)];
        if (stream.hand_id.empty()) stream.hand_id = o.id;
      }
    }
    hist_.centroids.push_back(std::move(centroids));
    shape_hist_.push_back(shapes_);
    if (static_cast<int>(shape_hist_.size()) > cfg_.rel.window) shape_hist_.pop_front();
  }

  TouchGraph raw_graph() const {
    std::vector<ObjectShape> shapes;
    for (const auto& id : ids_) shapes.push_back(shapes_.at(id));
    return touch_graph(ids_, shapes, cfg_.rel.tol);
  }

  std::vector<Change> debounce(const TouchGraph& raw, int f) {
    std::vector<Change> changes;
    if (f == 0) {
      stable_ = raw;
      for (const auto& e : raw) runs_[e].present = 1;
      return changes;
    }
    TouchGraph all = stable_;
    all.insert(raw.begin(), raw.end());
    for (const auto& [e, run] : runs_) all.insert(e);
    for (const auto& e : all) {
      EdgeRun& run = runs_[e];
      if (raw.count(e)) {
        ++run.present;
        run.absent = 0;
      } else {
        ++run.absent;
        run.present = 0;
      }
      const bool held = stable_.count(e) > 0;
      if (!held && run.present >= cfg_.debounce) {
        stable_.insert(e);
        changes.push_back({e, Primitive::T});
      } else if (held && run.absent >= cfg_.debounce) {
        stable_.erase(e);
        changes.push_back({e, Primitive::U});
      }
      if (!held && run.present == 0 && run.absent >= cfg_.debounce) runs_.erase(e);
    }
    return changes;
  }

  bool is_hand(const std::string& id) const { return hand_ids_.count(id) > 0; }

  SsrLabel ssr(const std::string& a, const std::string& b) const {
    auto ia = shapes_.find(a);
    auto ib = shapes_.find(b);
    if (ia == shapes_.end() || ib == shapes_.end()) return SsrLabel::NoRelation;
    return classify_ssr(ia->second, ib->second, cfg_.rel);
  }

  // Relation at an earlier frame still inside the DSR window.
  SsrLabel ssr_at(const std::string& a, const std::string& b, int f) const {
    const int back = action_frame_ - f;
    if (back < 0 || back >= static_cast<int>(shape_hist_.size())) return SsrLabel::NoRelation;
    const auto& shapes = shape_hist_[shape_hist_.size() - 1 - back];
    auto ia = shapes.find(a);
    auto ib = shapes.find(b);
    if (ia == shapes.end() || ib == shapes.end()) return SsrLabel::NoRelation;
    return classify_ssr(ia->second, ib->second, cfg_.rel);
  }

  // Whatever y rests on, skipping the chain of hand s.
  Place place_of(const std::string& y, int s) const {
    std::optional<std::string> ground_support;
    for (const auto& [a, b] : stable_) {
      if (a != y && b != y) continue;
      const std::string& z = a == y ? b : a;
      if (is_hand(z) || carried_[s].count(z)) continue;
      const SsrLabel rel = ssr(y, z);
      if (rel != SsrLabel::To && rel != SsrLabel::Wi && rel != SsrLabel::Pwi &&
          rel != SsrLabel::In) {
        continue;
      }
      if (z == out_.ground_id) {
        ground_support = z;
        continue;
      }
      return {PlaceKind::Object, z};
    }
    if (ground_support || y == out_.ground_id) return {PlaceKind::Ground, out_.ground_id};
    return {PlaceKind::Air, ""};
  }

  void assign_role(HandStream& stream, const std::string& id) {
    if (id.empty() || id == out_.ground_id || stream.roles.count(id)) return;
    int next = static_cast<int>(stream.roles.size()) + 1;
    if (next > 3) {
      stream.warnings.push_back("more than three objects change relations; '" + id +
                                "' reuses O3");
      next = 3;
    }
    stream.roles.emplace(id, next);
  }

  void emit(int s, AtomicAction action) {
    HandStream& stream = out_.hands[s];
    if (action.subject.carried) assign_role(stream, *action.subject.carried);
    assign_role(stream, action.object);
    if (action.place.kind == PlaceKind::Object) assign_role(stream, action.place.id);
    stream.actions.push_back(std::move(action));
    last_event_[s] = action_frame_;
  }

  bool moves_with(const std::string& hand, const std::string& x, int from, int to,
                  const RelationConfig& rel) const {
    const auto th = hist_.track(hand, from, to);
    const auto tx = hist_.track(x, from, to);
    if (!th || !tx) return false;
    const auto flags = std::make_unique<bool[]>(th->size());
    std::fill_n(flags.get(), th->size(), true);
    return classify_dsr(*th, *tx, std::span<const bool>(flags.get(), th->size()), rel) ==
           DsrLabel::Mt;
  }

  // Carried objects: touched by the hand and moving with it.
  void update_grasps(int f) {
    const int k = cfg_.debounce;
    const int w = cfg_.rel.window;
    if (f < k) return;
    RelationConfig fast = cfg_.rel;
    fast.delta_move = std::max(fast.delta_move, cfg_.grasp_speed);
    for (const auto& [hand, side] : hand_side_) {
      const int s = static_cast<int>(side);
      for (const auto& e : stable_) {
        if (e.first != hand && e.second != hand) continue;
        const std::string& x = e.first == hand ? e.second : e.first;
        if (is_hand(x) || x == out_.ground_id || carried_[s].count(x)) continue;
        if (moves_with(hand, x, f - k, f, fast) ||
            (f >= w - 1 && hist_.touching_throughout(e, f - w + 1, f - 1) &&
             moves_with(hand, x, f - w + 1, f, cfg_.rel))) {
          carried_[s].insert(x);
        }
      }
    }
  }

  void attribute(const Change& c, int f) {
    const auto& [a, b] = c.edge;
    const bool ha = is_hand(a), hb = is_hand(b);
    if (ha && hb) return;
    if (ha || hb) {
      const std::string& hand = ha ? a : b;
      const std::string& y = ha ? b : a;
      const int s = static_cast<int>(hand_ids_.at(hand));
      emit(s, {Subject{static_cast<Side>(s), std::nullopt}, c.primitive, y, ssr(hand, y),
               place_of(y, s), f, f});
      if (c.primitive == Primitive::U) carried_[s].erase(y);
      return;
    }
    for (int s = 0; s < 2; ++s) {
      for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        if (!carried_[s].count(x) || carried_[s].count(y)) continue;
        emit(s, {Subject{static_cast<Side>(s), x}, c.primitive, y, ssr(x, y), place_of(y, s), f,
                 f});
      }
    }
  }

  DsrLabel dsr(const std::string& a, const std::string& b, int from, int to) const {
    const auto ta = hist_.track(a, from, to);
    const auto tb = hist_.track(b, from, to);
    if (!ta || !tb) return DsrLabel::S;
    const auto flags = std::make_unique<bool[]>(ta->size());
    const Edge e = make_edge(a, b);
    for (int f = from; f <= to; ++f) flags[f - from] = hist_.stable[f].count(e) > 0;
    return classify_dsr(*ta, *tb, std::span<const bool>(flags.get(), ta->size()), cfg_.rel);
  }

  std::vector<std::string> partners(const std::string& x, int s, int from, int to) const {
    std::vector<std::string> out;
    bool ground = false;
    for (const auto& [a, b] : stable_) {
      if (a != x && b != x) continue;
      const std::string& y = a == x ? b : a;
      if (is_hand(y) || carried_[s].count(y)) continue;
      if (!hist_.touching_throughout(make_edge(x, y), from, to)) continue;
      if (y == out_.ground_id) {
        ground = true;
      } else {
        out.push_back(y);
      }
    }
    if (ground) out.push_back(out_.ground_id);
    return out;
  }

  // No contact of the hand chain is waiting out the debounce.
  bool settled(int s, int from, int to) const {
    const std::string& hand = out_.hands[s].hand_id;
    auto in_chain = [&](const std::string& id) { return id == hand || carried_[s].count(id) > 0; };
    for (int f = from; f <= to; ++f) {
      TouchGraph raw_chain, stable_chain;
      for (const auto& e : hist_.raw[f]) {
        if (in_chain(e.first) || in_chain(e.second)) raw_chain.insert(e);
      }
      for (const auto& e : hist_.stable[f]) {
        if (in_chain(e.first) || in_chain(e.second)) stable_chain.insert(e);
      }
      if (raw_chain != stable_chain) return false;
    }
    return true;
  }

  std::optional<AtomicAction> motion(int s, int f) const {
    const int w = cfg_.rel.window;
    const int from = f - w + 1;
    const Side side = static_cast<Side>(s);
    const std::string& hand = out_.hands[s].hand_id;
    if (hand.empty() || !shapes_.count(hand)) return std::nullopt;
    if (!settled(s, from, f)) return std::nullopt;

    for (const auto& x : carried_[s]) {
      bool touches_other = false;
      for (const auto& y : partners(x, s, from, f)) {
        touches_other = true;
        const DsrLabel d = dsr(x, y, from, f);
        if ((d == DsrLabel::Mt || d == DsrLabel::Fmt) && ssr_at(x, y, from) == ssr(x, y)) {
          return AtomicAction{Subject{side, x},
                              d == DsrLabel::Mt ? Primitive::Mt : Primitive::Fmt,
                              y,
                              ssr(x, y),
                              place_of(y, s),
                              from,
                              f};
        }
      }
      if (touches_other) continue;
      bool isolated = true;
      for (const auto& [a, b] : stable_) {
        if (a != x && b != x) continue;
        if (!is_hand(a == x ? b : a)) isolated = false;
      }
      if (isolated && dsr(hand, x, from, f) == DsrLabel::Mt) {
        const SsrLabel rel =
            out_.ground_id.empty() ? SsrLabel::NoRelation : ssr(x, out_.ground_id);
        return AtomicAction{Subject{side, x}, Primitive::Mt, out_.ground_id, rel,
                            Place{PlaceKind::Air, ""}, from, f};
      }
    }
    if (!carried_[s].empty()) return std::nullopt;
    for (const auto& y : partners(hand, s, from, f)) {
      if (dsr(hand, y, from, f) == DsrLabel::Fmt && ssr_at(hand, y, from) == ssr(hand, y)) {
        return AtomicAction{Subject{side, std::nullopt}, Primitive::Fmt, y, ssr(hand, y),
                            place_of(y, s), from, f};
      }
    }
    return std::nullopt;
  }

  void step(int f) {
    load_frame(f);
    const TouchGraph raw = raw_graph();
    update_grasps(f);
    const auto changes = debounce(raw, f);
    hist_.stable.push_back(stable_);
    hist_.raw.push_back(raw);
    action_frame_ = f;
    for (const auto& c : changes) attribute(c, f);

    for (int s = 0; s < 2; ++s) {
      if (f - last_event_[s] >= cfg_.rel.window) {
        if (auto m = motion(s, f)) emit(s, std::move(*m));
      }
      const std::string& hand = out_.hands[s].hand_id;
      int count = 0;
      for (const auto& [a, b] : stable_) {
        if ((a == hand || b == hand) && !hand.empty()) ++count;
      }
      out_.hands[s].contacts[f] = count;
    }
  }

  const SceneTrace& trace_;
  const EventConfig& cfg_;
  Extraction out_;
  History hist_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, ObjectShape> shapes_;
  std::deque<std::unordered_map<std::string, ObjectShape>> shape_hist_;  // last window frames
  std::unordered_map<std::string, Side> hand_side_;  // hands in this frame
  std::map<std::string, Side> hand_ids_;             // every hand seen
  TouchGraph stable_;
  std::map<Edge, EdgeRun> runs_;
  std::array<std::set<std::string>, 2> carried_;
  std::array<int, 2> last_event_{-1, -1};
  int action_frame_ = 0;
};

}  // namespace

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }

std::string_view to_string(Primitive primitive) {
  return kPrimitiveNames[static_cast<int>(primitive)];
}

std::optional<Primitive> parse_primitive(std::string_view text) {
  for (std::size_t i = 0; i < kPrimitiveNames.size(); ++i) {
    if (kPrimitiveNames[i] == text) return static_cast<Primitive>(i);
  }
  return std::nullopt;
}

void EventConfig::validate() const {
  rel.validate();
  if (debounce < 1) throw std::invalid_argument("debounce must be >= 1");
  if (!(grasp_speed > 0.0)) throw std::invalid_argument("grasp_speed must be positive");
}

Edge make_edge(const std::string& a, const std::string& b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

TouchGraph touch_graph(const std::vector<std::string>& ids, const std::vector<ObjectShape>& shapes,
                       const Tolerances& tol) {
  TouchGraph g;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (aabb_distance(shapes[i].aabb, shapes[j].aabb) > tol.touch) continue;
      if (in_contact(shapes[i], shapes[j], tol)) g.insert(make_edge(ids[i], ids[j]));
    }
  }
  return g;
}

TouchGraph touch_graph(const Frame& frame, const EventConfig& cfg) {
  std::vector<std::string> ids;
  std::vector<ObjectShape> shapes;
  for (const auto& o : frame.objects) {
    ids.push_back(o.id);
    shapes.push_back(o.shape(cfg.rel.tol));
  }
  return touch_graph(ids, shapes, cfg.rel.tol);
}

std::string HandStream::object_token(const std::string& id, const std::string& ground_id) const {
  if (id == ground_id) return "G";
  auto it = roles.find(id);
  if (it == roles.end()) return id;
  return "O" + std::to_string(it->second);
}

std::string HandStream::place_token(const Place& place, const std::string& ground_id) const {
  switch (place.kind) {
    case PlaceKind::Air: return "Air";
    case PlaceKind::Ground: return "Ground";
    case PlaceKind::Object: break;
  }
  const std::string token = object_token(place.id, ground_id);
  return token == "G" ? "Ground" : token;
}

Extraction extract_atomic_actions(const SceneTrace& trace, const EventConfig& cfg) {
  cfg.validate();
  return Extractor(trace, cfg).run();
}

Segmentation segment_actions(const HandStream& stream, int frame_count) {
  Segmentation out;
  const int n = std::min<int>(frame_count, static_cast<int>(stream.contacts.size()));
  int f = 0;
  while (f < n) {
    if (stream.contacts[f] == 0) {
      const int idle_start = f;
      while (f < n && stream.contacts[f] == 0) ++f;
      out.idle.emplace_back(idle_start, f - 1);
      continue;
    }
    Snippet snip;
    snip.side = stream.side;
    snip.start = f;
    while (f < n && stream.contacts[f] > 0) ++f;
    // The releasing U lands on the first free frame.
    snip.end = f < n ? f : n - 1;
    if (f < n) ++f;
    out.snippets.push_back(std::move(snip));
  }
  for (auto& snip : out.snippets) {
    for (const auto& a : stream.actions) {
      if (a.end >= snip.start && a.end <= snip.end) snip.actions.push_back(a);
    }
  }
  return out;
}

}  // namespace manipsem
