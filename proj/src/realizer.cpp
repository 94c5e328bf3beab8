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

#include "manipsem/realizer.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace manipsem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Collapse spaces, capitalize, end with a full stop.
std::string finish(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (out.empty()) return out;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  if (out.back() != '.' && out.back() != '!' && out.back() != '?') out += '.';
  return out;
}

// Replaces every "{name}" through `slot`.
std::string fill(const std::string& pattern, const std::function<std::string(const std::string&)>& slot) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] != '{') {
      out += pattern[i++];
      continue;
    }
    const auto close = pattern.find('}', i);
    if (close == std::string::npos) throw MissingTemplate("unclosed slot in '" + pattern + "'");
    out += slot(pattern.substr(i + 1, close - i - 1));
    i = close + 1;
  }
  return out;
}

std::string with_article(const std::string& noun) {
  if (noun.empty()) return noun;
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(noun[0])));
  const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  return (vowel ? "an " : "a ") + noun;
}

// Verb forms "singular | plural".
std::string verb_form(const std::string& forms, bool plural) {
  const auto bar = forms.find('|');
  if (bar == std::string::npos) return trim(forms);
  return trim(plural ? forms.substr(bar + 1) : forms.substr(0, bar));
}

std::string hand_subject(Side side, const TemplateSet& ts) {
  return ts.get(side == Side::Left ? "subject.left" : "subject.right");
}

class Phrases {
 public:
  Phrases(const Naming& naming, const TemplateSet& ts, Mentions* mentions)
      : naming_(naming), ts_(ts), mentions_(mentions) {}

  std::string np(const std::string& id) {
    const std::string noun = naming_.noun(id);
    if (id == naming_.ground_id) return "the " + noun;
    if (mentions_ && mentions_->count(id)) return "the " + noun;
    if (mentions_) mentions_->insert(id);
    return with_article(noun);
  }

  std::string place(const Place& p) {
    switch (p.kind) {
      case PlaceKind::Air:
        return ts_.get("place.Air");
      case PlaceKind::Ground:
        return fill(ts_.get("place.Ground"), [&](const std::string& s) { return slot_np(s, p.id); });
      case PlaceKind::Object:
        return fill(ts_.get("place.Object"), [&](const std::string& s) { return slot_np(s, p.id); });
    }
    return {};
  }

  // Grammar token to phrase: "Ground", "Air", "G" or O1..O3.
  std::string token_np(const std::string& token) {
    if (token == "Air") return "the air";
    return np(naming_.id_of_token(token));
  }

  std::string token_place(const std::string& token) {
    if (token == "Air") return place({PlaceKind::Air, {}});
    if (token == "Ground" || token == "G") return place({PlaceKind::Ground, naming_.ground_id});
    return place({PlaceKind::Object, naming_.id_of_token(token)});
  }

 private:
  std::string slot_np(const std::string& slot, const std::string& id) {
    if (slot != "np") throw MissingTemplate("unknown place slot {" + slot + "}");
    return np(id);
  }

  const Naming& naming_;
  const TemplateSet& ts_;
  Mentions* mentions_;
};

std::string realize_binding(const std::string& pattern, Side side, const Bindings& bindings,
                            const Naming& naming, const TemplateSet& ts, Mentions& mentions) {
  Phrases ph(naming, ts, &mentions);
  auto lookup = [&](const std::string& var) -> const std::string& {
    auto it = bindings.find(var);
    if (it == bindings.end()) throw MissingTemplate("template uses unbound " + var);
    return it->second;
  };
  return finish(fill(pattern, [&](const std::string& slot) -> std::string {
    if (slot == "subject") return hand_subject(side, ts);
    if (slot == "ground") return ph.np(naming.ground_id);
    if (slot.starts_with("at:?")) return ph.token_place(lookup(slot.substr(3)));
    if (slot.starts_with("?")) return ph.token_np(lookup(slot));
    throw MissingTemplate("unknown slot {" + slot + "}");
  }));
}

// Sentence units of one level: [first, last) AA ranges and how to say them.
struct Unit {
  std::size_t first;
  std::size_t last;
  const RecognizedAction* action;  // null: a single atomic action
  int group;                       // -1: the whole action
};

std::vector<Unit> units(const std::vector<RecognizedAction>& recognized, int k) {
  std::vector<Unit> out;
  for (const auto& r : recognized) {
    if (r.unknown() || k == kAtomicLevel) {
      for (std::size_t i = r.first; i < r.last; ++i) out.push_back({i, i + 1, nullptr, -1});
    } else if (k == kGroupLevel) {
      std::size_t i = r.first;
      while (i < r.last) {
        const int g = r.step_groups[i - r.first];
        std::size_t j = i;
        while (j < r.last && r.step_groups[j - r.first] == g) ++j;
        out.push_back({i, j, &r, g});
        i = j;
      }
    } else {
      out.push_back({r.first, r.last, &r, -1});
    }
  }
  return out;
}

std::vector<std::size_t> boundaries(const std::vector<Unit>& us) {
  std::vector<std::size_t> b;
  for (const auto& u : us) b.push_back(u.first);
  return b;
}

}  // namespace

// ---- TemplateSet --------------------------------------------------------

const TemplateSet& TemplateSet::shipped() {
  static const TemplateSet ts = [] {
    std::istringstream in(default_templates_text());
    return TemplateSet::parse(in);
  }();
  return ts;
}

TemplateSet TemplateSet::parse(std::istream& in) {
  TemplateSet ts;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw TemplateParseError(n, "expected 'key = text'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty() || key.find(' ') != std::string::npos) {
      throw TemplateParseError(n, "bad key '" + key + "'");
    }
    if (!ts.entries_.emplace(key, trim(t.substr(eq + 1))).second) {
      throw TemplateParseError(n, "key '" + key + "' given twice");
    }
  }
  return ts;
}

const std::string& TemplateSet::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw MissingTemplate("no template '" + key + "'");
  return it->second;
}

void TemplateSet::validate(const MappingLibrary& lib) const {
  for (const char* k : {"subject.left", "subject.right", "subject.merged", "idle", "place.Ground",
                        "place.Air", "place.Object"}) {
    get(k);
  }
  for (Primitive p : {Primitive::T, Primitive::U, Primitive::Mt, Primitive::Fmt}) {
    const std::string name(to_string(p));
    get("verb." + name);
    get("continue." + name);
    get("atomic." + name);
    get("atomic." + name + ".ground");
  }
  for (int i = 0; i <= static_cast<int>(SsrLabel::NoRelation); ++i) {
    const std::string name(to_string(static_cast<SsrLabel>(i)));
    get("relation." + name);
    get("ground." + name);
  }
  for (const auto& e : lib.entries()) {
    get("action." + e.name);
    for (const auto& g : e.groups) get("group." + e.name + "." + g);
  }
}

// ---- Naming -------------------------------------------------------------

Naming Naming::of(const Extraction& ex, Side side) {
  return Naming{ex.labels, ex.ground_id, ex.hand(side).roles};
}

std::string Naming::noun(const std::string& id) const {
  auto it = labels.find(id);
  std::string out = it == labels.end() || it->second.empty() ? id : it->second;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string Naming::id_of_token(const std::string& token) const {
  if (token == "G" || token == "Ground") return ground_id;
  if (token.size() == 2 && token[0] == 'O') {
    for (const auto& [id, role] : roles) {
      if (role == token[1] - '0') return id;
    }
  }
  return token;  // unassigned ids pass through
}

// ---- sentences ----------------------------------------------------------

std::string realize_atomic(const AtomicAction& aa, const AtomicAction* previous,
                           const Naming& naming, const TemplateSet& ts, Mentions* mentions) {
  const std::string prim(to_string(aa.primitive));
  const bool merged = aa.subject.is_me();
  const bool ground = aa.object == naming.ground_id;
  const bool again = previous && previous->subject == aa.subject &&
                     previous->primitive == aa.primitive && previous->object == aa.object &&
                     previous->relation == aa.relation;
  const std::string& pattern = ts.get("atomic." + prim + (ground ? ".ground" : ""));
  Phrases ph(naming, ts, mentions);
  std::string object_np;
  bool object_done = false;
  auto object = [&] {
    if (!object_done) {
      object_np = ph.np(aa.object);
      object_done = true;
    }
    return object_np;
  };
  return finish(fill(pattern, [&](const std::string& slot) -> std::string {
    if (slot == "subject") {
      return merged ? ts.get("subject.merged") : hand_subject(aa.subject.side, ts);
    }
    if (slot == "verb") return verb_form(ts.get((again ? "continue." : "verb.") + prim), merged);
    if (slot == "relation") {
      return ts.get((ground ? "ground." : "relation.") + std::string(to_string(aa.relation)));
    }
    if (slot == "object") return object();
    if (slot == "place") {
      // The ground as object already names where it happens.
      if (ground) return {};
      object();
      return ph.place(aa.place);
    }
    throw MissingTemplate("unknown slot {" + slot + "}");
  }));
}

Description realize_level(const Snippet& snippet, const std::vector<RecognizedAction>& recognized,
                          int k, const Naming& naming, const TemplateSet& ts) {
  if (k < 1 || k > kMaxLevel) throw std::invalid_argument("level must be in 1..14");
  Description d{snippet.side, k, {}};
  if (snippet.actions.empty()) {
    d.sentences.push_back({finish(ts.get("idle")), snippet.start, snippet.end});
    return d;
  }
  const auto us = units(recognized, std::min(k, kActionLevel));
  Mentions mentions;
  for (std::size_t u = 0; u < us.size(); ++u) {
    const Unit& unit = us[u];
    Sentence s;
    if (!unit.action) {
      const AtomicAction& aa = snippet.actions.at(unit.first);
      const AtomicAction* prev = unit.first > 0 ? &snippet.actions[unit.first - 1] : nullptr;
      s.text = realize_atomic(aa, prev, naming, ts, &mentions);
    } else {
      const RecognizedAction& r = *unit.action;
      std::string key = "action." + r.name;
      if (unit.group >= 0) {
        const std::string group = unit.group < static_cast<int>(r.groups.size())
                                      ? r.groups[unit.group]
                                      : std::to_string(unit.group);
        key = "group." + r.name + "." + group;
      }
      s.text = realize_binding(ts.get(key), snippet.side, r.bindings, naming, ts, mentions);
    }
    // Spans start at the first AA of the unit and run to the next unit.
    const int begin = u == 0 ? snippet.start
                             : std::clamp(snippet.actions[unit.first].start,
                                          d.sentences.back().start, snippet.end);
    s.start = begin;
    s.end = snippet.end;
    if (!d.sentences.empty()) d.sentences.back().end = std::max(d.sentences.back().start, begin - 1);
    d.sentences.push_back(std::move(s));
  }
  return d;
}

std::set<int> available_levels(const std::vector<RecognizedAction>& recognized) {
  std::set<int> out;
  std::vector<std::size_t> last;
  for (int k = kAtomicLevel; k <= kActionLevel; ++k) {
    const auto b = boundaries(units(recognized, k));
    if (b.empty()) continue;
    if (out.empty() || b != last) out.insert(k);
    last = b;
  }
  return out;
}

// ---- whole hand ---------------------------------------------------------

std::set<int> HandReport::levels() const {
  std::set<int> out;
  for (const auto& r : recognized) {
    const auto l = available_levels(r);
    out.insert(l.begin(), l.end());
  }
  if (out.empty()) out.insert(kAtomicLevel);
  return out;
}

HandReport analyze_hand(const Extraction& ex, Side side, const MappingLibrary& lib) {
  HandReport rep;
  rep.hand = side;
  const HandStream& stream = ex.hand(side);
  auto seg = segment_actions(stream, ex.frame_count);
  rep.idle = std::move(seg.idle);
  std::vector<RecognizedAction> all;
  for (auto& snip : seg.snippets) {
    std::vector<SymbolicAction> sym;
    for (const auto& aa : snip.actions) sym.push_back(to_symbolic(aa, stream, ex.ground_id));
    auto rec = recognize(sym, lib);
    all.insert(all.end(), rec.begin(), rec.end());
    rep.recognized.push_back(std::move(rec));
    rep.snippets.push_back(std::move(snip));
  }
  rep.dominant = dominant_action(all);
  return rep;
}

Description describe_hand(const HandReport& report, int k, const Naming& naming,
                          const TemplateSet& ts) {
  Description d{report.hand, k, {}};
  std::size_t s = 0;
  std::size_t i = 0;
  while (s < report.snippets.size() || i < report.idle.size()) {
    const bool take_idle =
        s == report.snippets.size() ||
        (i < report.idle.size() && report.idle[i].first < report.snippets[s].start);
    if (take_idle) {
      d.sentences.push_back({finish(ts.get("idle")), report.idle[i].first, report.idle[i].second});
      ++i;
      continue;
    }
    auto part = realize_level(report.snippets[s], report.recognized[s], k, naming, ts);
    for (auto& sentence : part.sentences) d.sentences.push_back(std::move(sentence));
    ++s;
  }
  return d;
}

}  // namespace manipsem
