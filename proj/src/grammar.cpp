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

#include "manipsem/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace manipsem {

const std::string& constraint_table_text();
std::vector<SymbolicAction> decompose_entry(const LibraryEntry& e, const Bindings& b, int repeats,
                                            const std::string& hand);

namespace {

const std::vector<std::string> kObjects = {"O1", "O2", "O3", "G"};
const std::vector<std::string> kPlaces = {"Ground", "Air", "O1", "O2", "O3"};
const std::vector<std::string> kPrimitives = {"T", "U", "Mt", "Fmt"};
const std::vector<std::string> kRelations = {"Ab", "Be", "To", "Bo", "Ar", "ArT", "Cr",
                                             "Wi", "Pwi", "Co", "Pco", "In", "Su"};

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<Production> manipulation_rules() {
  std::vector<Production> p = {
      {"S", {"S_p"}},
      {"S", {"S_p", "S_p"}},
      {"S_p", {"Sub", "A_p"}},
      {"S_p", {"S_p", "Sub", "A_p"}},
      {"Sub", {"Hand"}},
      {"Sub", {"Me"}},
      {"A_p", {"A", "O_p"}},
      {"A_p", {"A_p", "O_p"}},
      {"Me", {"Hand", "O"}},
      {"O_p", {"O", "SR_p"}},
      {"SR_p", {"SR", "P"}},
      {"Hand", {"Hand_L"}},
      {"Hand", {"Hand_R"}},
      {"Hand", {"Me"}},
  };
  for (const auto& a : kPrimitives) p.push_back({"A", {a}});
  for (const auto& o : kObjects) p.push_back({"O", {o}});
  for (const auto& pl : kPlaces) p.push_back({"P", {pl}});
  for (const auto& r : kRelations) p.push_back({"SR", {r}});
  return p;
}

// ---- Earley chart -------------------------------------------------------

struct Item {
  int prod;
  int dot;
  int origin;
};

class Chart {
 public:
  Chart(const Grammar& g, std::span<const std::string> tokens) : g_(g), tokens_(tokens) {
    const auto& prods = g.productions();
    for (const auto& p : prods) {
      if (!sym_.count(p.lhs)) sym_.emplace(p.lhs, static_cast<int>(sym_.size()));
    }
    for (std::size_t i = 0; i < prods.size(); ++i) by_lhs_[sym_.at(prods[i].lhs)].push_back(i);
    n_ = tokens.size();
    done_.assign(sym_.size() * (n_ + 1) * (n_ + 1), 0);
  }

  // Returns the length of the longest viable prefix; accepted() tells whether
  // the whole input derives from the start symbol.
  std::size_t run() {
    sets_.assign(n_ + 1, {});
    seen_.assign(n_ + 1, {});
    const int start = sym_.at(g_.start());
    for (int p : by_lhs_[start]) add(0, {p, 0, 0});
    std::size_t furthest = 0;
    for (std::size_t k = 0; k <= n_; ++k) {
      if (sets_[k].empty()) break;
      furthest = k;
      for (std::size_t idx = 0; idx < sets_[k].size(); ++idx) {
        const Item it = sets_[k][idx];
        const Production& p = g_.productions()[it.prod];
        if (it.dot == static_cast<int>(p.rhs.size())) {
          complete(k, it);
          continue;
        }
        const std::string& next = p.rhs[it.dot];
        auto s = sym_.find(next);
        if (s != sym_.end()) {
          for (int q : by_lhs_[s->second]) add(k, {q, 0, static_cast<int>(k)});
        } else if (k < n_ && tokens_[k] == next) {
          add(k + 1, {it.prod, it.dot + 1, it.origin});
        }
      }
    }
    return furthest;
  }

  bool derives(const std::string& symbol, std::size_t i, std::size_t j) const {
    auto s = sym_.find(symbol);
    if (s == sym_.end()) return j == i + 1 && i < n_ && tokens_[i] == symbol;
    return done_[index(s->second, i, j)] != 0;
  }

  bool accepted() const { return derives(g_.start(), 0, n_); }

 private:
  std::size_t index(int sym, std::size_t i, std::size_t j) const {
    return (static_cast<std::size_t>(sym) * (n_ + 1) + i) * (n_ + 1) + j;
  }

  void add(std::size_t k, Item it) {
    const std::uint64_t key = (static_cast<std::uint64_t>(it.prod) << 40) |
                              (static_cast<std::uint64_t>(it.dot) << 32) |
                              static_cast<std::uint32_t>(it.origin);
    if (seen_[k].insert(key).second) sets_[k].push_back(it);
  }

  void complete(std::size_t k, const Item& it) {
    const Production& p = g_.productions()[it.prod];
    done_[index(sym_.at(p.lhs), it.origin, k)] = 1;
    // No empty productions, so the origin set is final.
    const auto& from = sets_[it.origin];
    for (std::size_t idx = 0; idx < from.size(); ++idx) {
      const Item up = from[idx];
      const Production& q = g_.productions()[up.prod];
      if (up.dot < static_cast<int>(q.rhs.size()) && q.rhs[up.dot] == p.lhs) {
        add(k, {up.prod, up.dot + 1, up.origin});
      }
    }
  }

  const Grammar& g_;
  std::span<const std::string> tokens_;
  std::size_t n_ = 0;
  std::unordered_map<std::string, int> sym_;
  std::unordered_map<int, std::vector<int>> by_lhs_;
  std::vector<std::vector<Item>> sets_;
  std::vector<std::unordered_set<std::uint64_t>> seen_;
  std::vector<char> done_;
};

// Picks one derivation per (symbol, span) from a finished chart.
class TreeBuilder {
 public:
  TreeBuilder(const Grammar& g, const Chart& chart, std::span<const std::string> tokens)
      : g_(g), chart_(chart), tokens_(tokens) {
    penalized_ = g.find_production("Hand", {"Me"});
  }

  ParseTree build(const std::string& symbol, std::size_t i, std::size_t j) {
    if (!g_.is_nonterminal(symbol)) return ParseTree{symbol, -1, {}};
    const Choice& c = best(symbol, i, j);
    ParseTree t{symbol, c.prod, {}};
    const auto& rhs = g_.productions()[c.prod].rhs;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      t.children.push_back(build(rhs[k], c.cuts[k], c.cuts[k + 1]));
    }
    return t;
  }

 private:
  struct Choice {
    int cost = std::numeric_limits<int>::max();
    int prod = -1;
    std::vector<std::size_t> cuts;  // child boundaries, size rhs+1
  };

  int cost_of(const std::string& symbol, std::size_t i, std::size_t j) {
    if (!g_.is_nonterminal(symbol)) return 0;
    return best(symbol, i, j).cost;
  }

  const Choice& best(const std::string& symbol, std::size_t i, std::size_t j) {
    const std::string key = symbol + "/" + std::to_string(i) + "/" + std::to_string(j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Choice choice;
    const auto& prods = g_.productions();
    for (std::size_t p = 0; p < prods.size(); ++p) {
      if (prods[p].lhs != symbol) continue;
      std::vector<std::size_t> cuts{i};
      search(static_cast<int>(p), j, cuts, p == static_cast<std::size_t>(penalized_) ? 1 : 0,
             choice);
    }
    if (choice.prod < 0) throw NoParse(i, "internal: no derivation for " + symbol);
    return memo_.emplace(key, std::move(choice)).first->second;
  }

  // Children left to right, each taking the longest span that still works.
  void search(int prod, std::size_t j, std::vector<std::size_t>& cuts, int cost, Choice& out) {
    const auto& rhs = g_.productions()[prod].rhs;
    const std::size_t c = cuts.size() - 1;
    const std::size_t pos = cuts.back();
    if (c == rhs.size()) {
      if (pos == j && cost < out.cost) out = Choice{cost, prod, cuts};
      return;
    }
    const std::size_t remaining = rhs.size() - c - 1;
    if (pos + remaining >= j) return;
    const std::size_t hi = c + 1 == rhs.size() ? j : j - remaining;
    const std::size_t lo = c + 1 == rhs.size() ? j : pos + 1;
    for (std::size_t e = hi; e >= lo; --e) {
      if (chart_.derives(rhs[c], pos, e)) {
        const int sub = cost_of(rhs[c], pos, e);
        if (cost + sub < out.cost) {
          cuts.push_back(e);
          search(prod, j, cuts, cost + sub, out);
          cuts.pop_back();
        }
      }
      if (e == lo) break;
    }
  }

  const Grammar& g_;
  const Chart& chart_;
  std::span<const std::string> tokens_;
  int penalized_ = -1;
  std::unordered_map<std::string, Choice> memo_;
};

void collect_leaves(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.symbol);
    return;
  }
  for (const auto& c : t.children) collect_leaves(c, out);
}

void bracket(const ParseTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.symbol;
    return;
  }
  out += "(" + t.symbol;
  for (const auto& c : t.children) {
    out += ' ';
    bracket(c, out);
  }
  out += ')';
}

// ---- library text -------------------------------------------------------

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool valid_variable(std::string_view v) {
  if (v.size() < 2 || v[0] != '?') return false;
  return std::all_of(v.begin() + 1, v.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Slot read_slot(const std::string& field, const std::vector<std::string>& allowed,
               bool variables_ok, const char* what, std::size_t line) {
  Slot slot;
  std::size_t from = 0;
  while (true) {
    const std::size_t bar = field.find('|', from);
    slot.options.push_back(field.substr(from, bar == std::string::npos ? bar : bar - from));
    if (bar == std::string::npos) break;
    from = bar + 1;
  }
  for (const auto& o : slot.options) {
    if (o.starts_with('?')) {
      if (!variables_ok || slot.options.size() != 1 || !valid_variable(o)) {
        throw PatternParseError(line, std::string("bad variable in ") + what + ": '" + field + "'");
      }
      continue;
    }
    if (!contains(allowed, o)) {
      throw PatternParseError(line, std::string("unknown ") + what + " '" + o + "'");
    }
  }
  return slot;
}

StepTemplate read_step(const std::vector<std::string>& f, int group, std::size_t line) {
  if (f.size() != 5) {
    throw PatternParseError(line, "a step needs subject primitive object relation place");
  }
  StepTemplate step;
  step.group = group;
  if (f[0] == "Hand") {
    // bare hand
  } else if (f[0].starts_with("Me(") && f[0].ends_with(")")) {
    step.carried = read_slot(f[0].substr(3, f[0].size() - 4), {"O1", "O2", "O3"}, true,
                             "carried object", line);
  } else {
    throw PatternParseError(line, "unknown subject '" + f[0] + "'");
  }
  std::string prim = f[1];
  if (prim.ends_with('+')) {
    step.repeat = true;
    prim.pop_back();
  }
  step.primitive = read_slot(prim, kPrimitives, false, "primitive", line);
  if (step.repeat) {
    for (const auto& p : step.primitive.options) {
      if (p != "Mt" && p != "Fmt") throw PatternParseError(line, "'+' applies to Mt and Fmt only");
    }
  }
  step.object = read_slot(f[2], kObjects, true, "object", line);
  step.relation = read_slot(f[3], kRelations, false, "relation", line);
  step.place = read_slot(f[4], kPlaces, true, "place", line);
  return step;
}

// Object-like variables get O1, O2, ... in order; place-only ones Ground.
Bindings placeholder_bindings(const LibraryEntry& e) {
  Bindings b;
  int next = 1;
  for (const auto& v : e.object_variables()) b[v] = "O" + std::to_string(next++);
  for (const auto& v : e.variables()) {
    if (!b.count(v)) b[v] = "Ground";
  }
  return b;
}

void validate_entry(const LibraryEntry& e) {
  if (e.object_variables().size() > 3) {
    throw NonCfgPattern("'" + e.name + "' uses more than three object variables");
  }
  if (e.steps.empty()) return;
  const auto aas = decompose_entry(e, placeholder_bindings(e), 1, "Hand_L");
  for (const auto& aa : aas) {
    const std::string why = ConstraintTable::shipped().violation(aa);
    if (!why.empty()) throw NonCfgPattern("'" + e.name + "': " + aa.text() + ": " + why);
  }
  // Every alternative must pass the constraints as well.
  for (const auto& step : e.steps) {
    for (const auto& p : step.primitive.options) {
      for (const auto& r : step.relation.options) {
        SymbolicAction probe;
        probe.carried = step.carried ? "O3" : "";
        probe.primitive = p;
        probe.relation = r;
        probe.object = step.object.is_variable() ? "O1" : step.object.options.front();
        probe.place = "Ground";
        const std::string why = ConstraintTable::shipped().violation(probe);
        if (!why.empty() && why.find("place") == std::string::npos) {
          throw NonCfgPattern("'" + e.name + "': alternative " + p + "/" + r + ": " + why);
        }
      }
    }
  }
  std::vector<std::string> tokens;
  for (const auto& aa : aas) {
    for (auto& t : aa.tokens()) tokens.push_back(std::move(t));
  }
  try {
    parse(tokens);
  } catch (const NoParse& err) {
    throw NonCfgPattern("'" + e.name + "' is not derivable: " + err.what());
  }
}

// ---- matching -----------------------------------------------------------

struct Matcher {
  const LibraryEntry* entry;
  std::span<const SymbolicAction> input;
  std::size_t best_end = 0;
  Bindings best_bindings;
  std::vector<int> best_groups;
  bool found = false;

  static bool bind(Bindings& b, std::set<std::string>& used, const std::string& var,
                   const std::string& value) {
    auto it = b.find(var);
    if (it != b.end()) return it->second == value;
    if (used.count(value)) return false;
    b.emplace(var, value);
    used.insert(value);
    return true;
  }

  static bool slot_ok(const Slot& s, const std::string& value, Bindings& b,
                      std::set<std::string>& used, bool object_slot) {
    if (s.is_variable()) {
      if (object_slot && !(value == "O1" || value == "O2" || value == "O3")) return false;
      return bind(b, used, s.variable(), value);
    }
    return contains(s.options, value);
  }

  bool step_ok(const StepTemplate& st, const SymbolicAction& aa, Bindings& b,
               std::set<std::string>& used) const {
    if (st.carried.has_value() != aa.is_me()) return false;
    if (st.carried && !slot_ok(*st.carried, aa.carried, b, used, true)) return false;
    return slot_ok(st.primitive, aa.primitive, b, used, false) &&
           slot_ok(st.object, aa.object, b, used, true) &&
           slot_ok(st.relation, aa.relation, b, used, false) &&
           slot_ok(st.place, aa.place, b, used, false);
  }

  // Depth first; a "+" step first tries its longest run.
  void run(std::size_t step, std::size_t pos, Bindings b, std::set<std::string> used,
           std::vector<int>& groups) {
    if (step == entry->steps.size()) {
      if (!found || pos > best_end) {
        found = true;
        best_end = pos;
        best_bindings = b;
        best_groups = groups;
      }
      return;
    }
    const StepTemplate& st = entry->steps[step];
    std::vector<std::pair<Bindings, std::set<std::string>>> states;
    std::size_t p = pos;
    while (p < input.size()) {
      Bindings nb = states.empty() ? b : states.back().first;
      std::set<std::string> nu = states.empty() ? used : states.back().second;
      if (!step_ok(st, input[p], nb, nu)) break;
      states.emplace_back(std::move(nb), std::move(nu));
      ++p;
      if (!st.repeat) break;
    }
    for (std::size_t k = states.size(); k >= 1; --k) {
      for (std::size_t g = 0; g < k; ++g) groups.push_back(st.group);
      run(step + 1, pos + k, states[k - 1].first, states[k - 1].second, groups);
      groups.resize(groups.size() - k);
      if (found && best_end == input.size()) return;
    }
  }
};

}  // namespace

// ---- Grammar ------------------------------------------------------------

Grammar::Grammar(std::vector<Production> productions, std::string start)
    : productions_(std::move(productions)), start_(std::move(start)) {
  if (!is_nonterminal(start_)) throw std::invalid_argument("start symbol has no production");
}

const Grammar& Grammar::manipulation() {
  static const Grammar g(manipulation_rules());
  return g;
}

bool Grammar::is_nonterminal(std::string_view symbol) const {
  return std::any_of(productions_.begin(), productions_.end(),
                     [&](const Production& p) { return p.lhs == symbol; });
}

bool Grammar::is_terminal(std::string_view symbol) const {
  if (is_nonterminal(symbol)) return false;
  for (const auto& p : productions_) {
    if (contains(p.rhs, symbol)) return true;
  }
  return false;
}

std::vector<std::string> Grammar::nonterminals() const {
  std::vector<std::string> out;
  for (const auto& p : productions_) {
    if (!contains(out, p.lhs)) out.push_back(p.lhs);
  }
  return out;
}

std::vector<std::string> Grammar::terminals() const {
  std::vector<std::string> out;
  for (const auto& p : productions_) {
    for (const auto& s : p.rhs) {
      if (!is_nonterminal(s) && !contains(out, s)) out.push_back(s);
    }
  }
  return out;
}

int Grammar::find_production(std::string_view lhs, const std::vector<std::string>& rhs) const {
  for (std::size_t i = 0; i < productions_.size(); ++i) {
    if (productions_[i].lhs == lhs && productions_[i].rhs == rhs) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> ParseTree::leaves() const {
  std::vector<std::string> out;
  collect_leaves(*this, out);
  return out;
}

std::string ParseTree::bracketed() const {
  std::string out;
  bracket(*this, out);
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

ParseTree parse(std::span<const std::string> tokens, const Grammar& grammar) {
  if (tokens.empty()) throw NoParse(0, "empty input");
  Chart chart(grammar, tokens);
  const std::size_t furthest = chart.run();
  if (!chart.accepted()) {
    if (furthest < tokens.size()) {
      throw NoParse(furthest, "unexpected token '" + tokens[furthest] + "' at position " +
                                  std::to_string(furthest));
    }
    throw NoParse(furthest, "input ends inside an atomic action");
  }
  TreeBuilder builder(grammar, chart, tokens);
  return builder.build(grammar.start(), 0, tokens.size());
}

// ---- SymbolicAction -----------------------------------------------------

std::vector<std::string> SymbolicAction::tokens() const {
  std::vector<std::string> out{hand};
  if (is_me()) out.push_back(carried);
  for (const auto* s : {&primitive, &object, &relation, &place}) out.push_back(*s);
  return out;
}

std::string SymbolicAction::text() const {
  std::string out;
  for (const auto& t : tokens()) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool SymbolicAction::same_terminals(const SymbolicAction& o) const { return tokens() == o.tokens(); }

SymbolicAction to_symbolic(const AtomicAction& aa, const HandStream& stream,
                           const std::string& ground_id) {
  SymbolicAction s;
  s.hand = stream.side == Side::Left ? "Hand_L" : "Hand_R";
  if (aa.subject.carried) s.carried = stream.object_token(*aa.subject.carried, ground_id);
  s.primitive = std::string(to_string(aa.primitive));
  s.object = stream.object_token(aa.object, ground_id);
  s.relation = std::string(to_string(aa.relation));
  s.place = stream.place_token(aa.place, ground_id);
  s.start = aa.start;
  s.end = aa.end;
  return s;
}

std::vector<SymbolicAction> to_symbolic(const HandStream& stream, const std::string& ground_id) {
  std::vector<SymbolicAction> out;
  out.reserve(stream.actions.size());
  for (const auto& aa : stream.actions) out.push_back(to_symbolic(aa, stream, ground_id));
  return out;
}

// ---- ConstraintTable ----------------------------------------------------

const ConstraintTable& ConstraintTable::shipped() {
  static const ConstraintTable table = [] {
    std::istringstream in(constraint_table_text());
    return ConstraintTable::parse(in);
  }();
  return table;
}

ConstraintTable ConstraintTable::parse(std::istream& in) {
  ConstraintTable t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto w = words(line);
    if (w.empty()) continue;
    const std::vector<std::string> rest(w.begin() + std::min<std::size_t>(2, w.size()), w.end());
    if (w[0] == "primitive" && w.size() >= 2 && contains(kPrimitives, w[1])) {
      t.relations_by_primitive_[w[1]] = rest;
    } else if (w[0] == "subject" && w.size() >= 2 && (w[1] == "Hand" || w[1] == "Me")) {
      t.primitives_by_subject_[w[1]] = rest;
    } else if (w[0] == "ground" && w.size() >= 2 && w[1] == "relations") {
      t.ground_relations_ = rest;
    } else if (w[0] == "ground" && w.size() >= 2 && w[1] == "places") {
      t.ground_places_ = rest;
    } else if (w[0] == "place-differs-from-object" && w.size() == 1) {
      t.place_differs_ = true;
    } else if (w[0] == "carried-differs-from-object" && w.size() == 1) {
      t.carried_differs_ = true;
    } else {
      throw PatternParseError(n, "bad constraint line '" + line + "'");
    }
  }
  return t;
}

std::string ConstraintTable::violation(const SymbolicAction& aa) const {
  const std::string subject = aa.is_me() ? "Me" : "Hand";
  if (auto it = primitives_by_subject_.find(subject);
      it != primitives_by_subject_.end() && !contains(it->second, aa.primitive)) {
    return subject + " subject cannot take " + aa.primitive;
  }
  if (auto it = relations_by_primitive_.find(aa.primitive);
      it != relations_by_primitive_.end() && !contains(it->second, aa.relation)) {
    return aa.primitive + " cannot carry relation " + aa.relation;
  }
  if (aa.object == "G") {
    if (!ground_relations_.empty() && !contains(ground_relations_, aa.relation)) {
      return "relation " + aa.relation + " to the ground";
    }
    if (!ground_places_.empty() && !contains(ground_places_, aa.place)) {
      return "the ground cannot be placed on " + aa.place;
    }
  }
  if (place_differs_ && aa.place == aa.object) return "object is its own place";
  if (carried_differs_ && aa.is_me() && aa.carried == aa.object) {
    return "carried object acts on itself";
  }
  return {};
}

bool ConstraintTable::allows(const SymbolicAction& aa) const { return violation(aa).empty(); }

std::size_t ConstraintTable::valid_count() const {
  std::size_t n = 0;
  for (bool me : {false, true}) {
    for (const auto& p : kPrimitives) {
      for (const auto& o : kObjects) {
        for (const auto& r : kRelations) {
          for (const auto& pl : kPlaces) {
            SymbolicAction aa;
            aa.carried = me ? "Me" : "";
            aa.primitive = p;
            aa.object = o;
            aa.relation = r;
            aa.place = pl;
            if (allows(aa)) ++n;
          }
        }
      }
    }
  }
  return n;
}

// ---- library ------------------------------------------------------------

std::vector<std::string> LibraryEntry::variables() const {
  std::vector<std::string> out;
  auto note = [&](const Slot& s) {
    if (s.is_variable() && !contains(out, s.variable())) out.push_back(s.variable());
  };
  for (const auto& st : steps) {
    if (st.carried) note(*st.carried);
    note(st.object);
    note(st.place);
  }
  return out;
}

std::vector<std::string> LibraryEntry::object_variables() const {
  std::vector<std::string> objects;
  for (const auto& st : steps) {
    for (const Slot* s : {st.carried ? &*st.carried : nullptr, &st.object}) {
      if (s && s->is_variable() && !contains(objects, s->variable())) {
        objects.push_back(s->variable());
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& v : variables()) {
    if (contains(objects, v)) out.push_back(v);
  }
  return out;
}

const LibraryEntry* MappingLibrary::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

void MappingLibrary::add(LibraryEntry entry) {
  if (find(entry.name)) throw DuplicateName("action '" + entry.name + "' defined twice");
  validate_entry(entry);
  entries_.push_back(std::move(entry));
}

const MappingLibrary& MappingLibrary::shipped() {
  static const MappingLibrary lib = [] {
    std::istringstream in(default_library_text());
    return load_mapping_library(in);
  }();
  return lib;
}

MappingLibrary load_mapping_library(std::istream& in) {
  MappingLibrary lib;
  std::optional<LibraryEntry> cur;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "action") {
      if (cur) throw PatternParseError(n, "'action' inside an open entry");
      if (w.size() != 2) throw PatternParseError(n, "usage: action NAME");
      cur = LibraryEntry{w[1], 1, {}, {}};
    } else if (!cur) {
      throw PatternParseError(n, "'" + w[0] + "' outside an entry");
    } else if (w[0] == "hands") {
      if (w.size() != 2 || (w[1] != "1" && w[1] != "2")) {
        throw PatternParseError(n, "hands must be 1 or 2");
      }
      cur->hands = std::stoi(w[1]);
    } else if (w[0] == "group") {
      if (w.size() != 2) throw PatternParseError(n, "usage: group NAME");
      cur->groups.push_back(w[1]);
    } else if (w[0] == "end") {
      if (cur->groups.empty() && !cur->steps.empty()) cur->groups.push_back(cur->name);
      lib.add(std::move(*cur));
      cur.reset();
    } else {
      const int group = std::max(0, static_cast<int>(cur->groups.size()) - 1);
      cur->steps.push_back(read_step(w, group, n));
    }
  }
  if (cur) throw PatternParseError(n, "entry '" + cur->name + "' has no 'end'");
  return lib;
}

MappingLibrary load_mapping_library_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_mapping_library(in);
}

std::vector<SymbolicAction> decompose_entry(const LibraryEntry& e, const Bindings& b, int repeats,
                                            const std::string& hand) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  auto fill = [&](const Slot& s) -> std::string {
    if (!s.is_variable()) return s.options.front();
    auto it = b.find(s.variable());
    if (it == b.end()) throw UnboundVariable("'" + e.name + "' needs " + s.variable());
    return it->second;
  };
  std::vector<SymbolicAction> out;
  for (const auto& st : e.steps) {
    SymbolicAction aa;
    aa.hand = hand;
    if (st.carried) aa.carried = fill(*st.carried);
    aa.primitive = fill(st.primitive);
    aa.object = fill(st.object);
    aa.relation = fill(st.relation);
    aa.place = fill(st.place);
    for (int r = 0; r < (st.repeat ? repeats : 1); ++r) {
      aa.start = aa.end = static_cast<int>(out.size());
      out.push_back(aa);
    }
  }
  return out;
}

std::vector<SymbolicAction> decompose(std::string_view name, const Bindings& bindings,
                                      const MappingLibrary& lib, int repeats,
                                      const std::string& hand) {
  const LibraryEntry* e = lib.find(name);
  if (!e) throw UnknownAction("no action '" + std::string(name) + "' in the library");
  return decompose_entry(*e, bindings, repeats, hand);
}

std::vector<RecognizedAction> recognize(std::span<const SymbolicAction> actions,
                                        const MappingLibrary& lib) {
  std::vector<RecognizedAction> out;
  std::size_t i = 0;
  while (i < actions.size()) {
    const LibraryEntry* winner = nullptr;
    std::size_t best_end = 0;
    Bindings best_bindings;
    std::vector<int> best_groups;
    for (const auto& e : lib.entries()) {
      if (e.steps.empty()) continue;
      Matcher m{&e, actions.subspan(i), 0, {}, {}, false};
      std::vector<int> groups;
      m.run(0, 0, {}, {}, groups);
      if (m.found && m.best_end > best_end) {
        winner = &e;
        best_end = m.best_end;
        best_bindings = std::move(m.best_bindings);
        best_groups = std::move(m.best_groups);
      }
    }
    RecognizedAction r;
    r.hand = actions[i].hand;
    r.first = i;
    if (winner) {
      r.name = winner->name;
      r.groups = winner->groups;
      r.bindings = std::move(best_bindings);
      r.step_groups = std::move(best_groups);
      r.last = i + best_end;
    } else {
      r.name = "Unknown";
      r.last = i + 1;
      r.step_groups = {0};
      // Merge with a directly preceding Unknown span.
      if (!out.empty() && out.back().unknown()) {
        out.back().last = r.last;
        out.back().end = actions[i].end;
        out.back().step_groups.push_back(0);
        ++i;
        continue;
      }
    }
    r.start = actions[r.first].start;
    r.end = actions[r.last - 1].end;
    i = r.last;
    out.push_back(std::move(r));
  }
  return out;
}

std::string dominant_action(const std::vector<RecognizedAction>& recognized) {
  const RecognizedAction* best = nullptr;
  for (const auto& r : recognized) {
    if (r.unknown()) continue;
    if (!best || r.last - r.first > best->last - best->first) best = &r;
  }
  if (best) return best->name;
  return recognized.empty() ? "Idle" : "Unknown";
}

}  // namespace manipsem
