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

#ifndef MANIPSEM_GRAMMAR_HPP_
#define MANIPSEM_GRAMMAR_HPP_

#include "manipsem/events.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manipsem {

class NoParse : public std::runtime_error {
 public:
  NoParse(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  /// Length of the longest prefix that can still be extended to a sentence.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class PatternParseError : public std::runtime_error {
 public:
  PatternParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonCfgPattern : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DuplicateName : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class UnboundVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Production {
  std::string lhs;
  std::vector<std::string> rhs;
};

class Grammar {
 public:
  explicit Grammar(std::vector<Production> productions, std::string start = "S");

  /// The manipulation grammar: S, S_p, Sub, A_p, Me, O_p, SR_p, Hand, A, O, P, SR.
  static const Grammar& manipulation();

  const std::string& start() const { return start_; }
  const std::vector<Production>& productions() const { return productions_; }
  bool is_nonterminal(std::string_view symbol) const;
  bool is_terminal(std::string_view symbol) const;
  std::vector<std::string> nonterminals() const;  // in order of first definition
  std::vector<std::string> terminals() const;
  int find_production(std::string_view lhs, const std::vector<std::string>& rhs) const;

 private:
  std::vector<Production> productions_;
  std::string start_;
};

struct ParseTree {
  std::string symbol;
  int production = -1;  // index into Grammar::productions, -1 for a leaf
  std::vector<ParseTree> children;

  bool is_leaf() const { return children.empty(); }
  std::vector<std::string> leaves() const;
  /// "(S (S_p (Sub (Hand Hand_L)) ...))".
  std::string bracketed() const;
};

/// Whitespace separated; '.' also separates, so "Sub.A_p" style input works.
std::vector<std::string> split_tokens(std::string_view text);

/// Chart parse. Among derivations, the unit step Hand -> Me is avoided where
/// another derivation exists, then productions are tried in grammar order
/// with the leftmost child taking the longest span.
ParseTree parse(std::span<const std::string> tokens,
                const Grammar& grammar = Grammar::manipulation());

/// One atomic action in grammar terminals: "Hand_L T O1 To Ground", or with
/// a carried object "Hand_L O1 Mt G Ab Air".
struct SymbolicAction {
  std::string hand = "Hand_L";
  std::string carried;  // empty for a hand subject
  std::string primitive;
  std::string object;
  std::string relation;
  std::string place;
  int start = 0;
  int end = 0;

  bool is_me() const { return !carried.empty(); }
  std::vector<std::string> tokens() const;
  std::string text() const;
  bool same_terminals(const SymbolicAction& other) const;
};

SymbolicAction to_symbolic(const AtomicAction& aa, const HandStream& stream,
                           const std::string& ground_id);
std::vector<SymbolicAction> to_symbolic(const HandStream& stream, const std::string& ground_id);

/// Quintuple validity rules. The shipped table encodes, e.g., that a touch
/// carries a contact relation and that a bare hand never moves together.
class ConstraintTable {
 public:
  static const ConstraintTable& shipped();
  static ConstraintTable parse(std::istream& in);

  bool allows(const SymbolicAction& aa) const;
  /// Why `aa` is rejected, empty when allowed.
  std::string violation(const SymbolicAction& aa) const;
  /// Quintuple kinds over subject {hand, merged}, 4 primitives, objects
  /// {O1..O3, G}, 13 relations and places {Ground, Air, O1..O3}.
  std::size_t valid_count() const;

 private:
  std::map<std::string, std::vector<std::string>> relations_by_primitive_;
  std::map<std::string, std::vector<std::string>> primitives_by_subject_;
  std::vector<std::string> ground_relations_;
  std::vector<std::string> ground_places_;
  bool place_differs_ = false;
  bool carried_differs_ = false;
};

/// One slot of a step template: literal alternatives or a single variable.
struct Slot {
  std::vector<std::string> options;  // "To|ArT" -> {"To", "ArT"}; "?tool" -> {"?tool"}

  bool is_variable() const { return options.size() == 1 && options[0].starts_with('?'); }
  const std::string& variable() const { return options.front(); }
};

struct StepTemplate {
  std::optional<Slot> carried;  // set for "Me(?tool)"
  Slot primitive;
  Slot object;
  Slot relation;
  Slot place;
  bool repeat = false;  // "+" on Mt/Fmt: one or more consecutive AAs
  int group = 0;
};

struct LibraryEntry {
  std::string name;
  int hands = 1;
  std::vector<std::string> groups;
  std::vector<StepTemplate> steps;

  std::vector<std::string> variables() const;  // order of first use
  /// Variables used as objects (or carried); the rest only appear as places.
  std::vector<std::string> object_variables() const;
};

using Bindings = std::map<std::string, std::string>;

class MappingLibrary {
 public:
  const std::vector<LibraryEntry>& entries() const { return entries_; }
  const LibraryEntry* find(std::string_view name) const;
  void add(LibraryEntry entry);  // DuplicateName

  static const MappingLibrary& shipped();

 private:
  std::vector<LibraryEntry> entries_;
};

const std::string& default_library_text();
MappingLibrary load_mapping_library(std::istream& in);
MappingLibrary load_mapping_library_file(const std::string& path);

/// Pattern instantiated with `bindings`; every "+" step is emitted `repeats`
/// times and alternations take their first option.
std::vector<SymbolicAction> decompose(std::string_view name, const Bindings& bindings,
                                      const MappingLibrary& lib, int repeats = 1,
                                      const std::string& hand = "Hand_L");

struct RecognizedAction {
  std::string name;  // "Unknown" for unmatched spans
  Bindings bindings;
  std::size_t first = 0;  // index range [first, last) into the input
  std::size_t last = 0;
  int start = 0;  // frame span
  int end = 0;
  std::string hand;
  std::vector<int> step_groups;  // group of each matched input AA
  std::vector<std::string> groups;  // group names of the library entry

  bool unknown() const { return name == "Unknown"; }
};

/// Greedy left-to-right longest match; ties go to the earlier entry.
std::vector<RecognizedAction> recognize(std::span<const SymbolicAction> actions,
                                        const MappingLibrary& lib = MappingLibrary::shipped());

/// One name for a hand: the longest recognized action, "Idle" when there is
/// none, "Unknown" when nothing matched.
std::string dominant_action(const std::vector<RecognizedAction>& recognized);

}  // namespace manipsem

#endif  // MANIPSEM_GRAMMAR_HPP_
