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

#ifndef MANIPSEM_REALIZER_HPP_
#define MANIPSEM_REALIZER_HPP_

#include "manipsem/events.hpp"
#include "manipsem/grammar.hpp"

#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace manipsem {

class MissingTemplate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TemplateParseError : public std::runtime_error {
 public:
  TemplateParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Tiers of description. Level 1 is one sentence per atomic action, level 2
/// one per library group, level 3 one per recognized action.
inline constexpr int kAtomicLevel = 1;
inline constexpr int kGroupLevel = 2;
inline constexpr int kActionLevel = 3;
inline constexpr int kMaxLevel = 14;

/// Keyed sentence templates ("key = text" lines).
class TemplateSet {
 public:
  static const TemplateSet& shipped();
  static TemplateSet parse(std::istream& in);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& get(const std::string& key) const;  // MissingTemplate
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Throws MissingTemplate unless every primitive, relation label and
  /// action of `lib` (with its groups) has a surface form.
  void validate(const MappingLibrary& lib) const;

 private:
  std::map<std::string, std::string> entries_;
};

const std::string& default_templates_text();

/// How entities are named: labels, the ground, and the O1..O3 roles of one hand.
struct Naming {
  std::map<std::string, std::string> labels;  // id -> label ("hard_disk")
  std::string ground_id;
  std::map<std::string, int> roles;  // id -> 1..3

  static Naming of(const Extraction& ex, Side side);
  std::string noun(const std::string& id) const;  // "hard disk"
  std::string id_of_token(const std::string& token) const;  // "O2" -> id
};

/// Ids already introduced; "a/an" first, "the" after.
using Mentions = std::set<std::string>;

std::string realize_atomic(const AtomicAction& aa, const AtomicAction* previous,
                           const Naming& naming, const TemplateSet& ts = TemplateSet::shipped(),
                           Mentions* mentions = nullptr);

struct Sentence {
  std::string text;
  int start = 0;  // inclusive frame span
  int end = 0;
};

struct Description {
  Side hand = Side::Left;
  int level = 1;
  std::vector<Sentence> sentences;
};

/// `recognized` indexes into snippet.actions. Unknown spans stay at level 1.
/// Levels above kActionLevel (up to kMaxLevel) render like kActionLevel.
Description realize_level(const Snippet& snippet, const std::vector<RecognizedAction>& recognized,
                          int k, const Naming& naming,
                          const TemplateSet& ts = TemplateSet::shipped());

/// Levels whose sentence grouping differs from every lower level.
std::set<int> available_levels(const std::vector<RecognizedAction>& recognized);

/// A whole hand: snippets at level k and "Idle." for the idle spans, in
/// frame order.
struct HandReport {
  Side hand = Side::Left;
  std::vector<Snippet> snippets;
  std::vector<std::vector<RecognizedAction>> recognized;  // per snippet
  std::vector<std::pair<int, int>> idle;
  std::string dominant = "Idle";

  std::set<int> levels() const;  // union over snippets, {1} for an idle hand
};

HandReport analyze_hand(const Extraction& ex, Side side,
                        const MappingLibrary& lib = MappingLibrary::shipped());

Description describe_hand(const HandReport& report, int k, const Naming& naming,
                          const TemplateSet& ts = TemplateSet::shipped());

}  // namespace manipsem

#endif  // MANIPSEM_REALIZER_HPP_
