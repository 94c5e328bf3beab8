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

#ifndef MANIPSEM_SYNTH_HPP_
#define MANIPSEM_SYNTH_HPP_

#include "manipsem/events.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace manipsem {

class UnknownScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The 14 scripted actions, in a fixed order.
const std::vector<std::string>& scenario_names();

struct ScenarioSpec {
  std::string scenario;
  double noise = 0.0;      // uniform per-coordinate jitter amplitude, m
  int frames = 0;          // 0: natural script length
  std::uint64_t seed = 0;
  bool companion = false;  // right hand performs a second, independent action
  int extra_objects = 0;   // static distractors far from the action
  int points = 0;          // points per non-ground object (>= 8), 0: 56 (4x4 face grids)
};

struct RelationSample {
  int frame = 0;
  std::string a;
  std::string b;
  SsrLabel label = SsrLabel::NoRelation;
};

struct SyntheticTrace {
  SceneTrace trace;
  std::vector<RelationSample> relations;
  /// Expected grammar tokens per hand, one string per AA, repeats collapsed.
  std::array<std::vector<std::string>, 2> actions;
  std::array<std::string, 2> action_names;  // "Idle" for an unused hand
  EventConfig config;                       // tolerances sized to the noise
};

SyntheticTrace generate_synthetic_trace(const ScenarioSpec& spec);

/// Tolerances widened for jittered clouds.
EventConfig config_for_noise(double noise);

/// Labelled two-box scene for the relation study: 30 frames, the pair
/// (a, b) labelled at frames 0, 10 and 20. `index` picks the label
/// (index mod 14 over the 13 relations and NoRelation).
SyntheticTrace generate_relation_scene(int index, std::uint64_t seed);

/// Grammar tokens of an AA ("Hand_L T O1 To Ground", Me as "Hand_L O1").
std::string aa_tokens(const AtomicAction& aa, const HandStream& stream,
                      const std::string& ground_id);

/// aa_tokens over a stream with runs of identical Mt/Fmt tokens collapsed.
std::vector<std::string> collapsed_tokens(const HandStream& stream, const std::string& ground_id);

}  // namespace manipsem

#endif  // MANIPSEM_SYNTH_HPP_
