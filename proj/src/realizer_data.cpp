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

namespace manipsem {

// Slots: {subject} {verb} {relation} {object} {place} in atomic templates;
// {subject} {ground} {?var} (a noun phrase) and {at:?var} (a place phrase)
// in group and action templates. Verbs list "singular | plural".
const std::string& default_templates_text() {
  static const std::string text = R"(# English surface forms.
subject.left   = the left hand
subject.right  = the right hand
subject.merged = they
idle           = Idle

verb.T   = touches | touch
verb.U   = untouches | untouch
verb.Mt  = moves together | move together
verb.Fmt = moves together | move together
continue.T   = continues to touch | continue to touch
continue.U   = stays apart from | stay apart from
continue.Mt  = keeps moving together | keep moving together
continue.Fmt = keeps moving together | keep moving together

atomic.T          = {subject} {verb} {relation} {object} {place}
atomic.T.ground   = {subject} {verb} {object}
atomic.U          = {subject} {verb} {object} {place}
atomic.U.ground   = {subject} {verb} {object}
atomic.Mt         = {subject} {verb} {relation} {object} {place}
atomic.Mt.ground  = {subject} {verb} {relation} {object}
atomic.Fmt        = {subject} {verb} {relation} {object} {place}
atomic.Fmt.ground = {subject} {verb} {relation} {object}

place.Ground = on {np}
place.Air    = in the air
place.Object = on {np}

# Relation to an object, then to the ground.
relation.Ab  = above
relation.Be  = below
relation.To  = the top of
relation.Bo  = the bottom of
relation.Ar  = near
relation.ArT = near
relation.In  = into
relation.Su  = around
relation.Cr  = across
relation.Wi  = inside of
relation.Pwi = inside of
relation.Co  = around
relation.Pco = partly around
relation.NoRelation = away from
ground.Ab  = above
ground.Be  = below
ground.To  = on
ground.Bo  = under
ground.Ar  = near
ground.ArT = near
ground.In  = into
ground.Su  = around
ground.Cr  = across
ground.Wi  = inside of
ground.Pwi = inside of
ground.Co  = around
ground.Pco = partly around
ground.NoRelation = away from

action.Idle     = Idle
action.Approach = {subject} approaches {?object} {at:?place}
action.Retreat  = {subject} holds {?object} and then lets go
action.Hold     = {subject} holds {?object} {at:?place}
action.Lift     = {subject} lifts {?object} from {ground}
action.Place    = {subject} lifts and puts {?object} on {ground}
action.Drink    = {subject} drinks from {?cup}
action.Pour     = {subject} pours from {?source} into {?target}
action.Stir     = {subject} stirs {?container} by {?tool}
action.Wipe     = {subject} wipes {ground} by {?tool}
action.Cut      = {subject} cuts {?object} on {ground} by {?tool}
action.Saw      = {subject} saws {?object} on {ground} by {?tool}
action.Hammer   = {subject} hammers {?object} on {ground} by {?tool}
action.Screw    = {subject} performs screwing inside of {?object} on {ground} by {?tool}

group.Approach.reach = {subject} reaches {?object} {at:?place}
group.Retreat.touch  = {subject} keeps touching near {?object} {at:?place}
group.Retreat.leave  = {subject} leaves {?object} {at:?place}
group.Hold.hold      = {subject} holds {?object} {at:?place}
group.Lift.grasp     = {subject} grasps {?object} on {ground}
group.Lift.lift      = {subject} lifts {?object} from {ground}
group.Place.move     = {subject} picks and places {?object} on {ground}
group.Place.leave    = {subject} then leaves {?object} on {ground}
group.Drink.raise    = {subject} raises {?cup} to drink
group.Drink.lower    = {subject} puts {?cup} back on {ground}
group.Pour.fetch     = {subject} picks up {?source} and brings it to {?target}
group.Pour.work      = they pour into {?target}
group.Pour.leave     = {subject} puts {?source} back on {ground}
group.Stir.grasp     = {subject} grasps {?tool} in {?container}
group.Stir.work      = they stir {?container}
group.Stir.leave     = {subject} leaves {?tool} in {?container}
group.Wipe.grasp     = {subject} touches {?tool} on {ground}
group.Wipe.work      = they wipe {ground}
group.Wipe.leave     = {subject} leaves {?tool} on {ground}
group.Cut.fetch      = {subject} picks up {?tool} from {ground} and places it on {?object}
group.Cut.work       = they perform cutting across {?object} on {ground}
group.Cut.leave      = {subject} leaves {?tool} on {ground}
group.Saw.fetch      = {subject} picks up {?tool} from {ground} and places it on {?object}
group.Saw.work       = they perform sawing on the top of {?object} on {ground}
group.Saw.leave      = {subject} leaves {?tool} on {ground}
group.Hammer.fetch   = {subject} picks up {?tool} from {ground}
group.Hammer.work    = they strike {?object} on {ground}
group.Hammer.leave   = {subject} leaves {?tool} on {ground}
group.Screw.fetch    = {subject} picks up {?tool} from {ground} and places it on {?object}
group.Screw.work     = they perform screwing in the inside of {?object} on {ground}
group.Screw.leave    = {subject} leaves {?tool} on {ground}
)";
  return text;
}

}  // namespace manipsem
