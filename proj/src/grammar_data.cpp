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

namespace manipsem {

// Step lines: subject primitive object relation place.
// Subject is Hand or Me(?x); "+" after Mt/Fmt marks a run; "a|b" lists
// alternatives; G is the ground as an object, Ground and Air are places.
const std::string& default_library_text() {
  static const std::string text = R"(# Default library of action mappings, one hand per entry.

action Idle
hands 1
end

action Approach
hands 1
group reach
  Hand  T  ?object  ArT  ?place
end

action Retreat
hands 1
group touch
  Hand  T  ?object  ArT  ?place
group leave
  Hand  U  ?object  Ar  ?place
end

action Hold
hands 1
group hold
  Hand  T  ?object  To  ?place
end

action Lift
hands 1
group grasp
  Hand        T    ?object  To|ArT  Ground
group lift
  Me(?object) U    G  Ab  Ground
  Me(?object) Mt+  G  Ab  Air
end

action Place
hands 1
group move
  Hand        T    ?object  To  Ground
  Me(?object) U    G  Ab  Ground
  Me(?object) Mt+  G  Ab  Air
  Me(?object) T    G  To  Ground
group leave
  Hand        U    ?object  Ab  Ground
end

action Drink
hands 1
group raise
  Hand        T    ?cup  ArT  Ground
  Me(?cup)    U    G  Ab  Ground
  Me(?cup)    Mt+  G  Ab  Air
group lower
  Me(?cup)    T    G  To  Ground
  Hand        U    ?cup  Ar  Ground
end

action Pour
hands 1
group fetch
  Hand        T    ?source  ArT  Ground
  Me(?source) U    G  Ab  Ground
  Me(?source) Mt+  G  Ab  Air
  Me(?source) T    ?target  ArT  Ground
group work
  Me(?source) Fmt+ ?target  ArT  Ground
group leave
  Me(?source) U    ?target  Ar  Ground
  Me(?source) Mt+  G  Ab  Air
  Me(?source) T    G  To  Ground
  Hand        U    ?source  Ar  Ground
end

action Stir
hands 1
group grasp
  Hand        T    ?tool  To  ?container
group work
  Me(?tool)   Fmt+ ?container  Pwi  Ground
group leave
  Hand        U    ?tool  Ab  ?container
end

action Wipe
hands 1
group grasp
  Hand        T    ?tool  To  Ground
group work
  Me(?tool)   Fmt+ G  To  Ground
group leave
  Hand        U    ?tool  Ab  Ground
end

action Cut
hands 1
group fetch
  Hand        T    ?tool  To  Ground
  Me(?tool)   U    G  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    ?object  To  Ground
group work
  Me(?tool)   Fmt+ ?object  Cr  Ground
group leave
  Me(?tool)   U    ?object  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    G  To  Ground
  Hand        U    ?tool  Ab  Ground
end

action Saw
hands 1
group fetch
  Hand        T    ?tool  To  Ground
  Me(?tool)   U    G  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    ?object  To  Ground
group work
  Me(?tool)   Fmt+ ?object  To  Ground
group leave
  Me(?tool)   U    ?object  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    G  To  Ground
  Hand        U    ?tool  Ab  Ground
end

action Hammer
hands 1
group fetch
  Hand        T    ?tool  To  Ground
  Me(?tool)   U    G  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
group work
  Me(?tool)   T    ?object  To  Ground
  Me(?tool)   U    ?object  Ab  Ground
  Me(?tool)   T    ?object  To  Ground
  Me(?tool)   U    ?object  Ab  Ground
group leave
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    G  To  Ground
  Hand        U    ?tool  Ab  Ground
end

action Screw
hands 1
group fetch
  Hand        T    ?tool  To  Ground
  Me(?tool)   U    G  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    ?object  To  Ground
group work
  Me(?tool)   Fmt+ ?object  Pwi  Ground
group leave
  Me(?tool)   U    ?object  Ab  Ground
  Me(?tool)   Mt+  G  Ab  Air
  Me(?tool)   T    G  To  Ground
  Hand        U    ?tool  Ab  Ground
end
)";
  return text;
}

// Constraint table over quintuple kinds.
//   primitive P REL...   relations an AA with primitive P may carry
//   subject S PRIM...    primitives open to a bare hand (Hand) or a merged entity (Me)
//   ground relations / ground places: limits when the object is the ground G
//   place-differs-from-object, carried-differs-from-object
const std::string& constraint_table_text() {
  static const std::string text = R"(# Quintuple validity rules.
primitive T   To Bo ArT Cr Wi Pwi Co Pco In Su
primitive U   Ab Be Ar To Bo ArT
primitive Mt  Ab Be To Bo Ar ArT Cr Wi Pwi Co Pco In Su
primitive Fmt Ab Be To Bo Ar ArT Cr Wi Pwi Co Pco In Su
subject Hand T U Fmt
subject Me   T U Mt Fmt
ground relations Ab To Ar ArT Cr Wi Pwi In
ground places Ground Air
place-differs-from-object
carried-differs-from-object
)";
  return text;
}

}  // namespace manipsem
