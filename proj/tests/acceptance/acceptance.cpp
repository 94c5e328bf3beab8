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

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.

#include "manipsem/evalkit.hpp"
#include "manipsem/grammar.hpp"
#include "manipsem/realizer.hpp"
#include "manipsem/synth.hpp"
#include "manipsem/trace.hpp"
#include "relation_catalogue.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace manipsem;
using namespace manipsem::testing;

namespace {

constexpr double kGeomTol = 1e-9;
constexpr int kOracleTrials = 10000;
constexpr double kOracleSeconds = 10.0;
constexpr int kHullClouds = 1000;
constexpr int kBindingTrials = 20;
constexpr int kMaxRepeats = 5;
constexpr int kClosureSeeds = 20;
constexpr double kNoise = 0.01;
constexpr double kNoisyRecovery = 0.90;
constexpr double kBleuTol = 1e-9;
constexpr double kPipelineSeconds = 5.0;
constexpr double kBenchSeconds = 60.0;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- 1 ---------------------------------------------------------------------

Outcome geometry_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> count(4, 20);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int agree = 0;
  int trials = 0;
  while (trials < kOracleTrials) {
    const auto hull = compute_convex_hull(random_cloud(rng, count(rng)), kGeomTol);
    const auto planes = supporting_planes(hull.vertices, kGeomTol);
    for (int i = 0; i < 50 && trials < kOracleTrials; ++i, ++trials) {
      Point3 p(u(rng), u(rng), u(rng));
      if (i % 5 == 0) p = hull.vertices[i % hull.vertices.size()];
      if (i % 7 == 0) p = 0.5 * (hull.vertices[0] + hull.vertices[hull.vertices.size() - 1]);
      if (classify_point(hull, p, kGeomTol) == classify_against(planes, p, kGeomTol)) ++agree;
    }
  }
  const double s = seconds_since(t0);
  return {agree == kOracleTrials && s < kOracleSeconds,
          fmt("%.0f/%.0f agree, %.2f s", agree, kOracleTrials, s)};
}

// ---- 2 ---------------------------------------------------------------------

bool closed_orientable(const ConvexHull& h) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : h.faces) {
    for (int i = 0; i < 3; ++i) ++directed[{f[i], f[(i + 1) % 3]}];
  }
  for (const auto& [edge, n] : directed) {
    if (n != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

Outcome hull_invariants() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> count(4, 50);
  int failures = 0;
  for (int trial = 0; trial < kHullClouds; ++trial) {
    const auto pts = random_cloud(rng, count(rng));
    bool ok = true;
    try {
      const auto hull = compute_convex_hull(pts, kGeomTol);
      const long v = static_cast<long>(hull.vertices.size());
      const long e = static_cast<long>(hull.edge_count());
      const long f = static_cast<long>(hull.faces.size());
      ok = v - e + f == 2 && closed_orientable(hull);
      for (const auto& p : pts) ok = ok && classify_point(hull, p) != RegionClass::Exterior;
      for (const auto& plane : hull.face_planes) {
        for (const auto& q : hull.vertices) ok = ok && plane.signed_distance(q) <= kGeomTol;
      }
      // Vertices are exactly the extreme points.
      const auto extreme = brute_force_hull_indices(pts, kGeomTol);
      ok = ok && extreme.size() == hull.vertices.size();
    } catch (const DegenerateCloud&) {
      ok = false;
    }
    if (!ok) ++failures;
  }
  return {failures == 0, fmt("%.0f clouds, %.0f failures", kHullClouds, failures)};
}

// ---- 3 ---------------------------------------------------------------------

Outcome relation_catalogue_check() {
  std::set<SsrLabel> hit;
  int correct = 0;
  int dual_fail = 0;
  const auto cat = relation_catalogue();
  std::vector<ObjectShape> shapes;
  for (const auto& e : cat) {
    const auto a = ObjectShape::from_cloud(e.a);
    const auto b = ObjectShape::from_cloud(e.b);
    if (classify_ssr(a, b) == e.expected) {
      ++correct;
      if (e.expected != SsrLabel::NoRelation) hit.insert(e.expected);
    }
    shapes.push_back(a);
    shapes.push_back(b);
  }
  // Duality over every ordered pair of catalogue shapes.
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = 0; j < shapes.size(); ++j) {
      if (i == j) continue;
      if (classify_ssr(shapes[i], shapes[j]) != ssr_dual(classify_ssr(shapes[j], shapes[i]))) ++dual_fail;
    }
  }
  const bool pass = hit.size() == 13 && correct == static_cast<int>(cat.size()) && dual_fail == 0;
  return {pass, fmt("%.0f/13 labels, %.0f duality failures over ordered pairs", hit.size(), dual_fail)};
}

// ---- 4 ---------------------------------------------------------------------

Outcome corpus_comparison() {
  const auto r = compare_models(generate_corpus());
  std::size_t forbidden = 0;
  for (SsrLabel l : AccuracyReport::hull_only_labels()) {
    auto it = r.aabb.emitted.find(l);
    if (it != r.aabb.emitted.end()) forbidden += it->second;
  }
  return {r.hull.accuracy() > r.aabb.accuracy() && forbidden == 0,
          fmt("hull %.3f vs aabb %.3f, aabb hull-only labels %.0f", r.hull.accuracy(),
              r.aabb.accuracy(), forbidden)};
}

// ---- 5 ---------------------------------------------------------------------

Bindings random_bindings(const LibraryEntry& e, std::mt19937_64& rng) {
  std::vector<std::string> objects = {"O1", "O2", "O3"};
  std::shuffle(objects.begin(), objects.end(), rng);
  Bindings b;
  std::size_t next = 0;
  for (const auto& v : e.object_variables()) b[v] = objects[next++];
  for (const auto& v : e.variables()) {
    if (b.count(v)) continue;
    std::vector<std::string> places = {"Ground", "Air"};
    for (std::size_t k = next; k < objects.size(); ++k) places.push_back(objects[k]);
    b[v] = places[rng() % places.size()];
  }
  return b;
}

Outcome grammar_round_trip() {
  const auto& lib = MappingLibrary::shipped();
  std::mt19937_64 rng(5);
  int total = 0;
  int ok = 0;
  for (const auto& e : lib.entries()) {
    for (int trial = 0; trial < kBindingTrials; ++trial) {
      for (int r = 1; r <= kMaxRepeats; ++r) {
        ++total;
        const Bindings b = random_bindings(e, rng);
        const auto aas = decompose(e.name, b, lib, r);
        const auto rec = recognize(aas, lib);
        if (e.steps.empty()) {
          ok += rec.empty() && dominant_action(rec) == e.name;
        } else {
          ok += rec.size() == 1 && rec[0].name == e.name && rec[0].bindings == b &&
                rec[0].first == 0 && rec[0].last == aas.size();
        }
      }
    }
  }
  // Push: touch, move the box with the hand, let go.
  const std::string push_tree =
      "(S (S_p (S_p (S_p (Sub (Hand Hand_L)) (A_p (A T) (O_p (O O1) (SR_p (SR ArT) (P Ground)))))"
      " (Sub (Me (Hand Hand_L) (O O1))) (A_p (A Fmt) (O_p (O G) (SR_p (SR To) (P Ground)))))"
      " (Sub (Hand Hand_L)) (A_p (A U) (O_p (O O1) (SR_p (SR Ar) (P Ground))))))";
  const bool push =
      parse(split_tokens("Hand_L T O1 ArT Ground Hand_L O1 Fmt G To Ground Hand_L U O1 Ar Ground"))
          .bracketed() == push_tree;
  return {ok == total && push,
          fmt("%.0f/%.0f round trips, push tree ", ok, total) + (push ? "matches" : "differs")};
}

// ---- 6 ---------------------------------------------------------------------

bool recovers(const ScenarioSpec& spec) {
  const auto syn = generate_synthetic_trace(spec);
  const auto ex = extract_atomic_actions(syn.trace, syn.config);
  for (int h = 0; h < 2; ++h) {
    if (dominant_action(recognize(to_symbolic(ex.hands[h], ex.ground_id))) != syn.action_names[h]) {
      return false;
    }
  }
  return true;
}

Outcome pipeline_closure() {
  int clean = 0;
  int noisy = 0;
  int total = 0;
  for (const auto& name : scenario_names()) {
    for (int seed = 0; seed < kClosureSeeds; ++seed) {
      ++total;
      clean += recovers({name, 0.0, 0, static_cast<std::uint64_t>(seed), seed % 2 == 1});
      noisy += recovers({name, kNoise, 0, static_cast<std::uint64_t>(seed), seed % 2 == 1});
    }
  }
  const double rate = static_cast<double>(noisy) / total;
  return {clean == total && rate >= kNoisyRecovery,
          fmt("noise-free %.0f/%.0f, noise 0.01 m %.3f", clean, total, rate)};
}

// ---- 7 ---------------------------------------------------------------------

Outcome description_goldens() {
  const std::map<std::string, std::string> want = {
      {"screwing.trace",
       "The left hand performs screwing inside of a hard disk on the table by a screwdriver."},
      {"wiping.trace", "The left hand wipes the table by a sponge."}};
  bool pass = true;
  std::string detail;
  for (const auto& [file, sentence] : want) {
    const auto trace = load_trace_file(std::string(FIXTURE_DIR) + "/" + file);
    const auto ex = extract_atomic_actions(trace);
    const auto rep = analyze_hand(ex, Side::Left);
    const auto naming = Naming::of(ex, Side::Left);
    const bool tiers = rep.levels() == std::set<int>{1, 2, 3};
    std::size_t aas = 0;
    for (const auto& s : rep.snippets) aas += s.actions.size();
    std::size_t detailed = 0;
    for (const auto& s : describe_hand(rep, 1, naming).sentences) detailed += s.text != "Idle.";
    bool top = false;
    for (const auto& s : describe_hand(rep, 3, naming).sentences) top = top || s.text == sentence;
    const bool ok = tiers && top && detailed == aas && aas > 0;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + file + (ok ? " ok" : " differs") + " (" +
              std::to_string(aas) + " AAs)";
  }
  return {pass, detail};
}

// ---- 8 ---------------------------------------------------------------------

Outcome bleu_checks() {
  const auto ref = bleu_tokens("The left hand wipes the table by a sponge.");
  const double self = bleu(ref, {ref}).score;
  const auto clipped = bleu(bleu_tokens("the the the the"), {bleu_tokens("the cat sat")}, 1);
  const double p1 = clipped.precisions.at(0);
  const double disjoint = bleu(bleu_tokens("dog runs fast"), {bleu_tokens("the cat sat")}).score;
  return {self == 1.0 && std::abs(p1 - 0.25) <= kBleuTol && disjoint == 0.0,
          fmt("self %.3f, clipped p1 %.6f, disjoint %.3f", self, p1, disjoint)};
}

// ---- 9 ---------------------------------------------------------------------

Outcome performance() {
  // Table, two hands, screwdriver, hard disk and one distractor.
  ScenarioSpec spec{"Screw", 0.0, 1000, 3, true, 1, 60};
  const auto syn = generate_synthetic_trace(spec);
  std::ostringstream text;
  write_trace(text, syn.trace);
  const std::string serialized = text.str();

  const auto t0 = std::chrono::steady_clock::now();
  std::istringstream in(serialized);
  const auto trace = load_trace(in, "perf");
  const auto ex = extract_atomic_actions(trace, syn.config);
  std::size_t sentences = 0;
  for (Side side : {Side::Left, Side::Right}) {
    const auto rep = analyze_hand(ex, side);
    sentences += describe_hand(rep, 1, Naming::of(ex, side)).sentences.size();
    sentences += describe_hand(rep, *rep.levels().rbegin(), Naming::of(ex, side)).sentences.size();
  }
  const double pipeline = seconds_since(t0);
  const std::size_t objects = trace.frames.front().objects.size();

  const auto dir = std::filesystem::temp_directory_path() / "manipsem_acceptance_corpus";
  std::filesystem::remove_all(dir);
  write_corpus(dir.string(), generate_corpus());
  const auto t1 = std::chrono::steady_clock::now();
  const auto report = compare_models(load_corpus(dir.string()));
  const double bench = seconds_since(t1);
  std::filesystem::remove_all(dir);

  const bool shape = trace.frames.size() >= 1000 && objects == 6;
  return {shape && sentences > 0 && pipeline < kPipelineSeconds && bench < kBenchSeconds &&
              report.pairs > 0,
          fmt("pipeline %.2f s on %.0f frames", pipeline, trace.frames.size()) +
              fmt(" x %.0f objects, bench %.2f s", objects, bench)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometry oracle", geometry_oracle},
      {"hull invariants", hull_invariants},
      {"relation catalogue and duality", relation_catalogue_check},
      {"hull versus AABB on the corpus", corpus_comparison},
      {"grammar round trip and push tree", grammar_round_trip},
      {"pipeline closure", pipeline_closure},
      {"description goldens", description_goldens},
      {"BLEU", bleu_checks},
      {"performance", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
