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

#ifndef MANIPSEM_EVALKIT_HPP_
#define MANIPSEM_EVALKIT_HPP_

#include "manipsem/relations.hpp"
#include "manipsem/synth.hpp"
#include "manipsem/trace.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manipsem {

struct BleuScore {
  int n = 4;                       // orders used (capped by candidate length)
  std::vector<double> precisions;  // modified precision per order 1..n
  double brevity_penalty = 1.0;
  double score = 0.0;
  bool empty_candidate = false;
};

/// Lower-cased words; punctuation dropped.
std::vector<std::string> bleu_tokens(std::string_view sentence);

/// Clipped n-gram precision, geometric mean over orders 1..max_n, brevity
/// penalty exp(1 - r/c) when the candidate is shorter than the closest
/// reference. Smoothing adds one to orders >= 2. An empty candidate scores 0
/// and is flagged.
BleuScore bleu(std::span<const std::string> candidate,
               const std::vector<std::vector<std::string>>& references, int max_n = 4,
               bool smoothing = false);

struct LabeledTrace {
  SceneTrace trace;
  std::vector<RelationSample> labels;
};

struct ModelAccuracy {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::map<SsrLabel, std::map<SsrLabel, std::size_t>> confusion;  // truth -> predicted -> n
  std::map<SsrLabel, std::size_t> emitted;                        // predicted -> n

  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
  /// Some true instance of `label` was recognised as such.
  bool distinguishes(SsrLabel label) const;
};

struct AccuracyReport {
  std::size_t pairs = 0;
  ModelAccuracy hull;
  ModelAccuracy aabb;

  /// Labels only the containment and crossing calculus can express.
  static const std::vector<SsrLabel>& hull_only_labels();

  std::string to_csv() const;
  std::string to_json() const;
};

class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Both shape models on every labelled pair whose frame is a multiple of
/// `stride`. Traces are split over `threads` workers (0: hardware).
AccuracyReport compare_models(const std::vector<LabeledTrace>& corpus, const RelationConfig& cfg = {},
                              int stride = 10, unsigned threads = 0);

struct CorpusSpec {
  int scenes = 500;
  std::uint64_t seed = 2024;
};

/// Labelled two-box scenes cycling through all relation labels.
std::vector<LabeledTrace> generate_corpus(const CorpusSpec& spec = {});

/// scene_NNNN.trace and scene_NNNN.labels pairs.
void write_corpus(const std::string& dir, const std::vector<LabeledTrace>& corpus);
std::vector<LabeledTrace> load_corpus(const std::string& dir);  // EmptyCorpus

/// "frame,a,b,label" lines with a header.
void write_labels(std::ostream& out, const std::vector<RelationSample>& labels);
std::vector<RelationSample> load_labels(std::istream& in);

}  // namespace manipsem

#endif  // MANIPSEM_EVALKIT_HPP_
