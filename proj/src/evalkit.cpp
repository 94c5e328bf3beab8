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

#include "manipsem/evalkit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace manipsem {

namespace fs = std::filesystem;

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngrams(std::span<const std::string> tokens, int n) {
  Counts out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

void tally(ModelAccuracy& m, SsrLabel truth, SsrLabel predicted) {
  ++m.total;
  if (truth == predicted) ++m.correct;
  ++m.confusion[truth][predicted];
  ++m.emitted[predicted];
}

void merge(ModelAccuracy& into, const ModelAccuracy& from) {
  into.total += from.total;
  into.correct += from.correct;
  for (const auto& [t, row] : from.confusion) {
    for (const auto& [p, n] : row) into.confusion[t][p] += n;
  }
  for (const auto& [p, n] : from.emitted) into.emitted[p] += n;
}

void evaluate(const LabeledTrace& lt, const RelationConfig& cfg, int stride, AccuracyReport& out) {
  for (const auto& s : lt.labels) {
    if (s.frame % stride != 0) continue;
    if (s.frame < 0 || s.frame >= static_cast<int>(lt.trace.frames.size())) {
      throw std::out_of_range("label frame " + std::to_string(s.frame) + " outside the trace");
    }
    const Frame& f = lt.trace.frames[s.frame];
    const ObjectInstance* a = nullptr;
    const ObjectInstance* b = nullptr;
    for (const auto& o : f.objects) {
      if (o.id == s.a) a = &o;
      if (o.id == s.b) b = &o;
    }
    if (!a || !b) throw std::out_of_range("labelled pair " + s.a + "/" + s.b + " not in frame");
    const ObjectShape sa = a->shape(cfg.tol);
    const ObjectShape sb = b->shape(cfg.tol);
    ++out.pairs;
    tally(out.hull, s.label, classify_ssr(sa, sb, cfg, ShapeModel::Hull));
    tally(out.aabb, s.label, classify_ssr(sa, sb, cfg, ShapeModel::Aabb));
  }
}

SsrLabel parse_label(const std::string& text) {
  if (text == "NoRelation") return SsrLabel::NoRelation;
  if (auto l = parse_ssr(text)) return *l;
  throw std::invalid_argument("unknown relation label '" + text + "'");
}

}  // namespace

// ---- BLEU ---------------------------------------------------------------

std::vector<std::string> bleu_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : sentence) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'' || c == '_') {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

BleuScore bleu(std::span<const std::string> candidate,
               const std::vector<std::vector<std::string>>& references, int max_n, bool smoothing) {
  if (references.empty()) throw std::invalid_argument("bleu needs at least one reference");
  if (max_n < 1 || max_n > 4) throw std::invalid_argument("max_n must be in 1..4");
  BleuScore s;
  if (candidate.empty()) {
    s.n = 0;
    s.empty_candidate = true;
    return s;
  }
  s.n = std::min<int>(max_n, static_cast<int>(candidate.size()));
  double log_sum = 0.0;
  bool zero = false;
  for (int n = 1; n <= s.n; ++n) {
    const Counts cand = ngrams(candidate, n);
    Counts best;
    for (const auto& ref : references) {
      for (const auto& [g, c] : ngrams(ref, n)) best[g] = std::max(best[g], c);
    }
    std::size_t matched = 0;
    std::size_t total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      auto it = best.find(g);
      if (it != best.end()) matched += std::min(c, it->second);
    }
    double p = static_cast<double>(matched) / static_cast<double>(total);
    if (smoothing && n >= 2) p = (matched + 1.0) / (total + 1.0);
    s.precisions.push_back(p);
    if (p == 0.0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  // Closest reference length, the shorter one on ties.
  const double c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references.front().size());
  for (const auto& ref : references) {
    const double len = static_cast<double>(ref.size());
    if (std::abs(len - c) < std::abs(r - c) || (std::abs(len - c) == std::abs(r - c) && len < r)) {
      r = len;
    }
  }
  s.brevity_penalty = c < r ? std::exp(1.0 - r / c) : 1.0;
  s.score = zero ? 0.0 : s.brevity_penalty * std::exp(log_sum / s.n);
  return s;
}

// ---- model comparison ---------------------------------------------------

bool ModelAccuracy::distinguishes(SsrLabel label) const {
  auto row = confusion.find(label);
  if (row == confusion.end()) return false;
  auto hit = row->second.find(label);
  return hit != row->second.end() && hit->second > 0;
}

const std::vector<SsrLabel>& AccuracyReport::hull_only_labels() {
  static const std::vector<SsrLabel> labels = {SsrLabel::Cr, SsrLabel::Wi, SsrLabel::Pwi,
                                               SsrLabel::Co, SsrLabel::Pco};
  return labels;
}

std::string AccuracyReport::to_csv() const {
  std::ostringstream out;
  out << "model,truth,predicted,count\n";
  for (const auto& [name, m] : {std::pair<const char*, const ModelAccuracy*>{"hull", &hull},
                                {"aabb", &aabb}}) {
    for (const auto& [t, row] : m->confusion) {
      for (const auto& [p, n] : row) {
        out << name << ',' << to_string(t) << ',' << to_string(p) << ',' << n << '\n';
      }
    }
  }
  return out.str();
}

std::string AccuracyReport::to_json() const {
  nlohmann::ordered_json j;
  j["pairs"] = pairs;
  for (const auto& [name, m] : {std::pair<const char*, const ModelAccuracy*>{"hull", &hull},
                                {"aabb", &aabb}}) {
    nlohmann::ordered_json jm;
    jm["total"] = m->total;
    jm["correct"] = m->correct;
    jm["accuracy"] = m->accuracy();
    nlohmann::ordered_json dist;
    for (SsrLabel l : hull_only_labels()) dist[std::string(to_string(l))] = m->distinguishes(l);
    jm["distinguishes"] = dist;
    nlohmann::ordered_json emitted = nlohmann::ordered_json::object();
    for (const auto& [p, n] : m->emitted) emitted[std::string(to_string(p))] = n;
    jm["emitted"] = emitted;
    j[name] = jm;
  }
  return j.dump();
}

AccuracyReport compare_models(const std::vector<LabeledTrace>& corpus, const RelationConfig& cfg,
                              int stride, unsigned threads) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  cfg.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, corpus.size()));
  std::vector<AccuracyReport> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < corpus.size(); i += threads) evaluate(corpus[i], cfg, stride, parts[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  AccuracyReport out;
  for (unsigned w = 0; w < threads; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
    out.pairs += parts[w].pairs;
    merge(out.hull, parts[w].hull);
    merge(out.aabb, parts[w].aabb);
  }
  return out;
}

// ---- corpus -------------------------------------------------------------

std::vector<LabeledTrace> generate_corpus(const CorpusSpec& spec) {
  if (spec.scenes < 0) throw std::invalid_argument("scene count must be >= 0");
  std::vector<LabeledTrace> out;
  out.reserve(spec.scenes);
  for (int i = 0; i < spec.scenes; ++i) {
    auto s = generate_relation_scene(i, spec.seed);
    char id[32];
    std::snprintf(id, sizeof id, "scene_%04d", i);
    s.trace.id = id;
    out.push_back({std::move(s.trace), std::move(s.relations)});
  }
  return out;
}

void write_labels(std::ostream& out, const std::vector<RelationSample>& labels) {
  out << "frame,a,b,label\n";
  for (const auto& s : labels) out << s.frame << ',' << s.a << ',' << s.b << ',' << to_string(s.label) << '\n';
}

std::vector<RelationSample> load_labels(std::istream& in) {
  std::vector<RelationSample> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (n == 1 && line.starts_with("frame"))) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 4) throw ParseError(n, "expected frame,a,b,label");
    RelationSample s;
    try {
      std::size_t used = 0;
      s.frame = std::stoi(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument(f[0]);
      s.label = parse_label(f[3]);
    } catch (const std::exception& e) {
      throw ParseError(n, std::string("bad label row: ") + e.what());
    }
    s.a = f[1];
    s.b = f[2];
    out.push_back(std::move(s));
  }
  return out;
}

void write_corpus(const std::string& dir, const std::vector<LabeledTrace>& corpus) {
  fs::create_directories(dir);
  for (const auto& lt : corpus) {
    std::ofstream t(fs::path(dir) / (lt.trace.id + ".trace"));
    write_trace(t, lt.trace);
    std::ofstream l(fs::path(dir) / (lt.trace.id + ".labels"));
    write_labels(l, lt.labels);
    if (!t || !l) throw std::runtime_error("cannot write corpus to " + dir);
  }
}

std::vector<LabeledTrace> load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw EmptyCorpus(dir + " is not a directory");
  std::vector<fs::path> traces;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".trace") traces.push_back(e.path());
  }
  std::sort(traces.begin(), traces.end());
  std::vector<LabeledTrace> out;
  for (const auto& p : traces) {
    fs::path labels = p;
    labels.replace_extension(".labels");
    if (!fs::exists(labels)) continue;
    std::ifstream t(p);
    std::ifstream l(labels);
    LabeledTrace lt{load_trace(t, p.stem().string()), load_labels(l)};
    out.push_back(std::move(lt));
  }
  if (out.empty()) throw EmptyCorpus("no labelled traces in " + dir);
  return out;
}

}  // namespace manipsem
