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

// manipsem: relations, descriptions, parsing and benchmarks from the shell.
//
// Exit codes: 0 ok, 1 usage or config error, 2 malformed input, 3 schema
// error, 4 level unavailable, 5 empty corpus, 6 no parse.

#include "manipsem/evalkit.hpp"
#include "manipsem/events.hpp"
#include "manipsem/grammar.hpp"
#include "manipsem/realizer.hpp"
#include "manipsem/synth.hpp"
#include "manipsem/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace ms = manipsem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMalformed = 2, kSchema = 3, kNoLevel = 4, kNoCorpus = 5, kNoParse = 6 };

struct Failure {
  int code;
  std::string message;
};

struct RunConfig {
  ms::EventConfig events;
  std::string library;
  std::string templates;
  std::optional<int> level;
  std::string hand = "both";
  std::string format = "text";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kUsage, "cannot open config " + path};
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{kUsage, path + ":" + std::to_string(n) + ": expected key = value"};
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply(RunConfig& rc, const std::string& key, const std::string& value) {
  auto number = [&]() {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw Failure{kUsage, "config key '" + key + "' needs a number, got '" + value + "'"};
    }
  };
  auto integer = [&]() {
    const double v = number();
    if (v != std::floor(v)) throw Failure{kUsage, "config key '" + key + "' needs an integer"};
    return static_cast<int>(v);
  };
  auto& rel = rc.events.rel;
  if (key == "touch") rel.tol.touch = number();
  else if (key == "boundary") rel.tol.boundary = number();
  else if (key == "geom") rel.tol.geom = number();
  else if (key == "theta_near") rel.theta_near = number();
  else if (key == "delta_move") rel.delta_move = number();
  else if (key == "delta_rel") rel.delta_rel = number();
  else if (key == "window") rel.window = integer();
  else if (key == "debounce") rc.events.debounce = integer();
  else if (key == "grasp_speed") rc.events.grasp_speed = number();
  else if (key == "library") rc.library = value;
  else if (key == "templates") rc.templates = value;
  else if (key == "level") rc.level = integer();
  else if (key == "hand") rc.hand = value;
  else if (key == "format") rc.format = value;
  else if (key == "seed") {
    rc.seed = static_cast<std::uint64_t>(integer());
    rc.seed_set = true;
  } else {
    throw Failure{kUsage, "unknown config key '" + key + "'"};
  }
}

void check(const RunConfig& rc) {
  try {
    rc.events.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, std::string("config: ") + e.what()};
  }
  if (rc.hand != "left" && rc.hand != "right" && rc.hand != "both") {
    throw Failure{kUsage, "hand must be left, right or both"};
  }
  if (rc.format != "text" && rc.format != "records") {
    throw Failure{kUsage, "format must be text or records"};
  }
}

ms::SceneTrace read_trace(const std::string& path) {
  try {
    if (path == "-") return ms::load_trace(std::cin, "stdin");
    return ms::load_trace_file(path);
  } catch (const ms::ParseError& e) {
    throw Failure{kMalformed, path + ": " + e.what()};
  } catch (const ms::SchemaError& e) {
    throw Failure{kSchema, path + ": " + e.what()};
  } catch (const ms::MonotonicityError& e) {
    throw Failure{kSchema, path + ": " + e.what()};
  } catch (const std::runtime_error& e) {
    throw Failure{kMalformed, e.what()};
  }
}

const ms::MappingLibrary& library(const RunConfig& rc) {
  static std::optional<ms::MappingLibrary> custom;
  if (rc.library.empty()) return ms::MappingLibrary::shipped();
  if (!custom) {
    try {
      custom = ms::load_mapping_library_file(rc.library);
    } catch (const ms::PatternParseError& e) {
      throw Failure{kMalformed, rc.library + ": " + e.what()};
    } catch (const std::exception& e) {
      throw Failure{kUsage, rc.library + ": " + e.what()};
    }
  }
  return *custom;
}

const ms::TemplateSet& templates(const RunConfig& rc) {
  static std::optional<ms::TemplateSet> custom;
  if (rc.templates.empty()) return ms::TemplateSet::shipped();
  if (!custom) {
    std::ifstream in(rc.templates);
    if (!in) throw Failure{kUsage, "cannot open templates " + rc.templates};
    try {
      custom = ms::TemplateSet::parse(in);
    } catch (const ms::TemplateParseError& e) {
      throw Failure{kMalformed, rc.templates + ": " + e.what()};
    }
  }
  return *custom;
}

std::ostream& out() { return std::cout; }

// ---- relations ----------------------------------------------------------

int cmd_relations(const RunConfig& rc, const std::string& path, int stride) {
  if (stride < 1) throw Failure{kUsage, "stride must be >= 1"};
  const auto trace = read_trace(path);
  const auto& cfg = rc.events.rel;
  const int n = static_cast<int>(trace.frames.size());
  std::vector<std::vector<ms::ObjectShape>> shapes(n);
  std::vector<ms::TouchGraph> touch(n);
  for (int f = 0; f < n; ++f) {
    for (const auto& o : trace.frames[f].objects) shapes[f].push_back(o.shape(cfg.tol));
    std::vector<std::string> ids;
    for (const auto& o : trace.frames[f].objects) ids.push_back(o.id);
    touch[f] = ms::touch_graph(ids, shapes[f], cfg.tol);
  }
  auto index_of = [&](int f, const std::string& id) -> int {
    const auto& objs = trace.frames[f].objects;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (objs[i].id == id) return static_cast<int>(i);
    }
    return -1;
  };
  if (rc.format == "text") out() << "frame\ta\tb\tssr\tdsr\n";
  for (int f = 0; f < n; f += stride) {
    const auto& objs = trace.frames[f].objects;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      for (std::size_t j = i + 1; j < objs.size(); ++j) {
        const auto ssr = ms::classify_ssr(shapes[f][i], shapes[f][j], cfg);
        std::string dsr = "-";
        const int w = cfg.window;
        if (f >= w - 1) {
          std::vector<ms::Point3> ta, tb;
          std::vector<char> flags;
          const auto edge = ms::make_edge(objs[i].id, objs[j].id);
          for (int g = f - w + 1; g <= f; ++g) {
            const int a = index_of(g, objs[i].id);
            const int b = index_of(g, objs[j].id);
            if (a < 0 || b < 0) break;
            ta.push_back(shapes[g][a].centroid());
            tb.push_back(shapes[g][b].centroid());
            flags.push_back(touch[g].count(edge) ? 1 : 0);
          }
          if (static_cast<int>(ta.size()) == w) {
            std::vector<bool> t(flags.begin(), flags.end());
            std::unique_ptr<bool[]> buf(new bool[t.size()]);
            for (std::size_t k = 0; k < t.size(); ++k) buf[k] = t[k];
            dsr = std::string(ms::to_string(ms::classify_dsr(ta, tb, {buf.get(), t.size()}, cfg)));
          }
        }
        if (rc.format == "text") {
          out() << f << '\t' << objs[i].id << '\t' << objs[j].id << '\t' << ms::to_string(ssr) << '\t'
                << dsr << '\n';
        } else {
          nlohmann::ordered_json row{{"frame", f},
                                     {"a", objs[i].id},
                                     {"b", objs[j].id},
                                     {"ssr", std::string(ms::to_string(ssr))},
                                     {"dsr", dsr}};
          out() << row.dump() << '\n';
        }
      }
    }
  }
  return kOk;
}

// ---- describe -----------------------------------------------------------

std::string section_name(int level) {
  if (level == ms::kAtomicLevel) return "Detailed sentences";
  if (level == ms::kGroupLevel) return "Multiple sentences";
  return "One sentence";
}

int cmd_describe(const RunConfig& rc, const std::string& path, bool all_levels) {
  const auto trace = read_trace(path);
  const auto ex = ms::extract_atomic_actions(trace, rc.events);
  const auto& lib = library(rc);
  const auto& ts = templates(rc);
  try {
    ts.validate(lib);
  } catch (const ms::MissingTemplate& e) {
    throw Failure{kUsage, std::string("templates: ") + e.what()};
  }
  std::vector<ms::Side> sides;
  if (rc.hand != "right") sides.push_back(ms::Side::Left);
  if (rc.hand != "left") sides.push_back(ms::Side::Right);
  std::vector<ms::HandReport> reports;
  std::set<int> levels;
  for (auto side : sides) {
    reports.push_back(ms::analyze_hand(ex, side, lib));
    const auto l = reports.back().levels();
    levels.insert(l.begin(), l.end());
  }
  std::vector<int> chosen;
  if (all_levels || !rc.level) {
    chosen.assign(levels.begin(), levels.end());
    if (!all_levels) chosen = {*levels.rbegin()};
  } else if (levels.count(*rc.level)) {
    chosen = {*rc.level};
  } else {
    std::string avail;
    for (int l : levels) avail += (avail.empty() ? "" : ", ") + std::to_string(l);
    throw Failure{kNoLevel, "level " + std::to_string(*rc.level) + " is not available; available: " + avail};
  }
  if (rc.format == "text") out() << "Trace " << trace.id << " (" << ex.frame_count << " frames)\n";
  for (int k : chosen) {
    if (rc.format == "text") out() << section_name(k) << ":\n";
    for (std::size_t h = 0; h < sides.size(); ++h) {
      const auto naming = ms::Naming::of(ex, sides[h]);
      const auto d = ms::describe_hand(reports[h], k, naming, ts);
      const std::string hand(sides[h] == ms::Side::Left ? "left" : "right");
      if (rc.format == "text") out() << "  For " << hand << " hand:\n";
      for (const auto& s : d.sentences) {
        if (rc.format == "text") {
          out() << "    (" << s.start << "-" << s.end << ") " << s.text << '\n';
        } else {
          nlohmann::ordered_json j{{"hand", hand},  {"level", k},         {"start", s.start},
                                   {"end", s.end}, {"text", s.text}, {"dominant", reports[h].dominant}};
          out() << j.dump() << '\n';
        }
      }
    }
  }
  return kOk;
}

// ---- parse --------------------------------------------------------------

void print_tree(const ms::ParseTree& t, int depth) {
  out() << std::string(2 * depth, ' ') << t.symbol << '\n';
  for (const auto& c : t.children) print_tree(c, depth + 1);
}

int cmd_parse(const RunConfig& rc, const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw Failure{kUsage, "cannot open " + path};
    std::ostringstream ss;
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      ss << line << '\n';
    }
    text = ss.str();
  }
  const auto tokens = ms::split_tokens(text);
  try {
    const auto tree = ms::parse(tokens);
    if (rc.format == "text") {
      print_tree(tree, 0);
    } else {
      out() << nlohmann::ordered_json{{"tree", tree.bracketed()}}.dump() << '\n';
    }
  } catch (const ms::NoParse& e) {
    if (rc.format == "records") {
      out() << nlohmann::ordered_json{{"error", "no parse"}, {"offset", e.position()}}.dump() << '\n';
    }
    throw Failure{kNoParse, "no parse at token " + std::to_string(e.position()) + ": " + e.what()};
  }
  return kOk;
}

// ---- bench --------------------------------------------------------------

int cmd_bench(const RunConfig& rc, const std::string& dir, const std::string& csv,
              const std::string& json, unsigned threads) {
  std::vector<ms::LabeledTrace> corpus;
  try {
    corpus = ms::load_corpus(dir);
  } catch (const ms::EmptyCorpus& e) {
    throw Failure{kNoCorpus, e.what()};
  } catch (const ms::ParseError& e) {
    throw Failure{kMalformed, e.what()};
  } catch (const ms::SchemaError& e) {
    throw Failure{kSchema, e.what()};
  }
  const auto report = ms::compare_models(corpus, rc.events.rel, 10, threads);
  if (!csv.empty()) {
    std::ofstream f(csv);
    f << report.to_csv();
  }
  if (!json.empty()) {
    std::ofstream f(json);
    f << report.to_json() << '\n';
  }
  if (rc.format == "records") {
    out() << report.to_json() << '\n';
    return kOk;
  }
  char line[160];
  out() << "traces " << corpus.size() << ", labelled pairs " << report.pairs << '\n';
  std::snprintf(line, sizeof line, "hull accuracy %.4f (%zu/%zu)\n", report.hull.accuracy(),
                report.hull.correct, report.hull.total);
  out() << line;
  std::snprintf(line, sizeof line, "aabb accuracy %.4f (%zu/%zu)\n", report.aabb.accuracy(),
                report.aabb.correct, report.aabb.total);
  out() << line;
  out() << "label  hull  aabb\n";
  for (ms::SsrLabel l : ms::AccuracyReport::hull_only_labels()) {
    out() << ms::to_string(l) << (ms::to_string(l).size() < 3 ? "    " : "   ")
          << (report.hull.distinguishes(l) ? "yes" : "no ") << "   "
          << (report.aabb.distinguishes(l) ? "yes" : "no") << '\n';
  }
  return kOk;
}

// ---- generate -----------------------------------------------------------

void round_trace(ms::SceneTrace& t, int decimals) {
  if (decimals < 0) return;
  const double scale = std::pow(10.0, decimals);
  auto r = [&](ms::Point3& p) {
    for (int k = 0; k < 3; ++k) p[k] = std::round(p[k] * scale) / scale;
  };
  for (auto& f : t.frames) {
    for (auto& o : f.objects) {
      for (auto& p : o.points) r(p);
      if (o.box) {
        r(o.box->min_corner);
        r(o.box->max_corner);
      }
    }
  }
}

int cmd_generate(const RunConfig& rc, const std::string& scenario, const std::string& output,
                 const std::string& corpus_dir, int scenes, double noise, int frames,
                 bool companion, int extra, int points, int decimals, const std::string& labels) {
  if (!corpus_dir.empty()) {
    ms::CorpusSpec spec;
    spec.scenes = scenes;
    if (rc.seed_set) spec.seed = rc.seed;
    ms::write_corpus(corpus_dir, ms::generate_corpus(spec));
    std::cerr << "wrote " << scenes << " scenes to " << corpus_dir << '\n';
    return kOk;
  }
  if (scenario.empty()) throw Failure{kUsage, "generate needs a scenario or --corpus"};
  ms::ScenarioSpec spec{scenario, noise, frames, rc.seed, companion, extra, points};
  ms::SyntheticTrace syn;
  try {
    syn = ms::generate_synthetic_trace(spec);
  } catch (const ms::UnknownScenario& e) {
    throw Failure{kUsage, e.what()};
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  round_trace(syn.trace, decimals);
  if (output.empty() || output == "-") {
    ms::write_trace(std::cout, syn.trace);
  } else {
    std::ofstream f(output);
    if (!f) throw Failure{kUsage, "cannot write " + output};
    ms::write_trace(f, syn.trace);
  }
  if (!labels.empty()) {
    std::ofstream f(labels);
    ms::write_labels(f, syn.relations);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial relations, atomic actions and descriptions of manipulation traces."};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string format;
  app.add_option("--config", config_path, "key = value config file (fallback: MANIPSEM_CONFIG)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* format_opt = app.add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));

  // Tolerance overrides shared by the trace commands.
  std::map<std::string, double> overrides;
  auto tolerance_flags = [&](CLI::App* sub) {
    for (const char* key : {"touch", "boundary", "theta_near", "delta_move", "delta_rel", "grasp_speed"}) {
      sub->add_option_function<double>(std::string("--") + key,
                                       [&overrides, key](double v) { overrides[key] = v; },
                                       std::string("override ") + key);
    }
    for (const char* key : {"window", "debounce"}) {
      sub->add_option_function<int>(std::string("--") + key,
                                    [&overrides, key](int v) { overrides[key] = v; },
                                    std::string("override ") + key);
    }
  };

  std::string trace_path;
  int stride = 1;
  auto* rel = app.add_subcommand("relations", "Per-frame SSR and DSR table");
  rel->add_option("trace", trace_path, "trace file or -")->required();
  rel->add_option("--stride", stride, "frames between rows");
  tolerance_flags(rel);

  std::optional<int> level;
  bool all_levels = false;
  std::string hand;
  std::string library_path, templates_path;
  auto* desc = app.add_subcommand("describe", "Sentences per hand and level");
  desc->add_option("trace", trace_path, "trace file or -")->required();
  auto* level_opt = desc->add_option("--level", level, "granularity level (1..14)");
  desc->add_flag("--all-levels", all_levels, "every available level")->excludes(level_opt);
  desc->add_option("--hand", hand, "left, right or both");
  desc->add_option("--library", library_path, "action library file");
  desc->add_option("--templates", templates_path, "sentence template file");
  tolerance_flags(desc);

  std::string corpus_dir, csv_path, json_path;
  unsigned threads = 0;
  bool compare = true;
  auto* bench = app.add_subcommand("bench", "Hull versus AABB relation accuracy on a corpus");
  bench->add_option("corpus", corpus_dir, "directory of .trace/.labels pairs")->required();
  bench->add_flag("--compare", compare, "compare both shape models (default)");
  bench->add_option("--csv", csv_path, "write the confusion table");
  bench->add_option("--json", json_path, "write the report");
  bench->add_option("--threads", threads, "workers, 0 for all cores");
  tolerance_flags(bench);

  std::string tokens_path;
  auto* parse = app.add_subcommand("parse", "Parse atomic-action tokens");
  parse->add_option("tokens", tokens_path, "token file or -")->required();

  std::string scenario, output, gen_corpus, labels_path;
  int scenes = 500, frames = 0, extra = 0, points = 0, decimals = -1;
  double noise = 0.0;
  bool companion = false, list = false;
  auto* gen = app.add_subcommand("generate", "Synthetic traces and corpora");
  gen->add_option("scenario", scenario, "one of the scripted actions");
  gen->add_option("-o,--output", output, "trace file (default stdout)");
  gen->add_option("--corpus", gen_corpus, "write a labelled relation corpus here");
  gen->add_option("--scenes", scenes, "corpus size")->check(CLI::NonNegativeNumber);
  gen->add_option("--noise", noise, "coordinate jitter, m")->check(CLI::NonNegativeNumber);
  gen->add_option("--frames", frames, "minimum frame count");
  gen->add_flag("--companion", companion, "right hand performs a second action");
  gen->add_option("--extra", extra, "static distractor objects");
  gen->add_option("--points", points, "points per object (0 or >= 8)");
  gen->add_option("--decimals", decimals, "round coordinates");
  gen->add_option("--labels", labels_path, "write sampled relation labels");
  gen->add_flag("--list", list, "print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig rc;
    if (config_path.empty()) {
      if (const char* env = std::getenv("MANIPSEM_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_config_file(config_path)) apply(rc, k, v);
    }
    for (const auto& [k, v] : overrides) {
      std::ostringstream ss;
      ss.precision(17);
      ss << v;
      apply(rc, k, ss.str());
    }
    if (*seed_opt) {
      rc.seed = seed;
      rc.seed_set = true;
    }
    if (*format_opt) rc.format = format;
    if (!hand.empty()) rc.hand = hand;
    if (!library_path.empty()) rc.library = library_path;
    if (!templates_path.empty()) rc.templates = templates_path;
    if (level) rc.level = level;
    check(rc);
    if (rc.level && (*rc.level < 1 || *rc.level > ms::kMaxLevel) && !*desc) {
      throw Failure{kUsage, "level must be in 1..14"};
    }

    if (*rel) return cmd_relations(rc, trace_path, stride);
    if (*desc) return cmd_describe(rc, trace_path, all_levels);
    if (*bench) return cmd_bench(rc, corpus_dir, csv_path, json_path, threads);
    if (*parse) return cmd_parse(rc, tokens_path);
    if (*gen) {
      if (list) {
        for (const auto& n : ms::scenario_names()) std::cout << n << '\n';
        return kOk;
      }
      return cmd_generate(rc, scenario, output, gen_corpus, scenes, noise, frames, companion, extra,
                          points, decimals, labels_path);
    }
  } catch (const Failure& f) {
    std::cerr << "manipsem: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "manipsem: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
