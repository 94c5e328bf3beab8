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

// Runs the manipsem binary and checks output and exit codes.

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " MANIPSEM_CLI " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "manipsem_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("describe the screwing fixture") {
  const auto r = run("describe " + fixture("screwing.trace"));
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "One sentence:"));
  CHECK(contains(r.out,
                 ") The left hand performs screwing inside of a hard disk on the table by a screwdriver.\n"));
  CHECK(contains(r.out, ") The right hand holds a hard disk and then lets go.\n"));
  CHECK_FALSE(contains(r.out, "Detailed sentences:"));

  const auto all = run("describe --all-levels " + fixture("screwing.trace"));
  REQUIRE(all.code == 0);
  const auto d = all.out.find("Detailed sentences:");
  const auto m = all.out.find("Multiple sentences:");
  const auto o = all.out.find("One sentence:");
  CHECK(d < m);
  CHECK(m < o);
  CHECK(contains(all.out, "The left hand picks up a screwdriver from the table and places it on a hard disk."));
}

TEST_CASE("describe the wiping fixture as records") {
  const auto r = run("--format records describe --hand left " + fixture("wiping.trace"));
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  int next = 0;
  bool wipe = false;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["hand"] == "left");
    CHECK(j["start"] == next);
    next = j["end"].get<int>() + 1;
    wipe = wipe || j["text"] == "The left hand wipes the table by a sponge.";
    ++n;
  }
  CHECK(n == 3);
  CHECK(wipe);
}

TEST_CASE("unavailable level") {
  const auto r = run("describe --level 99 " + fixture("screwing.trace"));
  CHECK(r.code == 4);
  // The right hand of the screwing scene has no separate group tier.
  CHECK(run("describe --hand right --level 2 " + fixture("screwing.trace")).code == 4);
  CHECK(run("describe --level 1 " + fixture("wiping.trace")).code == 0);
}

TEST_CASE("relations table") {
  const auto r = run("relations --stride 50 " + fixture("wiping.trace"));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("frame\ta\tb\tssr\tdsr\n", 0) == 0);
  CHECK(contains(r.out, "0\ttable\tsponge\tBo\t-\n"));
  const auto rec = run("--format records relations --stride 100 " + fixture("wiping.trace"));
  REQUIRE(rec.code == 0);
  std::istringstream lines(rec.out);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["frame"].get<int>() % 100 == 0);
  }
}

TEST_CASE("malformed and invalid traces") {
  const auto bad = scratch("bad.trace");
  write(bad, "not json\n");
  CHECK(run("relations " + bad.string()).code == 2);
  CHECK(run("describe " + bad.string()).code == 2);
  const auto empty = scratch("empty.trace");
  write(empty, "");
  const auto none = run("relations " + empty.string());
  CHECK(none.code == 0);
  CHECK(none.out == "frame\ta\tb\tssr\tdsr\n");
  CHECK(run("relations " + scratch("missing.trace").string()).code != 0);
}

TEST_CASE("parse token files") {
  const auto r = run("parse " + fixture("push.tokens"));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("S\n", 0) == 0);
  CHECK(contains(r.out, "      Fmt\n"));
  const auto rec = run("--format records parse " + fixture("push.tokens"));
  CHECK(nlohmann::json::parse(rec.out)["tree"].get<std::string>().rfind("(S", 0) == 0);
  const auto cut = scratch("cut.tokens");
  write(cut, "Hand_L T O1 ArT Ground Hand_L T\n");
  CHECK(run("parse " + cut.string()).code == 6);
  const auto j = nlohmann::json::parse(run("--format records parse " + cut.string()).out);
  CHECK(j["offset"] == 7);
}

TEST_CASE("config files and precedence") {
  const auto bad_key = scratch("bad.cfg");
  write(bad_key, "touch = 0.01\nwobble = 3\n");
  CHECK(run("--config " + bad_key.string() + " parse " + fixture("push.tokens")).code == 1);
  const auto bad_value = scratch("range.cfg");
  write(bad_value, "touch = -1\n");
  CHECK(run("--config " + bad_value.string() + " describe " + fixture("wiping.trace")).code == 1);
  // The file asks for records, the flag for text.
  const auto records = scratch("records.cfg");
  write(records, "# output\nformat = records\nlevel = 1\n");
  const auto from_file = run("--config " + records.string() + " describe " + fixture("wiping.trace"));
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.front() == '{');
  CHECK(contains(from_file.out, "\"level\":1"));
  const auto flag = run("--config " + records.string() + " --format text describe --level 3 " +
                        fixture("wiping.trace"));
  REQUIRE(flag.code == 0);
  CHECK(contains(flag.out, "One sentence:"));
  // The environment variable stands in for --config.
  const auto env = run("describe " + fixture("wiping.trace"), "MANIPSEM_CONFIG=" + records.string());
  CHECK(env.out.front() == '{');
  // A tolerance flag beats the file.
  CHECK(run("--config " + bad_value.string() + " describe --touch 0.005 " + fixture("wiping.trace")).code ==
        0);
}

TEST_CASE("generate and bench") {
  const auto t = scratch("screw.trace");
  REQUIRE(run("--seed 0 generate Screw --companion --points 8 --decimals 4 -o " + t.string()).code == 0);
  std::ifstream a(t), b(fixture("screwing.trace"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(run("generate Juggle -o " + scratch("j.trace").string()).code == 1);
  CHECK(run("generate Wipe --points 5").code == 1);
  CHECK(contains(run("generate --list").out, "Screw\n"));

  const auto dir = scratch("corpus");
  fs::remove_all(dir);
  CHECK(run("bench " + dir.string()).code == 5);
  REQUIRE(run("generate --corpus " + dir.string() + " --scenes 30").code == 0);
  const auto csv = scratch("bench.csv");
  const auto r = run("bench --threads 1 --csv " + csv.string() + " " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "hull accuracy 1.0000"));
  std::ifstream c(csv);
  std::string header;
  std::getline(c, header);
  CHECK(header == "model,truth,predicted,count");
  const auto j = nlohmann::json::parse(run("--format records bench " + dir.string()).out);
  CHECK(j["pairs"].get<int>() > 0);
  CHECK(j["aabb"]["distinguishes"]["Wi"] == false);
  fs::remove_all(dir);
}
