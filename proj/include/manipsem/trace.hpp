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

#ifndef MANIPSEM_TRACE_HPP_
#define MANIPSEM_TRACE_HPP_

#include "manipsem/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manipsem {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Role { HandLeft, HandRight, Object, Ground };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct ObjectInstance {
  std::string id;
  std::string label;
  Role role = Role::Object;
  PointCloud points;
  std::optional<Aabb> box;  // ground given as a box instead of points

  /// Hull, AABB and cloud for the pairwise predicates.
  ObjectShape shape(const Tolerances& tol = {}) const;
};

struct Frame {
  double t = 0.0;
  std::vector<ObjectInstance> objects;

  const ObjectInstance* find(std::string_view id) const;
};

struct SceneTrace {
  std::string id;
  double rate_hz = 0.0;  // derived from the timestamps, 0 for a single frame
  std::vector<Frame> frames;
};

/// One JSON record per line. Blank lines are skipped. Throws ParseError for
/// malformed JSON, SchemaError for missing/unknown fields or broken
/// invariants, MonotonicityError when timestamps do not strictly increase.
SceneTrace load_trace(std::istream& in, std::string trace_id = "trace");
SceneTrace load_trace_file(const std::string& path);

void write_trace(std::ostream& out, const SceneTrace& trace);

/// Throws SchemaError or MonotonicityError; load_trace calls it.
void validate_trace(const SceneTrace& trace);

}  // namespace manipsem

#endif  // MANIPSEM_TRACE_HPP_
