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

#include "manipsem/trace.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace manipsem {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 4> kRoleNames = {"hand_left", "hand_right", "object",
                                                        "ground"};

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError("line " + std::to_string(line) + ": missing field '" + key + "'");
  }
  return *it;
}

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
               std::size_t line) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw SchemaError("line " + std::to_string(line) + ": unknown field '" + key + "'");
    }
  }
}

Point3 read_point(const json& v, std::size_t line) {
  if (!v.is_array() || v.size() != 3) {
    throw SchemaError("line " + std::to_string(line) + ": point must be [x, y, z]");
  }
  Point3 p;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) {
      throw SchemaError("line " + std::to_string(line) + ": non-numeric coordinate");
    }
    p[i] = v[i].get<double>();
  }
  return p;
}

std::string read_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) {
    throw SchemaError("line " + std::to_string(line) + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

ObjectInstance read_object(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw SchemaError("line " + std::to_string(line) + ": object expected");
  ObjectInstance inst;
  inst.id = read_string(obj, "id", line);
  inst.label = read_string(obj, "label", line);
  const auto role = parse_role(read_string(obj, "role", line));
  if (!role) throw SchemaError("line " + std::to_string(line) + ": unknown role");
  inst.role = *role;

  if (inst.role == Role::Ground && obj.contains("box")) {
    only_keys(obj, {"id", "label", "role", "box"}, line);
    const json& box = obj["box"];
    if (!box.is_array() || box.size() != 2) {
      throw SchemaError("line " + std::to_string(line) + ": box must be [[min], [max]]");
    }
    Aabb b{read_point(box[0], line), read_point(box[1], line)};
    if ((b.max_corner.array() < b.min_corner.array()).any()) {
      throw SchemaError("line " + std::to_string(line) + ": box min exceeds max");
    }
    inst.box = b;
    const auto corners = b.corners();
    inst.points.assign(corners.begin(), corners.end());
    return inst;
  }

  only_keys(obj, {"id", "label", "role", "points"}, line);
  const json& pts = require(obj, "points", line);
  if (!pts.is_array()) throw SchemaError("line " + std::to_string(line) + ": points not an array");
  inst.points.reserve(pts.size());
  for (const auto& p : pts) inst.points.push_back(read_point(p, line));
  if (inst.role != Role::Ground && inst.points.size() < 4) {
    throw SchemaError("line " + std::to_string(line) + ": object '" + inst.id +
                      "' needs at least 4 points");
  }
  if (inst.points.empty()) throw SchemaError("line " + std::to_string(line) + ": empty ground");
  return inst;
}

json point_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

}  // namespace

std::string_view to_string(Role role) { return kRoleNames[static_cast<int>(role)]; }

std::optional<Role> parse_role(std::string_view text) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == text) return static_cast<Role>(i);
  }
  return std::nullopt;
}

ObjectShape ObjectInstance::shape(const Tolerances& tol) const {
  if (box) return ObjectShape::from_box(*box);
  return ObjectShape::from_cloud(points, tol);
}

const ObjectInstance* Frame::find(std::string_view id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

void validate_trace(const SceneTrace& trace) {
  std::map<std::string, std::string> labels;
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const Frame& frame = trace.frames[f];
    if (f > 0 && !(frame.t > trace.frames[f - 1].t)) {
      throw MonotonicityError("frame " + std::to_string(f) + ": timestamp " +
                              std::to_string(frame.t) + " does not increase");
    }
    std::array<int, 4> per_role{};
    std::set<std::string> ids;
    for (const auto& o : frame.objects) {
      if (!ids.insert(o.id).second) {
        throw SchemaError("frame " + std::to_string(f) + ": duplicate id '" + o.id + "'");
      }
      if (o.role != Role::Object && ++per_role[static_cast<int>(o.role)] > 1) {
        throw SchemaError("frame " + std::to_string(f) + ": more than one " +
                          std::string(to_string(o.role)));
      }
      auto [it, fresh] = labels.emplace(o.id, o.label);
      if (!fresh && it->second != o.label) {
        throw SchemaError("id '" + o.id + "' changes label from '" + it->second + "' to '" +
                          o.label + "'");
      }
      if (o.role != Role::Ground && o.points.size() < 4) {
        throw SchemaError("object '" + o.id + "' needs at least 4 points");
      }
    }
  }
}

SceneTrace load_trace(std::istream& in, std::string trace_id) {
  SceneTrace trace;
  trace.id = std::move(trace_id);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    if (!record.is_object()) throw SchemaError("line " + std::to_string(line) + ": record expected");
    only_keys(record, {"t", "objects"}, line);
    const json& t = require(record, "t", line);
    if (!t.is_number()) throw SchemaError("line " + std::to_string(line) + ": t must be a number");
    const json& objects = require(record, "objects", line);
    if (!objects.is_array()) {
      throw SchemaError("line " + std::to_string(line) + ": objects must be an array");
    }
    Frame frame;
    frame.t = t.get<double>();
    for (const auto& o : objects) frame.objects.push_back(read_object(o, line));
    if (!trace.frames.empty() && !(frame.t > trace.frames.back().t)) {
      throw MonotonicityError("line " + std::to_string(line) + ": timestamp does not increase");
    }
    trace.frames.push_back(std::move(frame));
  }
  validate_trace(trace);
  if (trace.frames.size() > 1) {
    const double span = trace.frames.back().t - trace.frames.front().t;
    trace.rate_hz = static_cast<double>(trace.frames.size() - 1) / span;
  }
  return trace;
}

SceneTrace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_trace(in, path);
}

void write_trace(std::ostream& out, const SceneTrace& trace) {
  for (const auto& frame : trace.frames) {
    json objects = json::array();
    for (const auto& o : frame.objects) {
      json rec = {{"id", o.id}, {"label", o.label}, {"role", std::string(to_string(o.role))}};
      if (o.box) {
        rec["box"] = json::array({point_json(o.box->min_corner), point_json(o.box->max_corner)});
      } else {
        json pts = json::array();
        for (const auto& p : o.points) pts.push_back(point_json(p));
        rec["points"] = std::move(pts);
      }
      objects.push_back(std::move(rec));
    }
    out << json{{"t", frame.t}, {"objects", std::move(objects)}}.dump() << '\n';
  }
}

}  // namespace manipsem
