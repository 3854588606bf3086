// Copyright 2026 The Verdict Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Checks documents against the JSON Schemas in docs/schemas. Covers the
// keywords those files use: type, const, enum, required, properties,
// additionalProperties (false only), items, $ref into $defs, minimum,
// maximum, exclusiveMinimum. "pattern" is ignored.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"

namespace verdict::testutil {

inline std::filesystem::path schema_dir() { return data_dir().parent_path() / "docs" / "schemas"; }

inline nlohmann::json load_schema(const std::string& name) {
  return nlohmann::json::parse(read_file(schema_dir() / (name + ".schema.json")));
}

namespace detail {

inline bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

inline void check(const nlohmann::json& root, const nlohmann::json& s, const nlohmann::json& v,
                  const std::string& at, std::vector<std::string>& errs) {
  if (auto r = s.find("$ref"); r != s.end()) {
    std::string ref = r->get<std::string>();
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) {
      errs.push_back(at + ": unsupported $ref " + ref);
      return;
    }
    check(root, root.at("$defs").at(ref.substr(prefix.size())), v, at, errs);
    return;
  }
  if (auto t = s.find("type"); t != s.end()) {
    bool ok = false;
    if (t->is_string()) ok = has_type(v, *t);
    else
      for (const auto& x : *t) ok = ok || has_type(v, x);
    if (!ok) {
      errs.push_back(at + ": expected type " + t->dump() + ", got " + v.dump());
      return;
    }
  }
  if (auto c = s.find("const"); c != s.end() && *c != v) errs.push_back(at + ": expected " + c->dump());
  if (auto e = s.find("enum"); e != s.end()) {
    bool ok = false;
    for (const auto& x : *e) ok = ok || x == v;
    if (!ok) errs.push_back(at + ": " + v.dump() + " not in enum");
  }
  if (v.is_number()) {
    double d = v.get<double>();
    if (auto m = s.find("minimum"); m != s.end() && d < m->get<double>()) errs.push_back(at + ": below minimum");
    if (auto m = s.find("maximum"); m != s.end() && d > m->get<double>()) errs.push_back(at + ": above maximum");
    if (auto m = s.find("exclusiveMinimum"); m != s.end() && d <= m->get<double>())
      errs.push_back(at + ": not above exclusiveMinimum");
  }
  if (v.is_object()) {
    if (auto req = s.find("required"); req != s.end())
      for (const auto& k : *req)
        if (!v.contains(k.get<std::string>())) errs.push_back(at + ": missing " + k.get<std::string>());
    auto props = s.find("properties");
    bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props != s.end() && props->contains(it.key())) {
        check(root, (*props)[it.key()], *it, at + "." + it.key(), errs);
      } else if (closed) {
        errs.push_back(at + ": unexpected property " + it.key());
      }
    }
  }
  if (v.is_array())
    if (auto items = s.find("items"); items != s.end())
      for (std::size_t i = 0; i < v.size(); ++i)
        check(root, *items, v[i], at + "[" + std::to_string(i) + "]", errs);
}

}  // namespace detail

// Empty when `doc` conforms.
inline std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc) {
  std::vector<std::string> errs;
  detail::check(schema, schema, doc, "$", errs);
  return errs;
}

}  // namespace verdict::testutil
