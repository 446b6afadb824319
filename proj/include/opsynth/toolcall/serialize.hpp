// Copyright 2026 The opsynth Authors
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

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

#include "opsynth/core/number_format.hpp"
#include "opsynth/core/tool_schema.hpp"
#include "opsynth/toolcall/call.hpp"

namespace opsynth {

namespace detail {

inline void append_quoted(std::string& out, const std::string& text) {
  out += '"';
  for (char ch : text) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", static_cast<unsigned>(ch));
          out += buffer;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

inline void append_value(std::string& out, const Value& value) {
  if (value.is_number()) {
    out += format_number(value.number());
  } else if (value.is_string()) {
    append_quoted(out, value.string());
  } else if (value.is_bool()) {
    out += value.boolean() ? "true" : "false";
  } else {
    out += '[';
    bool first = true;
    for (const Value& item : value.array()) {
      if (!first) out += ", ";
      append_value(out, item);
      first = false;
    }
    out += ']';
  }
}

}  // namespace detail

inline std::string serialize_value(const Value& value) {
  std::string out;
  detail::append_value(out, value);
  return out;
}

// Canonical text: arguments in schema order, ", " after every comma, numbers
// in shortest form. Throws std::invalid_argument for an unknown tool or
// parameter.
inline std::string serialize_call(const ToolCall& call, const ToolRegistry& registry = builtin_registry()) {
  const ToolSchema* schema = registry.find(call.name);
  if (!schema) throw std::invalid_argument("unknown tool " + call.name);
  for (const auto& [name, value] : call.args) {
    if (!schema->find_parameter(name)) throw std::invalid_argument("unknown parameter " + name + " for " + call.name);
  }
  std::string out = call.name + "(";
  bool first = true;
  for (const ParamSpec& spec : schema->parameters) {
    const Value* value = call.find(spec.name);
    if (!value) continue;
    if (!first) out += ", ";
    out += spec.name + "=";
    detail::append_value(out, *value);
    first = false;
  }
  out += ")";
  return out;
}

}  // namespace opsynth
