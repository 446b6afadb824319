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

// Random schema-valid calls and random byte strings for parser property tests.

#pragma once

#include <bit>
#include <cmath>
#include <string>

#include "opsynth/core/rng.hpp"
#include "opsynth/core/tool_schema.hpp"
#include "opsynth/toolcall/call.hpp"

namespace opsynth::testgen {

// Doubles of assorted magnitudes, including awkward shortest-form cases.
inline double random_number(RngStream& rng) {
  switch (rng.uniform_int(0, 5)) {
    case 0: return static_cast<double>(rng.uniform_int(-100, 100));
    case 1: return static_cast<double>(rng.uniform_int(-99999, 99999)) / 100.0;
    case 2: return rng.uniform_real(-1e6, 1e6);
    case 3: return rng.uniform_real(-1.0, 1.0) * std::pow(10.0, static_cast<double>(rng.uniform_int(-30, 30)));
    case 4: return 0.1 * static_cast<double>(rng.uniform_int(0, 30));
    default: {
      // Arbitrary finite bit pattern.
      double v;
      do {
        v = std::bit_cast<double>(rng.next_u64());
      } while (!std::isfinite(v));
      return v;
    }
  }
}

inline Value random_numbers(RngStream& rng, std::size_t length) {
  Value::Array items;
  for (std::size_t i = 0; i < length; ++i) items.emplace_back(random_number(rng));
  return Value(std::move(items));
}

inline Value random_param_value(RngStream& rng, const ParamSpec& spec) {
  const auto length = static_cast<std::size_t>(rng.uniform_int(0, 6));
  switch (spec.kind) {
    case ParamKind::Direction: return Value(rng.bernoulli(0.5) ? "max" : "min");
    case ParamKind::Integer: return Value(static_cast<double>(rng.uniform_int(-50, 50)));
    case ParamKind::NumberVector: return random_numbers(rng, length);
    case ParamKind::BoundVector: {
      Value::Array items;
      for (std::size_t i = 0; i < length; ++i) {
        items.push_back(rng.bernoulli(0.3) ? Value("infinity") : Value(random_number(rng)));
      }
      return Value(std::move(items));
    }
    case ParamKind::NumberMatrix: {
      Value::Array rows;
      const auto width = static_cast<std::size_t>(rng.uniform_int(0, 5));
      for (std::size_t i = 0; i < length; ++i) rows.push_back(random_numbers(rng, width));
      return Value(std::move(rows));
    }
    case ParamKind::SenseVector: {
      static const char* const kSenses[] = {"<=", ">=", "="};
      Value::Array items;
      for (std::size_t i = 0; i < length; ++i) items.emplace_back(kSenses[rng.uniform_index(3)]);
      return Value(std::move(items));
    }
    case ParamKind::BooleanVector: {
      Value::Array items;
      for (std::size_t i = 0; i < length; ++i) items.emplace_back(rng.bernoulli(0.5));
      return Value(std::move(items));
    }
    case ParamKind::ArcList: {
      Value::Array rows;
      for (std::size_t i = 0; i < length; ++i) {
        Value::Array row{static_cast<double>(rng.uniform_int(0, 9)), static_cast<double>(rng.uniform_int(0, 9))};
        while (row.size() < spec.row_width) row.emplace_back(random_number(rng));
        rows.push_back(Value(std::move(row)));
      }
      return Value(std::move(rows));
    }
  }
  return Value();
}

// Random call to a registered tool with arguments in schema order; optional
// parameters are included half the time.
inline ToolCall random_schema_call(RngStream& rng, const ToolRegistry& registry = builtin_registry()) {
  const ToolSchema& schema = registry.schemas()[rng.uniform_index(registry.size())];
  ToolCall call;
  call.name = schema.name;
  for (const ParamSpec& spec : schema.parameters) {
    if (!spec.required && rng.bernoulli(0.5)) continue;
    call.args.emplace_back(spec.name, random_param_value(rng, spec));
  }
  return call;
}

// Byte strings biased toward the call alphabet so the parser gets deep.
inline std::string random_bytes(RngStream& rng, std::size_t max_length = 64) {
  static constexpr std::string_view kAlphabet = "solve_lp(c=[3,2]) \"\\u-.e+0123456789truefalse,[]";
  const auto length = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_length)));
  std::string out;
  const bool prefixed = rng.bernoulli(0.5);
  if (prefixed) out = "solve_lp(";
  for (std::size_t i = 0; i < length; ++i) {
    if (rng.bernoulli(0.7)) {
      out += kAlphabet[rng.uniform_index(kAlphabet.size())];
    } else {
      out += static_cast<char>(rng.uniform_int(0, 255));
    }
  }
  return out;
}

}  // namespace opsynth::testgen
