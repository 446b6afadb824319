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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace opsynth {

// Argument value of a tool call: number, string, boolean or (nested) array.
struct Value {
  using Array = std::vector<Value>;
  std::variant<double, std::string, bool, Array> data;

  Value() : data(0.0) {}
  Value(double number) : data(number) {}                    // NOLINT
  Value(int number) : data(static_cast<double>(number)) {}  // NOLINT
  Value(std::string text) : data(std::move(text)) {}        // NOLINT
  Value(const char* text) : data(std::string(text)) {}      // NOLINT
  Value(bool flag) : data(flag) {}                          // NOLINT
  Value(Array items) : data(std::move(items)) {}            // NOLINT

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }

  double number() const { return std::get<double>(data); }
  const std::string& string() const { return std::get<std::string>(data); }
  bool boolean() const { return std::get<bool>(data); }
  const Array& array() const { return std::get<Array>(data); }
  Array& array() { return std::get<Array>(data); }

  bool operator==(const Value&) const = default;
};

struct ToolCall {
  std::string name;
  std::vector<std::pair<std::string, Value>> args;  // keyword order as written

  const Value* find(std::string_view param) const {
    for (const auto& [key, value] : args) {
      if (key == param) return &value;
    }
    return nullptr;
  }

  bool operator==(const ToolCall&) const = default;
};

// Why a call could not be read. NoCall only comes from extract_call.
enum class CallErrorKind { NoCall, Syntax, UnterminatedString, UnterminatedArray, UnterminatedCall };

class CallParseError : public std::runtime_error {
 public:
  CallParseError(CallErrorKind kind, std::size_t offset, std::string expected, const std::string& message)
      : std::runtime_error(message), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

  CallErrorKind kind() const { return kind_; }
  // Byte offset into the parsed text (into the whole message for extract_call).
  std::size_t offset() const { return offset_; }
  // Short description of the token that was expected at offset().
  const std::string& expected() const { return expected_; }

 private:
  CallErrorKind kind_;
  std::size_t offset_;
  std::string expected_;
};

}  // namespace opsynth
