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

// Recursive-descent reader for the call-string wire format (docs/call-grammar.md):
//
//   call  = name "(" [ param "=" value { "," param "=" value } ] ")"
//   value = number | string | "true" | "false" | "[" [ value { "," value } ] "]"
//
// Whitespace is allowed between any two tokens.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

#include "opsynth/core/tool_schema.hpp"
#include "opsynth/toolcall/call.hpp"

namespace opsynth {

inline constexpr std::size_t kMaxCallNesting = 64;

namespace detail {

inline bool is_name_start(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
}

inline bool is_name_char(char ch) { return is_name_start(ch) || (ch >= '0' && ch <= '9'); }

inline bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

class CallReader {
 public:
  // `base` is added to reported offsets so errors point into the caller's text.
  CallReader(std::string_view text, std::size_t base) : text_(text), base_(base) {}

  ToolCall read_call() {
    skip_space();
    ToolCall call;
    call.name = read_name("tool name");
    skip_space();
    expect('(', "\"(\"");
    skip_space();
    if (peek() == ')') {
      ++pos_;
      return call;
    }
    while (true) {
      skip_space();
      const std::size_t name_at = pos_;
      std::string param = read_name("parameter name");
      if (call.find(param)) fail(CallErrorKind::Syntax, name_at, "new parameter name", "duplicate parameter " + param);
      skip_space();
      expect('=', "\"=\"");
      skip_space();
      Value value = read_value(0);
      call.args.emplace_back(std::move(param), std::move(value));
      skip_space();
      if (at_end()) fail_unterminated_call();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return call;
      }
      fail(CallErrorKind::Syntax, pos_, "\",\" or \")\"", "unexpected character");
    }
  }

  void expect_end() {
    skip_space();
    if (!at_end()) fail(CallErrorKind::Syntax, pos_, "end of input", "trailing characters after call");
  }

  std::size_t position() const { return pos_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end()) {
      const char ch = text_[pos_];
      if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') break;
      ++pos_;
    }
  }

  [[noreturn]] void fail(CallErrorKind kind, std::size_t at, const std::string& expected, const std::string& what) {
    const std::size_t offset = base_ + at;
    throw CallParseError(kind, offset, expected,
                         "syntax error at offset " + std::to_string(offset) + ": " + what + ", expected " + expected);
  }

  [[noreturn]] void fail_unterminated_call() {
    const std::size_t offset = base_ + pos_;
    throw CallParseError(CallErrorKind::UnterminatedCall, offset, "\",\" or \")\"",
                         "unterminated call: input ended at offset " + std::to_string(offset) +
                             ", expected \",\" or \")\"");
  }

  void expect(char ch, const char* description) {
    if (at_end()) {
      fail_unterminated_call();
    }
    if (peek() != ch) fail(CallErrorKind::Syntax, pos_, description, "unexpected character");
    ++pos_;
  }

  std::string read_name(const char* what) {
    if (at_end()) {
      if (open_arrays_ == 0 && pos_ > 0) fail_unterminated_call();
      fail(CallErrorKind::Syntax, pos_, what, "input ended");
    }
    if (!is_name_start(peek())) fail(CallErrorKind::Syntax, pos_, what, "unexpected character");
    const std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Value read_value(std::size_t depth) {
    if (at_end()) {
      if (open_arrays_ > 0) {
        const std::size_t offset = base_ + pos_;
        throw CallParseError(CallErrorKind::UnterminatedArray, offset, "value",
                             "unterminated array opened at offset " + std::to_string(base_ + array_start_) +
                                 ": input ended at offset " + std::to_string(offset) + ", expected value");
      }
      fail(CallErrorKind::Syntax, pos_, "value", "input ended");
    }
    const char ch = peek();
    if (ch == '"') return Value(read_string());
    if (ch == '[') return read_array(depth);
    if (ch == '-' || is_digit(ch)) return Value(read_number());
    if (text_.substr(pos_, 4) == "true" && !is_name_char(char_at(pos_ + 4))) {
      pos_ += 4;
      return Value(true);
    }
    if (text_.substr(pos_, 5) == "false" && !is_name_char(char_at(pos_ + 5))) {
      pos_ += 5;
      return Value(false);
    }
    fail(CallErrorKind::Syntax, pos_, "value", "unexpected character");
  }

  char char_at(std::size_t index) const { return index < text_.size() ? text_[index] : '\0'; }

  Value read_array(std::size_t depth) {
    if (depth + 1 > kMaxCallNesting) {
      fail(CallErrorKind::Syntax, pos_, "shallower value",
           "arrays nested deeper than " + std::to_string(kMaxCallNesting));
    }
    const std::size_t saved_start = array_start_;
    array_start_ = pos_;
    ++open_arrays_;
    ++pos_;  // '['
    Value::Array items;
    skip_space();
    if (peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        skip_space();
        items.push_back(read_value(depth + 1));
        skip_space();
        if (at_end()) {
          const std::size_t offset = base_ + pos_;
          throw CallParseError(CallErrorKind::UnterminatedArray, offset, "\",\" or \"]\"",
                               "unterminated array opened at offset " + std::to_string(base_ + array_start_) +
                                   ": input ended at offset " + std::to_string(offset) + ", expected \",\" or \"]\"");
        }
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        fail(CallErrorKind::Syntax, pos_, "\",\" or \"]\"", "unexpected character");
      }
    }
    --open_arrays_;
    array_start_ = saved_start;
    return Value(std::move(items));
  }

  double read_number() {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    if (!is_digit(peek())) fail(CallErrorKind::Syntax, pos_, "digit", "malformed number");
    if (peek() == '0') {
      ++pos_;
    } else {
      while (is_digit(peek())) ++pos_;
    }
    if (peek() == '.') {
      ++pos_;
      if (!is_digit(peek())) fail(CallErrorKind::Syntax, pos_, "digit", "malformed number");
      while (is_digit(peek())) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!is_digit(peek())) fail(CallErrorKind::Syntax, pos_, "digit", "malformed number");
      while (is_digit(peek())) ++pos_;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      // from_chars leaves value untouched here; strtod tells underflow from overflow.
      const std::string literal(first, last);
      value = std::strtod(literal.c_str(), nullptr);
      if (std::isfinite(value)) value = 0.0;  // underflow reads as zero
      ec = std::isfinite(value) ? std::errc() : ec;
    }
    if (ec != std::errc() || end != last || !std::isfinite(value)) {
      fail(CallErrorKind::Syntax, start, "finite number", "number out of range");
    }
    return value == 0.0 ? 0.0 : value;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::uint32_t read_hex4() {
    std::uint32_t cp = 0;
    for (int i = 0; i < 4; ++i) {
      if (at_end()) fail_unterminated_string();
      const char ch = text_[pos_];
      int digit = -1;
      if (ch >= '0' && ch <= '9') digit = ch - '0';
      if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
      if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
      if (digit < 0) fail(CallErrorKind::Syntax, pos_, "hex digit", "malformed \\u escape");
      cp = cp * 16 + static_cast<std::uint32_t>(digit);
      ++pos_;
    }
    return cp;
  }

  [[noreturn]] void fail_unterminated_string() {
    const std::size_t offset = base_ + pos_;
    throw CallParseError(CallErrorKind::UnterminatedString, offset, "closing quote",
                         "unterminated string opened at offset " + std::to_string(base_ + string_start_) +
                             ": input ended at offset " + std::to_string(offset) + ", expected closing quote");
  }

  std::string read_string() {
    string_start_ = pos_;
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (at_end()) fail_unterminated_string();
      const char ch = text_[pos_];
      if (ch == '"') {
        ++pos_;
        return out;
      }
      if (static_cast<unsigned char>(ch) < 0x20) {
        fail(CallErrorKind::Syntax, pos_, "closing quote", "control character in string");
      }
      if (ch != '\\') {
        out += ch;
        ++pos_;
        continue;
      }
      ++pos_;
      if (at_end()) fail_unterminated_string();
      const char esc = text_[pos_++];
      switch (esc) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          std::uint32_t cp = read_hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF && char_at(pos_) == '\\' && char_at(pos_ + 1) == 'u') {
            pos_ += 2;
            const std::uint32_t low = read_hex4();
            if (low >= 0xDC00 && low <= 0xDFFF) {
              cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
            } else {
              append_utf8(out, 0xFFFD);
              cp = low;
            }
          }
          if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xFFFD;
          append_utf8(out, cp);
          break;
        }
        default:
          fail(CallErrorKind::Syntax, pos_ - 1, "escape character", "invalid escape");
      }
    }
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
  std::size_t open_arrays_ = 0;
  std::size_t array_start_ = 0;
  std::size_t string_start_ = 0;
};

}  // namespace detail

// Parses a complete call string (surrounding whitespace allowed). No schema
// validation happens here. Throws CallParseError.
inline ToolCall parse_call(std::string_view text) {
  detail::CallReader reader(text, 0);
  ToolCall call = reader.read_call();
  reader.expect_end();
  return call;
}

// Finds the last "<registered name>(" in `message` (not preceded by an
// identifier character) and parses the call starting there; anything after the
// closing parenthesis is ignored. Throws CallParseError; kind NoCall when no
// registered name is present.
inline ToolCall extract_call(std::string_view message, const ToolRegistry& registry = builtin_registry()) {
  std::size_t best = std::string_view::npos;
  for (const ToolSchema& schema : registry.schemas()) {
    const std::string needle = schema.name + "(";
    std::size_t at = message.rfind(needle);
    while (at != std::string_view::npos) {
      if (at == 0 || !detail::is_name_char(message[at - 1])) break;
      at = at == 0 ? std::string_view::npos : message.rfind(needle, at - 1);
    }
    if (at != std::string_view::npos && (best == std::string_view::npos || at > best)) best = at;
  }
  if (best == std::string_view::npos) {
    throw CallParseError(CallErrorKind::NoCall, 0, "tool call", "no call present");
  }
  detail::CallReader reader(message.substr(best), best);
  return reader.read_call();
}

}  // namespace opsynth
