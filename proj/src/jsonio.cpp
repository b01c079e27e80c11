// Copyright 2026 The Liquidbid Authors
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

#include "liquidbid/jsonio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace liquidbid {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

}  // namespace

std::string format_double(double v, int sig_digits) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (v == static_cast<std::int64_t>(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(v)) + ".0";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, v);
  return buf;
}

std::string format_double_exact(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  std::string s(buf, ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::kObject;
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::kArray;
  return v;
}

JsonValue JsonValue::number(double d) {
  JsonValue v;
  v.kind_ = Kind::kNumber;
  v.num_ = d;
  return v;
}

JsonValue JsonValue::integer(std::int64_t i) {
  JsonValue v;
  v.kind_ = Kind::kInteger;
  v.int_ = i;
  return v;
}

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::kBool;
  v.bool_ = b;
  return v;
}

JsonValue JsonValue::string(std::string s) {
  JsonValue v;
  v.kind_ = Kind::kString;
  v.str_ = std::move(s);
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::kObject) throw std::logic_error("set() on non-object JsonValue");
  members_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::kArray) throw std::logic_error("push() on non-array JsonValue");
  elements_.push_back(std::move(v));
  return *this;
}

void JsonValue::write(std::string& out, int sig_digits, int indent, int depth) const {
  switch (kind_) {
    case Kind::kNull:
      out += "null";
      break;
    case Kind::kNumber:
      out += format_double(num_, sig_digits);
      break;
    case Kind::kInteger:
      out += std::to_string(int_);
      break;
    case Kind::kBool:
      out += bool_ ? "true" : "false";
      break;
    case Kind::kString:
      append_escaped(out, str_);
      break;
    case Kind::kObject: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : members_) {
        if (!first) out += ',';
        first = false;
        append_indent(out, indent, depth + 1);
        append_escaped(out, key);
        out += indent > 0 ? ": " : ":";
        value.write(out, sig_digits, indent, depth + 1);
      }
      if (!first) append_indent(out, indent, depth);
      out += '}';
      break;
    }
    case Kind::kArray: {
      out += '[';
      bool first = true;
      for (const auto& value : elements_) {
        if (!first) out += ',';
        first = false;
        append_indent(out, indent, depth + 1);
        value.write(out, sig_digits, indent, depth + 1);
      }
      if (!first) append_indent(out, indent, depth);
      out += ']';
      break;
    }
  }
}

std::string JsonValue::dump(int sig_digits, int indent) const {
  std::string out;
  write(out, sig_digits, indent, 0);
  return out;
}

}  // namespace liquidbid
