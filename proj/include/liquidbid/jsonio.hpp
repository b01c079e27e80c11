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

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace liquidbid {

// Minimal JSON document builder for tool output. Keys keep insertion order
// and floats are printed with a fixed significant-digit count, so identical
// results serialize to identical bytes.
class JsonValue {
 public:
  JsonValue() : kind_(Kind::kNull) {}

  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double v);
  static JsonValue integer(std::int64_t v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string v);

  JsonValue& set(const std::string& key, JsonValue v);  // object only
  JsonValue& push(JsonValue v);                         // array only

  // sig_digits applies to non-integral doubles; non-finite doubles are
  // emitted as quoted strings ("inf", "-inf", "nan") since JSON lacks them.
  std::string dump(int sig_digits = 12, int indent = 0) const;

 private:
  enum class Kind { kNull, kObject, kArray, kNumber, kInteger, kBool, kString };

  void write(std::string& out, int sig_digits, int indent, int depth) const;

  Kind kind_;
  double num_ = 0;
  std::int64_t int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> elements_;
};

// %.{sig}g formatting with the quoted-string fallback for non-finite values.
std::string format_double(double v, int sig_digits = 12);

// Shortest round-trip decimal form; parsing it back yields the same bits.
std::string format_double_exact(double v);

}  // namespace liquidbid
