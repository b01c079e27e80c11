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

#include <cmath>
#include <string>

#include "json.hpp"
#include "liquidbid/jsonio.hpp"
#include "liquidbid/model.hpp"

namespace liquidbid {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("malformed JSON document");
  return doc;
}

double number_field(const json& v, const char* what) {
  if (!v.is_number()) throw ValidationError(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (std::isnan(d)) throw ValidationError(std::string(what) + " must not be NaN");
  return d;
}

Matrix read_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw ValidationError(std::string(what) + " must be a nonempty array of rows");
  }
  Matrix m;
  for (const auto& row : rows) {
    if (!row.is_array() || row.empty()) {
      throw ValidationError(std::string(what) + " rows must be nonempty arrays");
    }
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& cell : row) r.push_back(number_field(cell, what));
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace

Instance load_instance(const std::string& json_text) {
  const json doc = parse_or_throw(json_text);
  if (!doc.is_object() || !doc.contains("budgets") || !doc.contains("values")) {
    throw ValidationError("instance must be an object with \"budgets\" and \"values\"");
  }
  const json& budgets_doc = doc.at("budgets");
  if (!budgets_doc.is_array() || budgets_doc.empty()) {
    throw ValidationError("\"budgets\" must be a nonempty array");
  }
  std::vector<Budget> budgets;
  budgets.reserve(budgets_doc.size());
  for (const auto& b : budgets_doc) {
    if (b.is_string()) {
      if (b.get<std::string>() != "inf") {
        throw ValidationError("budget strings must be \"inf\"");
      }
      budgets.push_back(Budget::infinite());
    } else {
      budgets.push_back(Budget::finite(number_field(b, "budget")));
    }
  }
  Matrix values = read_matrix(doc.at("values"), "values");
  return Instance(std::move(budgets), std::move(values));
}

std::string save_instance(const Instance& instance) {
  std::string out = "{\"budgets\":[";
  for (int i = 0; i < instance.num_bidders(); ++i) {
    if (i) out += ',';
    const Budget& b = instance.budget(i);
    out += b.is_infinite() ? "\"inf\"" : format_double_exact(b.value());
  }
  out += "],\"values\":[";
  for (int i = 0; i < instance.num_bidders(); ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < instance.num_queries(); ++j) {
      if (j) out += ',';
      out += format_double_exact(instance.value(i, j));
    }
    out += ']';
  }
  out += "]}";
  return out;
}

BidProfile load_bid_profile(const std::string& json_text, const Instance& instance) {
  const json doc = parse_or_throw(json_text);
  if (!doc.is_object() || !doc.contains("mode")) {
    throw ValidationError("bid profile must be an object with a \"mode\" field");
  }
  const std::string mode = doc.at("mode").is_string() ? doc.at("mode").get<std::string>() : "";
  if (mode == "per_query") {
    if (!doc.contains("bids")) throw ValidationError("per_query profile needs \"bids\"");
    Matrix bids = read_matrix(doc.at("bids"), "bids");
    if (static_cast<int>(bids.size()) != instance.num_bidders() ||
        static_cast<int>(bids[0].size()) != instance.num_queries()) {
      throw ValidationError("bid matrix dimensions do not match instance");
    }
    return BidProfile::per_query(std::move(bids));
  }
  if (mode == "uniform") {
    if (!doc.contains("multipliers")) {
      throw ValidationError("uniform profile needs \"multipliers\"");
    }
    const json& ms = doc.at("multipliers");
    if (!ms.is_array()) throw ValidationError("\"multipliers\" must be an array");
    std::vector<double> multipliers;
    multipliers.reserve(ms.size());
    for (const auto& m : ms) multipliers.push_back(number_field(m, "multiplier"));
    return BidProfile::uniform(instance, std::move(multipliers));
  }
  throw ValidationError("mode must be \"per_query\" or \"uniform\"");
}

std::string save_bid_profile(const BidProfile& profile) {
  std::string out = "{\"mode\":";
  if (profile.mode() == BidMode::kUniform) {
    out += "\"uniform\",\"multipliers\":[";
    const auto& ms = profile.multipliers();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (i) out += ',';
      out += format_double_exact(ms[i]);
    }
    out += "]}";
    return out;
  }
  out += "\"per_query\",\"bids\":[";
  for (int i = 0; i < profile.num_bidders(); ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < profile.num_queries(); ++j) {
      if (j) out += ',';
      out += format_double_exact(profile.bid(i, j));
    }
    out += ']';
  }
  out += "]}";
  return out;
}

}  // namespace liquidbid
