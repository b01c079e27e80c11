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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace liquidbid {

// Rectangular bidder-by-query matrix, row i = bidder, column j = query.
using Matrix = std::vector<std::vector<double>>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, schema violations, values out of domain.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An exact search or enumeration would exceed its configured budget.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside a solver; carries the iteration count reached.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long iterations)
      : Error(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_ = 0;
};

// All comparison tolerances live here so tests can audit them in one place.
struct Tolerances {
  double feasibility = 1e-9;            // absolute slack on constraint checks
  double allocation_sum = 1e-9;         // per-query sum_i pi <= 1 + this
  double uniform_bid_identity = 1e-12;  // derived uniform bids vs multiplier product
  double opt_value_rel = 1e-7;          // OptResult value vs recomputed welfare
  double outbid_rel = 1e-6;             // outbid margin: delta = outbid_rel * (1 + price)
  double epsilon_rel = 1e-6;            // default equilibrium epsilon, relative to welfare scale
};

const Tolerances& default_tolerances() noexcept;

// A bidder budget: a positive finite real or +infinity.
class Budget {
 public:
  Budget() : value_(std::numeric_limits<double>::infinity()) {}

  static Budget infinite() noexcept { return Budget(); }
  static Budget finite(double v);

  bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }
  // +infinity when infinite; callers rely on IEEE semantics of min/compare.
  double value() const noexcept { return value_; }
  double cap(double x) const noexcept { return x < value_ ? x : value_; }

  friend bool operator==(const Budget&, const Budget&) = default;

 private:
  double value_;
};

// The auction game being analyzed: per-bidder budgets and per-query values.
class Instance {
 public:
  Instance(std::vector<Budget> budgets, Matrix values);

  int num_bidders() const noexcept { return static_cast<int>(budgets_.size()); }
  int num_queries() const noexcept { return num_queries_; }
  const Budget& budget(int bidder) const { return budgets_.at(bidder); }
  double value(int bidder, int query) const { return values_.at(bidder).at(query); }
  const Matrix& values() const noexcept { return values_; }
  const std::vector<Budget>& budgets() const noexcept { return budgets_; }

  // sum_i min(B_i, sum_j v_ij): caps every feasible liquid welfare and sets
  // the scale for relative tolerances.
  double welfare_scale() const noexcept { return welfare_scale_; }
  double total_value(int bidder) const;
  bool values_within_budgets() const noexcept;  // v_ij <= B_i for all i, j

 private:
  std::vector<Budget> budgets_;
  Matrix values_;
  int num_queries_ = 0;
  double welfare_scale_ = 0;
};

enum class BidMode { kPerQuery, kUniform };

// Per-bidder per-query bids. In uniform mode the matrix is derived as
// b_ij = m_i * v_ij and the multipliers are retained.
class BidProfile {
 public:
  static BidProfile per_query(Matrix bids);
  static BidProfile uniform(const Instance& instance, std::vector<double> multipliers);

  BidMode mode() const noexcept { return mode_; }
  const Matrix& bids() const noexcept { return bids_; }
  double bid(int bidder, int query) const { return bids_.at(bidder).at(query); }
  const std::vector<double>& multipliers() const;
  int num_bidders() const noexcept { return static_cast<int>(bids_.size()); }
  int num_queries() const noexcept { return bids_.empty() ? 0 : static_cast<int>(bids_[0].size()); }

 private:
  BidMode mode_ = BidMode::kPerQuery;
  Matrix bids_;
  std::vector<double> multipliers_;
};

// Per-bidder per-query win probabilities with per-query feasibility.
class Allocation {
 public:
  explicit Allocation(Matrix pi);
  static Allocation zeros(int num_bidders, int num_queries);

  double pi(int bidder, int query) const { return pi_.at(bidder).at(query); }
  const Matrix& probabilities() const noexcept { return pi_; }
  int num_bidders() const noexcept { return static_cast<int>(pi_.size()); }
  int num_queries() const noexcept { return pi_.empty() ? 0 : static_cast<int>(pi_[0].size()); }

 private:
  Matrix pi_;
};

// Allocation plus expected payments, with the spend/value aggregates the
// equilibrium analysis keeps asking for.
class Outcome {
 public:
  Outcome(const Instance& instance, Allocation allocation, Matrix expected_payment);

  const Allocation& allocation() const noexcept { return allocation_; }
  const Matrix& expected_payment() const noexcept { return payment_; }
  double spend_of_query(int query) const { return query_spend_.at(query); }
  double spend_of_bidder(int bidder) const { return bidder_spend_.at(bidder); }
  double value_of_bidder(int bidder) const { return bidder_value_.at(bidder); }
  const std::vector<double>& query_spends() const noexcept { return query_spend_; }
  double total_spend() const noexcept;

 private:
  Allocation allocation_;
  Matrix payment_;
  std::vector<double> query_spend_;
  std::vector<double> bidder_spend_;
  std::vector<double> bidder_value_;
};

// LW(pi) = sum_i min(B_i, sum_j pi_ij v_ij); infinite budgets never cap.
double liquid_welfare(const Instance& instance, const Allocation& allocation);
double liquid_welfare_of_subset(const Instance& instance, const Allocation& allocation,
                                std::span<const int> bidders);

// Instance JSON: {"budgets": [number|"inf", ...], "values": [[number, ...], ...]}.
Instance load_instance(const std::string& json_text);
std::string save_instance(const Instance& instance);

// BidProfile JSON: {"mode":"per_query","bids":[[...]]} or
// {"mode":"uniform","multipliers":[...]}; uniform needs the instance to
// materialize the bid matrix.
BidProfile load_bid_profile(const std::string& json_text, const Instance& instance);
std::string save_bid_profile(const BidProfile& profile);

}  // namespace liquidbid
