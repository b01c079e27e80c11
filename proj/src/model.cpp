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

#include "liquidbid/model.hpp"

#include <cmath>
#include <numeric>

namespace liquidbid {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_rectangular(const Matrix& m, const std::string& name) {
  require(!m.empty(), name + " must have at least one row");
  const std::size_t cols = m[0].size();
  require(cols > 0, name + " must have at least one column");
  for (const auto& row : m) {
    require(row.size() == cols, name + " rows have inconsistent lengths");
  }
}

}  // namespace

const Tolerances& default_tolerances() noexcept {
  static const Tolerances tol;
  return tol;
}

Budget Budget::finite(double v) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw ValidationError("budget must be a positive finite number or infinite");
  }
  Budget b;
  b.value_ = v;
  return b;
}

Instance::Instance(std::vector<Budget> budgets, Matrix values)
    : budgets_(std::move(budgets)), values_(std::move(values)) {
  require(!budgets_.empty(), "instance needs at least one bidder");
  check_rectangular(values_, "values");
  require(values_.size() == budgets_.size(),
          "values must have one row per bidder");
  num_queries_ = static_cast<int>(values_[0].size());
  for (const auto& row : values_) {
    for (double v : row) {
      require(std::isfinite(v) && v >= 0, "values must be finite and nonnegative");
    }
  }
  welfare_scale_ = 0;
  for (int i = 0; i < num_bidders(); ++i) {
    welfare_scale_ += budgets_[i].cap(total_value(i));
  }
}

double Instance::total_value(int bidder) const {
  const auto& row = values_.at(bidder);
  return std::accumulate(row.begin(), row.end(), 0.0);
}

bool Instance::values_within_budgets() const noexcept {
  for (std::size_t i = 0; i < budgets_.size(); ++i) {
    for (double v : values_[i]) {
      if (v > budgets_[i].value()) return false;
    }
  }
  return true;
}

BidProfile BidProfile::per_query(Matrix bids) {
  check_rectangular(bids, "bids");
  for (const auto& row : bids) {
    for (double b : row) {
      require(std::isfinite(b) && b >= 0, "bids must be finite and nonnegative");
    }
  }
  BidProfile p;
  p.mode_ = BidMode::kPerQuery;
  p.bids_ = std::move(bids);
  return p;
}

BidProfile BidProfile::uniform(const Instance& instance, std::vector<double> multipliers) {
  require(static_cast<int>(multipliers.size()) == instance.num_bidders(),
          "one multiplier per bidder required");
  for (double m : multipliers) {
    require(std::isfinite(m) && m >= 0, "multipliers must be finite and nonnegative");
  }
  BidProfile p;
  p.mode_ = BidMode::kUniform;
  p.multipliers_ = std::move(multipliers);
  p.bids_.assign(instance.num_bidders(), std::vector<double>(instance.num_queries(), 0.0));
  for (int i = 0; i < instance.num_bidders(); ++i) {
    for (int j = 0; j < instance.num_queries(); ++j) {
      p.bids_[i][j] = p.multipliers_[i] * instance.value(i, j);
    }
  }
  return p;
}

const std::vector<double>& BidProfile::multipliers() const {
  if (mode_ != BidMode::kUniform) {
    throw ValidationError("bid profile is not in uniform mode");
  }
  return multipliers_;
}

Allocation::Allocation(Matrix pi) : pi_(std::move(pi)) {
  check_rectangular(pi_, "allocation");
  const double tol = default_tolerances().allocation_sum;
  for (std::size_t j = 0; j < pi_[0].size(); ++j) {
    double col = 0;
    for (const auto& row : pi_) {
      require(row[j] >= -tol && row[j] <= 1 + tol, "win probabilities must lie in [0, 1]");
      col += row[j];
    }
    require(col <= 1 + tol, "per-query win probabilities must sum to at most 1");
  }
}

Allocation Allocation::zeros(int num_bidders, int num_queries) {
  return Allocation(Matrix(num_bidders, std::vector<double>(num_queries, 0.0)));
}

Outcome::Outcome(const Instance& instance, Allocation allocation, Matrix expected_payment)
    : allocation_(std::move(allocation)), payment_(std::move(expected_payment)) {
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  require(allocation_.num_bidders() == n && allocation_.num_queries() == q,
          "allocation dimensions do not match instance");
  check_rectangular(payment_, "expected payments");
  require(static_cast<int>(payment_.size()) == n &&
              static_cast<int>(payment_[0].size()) == q,
          "payment dimensions do not match instance");
  query_spend_.assign(q, 0.0);
  bidder_spend_.assign(n, 0.0);
  bidder_value_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < q; ++j) {
      const double pay = payment_[i][j];
      require(pay >= 0, "expected payments must be nonnegative");
      require(allocation_.pi(i, j) > 0 || pay == 0,
              "a bidder with zero win probability cannot pay");
      query_spend_[j] += pay;
      bidder_spend_[i] += pay;
      bidder_value_[i] += allocation_.pi(i, j) * instance.value(i, j);
    }
  }
}

double Outcome::total_spend() const noexcept {
  return std::accumulate(query_spend_.begin(), query_spend_.end(), 0.0);
}

double liquid_welfare(const Instance& instance, const Allocation& allocation) {
  if (allocation.num_bidders() != instance.num_bidders() ||
      allocation.num_queries() != instance.num_queries()) {
    throw ValidationError("allocation dimensions do not match instance");
  }
  double lw = 0;
  for (int i = 0; i < instance.num_bidders(); ++i) {
    double value = 0;
    for (int j = 0; j < instance.num_queries(); ++j) {
      value += allocation.pi(i, j) * instance.value(i, j);
    }
    lw += instance.budget(i).cap(value);
  }
  return lw;
}

double liquid_welfare_of_subset(const Instance& instance, const Allocation& allocation,
                                std::span<const int> bidders) {
  if (allocation.num_bidders() != instance.num_bidders() ||
      allocation.num_queries() != instance.num_queries()) {
    throw ValidationError("allocation dimensions do not match instance");
  }
  double lw = 0;
  for (int i : bidders) {
    if (i < 0 || i >= instance.num_bidders()) {
      throw ValidationError("bidder index out of range");
    }
    double value = 0;
    for (int j = 0; j < instance.num_queries(); ++j) {
      value += allocation.pi(i, j) * instance.value(i, j);
    }
    lw += instance.budget(i).cap(value);
  }
  return lw;
}

}  // namespace liquidbid
