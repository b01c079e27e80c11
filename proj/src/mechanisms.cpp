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

#include "liquidbid/mechanisms.hpp"

#include <algorithm>
#include <cmath>

namespace liquidbid {

namespace {

void check_dims(const Instance& instance, const BidProfile& bids) {
  if (bids.num_bidders() != instance.num_bidders() ||
      bids.num_queries() != instance.num_queries()) {
    throw ValidationError("bid profile dimensions do not match instance");
  }
}

}  // namespace

TieBreak TieBreak::lowest_index() { return TieBreak(); }

TieBreak TieBreak::highest_index() {
  TieBreak t;
  t.rule_ = Rule::kHighestIndex;
  return t;
}

TieBreak TieBreak::permutation(std::vector<int> order) {
  TieBreak t;
  t.rule_ = Rule::kPermutation;
  t.rank_.assign(order.size(), -1);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const int bidder = order[r];
    if (bidder < 0 || bidder >= static_cast<int>(order.size()) || t.rank_[bidder] != -1) {
      throw ValidationError("tie-break order must be a permutation of bidder indices");
    }
    t.rank_[bidder] = static_cast<int>(r);
  }
  return t;
}

int TieBreak::winner(std::span<const int> tied) const {
  if (tied.empty()) throw ValidationError("tie-break over an empty bidder set");
  switch (rule_) {
    case Rule::kLowestIndex:
      return *std::min_element(tied.begin(), tied.end());
    case Rule::kHighestIndex:
      return *std::max_element(tied.begin(), tied.end());
    case Rule::kPermutation: {
      int best = tied[0];
      for (int i : tied) {
        if (i < 0 || i >= static_cast<int>(rank_.size())) {
          throw ValidationError("bidder index outside tie-break permutation");
        }
        if (rank_[i] < rank_[best]) best = i;
      }
      return best;
    }
  }
  throw ValidationError("unknown tie-break rule");
}

bool TieBreak::favors(int bidder, std::span<const int> tied) const {
  std::vector<int> all(tied.begin(), tied.end());
  all.push_back(bidder);
  return winner(all) == bidder;
}

MechanismSpec MechanismSpec::fpa(TieBreak tie) {
  MechanismSpec m;
  m.kind_ = Kind::kFpa;
  m.tie_ = std::move(tie);
  return m;
}

MechanismSpec MechanismSpec::rfpa(double alpha) {
  if (!(alpha >= 1)) throw ValidationError("rFPA requires alpha >= 1");
  MechanismSpec m;
  m.kind_ = Kind::kRfpa;
  m.alpha_ = alpha;
  return m;
}

MechanismSpec MechanismSpec::qpfpa(double alpha) {
  if (!(alpha >= 1)) throw ValidationError("quasi-proportional FPA requires alpha >= 1");
  MechanismSpec m;
  m.kind_ = Kind::kQpfpa;
  m.alpha_ = alpha;
  return m;
}

Outcome fpa_allocate(const Instance& instance, const BidProfile& bids, const TieBreak& tie) {
  check_dims(instance, bids);
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  Matrix pi(n, std::vector<double>(q, 0.0));
  Matrix pay(n, std::vector<double>(q, 0.0));
  std::vector<int> tied;
  for (int j = 0; j < q; ++j) {
    double top = 0;
    for (int i = 0; i < n; ++i) top = std::max(top, bids.bid(i, j));
    if (top == 0) continue;  // nobody asked for it
    tied.clear();
    for (int i = 0; i < n; ++i) {
      if (bids.bid(i, j) == top) tied.push_back(i);
    }
    const int w = tie.winner(tied);
    pi[w][j] = 1.0;
    pay[w][j] = top;
  }
  return Outcome(instance, Allocation(std::move(pi)), std::move(pay));
}

double rfpa_high_bid_win_prob(double beta, double alpha) {
  if (!(alpha > 1) || !(beta >= 1)) {
    throw ValidationError("high-bid win probability needs alpha > 1 and beta >= 1");
  }
  if (beta >= alpha) return 1.0;
  return 0.5 * (1.0 + std::log(beta) / std::log(alpha));
}

Outcome rfpa_allocate(const Instance& instance, const BidProfile& bids, double alpha) {
  check_dims(instance, bids);
  if (instance.num_bidders() != 2) {
    throw ValidationError("rFPA is defined for exactly two bidders");
  }
  if (!(alpha > 1)) throw ValidationError("rFPA allocation requires alpha > 1");
  const int q = instance.num_queries();
  Matrix pi(2, std::vector<double>(q, 0.0));
  Matrix pay(2, std::vector<double>(q, 0.0));
  for (int j = 0; j < q; ++j) {
    const double b0 = bids.bid(0, j);
    const double b1 = bids.bid(1, j);
    if (b0 == 0 && b1 == 0) continue;
    const int hi = b0 >= b1 ? 0 : 1;
    const int lo = 1 - hi;
    const double bhi = bids.bid(hi, j);
    const double blo = bids.bid(lo, j);
    const double p_hi = blo == 0 ? 1.0 : rfpa_high_bid_win_prob(bhi / blo, alpha);
    pi[hi][j] = p_hi;
    pi[lo][j] = 1.0 - p_hi;
    pay[hi][j] = p_hi * bhi;
    pay[lo][j] = (1.0 - p_hi) * blo;
  }
  return Outcome(instance, Allocation(std::move(pi)), std::move(pay));
}

Outcome qpfpa_allocate(const Instance& instance, const BidProfile& bids, double alpha) {
  check_dims(instance, bids);
  if (!(alpha >= 1)) throw ValidationError("quasi-proportional FPA requires alpha >= 1");
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  Matrix pi(n, std::vector<double>(q, 0.0));
  Matrix pay(n, std::vector<double>(q, 0.0));
  std::vector<double> weight(n);
  for (int j = 0; j < q; ++j) {
    double top = 0;
    for (int i = 0; i < n; ++i) top = std::max(top, bids.bid(i, j));
    if (top == 0) continue;
    // b_i^alpha / sum_k b_k^alpha, computed as exp(alpha*(ln b_i - ln top)).
    const double log_top = std::log(top);
    double total = 0;
    for (int i = 0; i < n; ++i) {
      const double b = bids.bid(i, j);
      weight[i] = b == 0 ? 0.0 : std::exp(alpha * (std::log(b) - log_top));
      total += weight[i];
    }
    for (int i = 0; i < n; ++i) {
      const double p = weight[i] / total;
      pi[i][j] = p;
      pay[i][j] = p * bids.bid(i, j);
    }
  }
  return Outcome(instance, Allocation(std::move(pi)), std::move(pay));
}

Outcome allocate(const Instance& instance, const BidProfile& bids, const MechanismSpec& mechanism) {
  switch (mechanism.kind()) {
    case MechanismSpec::Kind::kFpa:
      return fpa_allocate(instance, bids, mechanism.tie());
    case MechanismSpec::Kind::kRfpa:
      return rfpa_allocate(instance, bids, mechanism.alpha());
    case MechanismSpec::Kind::kQpfpa:
      return qpfpa_allocate(instance, bids, mechanism.alpha());
  }
  throw ValidationError("unknown mechanism kind");
}

}  // namespace liquidbid
