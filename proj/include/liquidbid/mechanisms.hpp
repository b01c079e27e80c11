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

#include <span>
#include <vector>

#include "liquidbid/model.hpp"

namespace liquidbid {

// Deterministic tie-breaking among the highest bidders of a query.
class TieBreak {
 public:
  enum class Rule { kLowestIndex, kHighestIndex, kPermutation };

  static TieBreak lowest_index();
  static TieBreak highest_index();
  // order[r] is the bidder preferred at rank r; must be a bijection.
  static TieBreak permutation(std::vector<int> order);

  Rule rule() const noexcept { return rule_; }
  // Winner among a nonempty set of tied bidder indices.
  int winner(std::span<const int> tied) const;
  // True when `bidder` beats every bidder in `tied` at equal bids.
  bool favors(int bidder, std::span<const int> tied) const;

 private:
  Rule rule_ = Rule::kLowestIndex;
  std::vector<int> rank_;  // rank_[bidder] = preference rank, permutation only
};

// Which auction is run, with its parameters.
class MechanismSpec {
 public:
  enum class Kind { kFpa, kRfpa, kQpfpa };

  static MechanismSpec fpa(TieBreak tie = TieBreak::lowest_index());
  static MechanismSpec rfpa(double alpha);   // two bidders, alpha > 1
  static MechanismSpec qpfpa(double alpha);  // alpha >= 1

  Kind kind() const noexcept { return kind_; }
  const TieBreak& tie() const noexcept { return tie_; }
  double alpha() const noexcept { return alpha_; }

 private:
  Kind kind_ = Kind::kFpa;
  TieBreak tie_;
  double alpha_ = 1;
};

// First price: the tie-break winner among max bidders takes the query and
// pays their bid; all-zero queries stay unallocated.
Outcome fpa_allocate(const Instance& instance, const BidProfile& bids, const TieBreak& tie);

// Two-bidder randomized first price with parameter alpha > 1. With bids
// b_hi >= b_lo > 0 the high bidder wins with probability 1 when
// b_hi >= alpha*b_lo and with probability (1 + log_alpha(b_hi/b_lo))/2
// otherwise; the winner pays their own bid, so expected payment is pi_i*b_i.
Outcome rfpa_allocate(const Instance& instance, const BidProfile& bids, double alpha);

// Win probability of the high bid at ratio beta = b_hi/b_lo >= 1,
// clamped to 1 at beta >= alpha.
double rfpa_high_bid_win_prob(double beta, double alpha);

// Quasi-proportional first price: pi_i = b_i^alpha / sum_k b_k^alpha, winner
// pays their bid. Powers are evaluated in log space so large alpha is safe.
Outcome qpfpa_allocate(const Instance& instance, const BidProfile& bids, double alpha);

Outcome allocate(const Instance& instance, const BidProfile& bids, const MechanismSpec& mechanism);

}  // namespace liquidbid
