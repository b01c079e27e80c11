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
#include <optional>
#include <string>
#include <vector>

#include "liquidbid/mechanisms.hpp"
#include "liquidbid/model.hpp"

namespace liquidbid {

// A family of candidate deviations a bidder is checked against. Exact for
// FPA (subset / multiplier scans); a finite under-approximation of the full
// deviation space for the randomized mechanisms.
struct DeviationFamily {
  enum class Kind { kFpaSubset, kUniformScan, kGridPerQuery, kScaleAll };

  Kind kind = Kind::kFpaSubset;
  int steps = 64;    // grid resolution for the grid kinds
  double span = 0;   // multiplicative half-span; 0 means alpha^2 at use time

  static DeviationFamily fpa_subset() { return {Kind::kFpaSubset, 0, 0}; }
  static DeviationFamily uniform_scan() { return {Kind::kUniformScan, 0, 0}; }
  static DeviationFamily grid_per_query(int steps = 64, double span = 0) {
    return {Kind::kGridPerQuery, steps, span};
  }
  static DeviationFamily scale_all(int steps = 128, double span = 0) {
    return {Kind::kScaleAll, steps, span};
  }
};

// Default deviation families per mechanism: exact subset enumeration for
// per-query FPA, multiplier scan for uniform profiles, per-query grid plus
// global rescale for the randomized mechanisms.
std::vector<DeviationFamily> default_families(const MechanismSpec& mechanism,
                                              BidMode mode);

struct BidderState {
  double value = 0;       // V_i in the current outcome
  double spend = 0;       // Spend(i)
  double budget = 0;      // +inf when infinite
  bool feasible = false;  // spend <= min(budget, value) + tol
  std::string binding;    // "budget", "ros", "budget+ros" or "none"
};

struct NamedCheck {
  std::string name;
  bool pass = true;
  double margin = 0;   // worst slack observed; negative means violated
  int evaluated = 0;   // number of (bidder, query) comparisons made
};

struct EquilibriumReport {
  bool feasible = false;
  double best_deviation_gain = 0;
  double epsilon = 0;
  int best_deviator = -1;
  std::vector<BidderState> per_bidder;
  std::vector<NamedCheck> diagnostics;

  bool is_equilibrium() const { return feasible && best_deviation_gain <= epsilon; }
};

// A_B (budget reached), its complement, and the won-query sets N(i) of a
// deterministic outcome.
struct EquilibriumPartition {
  std::vector<int> budget_capped;        // A_B: B_i <= V_i
  std::vector<int> uncapped;             // complement
  std::vector<std::vector<int>> won;     // N(i)
};

EquilibriumPartition partition_bidders(const Instance& instance, const Outcome& outcome);

// Default equilibrium tolerance: 1e-6 relative to the welfare scale.
double default_epsilon(const Instance& instance);

// Per-bidder feasibility: Spend(i) <= min(B_i, V_i) + tol.
std::vector<bool> check_feasibility(const Instance& instance, const MechanismSpec& mechanism,
                                    const BidProfile& bids, double tol = 1e-9);

struct SubsetBestResponse {
  double value = 0;
  double cost = 0;
  std::uint32_t mask = 0;
  std::vector<int> queries;
  std::vector<double> prices;  // winning price per query in `queries`
};

// Exact FPA best response by enumeration over winnable query subsets, with
// the outbid margin delta = outbid_rel*(1+price) where the tie-break does
// not favor the bidder. |Q| <= 24.
SubsetBestResponse best_response_fpa(const Instance& instance, int bidder,
                                     const Matrix& all_bids, const TieBreak& tie);

struct UniformBestResponse {
  double value = 0;
  double multiplier = 0;
  double cost = 0;
};

// Best single multiplier in [0, 1]. FPA scans the breakpoints
// top_j / v_ij with a small margin on either side; the randomized
// mechanisms use a fine grid plus boundary bisection, valid because value
// and cost are monotone nondecreasing in the multiplier.
UniformBestResponse best_response_uniform(const Instance& instance, int bidder,
                                          const MechanismSpec& mechanism,
                                          const BidProfile& bids);

// Feasibility plus the best deviation gain over the union of families.
// Exact verdict for FpaSubset / UniformScan on FPA; family-relative for the
// grid kinds. epsilon <= 0 selects default_epsilon(instance).
EquilibriumReport verify_equilibrium(const Instance& instance, const MechanismSpec& mechanism,
                                     const BidProfile& bids,
                                     const std::vector<DeviationFamily>& families,
                                     double epsilon = 0);

struct DynamicsResult {
  BidProfile bids;
  bool converged = false;
  int rounds = 0;
};

// Round-robin best responses in bidder order until the profile reproduces
// itself exactly (a fixpoint, hence no deviation in the family gains
// anything) or max_rounds is exhausted. Deterministic given its inputs.
DynamicsResult best_response_dynamics(const Instance& instance, const MechanismSpec& mechanism,
                                      const std::vector<DeviationFamily>& families,
                                      const BidProfile& init, int max_rounds, double epsilon = 0);

struct DiagnosticsOptions {
  const Allocation* fractional_benchmark = nullptr;  // pi*
  const Allocation* integral_benchmark = nullptr;    // deterministic pi
  double epsilon = 0;                                // 0 -> default_epsilon
};

// Named inequality checks that every exact FPA equilibrium satisfies:
// spend floors on queries outside N(i) for bidders below budget, budget
// pressure on underpriced queries, and the assembled welfare chains when a
// benchmark allocation is supplied. Inputs are expected to have passed
// verify_equilibrium with the exact FPA family.
std::vector<NamedCheck> equilibrium_diagnostics(const Instance& instance, const TieBreak& tie,
                                                const BidProfile& bids,
                                                const DiagnosticsOptions& options = {});

// Bid floors that undominated rFPA profiles satisfy: a query won outright
// prices at alpha times the loser's value when the loser is below budget,
// and interior queries price at v/(1 + ln(alpha) + ln(beta)). Margins widen
// with grid_step, the resolution of the deviation grid that verified the
// profile.
std::vector<NamedCheck> rfpa_equilibrium_checks(const Instance& instance, const BidProfile& bids,
                                                double alpha, double grid_step,
                                                double epsilon = 0);

struct PoaReport {
  double poa = 0;
  double ipoa = 0;
  double lw = 0;
  double opt = 0;
  double iopt = 0;
};

// Opt/LW and I-Opt/LW for a profile already verified as an equilibrium.
// LW = 0 against a positive optimum reports +infinity.
PoaReport poa_ratio(const Instance& instance, const MechanismSpec& mechanism,
                    const BidProfile& bids);

}  // namespace liquidbid
