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
#include <utility>
#include <vector>

#include "liquidbid/bestresponse.hpp"
#include "liquidbid/mechanisms.hpp"
#include "liquidbid/model.hpp"
#include "liquidbid/random.hpp"

namespace liquidbid {

// n bidders, one query, every budget 1 and every value n: the fractional
// optimum splits the query n ways for welfare n while any deterministic
// assignment is worth 1.
Instance gen_single_query_gap(int n);

// Same shape with the first budget raised to 2+eps, paired with the profile
// in which every bidder bids their budget; the gap survives randomized
// tie-breaking at n/2.
std::pair<Instance, BidProfile> gen_single_query_gap_randomtie(int n, double eps);

// The uniform-bidding worst case: bidder 0 has infinite budget, value 1+eps
// on query 0 and 2*eps elsewhere; every other bidder i has budget 1, value
// 1/eps on query 0 and 1 on query i. Paired with the uniform profile where
// bidder 0 bids multiplier 1 and everyone else sits at 0.
std::pair<Instance, BidProfile> gen_uniform_ipoa(int n, double eps);

// Two bidders, one query, budgets 1 and values 2: fractional welfare 2,
// deterministic welfare 1.
Instance gen_fractional_beats_integral_pair();

// Random instances for equilibrium harvesting: log-uniform values, budgets
// infinite with probability one half and log-uniform otherwise.
struct InstanceSampler {
  double value_lo = 1e-2;
  double value_hi = 1e2;
  double budget_lo = 1e-2;
  double budget_hi = 1e2;
  double infinite_budget_prob = 0.5;
  bool clamp_values_to_budget = false;  // enforce v_ij <= B_i

  Instance sample(int num_bidders, int num_queries, Rng& rng) const;
};

struct ReplicationRow {
  std::string name;
  double claimed = 0;
  double measured = 0;
  bool pass = false;
  std::int64_t runtime_ms = 0;
  std::string note;  // the comparison that decided pass/fail
};

struct ReplicateOptions {
  std::uint64_t seed = 7;
  int threads = 1;
};

// Runs the whole replication table: the fractional/integral gap family, the
// random FPA and uniform-FPA equilibrium suites with their welfare-ratio
// ceilings and diagnostics, the rFPA certificates and sampled-equilibrium
// bid floors, the quasi-proportional limits, the oracle cross-checks, and a
// determinism self-test. Row failures are recorded, never thrown.
std::vector<ReplicationRow> replicate_all(const ReplicateOptions& options = {});

// JSON / CSV projections of the table. Wall-clock columns are emitted only
// on request since they are inherently nondeterministic.
std::string replication_table_json(const std::vector<ReplicationRow>& rows,
                                   bool include_timing = false);
std::string replication_table_csv(const std::vector<ReplicationRow>& rows,
                                  bool include_timing = false);

struct SearchOutcome {
  int samples = 0;
  int converged = 0;
  int verified = 0;
  double best_poa = 0;
  double best_ipoa = 0;
  std::int64_t best_poa_sample = -1;
  std::int64_t best_ipoa_sample = -1;
  std::optional<Instance> poa_witness;
  std::optional<BidProfile> poa_witness_bids;
  std::optional<Instance> ipoa_witness;
  std::optional<BidProfile> ipoa_witness_bids;
};

// Randomized worst-case search: sample instances, run best-response
// dynamics to an epsilon-equilibrium, verify it exactly, and track the
// largest Opt/LW and I-Opt/LW observed. Deterministic for a fixed seed
// regardless of thread count (ordered reduction over sample indices).
SearchOutcome worst_case_search(const MechanismSpec& mechanism, bool uniform_bidding, int n,
                                int q, int samples, std::uint64_t seed, int threads = 1);

}  // namespace liquidbid
