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

#include "liquidbid/model.hpp"

namespace liquidbid {

struct OptResult {
  double value = 0;
  Allocation allocation;
  bool exact = false;  // true for exact search, false for the LP
};

// Optimal fractional liquid welfare. Solves
//   max sum_i u_i  s.t.  u_i <= B_i (finite budgets only),
//                        u_i <= sum_j v_ij pi_ij,
//                        sum_i pi_ij <= 1,  pi, u >= 0
// with the in-repo dense simplex and returns a maximizing allocation.
OptResult opt_fractional(const Instance& instance);

// Optimal deterministic liquid welfare by branch and bound over per-query
// assignment (a query may stay unassigned), with the admissible bound
// sum_i min(B_i, value so far + all remaining values). Exceeding node_budget
// nodes, or (n+1)^q > node_budget up front, raises SizeLimitError.
OptResult opt_integral(const Instance& instance, std::int64_t node_budget = 100000000);

// Independent oracle: maximum welfare over the grid pi_ij in {0, 1/g, .., 1}
// with per-query feasibility. Requires n*q <= 6. Result is within
// n*q*max(v)/grid_steps of opt_fractional from below.
double opt_fractional_bruteforce(const Instance& instance, int grid_steps);

// Second oracle, exact for single-query instances: assign fractions to
// bidders in descending value order, capping each at B_i/v_i.
OptResult single_query_fractional_greedy(const Instance& instance);

}  // namespace liquidbid
