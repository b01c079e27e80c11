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

#include "liquidbid/bestresponse.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "liquidbid/optimum.hpp"
#include "liquidbid/paperlab.hpp"
#include "liquidbid/random.hpp"

using namespace liquidbid;

namespace {

Instance make_instance(std::vector<double> budgets, Matrix values) {
  std::vector<Budget> bs;
  for (double b : budgets) {
    bs.push_back(std::isinf(b) ? Budget::infinite() : Budget::finite(b));
  }
  return Instance(std::move(bs), std::move(values));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

BidProfile zeros(const Instance& instance) {
  return BidProfile::per_query(
      Matrix(instance.num_bidders(), std::vector<double>(instance.num_queries(), 0.0)));
}

}  // namespace

TEST_CASE("feasibility checks") {
  const Instance instance = make_instance({1, 1}, {{2}, {2}});

  // Bidding your own value keeps ROS by construction but can break budget.
  const auto truthful =
      check_feasibility(instance, MechanismSpec::fpa(), BidProfile::per_query({{2}, {2}}));
  CHECK_FALSE(truthful[0]);  // wins at 2 > budget 1
  CHECK(truthful[1]);        // loses, spends nothing

  const Instance roomy = make_instance({kInf, kInf}, {{2}, {2}});
  const auto ok =
      check_feasibility(roomy, MechanismSpec::fpa(), BidProfile::per_query({{2}, {2}}));
  CHECK(ok[0]);
  CHECK(ok[1]);

  const auto [uinst, uprofile] = gen_uniform_ipoa(4, 0.01);
  for (bool feasible : check_feasibility(uinst, MechanismSpec::fpa(), uprofile)) {
    CHECK(feasible);
  }
}

TEST_CASE("fpa subset best response") {
  const Instance solo = make_instance({kInf, kInf}, {{1}, {1}});
  const SubsetBestResponse br =
      best_response_fpa(solo, 0, {{0.0}, {0.5}}, TieBreak::lowest_index());
  CHECK(br.value == Catch::Approx(1.0));
  CHECK(br.queries == std::vector<int>{0});
  CHECK(br.cost == Catch::Approx(0.5).margin(1e-5));

  // Unaffordable opposition everywhere leaves the empty set.
  const Instance broke = make_instance({1, 10}, {{2, 2}, {5, 5}});
  const SubsetBestResponse empty =
      best_response_fpa(broke, 0, {{0, 0}, {3, 3}}, TieBreak::lowest_index());
  CHECK(empty.value == 0.0);
  CHECK(empty.queries.empty());

  // Budget binds across queries: only one of the two 0.6-priced queries fits.
  const Instance tight = make_instance({1, kInf}, {{1, 1}, {1, 1}});
  const SubsetBestResponse one =
      best_response_fpa(tight, 0, {{0, 0}, {0.6, 0.6}}, TieBreak::lowest_index());
  CHECK(one.value == Catch::Approx(1.0));
  CHECK(one.queries.size() == 1);
}

TEST_CASE("per-query and uniform best responses differ on the uniform worst case") {
  const double eps = 0.01;
  const auto [instance, profile] = gen_uniform_ipoa(3, eps);

  // Per-query deviations can pick up the small query alone.
  const SubsetBestResponse per_query =
      best_response_fpa(instance, 1, profile.bids(), TieBreak::lowest_index());
  CHECK(per_query.value == Catch::Approx(1.0));
  CHECK(per_query.queries == std::vector<int>{1});

  // A single multiplier cannot: any multiplier that wins something breaks a
  // constraint, and the best feasible one stops just under the big query.
  const UniformBestResponse uniform =
      best_response_uniform(instance, 1, MechanismSpec::fpa(), profile);
  CHECK(uniform.value == 0.0);
  CHECK(uniform.multiplier <= eps * (1 + eps) + 1e-12);
  CHECK(uniform.multiplier == Catch::Approx(eps * (1 + eps)).margin(1e-9));
}

TEST_CASE("uniform best response caps and saturation") {
  // Unopposed bidder: every positive multiplier wins everything; the scan
  // prefers the largest feasible one.
  const Instance open = make_instance({kInf, 1}, {{3, 4}, {0, 0}});
  const UniformBestResponse br =
      best_response_uniform(open, 0, MechanismSpec::fpa(), zeros(open));
  CHECK(br.value == Catch::Approx(7.0));
  CHECK(br.multiplier == 1.0);

  // rFPA with budget room keeps the truthful multiplier (m = 1).
  const Instance two = make_instance({kInf, kInf}, {{2, 1}, {1, 2}});
  const UniformBestResponse rfpa_br = best_response_uniform(
      two, 0, MechanismSpec::rfpa(1.4), BidProfile::uniform(two, {0.0, 1.0}));
  CHECK(rfpa_br.multiplier == Catch::Approx(1.0));

  // A tiny budget forces the multiplier below 1, at the budget frontier.
  const Instance capped = make_instance({0.5, kInf}, {{2, 1}, {1, 2}});
  const UniformBestResponse frontier = best_response_uniform(
      capped, 0, MechanismSpec::rfpa(1.4), BidProfile::uniform(capped, {0.0, 1.0}));
  CHECK(frontier.multiplier < 1.0);
  CHECK(frontier.cost == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("verify equilibrium on reference profiles") {
  {  // Two bidders fighting over one query settle at the budget frontier.
    const Instance instance = gen_fractional_beats_integral_pair();
    const EquilibriumReport report =
        verify_equilibrium(instance, MechanismSpec::fpa(), BidProfile::per_query({{1}, {1}}),
                           {DeviationFamily::fpa_subset()});
    CHECK(report.feasible);
    CHECK(report.is_equilibrium());
    CHECK(report.per_bidder[0].binding == "budget");
  }
  {  // The uniform worst case verifies as a uniform equilibrium.
    const auto [instance, profile] = gen_uniform_ipoa(3, 0.01);
    const EquilibriumReport report = verify_equilibrium(
        instance, MechanismSpec::fpa(), profile, {DeviationFamily::uniform_scan()});
    CHECK(report.is_equilibrium());
    // ... but not as a per-query equilibrium: the small queries are cheap.
    const EquilibriumReport strict = verify_equilibrium(
        instance, MechanismSpec::fpa(), profile, {DeviationFamily::fpa_subset()});
    CHECK_FALSE(strict.is_equilibrium());
    CHECK(strict.best_deviation_gain == Catch::Approx(1.0));
  }
  {  // Budget violations mark the profile infeasible.
    const Instance instance = make_instance({1, 1}, {{3}, {3}});
    const EquilibriumReport report =
        verify_equilibrium(instance, MechanismSpec::fpa(), BidProfile::per_query({{2}, {0}}),
                           {DeviationFamily::fpa_subset()});
    CHECK_FALSE(report.feasible);
    CHECK_FALSE(report.is_equilibrium());
    CHECK_FALSE(report.per_bidder[0].feasible);
  }
}

TEST_CASE("fpa dynamics reach the known fixpoints") {
  {  // Single bidder: take everything affordable, converge immediately.
    const Instance solo = make_instance({kInf}, {{3, 4}});
    const DynamicsResult dyn = best_response_dynamics(
        solo, MechanismSpec::fpa(), {DeviationFamily::fpa_subset()}, zeros(solo), 50);
    CHECK(dyn.converged);
    CHECK(dyn.rounds <= 3);
    const Outcome out = fpa_allocate(solo, dyn.bids, TieBreak::lowest_index());
    CHECK(out.value_of_bidder(0) == Catch::Approx(7.0));
  }
  {  // Two equal bidders on one query escalate to the budget frontier (1,1).
    const Instance instance = gen_fractional_beats_integral_pair();
    const DynamicsResult dyn = best_response_dynamics(
        instance, MechanismSpec::fpa(), {DeviationFamily::fpa_subset()}, zeros(instance), 50);
    CHECK(dyn.converged);
    const double eps = default_epsilon(instance);
    CHECK(dyn.bids.bid(0, 0) == Catch::Approx(1.0).margin(eps));
    CHECK(dyn.bids.bid(1, 0) == Catch::Approx(1.0).margin(eps));
  }
  {  // The single-query gap instance: dynamics land on welfare 1, ratio n.
    const Instance instance = gen_single_query_gap(3);
    const DynamicsResult dyn = best_response_dynamics(
        instance, MechanismSpec::fpa(), {DeviationFamily::fpa_subset()}, zeros(instance), 50);
    REQUIRE(dyn.converged);
    const Outcome out = fpa_allocate(instance, dyn.bids, TieBreak::lowest_index());
    CHECK(liquid_welfare(instance, out.allocation()) == Catch::Approx(1.0).margin(1e-6));
    const PoaReport poa = poa_ratio(instance, MechanismSpec::fpa(), dyn.bids);
    CHECK(poa.poa == Catch::Approx(3.0).margin(1e-5));
    CHECK(poa.ipoa == Catch::Approx(1.0).margin(1e-5));
  }
}

TEST_CASE("converged dynamics verify as equilibria on random instances") {
  Rng rng(41);
  int converged_count = 0;
  for (int trial = 0; trial < 60; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(2, 4);
    const int q = rng.uniform_int(1, 3);
    const Instance instance = sampler.sample(n, q, rng);
    const DynamicsResult dyn = best_response_dynamics(
        instance, MechanismSpec::fpa(), {DeviationFamily::fpa_subset()}, zeros(instance), 60);
    if (!dyn.converged) continue;
    ++converged_count;
    const EquilibriumReport report = verify_equilibrium(
        instance, MechanismSpec::fpa(), dyn.bids, {DeviationFamily::fpa_subset()});
    CHECK(report.feasible);
    CHECK(report.is_equilibrium());
  }
  CHECK(converged_count >= 40);
}

TEST_CASE("subset best response is monotone in opposing bids") {
  Rng rng(43);
  for (int trial = 0; trial < 120; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(2, 4);
    const int q = rng.uniform_int(1, 3);
    const Instance instance = sampler.sample(n, q, rng);
    Matrix bids(n, std::vector<double>(q, 0.0));
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < q; ++j) {
        bids[i][j] = rng.bernoulli(0.3) ? 0.0 : rng.log_uniform(1e-2, 1e2);
      }
    }
    const double base = best_response_fpa(instance, 0, bids, TieBreak::lowest_index()).value;
    const int i = rng.uniform_int(1, n - 1);
    const int j = rng.uniform_int(0, q - 1);
    bids[i][j] = bids[i][j] == 0 ? rng.log_uniform(1e-2, 1e2) : bids[i][j] * 2.0;
    const double raised = best_response_fpa(instance, 0, bids, TieBreak::lowest_index()).value;
    CHECK(raised <= base + 1e-12);
  }
}

TEST_CASE("diagnostics pass on true equilibria and flag broken ones") {
  const Instance gap = gen_single_query_gap(3);
  const BidProfile eq = BidProfile::per_query({{1}, {1}, {1}});
  const OptResult fractional = opt_fractional(gap);
  const OptResult integral = opt_integral(gap);
  DiagnosticsOptions options;
  options.fractional_benchmark = &fractional.allocation;
  options.integral_benchmark = &integral.allocation;

  for (const NamedCheck& check :
       equilibrium_diagnostics(gap, TieBreak::lowest_index(), eq, options)) {
    INFO(check.name);
    CHECK(check.pass);
  }

  // Underpriced query: winner pays 0.5 while the losers' budgets demand 1.
  int failures = 0;
  for (const NamedCheck& check : equilibrium_diagnostics(
           gap, TieBreak::lowest_index(), BidProfile::per_query({{0.5}, {0.5}, {0.5}}),
           options)) {
    failures += check.pass ? 0 : 1;
  }
  CHECK(failures > 0);

  // Unbounded budgets reduce the floors to spend >= value on lost queries.
  const Instance open = make_instance({kInf, kInf}, {{2, 1}, {1, 2}});
  const DynamicsResult dyn = best_response_dynamics(
      open, MechanismSpec::fpa(), {DeviationFamily::fpa_subset()}, zeros(open), 60);
  REQUIRE(dyn.converged);
  for (const NamedCheck& check :
       equilibrium_diagnostics(open, TieBreak::lowest_index(), dyn.bids, {})) {
    INFO(check.name);
    CHECK(check.pass);
  }
}

TEST_CASE("poa ratios on the randomized tie-breaking family") {
  const double eps = 0.01;
  const auto [instance, profile] = gen_single_query_gap_randomtie(4, eps);
  const EquilibriumReport report = verify_equilibrium(
      instance, MechanismSpec::fpa(), profile, {DeviationFamily::fpa_subset()});
  CHECK(report.is_equilibrium());
  const PoaReport poa = poa_ratio(instance, MechanismSpec::fpa(), profile);
  CHECK(poa.lw == Catch::Approx(2.0 + eps));
  CHECK(poa.poa >= 4.0 / 2 - 4 * eps);
  CHECK(poa.poa >= poa.ipoa - 1e-9);
  CHECK(poa.ipoa >= 1.0 - 1e-9);

  // n = 2 keeps a welfare ratio of at least 1 even though the profile
  // overshoots bidder 0's ROS constraint.
  const auto [small, small_profile] = gen_single_query_gap_randomtie(2, eps);
  const PoaReport small_poa = poa_ratio(small, MechanismSpec::fpa(), small_profile);
  CHECK(small_poa.poa >= 1.0 - 1e-9);
}

TEST_CASE("uniform ipoa profile ratio matches the construction") {
  const int n = 4;
  const double eps = 0.01;
  const auto [instance, profile] = gen_uniform_ipoa(n, eps);
  const Outcome out = fpa_allocate(instance, profile, TieBreak::lowest_index());
  const double lw = liquid_welfare(instance, out.allocation());
  CHECK(lw == Catch::Approx(1 + eps + (n - 1) * 2 * eps).margin(1e-12));
  const double iopt = opt_integral(instance).value;
  CHECK(iopt == Catch::Approx(n + eps).margin(1e-9));
  CHECK(lw / iopt <= 1.0 / n + 3 * eps);
}
