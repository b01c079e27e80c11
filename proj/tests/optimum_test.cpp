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

#include "liquidbid/optimum.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "liquidbid/paperlab.hpp"
#include "liquidbid/random.hpp"
#include "liquidbid/simplex.hpp"

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

}  // namespace

TEST_CASE("fractional optimum on reference instances") {
  for (int n = 2; n <= 8; ++n) {
    const OptResult r = opt_fractional(gen_single_query_gap(n));
    CHECK(r.value == Catch::Approx(static_cast<double>(n)).margin(1e-7));
    CHECK(liquid_welfare(gen_single_query_gap(n), r.allocation) ==
          Catch::Approx(r.value).epsilon(1e-7));
    CHECK_FALSE(r.exact);
  }

  CHECK(opt_fractional(gen_fractional_beats_integral_pair()).value ==
        Catch::Approx(2.0).margin(1e-9));

  const OptResult solo = opt_fractional(make_instance({kInf}, {{3, 4}}));
  CHECK(solo.value == Catch::Approx(7.0).margin(1e-9));
  CHECK(solo.allocation.pi(0, 0) == Catch::Approx(1.0).margin(1e-9));
  CHECK(solo.allocation.pi(0, 1) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("integral optimum on reference instances") {
  for (int n = 2; n <= 6; ++n) {
    const OptResult r = opt_integral(gen_single_query_gap(n));
    CHECK(r.value == Catch::Approx(1.0).margin(1e-12));
    CHECK(r.exact);
  }

  for (int n : {2, 4}) {
    for (double eps : {0.1, 0.01}) {
      const auto [instance, profile] = gen_uniform_ipoa(n, eps);
      (void)profile;
      CHECK(opt_integral(instance).value == Catch::Approx(n + eps).margin(1e-9));
    }
  }

  CHECK(opt_integral(gen_fractional_beats_integral_pair()).value == Catch::Approx(1.0));

  const Instance solo = make_instance({2.5}, {{1, 1, 1}});
  CHECK(opt_integral(solo).value == Catch::Approx(2.5));

  // (n+1)^q above the node budget must refuse, not grind.
  const Instance wide = make_instance(std::vector<double>(9, 1.0), Matrix(9, std::vector<double>(10, 1.0)));
  CHECK_THROWS_AS(opt_integral(wide), SizeLimitError);
}

TEST_CASE("integral optimum is invariant under relabeling") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(2, 3);
    const int q = rng.uniform_int(1, 3);
    const Instance instance = sampler.sample(n, q, rng);
    const double base = opt_integral(instance).value;

    // Reverse both bidder and query order.
    std::vector<double> budgets(n);
    Matrix values(n, std::vector<double>(q, 0.0));
    for (int i = 0; i < n; ++i) {
      budgets[i] = instance.budget(n - 1 - i).value();
      for (int j = 0; j < q; ++j) values[i][j] = instance.value(n - 1 - i, q - 1 - j);
    }
    const Instance flipped = make_instance(budgets, values);
    CHECK(opt_integral(flipped).value == Catch::Approx(base).margin(1e-12));
  }
}

TEST_CASE("grid oracle") {
  CHECK(opt_fractional_bruteforce(gen_single_query_gap(2), 100) ==
        Catch::Approx(2.0).margin(0.02));

  // Even grid hits pi = 1/2 exactly on the budget-capped single bidder.
  CHECK(opt_fractional_bruteforce(make_instance({1}, {{2}}), 10) == Catch::Approx(1.0));

  CHECK_THROWS_AS(opt_fractional_bruteforce(
                      make_instance(std::vector<double>(4, 1.0),
                                    Matrix(4, std::vector<double>(2, 1.0))),
                      4),
                  SizeLimitError);

  // grid_steps = 1 enumerates exactly the deterministic allocations.
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(1, 3);
    const int q = rng.uniform_int(1, 2);
    const Instance instance = sampler.sample(n, q, rng);
    CHECK(opt_fractional_bruteforce(instance, 1) ==
          Catch::Approx(opt_integral(instance).value).margin(1e-12));
  }
}

TEST_CASE("single-query greedy oracle") {
  CHECK(single_query_fractional_greedy(gen_single_query_gap(4)).value ==
        Catch::Approx(4.0).margin(1e-12));

  const OptResult greedy = single_query_fractional_greedy(make_instance({1, 10}, {{3}, {2}}));
  CHECK(greedy.value == Catch::Approx(1.0 + 4.0 / 3).margin(1e-12));
  CHECK(greedy.allocation.pi(0, 0) == Catch::Approx(1.0 / 3));
  CHECK(greedy.allocation.pi(1, 0) == Catch::Approx(2.0 / 3));

  CHECK(single_query_fractional_greedy(make_instance({1, 1}, {{0}, {0}})).value == 0.0);
  CHECK_THROWS_AS(single_query_fractional_greedy(make_instance({1}, {{1, 1}})),
                  ValidationError);
}

TEST_CASE("optimum orderings and oracle agreement on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(1, 3);
    const int q = rng.uniform_int(1, 2);
    const Instance instance = sampler.sample(n, q, rng);

    const OptResult fractional = opt_fractional(instance);
    const OptResult integral = opt_integral(instance);
    CHECK(fractional.value >= integral.value - 1e-7 * (1 + integral.value));
    CHECK(fractional.value <= instance.welfare_scale() + 1e-7);
    CHECK(liquid_welfare(instance, fractional.allocation) ==
          Catch::Approx(fractional.value).margin(1e-7 * (1 + fractional.value)));
    CHECK(liquid_welfare(instance, integral.allocation) ==
          Catch::Approx(integral.value).margin(1e-9));

    const int grid_steps = 8;
    const double grid = opt_fractional_bruteforce(instance, grid_steps);
    double max_value = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < q; ++j) max_value = std::max(max_value, instance.value(i, j));
    }
    CHECK(grid <= fractional.value + 1e-6 * (1 + fractional.value));
    CHECK(grid >= fractional.value - n * q * max_value / grid_steps - 1e-9);

    if (q == 1) {
      const double greedy = single_query_fractional_greedy(instance).value;
      CHECK(fractional.value == Catch::Approx(greedy).margin(1e-9 * (1 + greedy)));
    }
  }
}

TEST_CASE("thm 3.1 family gap is exactly n") {
  for (int n = 2; n <= 8; ++n) {
    const Instance instance = gen_single_query_gap(n);
    const double ratio = opt_fractional(instance).value / opt_integral(instance).value;
    CHECK(ratio == Catch::Approx(static_cast<double>(n)).margin(1e-7));
  }
}

TEST_CASE("simplex edge cases") {
  // max x s.t. -x <= 0 is unbounded.
  CHECK_THROWS_AS(simplex_max({{-1.0}}, {0.0}, {1.0}), NumericError);
  // Degenerate rows are handled by Bland's rule.
  const SimplexSolution s = simplex_max({{1.0}, {1.0}}, {1.0, 1.0}, {1.0});
  CHECK(s.objective == Catch::Approx(1.0));
  CHECK_THROWS_AS(simplex_max({{1.0}}, {-1.0}, {1.0}), ValidationError);
}
