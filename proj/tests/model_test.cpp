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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

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

}  // namespace

TEST_CASE("liquid welfare basics") {
  // Single query shared three ways at value 3 each fills every budget.
  const Instance gap3 = gen_single_query_gap(3);
  const Allocation thirds(Matrix{{1.0 / 3}, {1.0 / 3}, {1.0 / 3}});
  CHECK(liquid_welfare(gap3, thirds) == Catch::Approx(3.0).margin(1e-12));

  CHECK(liquid_welfare(gap3, Allocation::zeros(3, 1)) == 0.0);

  const Instance capped = make_instance({1}, {{2}});
  CHECK(liquid_welfare(capped, Allocation(Matrix{{1.0}})) == Catch::Approx(1.0));
}

TEST_CASE("liquid welfare of subsets") {
  const Instance gap3 = gen_single_query_gap(3);
  const Allocation thirds(Matrix{{1.0 / 3}, {1.0 / 3}, {1.0 / 3}});
  const std::vector<int> all = {0, 1, 2};
  const std::vector<int> none = {};
  const std::vector<int> first = {0};
  CHECK(liquid_welfare_of_subset(gap3, thirds, all) ==
        Catch::Approx(liquid_welfare(gap3, thirds)));
  CHECK(liquid_welfare_of_subset(gap3, thirds, none) == 0.0);
  // min(B_0, 3 * 1/3) = 1, hand-checked.
  CHECK(liquid_welfare_of_subset(gap3, thirds, first) == Catch::Approx(1.0).margin(1e-12));

  const std::vector<int> bad = {7};
  CHECK_THROWS_AS(liquid_welfare_of_subset(gap3, thirds, bad), ValidationError);
}

TEST_CASE("liquid welfare is monotone and singleton-additive") {
  Rng rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    InstanceSampler sampler;
    const int n = rng.uniform_int(1, 4);
    const int q = rng.uniform_int(1, 4);
    const Instance instance = sampler.sample(n, q, rng);

    Matrix pi(n, std::vector<double>(q, 0.0));
    for (int j = 0; j < q; ++j) {
      double left = 1.0;
      for (int i = 0; i < n; ++i) {
        const double p = rng.uniform01() * left;
        pi[i][j] = p;
        left -= p;
      }
    }
    const Allocation base(pi);
    const double lw = liquid_welfare(instance, base);

    // Raising one entry (within query feasibility) never lowers welfare.
    const int i = rng.uniform_int(0, n - 1);
    const int j = rng.uniform_int(0, q - 1);
    double col = 0;
    for (int k = 0; k < n; ++k) col += pi[k][j];
    pi[i][j] += (1.0 - col) * rng.uniform01();
    CHECK(liquid_welfare(instance, Allocation(pi)) >= lw - 1e-12);

    CHECK(lw <= instance.welfare_scale() + 1e-9);

    double singleton_sum = 0;
    for (int k = 0; k < n; ++k) {
      const std::vector<int> just_k = {k};
      singleton_sum += liquid_welfare_of_subset(instance, base, just_k);
    }
    CHECK(singleton_sum == Catch::Approx(lw).margin(1e-9));
  }
}

TEST_CASE("instance JSON round trip") {
  CHECK_THROWS_AS(load_instance(R"({"budgets":[1],"values":[[-1]]})"), ValidationError);
  CHECK_THROWS_AS(load_instance(R"({"budgets":[1]})"), ValidationError);
  CHECK_THROWS_AS(load_instance(R"({"budgets":[1],"values":[["x"]]})"), ValidationError);
  CHECK_THROWS_AS(load_instance(R"({"budgets":[0],"values":[[1]]})"), ValidationError);
  CHECK_THROWS_AS(load_instance("not json"), ValidationError);

  const Instance two = load_instance(R"({"budgets":[1,1],"values":[[2],[2]]})");
  CHECK(two.num_bidders() == 2);
  CHECK(two.num_queries() == 1);
  CHECK(two.value(1, 0) == 2.0);

  const Instance inf = load_instance(R"({"budgets":["inf"],"values":[[1,1]]})");
  CHECK(inf.budget(0).is_infinite());
  CHECK(inf.welfare_scale() == Catch::Approx(2.0));

  // Round trip is bit-exact for awkward doubles.
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    InstanceSampler sampler;
    const Instance instance = sampler.sample(rng.uniform_int(1, 3), rng.uniform_int(1, 3), rng);
    const std::string text = save_instance(instance);
    const Instance back = load_instance(text);
    REQUIRE(back.num_bidders() == instance.num_bidders());
    REQUIRE(back.num_queries() == instance.num_queries());
    for (int i = 0; i < instance.num_bidders(); ++i) {
      CHECK(back.budget(i).value() == instance.budget(i).value());
      for (int j = 0; j < instance.num_queries(); ++j) {
        CHECK(back.value(i, j) == instance.value(i, j));
      }
    }
    CHECK(save_instance(back) == text);
  }
}

TEST_CASE("bid profile modes") {
  const Instance instance = make_instance({1, 1}, {{2, 1}, {3, 0}});
  const BidProfile uniform = BidProfile::uniform(instance, {0.5, 1.0});
  CHECK(uniform.bid(0, 0) == Catch::Approx(1.0));
  CHECK(uniform.bid(1, 1) == 0.0);
  CHECK(uniform.multipliers()[0] == 0.5);

  const BidProfile per_query = load_bid_profile(
      R"({"mode":"per_query","bids":[[1,0],[0,1]]})", instance);
  CHECK(per_query.mode() == BidMode::kPerQuery);
  CHECK_THROWS_AS(per_query.multipliers(), ValidationError);

  const BidProfile from_json =
      load_bid_profile(R"({"mode":"uniform","multipliers":[0.5,1]})", instance);
  CHECK(from_json.bid(1, 0) == Catch::Approx(3.0));
  CHECK(load_bid_profile(save_bid_profile(from_json), instance).bid(1, 0) == Catch::Approx(3.0));

  CHECK_THROWS_AS(load_bid_profile(R"({"mode":"nope"})", instance), ValidationError);
  CHECK_THROWS_AS(
      load_bid_profile(R"({"mode":"per_query","bids":[[1],[1]]})", instance), ValidationError);
}

TEST_CASE("allocation and outcome invariants") {
  CHECK_THROWS_AS(Allocation(Matrix{{0.7}, {0.7}}), ValidationError);
  CHECK_THROWS_AS(Allocation(Matrix{{1.5}}), ValidationError);

  const Instance instance = make_instance({1, 1}, {{2}, {2}});
  // A bidder that never wins cannot pay.
  CHECK_THROWS_AS(
      Outcome(instance, Allocation(Matrix{{1.0}, {0.0}}), Matrix{{0.5}, {0.1}}),
      ValidationError);
  const Outcome ok(instance, Allocation(Matrix{{0.5}, {0.5}}), Matrix{{0.4}, {0.3}});
  CHECK(ok.spend_of_query(0) == Catch::Approx(0.7));
  CHECK(ok.spend_of_bidder(1) == Catch::Approx(0.3));
  CHECK(ok.value_of_bidder(0) == Catch::Approx(1.0));
}
