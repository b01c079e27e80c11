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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "liquidbid/paperlab.hpp"
#include "liquidbid/random.hpp"

using namespace liquidbid;

namespace {

Instance flat_instance(int n, int q, double value = 1.0, double budget = 1.0) {
  return Instance(std::vector<Budget>(n, Budget::finite(budget)),
                  Matrix(n, std::vector<double>(q, value)));
}

}  // namespace

TEST_CASE("fpa allocation and payments") {
  const Instance instance = flat_instance(2, 2, 5.0, 10.0);
  const Outcome out = fpa_allocate(instance, BidProfile::per_query({{2, 0}, {1, 1}}),
                                   TieBreak::lowest_index());
  CHECK(out.allocation().pi(0, 0) == 1.0);
  CHECK(out.expected_payment()[0][0] == 2.0);
  CHECK(out.allocation().pi(1, 1) == 1.0);
  CHECK(out.expected_payment()[1][1] == 1.0);
  CHECK(out.spend_of_query(0) == 2.0);

  const Outcome tie = fpa_allocate(instance, BidProfile::per_query({{1, 0}, {1, 0}}),
                                   TieBreak::lowest_index());
  CHECK(tie.allocation().pi(0, 0) == 1.0);
  CHECK(tie.spend_of_bidder(0) == 1.0);
  CHECK(tie.allocation().pi(1, 0) == 0.0);
  // Query with all-zero bids stays unallocated.
  CHECK(tie.allocation().pi(0, 1) == 0.0);
  CHECK(tie.allocation().pi(1, 1) == 0.0);

  const Outcome high = fpa_allocate(instance, BidProfile::per_query({{1, 0}, {1, 0}}),
                                    TieBreak::highest_index());
  CHECK(high.allocation().pi(1, 0) == 1.0);

  const Outcome perm = fpa_allocate(instance, BidProfile::per_query({{1, 0}, {1, 0}}),
                                    TieBreak::permutation({1, 0}));
  CHECK(perm.allocation().pi(1, 0) == 1.0);
  CHECK_THROWS_AS(TieBreak::permutation({0, 0}), ValidationError);
}

TEST_CASE("fpa on the uniform worst case: the big bidder takes everything") {
  const int n = 3;
  const double eps = 0.1;
  auto [instance, profile] = gen_uniform_ipoa(n, eps);
  // Opponents at their highest multiplier that stays feasible.
  std::vector<double> multipliers(n, eps * (1 + eps));
  multipliers[0] = 1.0;
  const Outcome out = fpa_allocate(instance, BidProfile::uniform(instance, multipliers),
                                   TieBreak::lowest_index());
  for (int j = 0; j < n; ++j) {
    CHECK(out.allocation().pi(0, j) == 1.0);
  }
  CHECK(out.value_of_bidder(0) == Catch::Approx(1 + eps + (n - 1) * 2 * eps));
}

TEST_CASE("rfpa allocation") {
  const Instance instance = flat_instance(2, 1, 5.0, 10.0);

  const Outcome even = rfpa_allocate(instance, BidProfile::per_query({{1}, {1}}), 1.4);
  CHECK(even.allocation().pi(0, 0) == Catch::Approx(0.5));
  CHECK(even.allocation().pi(1, 0) == Catch::Approx(0.5));
  CHECK(even.spend_of_query(0) == Catch::Approx(1.0));

  const Outcome outright = rfpa_allocate(instance, BidProfile::per_query({{1.4}, {1}}), 1.4);
  CHECK(outright.allocation().pi(0, 0) == 1.0);
  CHECK(outright.expected_payment()[0][0] == Catch::Approx(1.4));
  CHECK(outright.expected_payment()[1][0] == 0.0);

  // Half a log step wins with probability 3/4.
  for (double alpha : {1.2, 1.4, 3.0, 9.0}) {
    const Outcome half =
        rfpa_allocate(instance, BidProfile::per_query({{std::sqrt(alpha)}, {1}}), alpha);
    CHECK(half.allocation().pi(0, 0) == Catch::Approx(0.75).margin(1e-12));
    CHECK(half.allocation().pi(1, 0) == Catch::Approx(0.25).margin(1e-12));
  }

  const Outcome lone = rfpa_allocate(instance, BidProfile::per_query({{0}, {0.3}}), 1.4);
  CHECK(lone.allocation().pi(1, 0) == 1.0);
  CHECK(lone.expected_payment()[1][0] == Catch::Approx(0.3));

  const Outcome idle = rfpa_allocate(instance, BidProfile::per_query({{0}, {0}}), 1.4);
  CHECK(idle.allocation().pi(0, 0) == 0.0);
  CHECK(idle.allocation().pi(1, 0) == 0.0);

  CHECK_THROWS_AS(
      rfpa_allocate(flat_instance(3, 1), BidProfile::per_query({{1}, {1}, {1}}), 1.4),
      ValidationError);
  CHECK_THROWS_AS(rfpa_allocate(instance, BidProfile::per_query({{1}, {1}}), 1.0),
                  ValidationError);
}

TEST_CASE("rfpa win probability is continuous and complementary") {
  const double alpha = 1.4;
  Rng rng(11);
  const Instance instance = flat_instance(2, 1, 5.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double b2 = rng.log_uniform(1e-3, 1e3);
    const double beta = rng.uniform(1.0 / alpha + 1e-6, alpha - 1e-6);
    const double b1 = beta * b2;
    const Outcome out = rfpa_allocate(instance, BidProfile::per_query({{b1}, {b2}}), alpha);
    const double p0 = out.allocation().pi(0, 0);
    const double p1 = out.allocation().pi(1, 0);
    CHECK(p0 + p1 == Catch::Approx(1.0).margin(1e-12));
    // Spend matches the certificate decomposition m*b_hi + (1-m)*b_lo.
    const double hi = std::max(b1, b2), lo = std::min(b1, b2);
    const double m = 0.5 * (1 + std::log(hi / lo) / std::log(alpha));
    CHECK(out.spend_of_query(0) == Catch::Approx(m * hi + (1 - m) * lo).margin(1e-9 * hi));
  }
  // Approaching the boundary from inside converges to the outright outcome.
  const Outcome near =
      rfpa_allocate(instance, BidProfile::per_query({{alpha * (1 - 1e-12)}, {1.0}}), alpha);
  CHECK(near.allocation().pi(0, 0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("qpfpa allocation") {
  const Instance four = flat_instance(4, 1, 5.0, 10.0);
  const Outcome even =
      qpfpa_allocate(four, BidProfile::per_query({{2}, {2}, {2}, {2}}), 3.0);
  for (int i = 0; i < 4; ++i) CHECK(even.allocation().pi(i, 0) == Catch::Approx(0.25));

  const Instance two = flat_instance(2, 1, 5.0, 10.0);
  const Outcome linear = qpfpa_allocate(two, BidProfile::per_query({{2}, {1}}), 1.0);
  CHECK(linear.allocation().pi(0, 0) == Catch::Approx(2.0 / 3));
  CHECK(linear.allocation().pi(1, 0) == Catch::Approx(1.0 / 3));
  CHECK(linear.spend_of_query(0) == Catch::Approx(5.0 / 3));

  // Large alpha approaches first price: 2^60/(2^60+1).
  const Outcome sharp = qpfpa_allocate(two, BidProfile::per_query({{2}, {1}}), 60.0);
  CHECK(sharp.allocation().pi(0, 0) >= 1.0 - 1e-15);

  // Huge alpha with large bids must not overflow.
  const Outcome huge = qpfpa_allocate(two, BidProfile::per_query({{90}, {80}}), 500.0);
  CHECK(huge.allocation().pi(0, 0) == Catch::Approx(1.0).margin(1e-12));

  const Outcome none = qpfpa_allocate(two, BidProfile::per_query({{0}, {0}}), 2.0);
  CHECK(none.allocation().pi(0, 0) == 0.0);
  const Outcome solo = qpfpa_allocate(two, BidProfile::per_query({{0.5}, {0}}), 2.0);
  CHECK(solo.allocation().pi(0, 0) == 1.0);
}

TEST_CASE("qpfpa scale invariance and payments") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 4);
    const double alpha = rng.log_uniform(1.0, 16.0);
    const Instance instance = flat_instance(n, 1, 5.0, 10.0);
    Matrix bids(n, std::vector<double>(1, 0.0));
    for (int i = 0; i < n; ++i) bids[i][0] = rng.log_uniform(1e-2, 1e2);
    const Outcome base = qpfpa_allocate(instance, BidProfile::per_query(bids), alpha);

    const double factor = rng.log_uniform(1e-2, 1e2);
    Matrix scaled = bids;
    for (int i = 0; i < n; ++i) scaled[i][0] *= factor;
    const Outcome rescaled = qpfpa_allocate(instance, BidProfile::per_query(scaled), alpha);
    for (int i = 0; i < n; ++i) {
      CHECK(rescaled.allocation().pi(i, 0) ==
            Catch::Approx(base.allocation().pi(i, 0)).margin(1e-9));
      CHECK(base.expected_payment()[i][0] ==
            Catch::Approx(base.allocation().pi(i, 0) * bids[i][0]).margin(1e-12));
    }
    CHECK(rescaled.spend_of_query(0) ==
          Catch::Approx(base.spend_of_query(0) * factor).epsilon(1e-9));
  }
}

TEST_CASE("allocations are monotone in the own bid and sub-stochastic") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int q = rng.uniform_int(1, 3);
    const bool rfpa = rng.bernoulli(0.5);
    const int n = rfpa ? 2 : rng.uniform_int(2, 4);
    const MechanismSpec mechanism = rfpa
                                        ? MechanismSpec::rfpa(rng.uniform(1.1, 4.0))
                                        : (rng.bernoulli(0.5)
                                               ? MechanismSpec::fpa()
                                               : MechanismSpec::qpfpa(rng.uniform(1.0, 8.0)));
    const Instance instance = flat_instance(n, q, 5.0, 100.0);
    Matrix bids(n, std::vector<double>(q, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < q; ++j) {
        bids[i][j] = rng.bernoulli(0.15) ? 0.0 : rng.log_uniform(1e-2, 1e2);
      }
    }
    const Outcome base = allocate(instance, BidProfile::per_query(bids), mechanism);
    for (int j = 0; j < q; ++j) {
      double total = 0;
      for (int i = 0; i < n; ++i) total += base.allocation().pi(i, j);
      CHECK(total <= 1.0 + 1e-9);
    }

    const int i = rng.uniform_int(0, n - 1);
    const int j = rng.uniform_int(0, q - 1);
    Matrix raised = bids;
    raised[i][j] = raised[i][j] == 0 ? rng.log_uniform(1e-2, 1e2)
                                     : raised[i][j] * rng.uniform(1.0, 3.0);
    const Outcome after = allocate(instance, BidProfile::per_query(raised), mechanism);
    CHECK(after.allocation().pi(i, j) >= base.allocation().pi(i, j) - 1e-12);
  }
}
