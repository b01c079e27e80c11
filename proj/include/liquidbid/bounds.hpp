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

namespace liquidbid {

// Ingredients of the rFPA welfare certificates, as functions of the bid
// ratio beta = b_hi/b_lo in (1/alpha, alpha) for a fixed alpha > 1.

// Win probability of the ratio-beta bid: (1 + ln(beta)/ln(alpha)) / 2.
double rfpa_win_share(double beta, double alpha);

// Per-unit-value spend floor at ratio beta for arbitrary bids:
// m/(1+ln a+ln b) + (1-m)/(beta (1+ln a+ln b)) with m = rfpa_win_share.
double rfpa_spend_share(double beta, double alpha);

// Per-unit-value spend floor under uniform bidding: m + (1-m)/beta.
double rfpa_spend_share_uniform(double beta, double alpha);

struct CertificateResult {
  double value = 0;        // min{gamma, alpha*eta, min_beta eta*m + gamma*s}
  double beta_term = 0;    // the inner minimum over beta alone
  double argmin_beta = 0;
  int grid_size = 0;
  bool refined = false;
  bool uniform = false;
  double alpha = 0, eta = 0, gamma = 0;
};

// Numeric lower-bound certificate for the rFPA welfare guarantee: a dense
// geometric grid over beta in [1/alpha, alpha] plus golden-section
// refinement around the grid argmin. This is a numeric bound with a small
// reported slack, not a proof.
CertificateResult certify_rfpa(double alpha, double eta, double gamma, int grid = 10000,
                               bool uniform = false);

// Quasi-proportional spend floor for a query where some bidder with value v
// wins with probability at most eta:
//   v * alpha(1-eta) / ((n eta)^(1/alpha) (alpha - alpha eta + 1)).
double qp_spend_lower_bound(double value, double eta, double alpha, int n);

// The resulting welfare ratio bound
//   1/eta + (n eta)^(1/alpha) (alpha - alpha eta + 1) / (alpha (1-eta)),
// which tends to 1/eta + 1 as alpha grows.
double qp_poa_bound(double eta, double alpha, int n);

// First-order bid floor behind the spend bound: a stationary bid with win
// probability at most eta satisfies b >= v*alpha(1-eta)/(alpha-alpha*eta+1).
double qp_stationary_bid_lower_bound(double value, double eta, double alpha);

// Companion solver: the stationary point of (v-b) b^a / (b^a + K) in (0, v),
// found by bisection on the monotone first-order condition. The opponent
// mass K is passed as log(K) so huge powers stay representable.
double qp_stationary_bid(double value, double log_opponent_mass, double alpha);

}  // namespace liquidbid
