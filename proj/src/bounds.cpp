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

#include "liquidbid/bounds.hpp"

#include <cmath>

#include "liquidbid/model.hpp"

namespace liquidbid {

namespace {

void check_beta_domain(double beta, double alpha, bool closed) {
  if (!(alpha > 1)) throw ValidationError("certificate functions require alpha > 1");
  const bool inside = closed ? (beta >= 1.0 / alpha && beta <= alpha)
                             : (beta > 1.0 / alpha && beta < alpha);
  if (!inside) throw ValidationError("beta outside its ratio domain");
}

// Same formulas without the open-interval guard; the certificate grid
// evaluates the closed interval where everything stays finite.
double win_share_raw(double beta, double alpha) {
  return 0.5 * (1.0 + std::log(beta) / std::log(alpha));
}

double spend_share_raw(double beta, double alpha) {
  const double m = win_share_raw(beta, alpha);
  const double denom = 1.0 + std::log(alpha) + std::log(beta);
  return m / denom + (1.0 - m) / (beta * denom);
}

double spend_share_uniform_raw(double beta, double alpha) {
  const double m = win_share_raw(beta, alpha);
  return m + (1.0 - m) / beta;
}

}  // namespace

double rfpa_win_share(double beta, double alpha) {
  check_beta_domain(beta, alpha, /*closed=*/false);
  return win_share_raw(beta, alpha);
}

double rfpa_spend_share(double beta, double alpha) {
  check_beta_domain(beta, alpha, /*closed=*/false);
  return spend_share_raw(beta, alpha);
}

double rfpa_spend_share_uniform(double beta, double alpha) {
  check_beta_domain(beta, alpha, /*closed=*/false);
  return spend_share_uniform_raw(beta, alpha);
}

CertificateResult certify_rfpa(double alpha, double eta, double gamma, int grid, bool uniform) {
  if (!(alpha > 1)) throw ValidationError("certificate requires alpha > 1");
  if (!(eta >= 0) || !(gamma >= 0)) throw ValidationError("certificate weights must be >= 0");
  if (grid < 2) throw ValidationError("certificate grid needs at least 2 points");

  const auto objective = [&](double beta) {
    const double s = uniform ? spend_share_uniform_raw(beta, alpha) : spend_share_raw(beta, alpha);
    return eta * win_share_raw(beta, alpha) + gamma * s;
  };

  // Geometric grid over [1/alpha, alpha]: the objective is smooth in
  // ln(beta).
  const double lo = std::log(1.0 / alpha);
  const double hi = std::log(alpha);
  double best = objective(alpha);
  int best_index = grid - 1;
  for (int k = 0; k < grid; ++k) {
    const double beta = std::exp(lo + (hi - lo) * k / (grid - 1));
    const double v = objective(beta);
    if (v < best) {
      best = v;
      best_index = k;
    }
  }
  double arg = std::exp(lo + (hi - lo) * best_index / (grid - 1));

  // Golden-section refinement on the bracketing neighbors.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo + (hi - lo) * std::max(0, best_index - 1) / (grid - 1);
  double b = lo + (hi - lo) * std::min(grid - 1, best_index + 1) / (grid - 1);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = objective(std::exp(x1));
  double f2 = objective(std::exp(x2));
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(std::exp(x2));
    }
  }
  const double refined_arg = std::exp(0.5 * (a + b));
  const double refined_val = objective(refined_arg);
  if (refined_val < best) {
    best = refined_val;
    arg = refined_arg;
  }

  CertificateResult result;
  result.beta_term = best;
  result.value = std::min({gamma, alpha * eta, best});
  result.argmin_beta = arg;
  result.grid_size = grid;
  result.refined = true;
  result.uniform = uniform;
  result.alpha = alpha;
  result.eta = eta;
  result.gamma = gamma;
  return result;
}

namespace {

void check_qp_domain(double eta, double alpha, int n) {
  if (!(eta > 0 && eta < 1)) throw ValidationError("eta must lie in (0, 1)");
  if (!(alpha >= 1)) throw ValidationError("alpha must be at least 1");
  if (n < 2) throw ValidationError("the spend bound needs at least 2 bidders");
}

}  // namespace

double qp_spend_lower_bound(double value, double eta, double alpha, int n) {
  check_qp_domain(eta, alpha, n);
  if (value < 0) throw ValidationError("value must be nonnegative");
  const double root = std::exp(std::log(n * eta) / alpha);  // (n eta)^(1/alpha)
  return value * alpha * (1.0 - eta) / (root * (alpha - alpha * eta + 1.0));
}

double qp_poa_bound(double eta, double alpha, int n) {
  check_qp_domain(eta, alpha, n);
  const double root = std::exp(std::log(n * eta) / alpha);
  return 1.0 / eta + root * (alpha - alpha * eta + 1.0) / (alpha * (1.0 - eta));
}

double qp_stationary_bid_lower_bound(double value, double eta, double alpha) {
  if (!(eta > 0 && eta < 1)) throw ValidationError("eta must lie in (0, 1)");
  if (!(alpha >= 1)) throw ValidationError("alpha must be at least 1");
  if (value < 0) throw ValidationError("value must be nonnegative");
  return value * alpha * (1.0 - eta) / (alpha - alpha * eta + 1.0);
}

double qp_stationary_bid(double value, double log_opponent_mass, double alpha) {
  if (!(value > 0)) throw ValidationError("stationary bid needs a positive value");
  if (!(alpha >= 1)) throw ValidationError("alpha must be at least 1");
  // First-order condition of (v-b) b^a/(b^a+K), scaled by r = b/v:
  //   h(r) = C r^(a+1) + r (a+1) - a = 0, C = v^a / K,
  // with h increasing, h(0) < 0, h(1) > 0. Bisect on ln(r) so the power
  // term stays representable for any magnitude of C.
  const double log_c = alpha * std::log(value) - log_opponent_mass;
  const auto h = [&](double log_r) {
    const double r = std::exp(log_r);
    return std::exp(log_c + (alpha + 1.0) * log_r) + r * (alpha + 1.0) - alpha;
  };
  double lo = -800.0, hi = 0.0;
  if (h(hi) <= 0) return value;  // numerically at the boundary
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return value * std::exp(0.5 * (lo + hi));
}

}  // namespace liquidbid
