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

#include <algorithm>
#include <cmath>
#include <limits>

#include "liquidbid/optimum.hpp"

namespace liquidbid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double feas_tol() { return default_tolerances().feasibility; }
double outbid_rel() { return default_tolerances().outbid_rel; }

// Outbid margin at a given standing price.
double outbid_delta(double price) { return outbid_rel() * (1.0 + price); }

struct QueryView {
  double top = 0;           // highest opposing bid
  bool wins_at_equal = false;  // tie-break favors the bidder at that price
};

QueryView opposing_view(const Matrix& bids, int bidder, int query, const TieBreak& tie) {
  QueryView v;
  const int n = static_cast<int>(bids.size());
  for (int k = 0; k < n; ++k) {
    if (k != bidder) v.top = std::max(v.top, bids[k][query]);
  }
  if (v.top > 0) {
    std::vector<int> tied;
    for (int k = 0; k < n; ++k) {
      if (k != bidder && bids[k][query] == v.top) tied.push_back(k);
    }
    v.wins_at_equal = tie.favors(bidder, tied);
  }
  return v;
}

// Minimum payment for the bidder to win the query. An all-zero query still
// requires a positive bid.
double price_to_win(const QueryView& v) {
  if (v.top == 0) return outbid_delta(0.0);
  return v.wins_at_equal ? v.top : v.top + outbid_delta(v.top);
}

// Highest bid that is guaranteed not to win the query.
double max_losing_bid(const QueryView& v) {
  if (v.top == 0) return 0.0;
  return v.wins_at_equal ? v.top * (1.0 - outbid_rel()) : v.top;
}

// Value and spend of one bidder under a mechanism, without building a full
// Outcome. Semantics mirror the allocate functions exactly.
std::pair<double, double> eval_bidder(const Instance& instance, const MechanismSpec& mechanism,
                                      const Matrix& bids, int bidder) {
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  double value = 0;
  double spend = 0;
  std::vector<int> tied;
  for (int j = 0; j < q; ++j) {
    switch (mechanism.kind()) {
      case MechanismSpec::Kind::kFpa: {
        double top = 0;
        for (int i = 0; i < n; ++i) top = std::max(top, bids[i][j]);
        if (top == 0 || bids[bidder][j] != top) break;
        tied.clear();
        for (int i = 0; i < n; ++i) {
          if (bids[i][j] == top) tied.push_back(i);
        }
        if (mechanism.tie().winner(tied) == bidder) {
          value += instance.value(bidder, j);
          spend += top;
        }
        break;
      }
      case MechanismSpec::Kind::kRfpa: {
        const double mine = bids[bidder][j];
        const double their = bids[1 - bidder][j];
        if (mine == 0 && their == 0) break;
        double p;
        if (mine >= their) {
          p = their == 0 ? 1.0 : rfpa_high_bid_win_prob(mine / their, mechanism.alpha());
        } else {
          p = mine == 0 ? 0.0 : 1.0 - rfpa_high_bid_win_prob(their / mine, mechanism.alpha());
        }
        value += p * instance.value(bidder, j);
        spend += p * mine;
        break;
      }
      case MechanismSpec::Kind::kQpfpa: {
        double top = 0;
        for (int i = 0; i < n; ++i) top = std::max(top, bids[i][j]);
        if (top == 0 || bids[bidder][j] == 0) break;
        const double log_top = std::log(top);
        double total = 0;
        for (int i = 0; i < n; ++i) {
          const double b = bids[i][j];
          if (b > 0) total += std::exp(mechanism.alpha() * (std::log(b) - log_top));
        }
        const double p =
            std::exp(mechanism.alpha() * (std::log(bids[bidder][j]) - log_top)) / total;
        value += p * instance.value(bidder, j);
        spend += p * bids[bidder][j];
        break;
      }
    }
  }
  return {value, spend};
}

}  // namespace

std::vector<DeviationFamily> default_families(const MechanismSpec& mechanism, BidMode mode) {
  if (mode == BidMode::kUniform) return {DeviationFamily::uniform_scan()};
  if (mechanism.kind() == MechanismSpec::Kind::kFpa) return {DeviationFamily::fpa_subset()};
  return {DeviationFamily::grid_per_query(), DeviationFamily::scale_all()};
}

double default_epsilon(const Instance& instance) {
  return default_tolerances().epsilon_rel * instance.welfare_scale();
}

EquilibriumPartition partition_bidders(const Instance& instance, const Outcome& outcome) {
  EquilibriumPartition p;
  const int n = instance.num_bidders();
  p.won.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < instance.num_queries(); ++j) {
      if (outcome.allocation().pi(i, j) > 0.5) p.won[i].push_back(j);
    }
    if (instance.budget(i).value() <= outcome.value_of_bidder(i) + feas_tol()) {
      p.budget_capped.push_back(i);
    } else {
      p.uncapped.push_back(i);
    }
  }
  return p;
}

std::vector<bool> check_feasibility(const Instance& instance, const MechanismSpec& mechanism,
                                    const BidProfile& bids, double tol) {
  const Outcome outcome = allocate(instance, bids, mechanism);
  std::vector<bool> ok(instance.num_bidders());
  for (int i = 0; i < instance.num_bidders(); ++i) {
    const double cap = instance.budget(i).cap(outcome.value_of_bidder(i));
    ok[i] = outcome.spend_of_bidder(i) <= cap + tol;
  }
  return ok;
}

SubsetBestResponse best_response_fpa(const Instance& instance, int bidder,
                                     const Matrix& all_bids, const TieBreak& tie) {
  const int q = instance.num_queries();
  if (q > 24) throw SizeLimitError("subset best response limited to 24 queries");
  if (bidder < 0 || bidder >= instance.num_bidders()) {
    throw ValidationError("bidder index out of range");
  }

  std::vector<double> price(q), suffix_value(q + 1, 0.0);
  for (int j = 0; j < q; ++j) {
    price[j] = price_to_win(opposing_view(all_bids, bidder, j, tie));
  }
  for (int j = q - 1; j >= 0; --j) {
    suffix_value[j] = suffix_value[j + 1] + instance.value(bidder, j);
  }
  const double budget = instance.budget(bidder).value();

  // Exclude-first enumeration with a lower-cost tie-break, so equal-value
  // sets resolve to the cheapest one found (never pay for worthless wins).
  SubsetBestResponse best;  // empty set: value 0, cost 0, always feasible
  std::uint32_t mask = 0;
  const auto dfs = [&](auto&& self, int j, double value, double cost) -> void {
    if (cost > budget + feas_tol()) return;
    if (cost - value > suffix_value[j] + feas_tol()) return;  // ROS unreachable
    if (j == q) {
      if (cost <= std::min(budget, value) + feas_tol() &&
          (value > best.value || (value == best.value && cost < best.cost))) {
        best.value = value;
        best.cost = cost;
        best.mask = mask;
      }
      return;
    }
    if (value + suffix_value[j] < best.value) return;
    self(self, j + 1, value, cost);
    mask |= 1u << j;
    self(self, j + 1, value + instance.value(bidder, j), cost + price[j]);
    mask &= ~(1u << j);
  };
  dfs(dfs, 0, 0.0, 0.0);

  for (int j = 0; j < q; ++j) {
    if (best.mask & (1u << j)) {
      best.queries.push_back(j);
      best.prices.push_back(price[j]);
    }
  }
  return best;
}

namespace {

// Canonical aggressive rebid: pay the winning price on the chosen set, spend
// the remaining liquid headroom in proportion to value, and hold every lost
// query at the highest bid the bidder could still honor without winning it.
// Losers standing at their caps are what props equilibrium prices.
std::vector<double> canonical_fpa_rebid(const Instance& instance, int bidder,
                                        const Matrix& all_bids, const TieBreak& tie,
                                        const SubsetBestResponse& br) {
  const int q = instance.num_queries();
  const double budget_cap = instance.budget(bidder).cap(br.value);
  const double headroom = std::max(0.0, budget_cap - br.cost);

  std::vector<double> row(q, 0.0);
  for (std::size_t k = 0; k < br.queries.size(); ++k) {
    const int j = br.queries[k];
    const double share = br.value > 0 ? instance.value(bidder, j) / br.value : 0.0;
    row[j] = br.prices[k] + headroom * share;
  }
  for (int j = 0; j < q; ++j) {
    if (br.mask & (1u << j)) continue;
    const QueryView view = opposing_view(all_bids, bidder, j, tie);
    const double standby =
        std::min(instance.budget(bidder).value(), br.value + instance.value(bidder, j)) - br.cost;
    row[j] = std::max(0.0, std::min(standby, max_losing_bid(view)));
  }
  return row;
}

struct UniformCandidateScan {
  double best_value = 0;
  double best_multiplier = 0;
  double best_cost = 0;
  bool any = false;
};

// FPA value/cost of bidder `i` bidding m*v against fixed opposing bids.
void eval_uniform_fpa(const Instance& instance, int bidder, const std::vector<QueryView>& views,
                      double m, double* value, double* cost) {
  *value = 0;
  *cost = 0;
  for (int j = 0; j < instance.num_queries(); ++j) {
    const double bid = m * instance.value(bidder, j);
    if (bid <= 0) continue;
    const bool wins = bid > views[j].top || (bid == views[j].top && views[j].wins_at_equal);
    if (wins) {
      *value += instance.value(bidder, j);
      *cost += bid;
    }
  }
}

}  // namespace

UniformBestResponse best_response_uniform(const Instance& instance, int bidder,
                                          const MechanismSpec& mechanism,
                                          const BidProfile& bids) {
  const int q = instance.num_queries();
  const double budget = instance.budget(bidder).value();

  if (mechanism.kind() == MechanismSpec::Kind::kFpa) {
    std::vector<QueryView> views(q);
    for (int j = 0; j < q; ++j) {
      views[j] = opposing_view(bids.bids(), bidder, j, mechanism.tie());
    }
    // Breakpoints where the won set can change, probed exactly and just
    // around; multipliers above 1 lose money on every won query, so cap.
    std::vector<double> candidates = {0.0, 1e-12, 1.0};
    for (int j = 0; j < q; ++j) {
      const double v = instance.value(bidder, j);
      if (v <= 0 || views[j].top <= 0) continue;
      const double bp = views[j].top / v;
      for (double m : {bp * (1.0 - outbid_rel()), bp, bp * (1.0 + outbid_rel())}) {
        if (m >= 0 && m <= 1.0) candidates.push_back(m);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    UniformBestResponse best;
    for (double m : candidates) {
      double value = 0, cost = 0;
      eval_uniform_fpa(instance, bidder, views, m, &value, &cost);
      if (cost > std::min(budget, value) + feas_tol()) continue;
      if (value > best.value || (value == best.value && m > best.multiplier)) {
        best = {value, m, cost};
      }
    }
    return best;
  }

  // Randomized mechanisms: value and cost are monotone nondecreasing in the
  // multiplier and the ROS constraint is automatic for m <= 1, so the best
  // response is the largest budget-feasible multiplier. Coarse grid to
  // bracket the boundary, then bisection.
  Matrix work = bids.bids();
  const auto eval = [&](double m) {
    for (int j = 0; j < q; ++j) work[bidder][j] = m * instance.value(bidder, j);
    return eval_bidder(instance, mechanism, work, bidder);
  };
  const int grid = 128;
  double lo = 0.0, hi = 0.0;
  bool full = true;
  for (int k = 1; k <= grid; ++k) {
    const double m = static_cast<double>(k) / grid;
    const auto [value, cost] = eval(m);
    if (cost <= std::min(budget, value) + feas_tol()) {
      lo = m;
    } else {
      hi = m;
      full = false;
      break;
    }
  }
  double m_star = lo;
  if (!full) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto [value, cost] = eval(mid);
      if (cost <= std::min(budget, value) + feas_tol()) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    m_star = lo;
  }
  const auto [value, cost] = eval(m_star);
  return {value, m_star, cost};
}

namespace {

double grid_span(const DeviationFamily& family, const MechanismSpec& mechanism) {
  if (family.span > 0) return family.span;
  if (mechanism.kind() == MechanismSpec::Kind::kFpa) return 4.0;
  const double span = mechanism.alpha() * mechanism.alpha();
  return std::min(std::max(span, 1.0 + 1e-6), 1e6);
}

// Single-query bid candidates around the opposing top (own value as the
// fallback scale when nobody else bids).
std::vector<double> grid_candidates(const Instance& instance, int bidder, int query,
                                    const Matrix& bids, const DeviationFamily& family,
                                    const MechanismSpec& mechanism) {
  double top = 0;
  for (int k = 0; k < instance.num_bidders(); ++k) {
    if (k != bidder) top = std::max(top, bids[k][query]);
  }
  const double ref = top > 0 ? top : instance.value(bidder, query);
  std::vector<double> cands = {0.0, instance.value(bidder, query)};
  if (ref > 0) {
    const double span = grid_span(family, mechanism);
    const double lo = std::log(ref / span);
    const double hi = std::log(ref * span);
    for (int k = 0; k < family.steps; ++k) {
      cands.push_back(std::exp(lo + (hi - lo) * k / (family.steps - 1)));
    }
  }
  return cands;
}

struct GridMove {
  double gain = 0;
  int query = -1;       // -1 means a global rescale
  double bid = 0;       // new bid (query move) or scale factor
  double value = 0;
  bool feasible = false;
};

// Best single move for one bidder across the grid/scale families. Also
// reports the best feasible candidate outright, used to repair an
// infeasible starting profile.
GridMove best_grid_move(const Instance& instance, const MechanismSpec& mechanism, Matrix& bids,
                        int bidder, const std::vector<DeviationFamily>& families) {
  const double budget = instance.budget(bidder).value();
  const auto [cur_value, cur_spend] = eval_bidder(instance, mechanism, bids, bidder);
  const bool cur_feasible = cur_spend <= std::min(budget, cur_value) + feas_tol();

  GridMove best;
  best.value = cur_value;
  const auto consider = [&](int query, double setting, double value, double cost) {
    if (cost > std::min(budget, value) + feas_tol()) return;
    const double gain = value - cur_value;
    const bool better = !best.feasible || gain > best.gain ||
                        (gain == best.gain && value > best.value);
    if (better) best = {gain, query, setting, value, true};
  };

  for (const DeviationFamily& family : families) {
    if (family.kind == DeviationFamily::Kind::kGridPerQuery) {
      for (int j = 0; j < instance.num_queries(); ++j) {
        const double saved = bids[bidder][j];
        for (double cand : grid_candidates(instance, bidder, j, bids, family, mechanism)) {
          bids[bidder][j] = cand;
          const auto [value, cost] = eval_bidder(instance, mechanism, bids, bidder);
          consider(j, cand, value, cost);
        }
        bids[bidder][j] = saved;
      }
    } else if (family.kind == DeviationFamily::Kind::kScaleAll) {
      const std::vector<double> saved = bids[bidder];
      const double span = grid_span(family, mechanism);
      for (int k = -1; k < family.steps; ++k) {
        const double factor =
            k < 0 ? 0.0
                  : std::exp(std::log(1.0 / span) +
                             (std::log(span) - std::log(1.0 / span)) * k / (family.steps - 1));
        for (int j = 0; j < instance.num_queries(); ++j) bids[bidder][j] = saved[j] * factor;
        const auto [value, cost] = eval_bidder(instance, mechanism, bids, bidder);
        consider(-1, factor, value, cost);
        bids[bidder] = saved;
      }
    }
  }
  if (cur_feasible && best.feasible && best.gain < 0) {
    best.feasible = false;  // keep the current point, nothing better
  }
  return best;
}

void apply_grid_move(Matrix& bids, int bidder, const GridMove& move) {
  if (move.query >= 0) {
    bids[bidder][move.query] = move.bid;
  } else {
    for (double& b : bids[bidder]) b *= move.bid;
  }
}

}  // namespace

EquilibriumReport verify_equilibrium(const Instance& instance, const MechanismSpec& mechanism,
                                     const BidProfile& bids,
                                     const std::vector<DeviationFamily>& families,
                                     double epsilon) {
  EquilibriumReport report;
  report.epsilon = epsilon > 0 ? epsilon : default_epsilon(instance);

  const Outcome outcome = allocate(instance, bids, mechanism);
  const int n = instance.num_bidders();
  report.feasible = true;
  report.per_bidder.resize(n);
  for (int i = 0; i < n; ++i) {
    BidderState& s = report.per_bidder[i];
    s.value = outcome.value_of_bidder(i);
    s.spend = outcome.spend_of_bidder(i);
    s.budget = instance.budget(i).value();
    s.feasible = s.spend <= instance.budget(i).cap(s.value) + feas_tol();
    const double bind_tol = feas_tol() * (1.0 + instance.welfare_scale());
    const bool budget_bound = !instance.budget(i).is_infinite() && s.spend >= s.budget - bind_tol;
    const bool ros_bound = s.spend >= s.value - bind_tol;
    s.binding = budget_bound && ros_bound ? "budget+ros"
                : budget_bound            ? "budget"
                : ros_bound               ? "ros"
                                          : "none";
    report.feasible = report.feasible && s.feasible;
  }

  Matrix work = bids.bids();
  for (int i = 0; i < n; ++i) {
    const double current = outcome.value_of_bidder(i);
    double best_value = current;
    for (const DeviationFamily& family : families) {
      switch (family.kind) {
        case DeviationFamily::Kind::kFpaSubset: {
          if (mechanism.kind() != MechanismSpec::Kind::kFpa) {
            throw ValidationError("subset deviations are defined for FPA only");
          }
          best_value = std::max(
              best_value, best_response_fpa(instance, i, bids.bids(), mechanism.tie()).value);
          break;
        }
        case DeviationFamily::Kind::kUniformScan:
          best_value =
              std::max(best_value, best_response_uniform(instance, i, mechanism, bids).value);
          break;
        case DeviationFamily::Kind::kGridPerQuery:
        case DeviationFamily::Kind::kScaleAll: {
          GridMove move = best_grid_move(instance, mechanism, work, i, {family});
          if (move.feasible) best_value = std::max(best_value, move.value);
          break;
        }
      }
    }
    const double gain = best_value - current;
    if (gain > report.best_deviation_gain) {
      report.best_deviation_gain = gain;
      report.best_deviator = i;
    }
  }
  return report;
}

DynamicsResult best_response_dynamics(const Instance& instance, const MechanismSpec& mechanism,
                                      const std::vector<DeviationFamily>& families,
                                      const BidProfile& init, int max_rounds, double epsilon) {
  const double eps = epsilon > 0 ? epsilon : default_epsilon(instance);
  const int n = instance.num_bidders();

  bool subset_mode = false, uniform_mode = false;
  for (const DeviationFamily& f : families) {
    subset_mode |= f.kind == DeviationFamily::Kind::kFpaSubset;
    uniform_mode |= f.kind == DeviationFamily::Kind::kUniformScan;
  }
  if (subset_mode && mechanism.kind() != MechanismSpec::Kind::kFpa) {
    throw ValidationError("subset dynamics are defined for FPA only");
  }
  if (uniform_mode && init.mode() != BidMode::kUniform) {
    throw ValidationError("uniform dynamics need a uniform initial profile");
  }

  // The canonical rebids keep standby bids at caps that track opposing
  // prices, so the matrix can keep drifting by outbid margins long after
  // every value has settled. A round with no gain above epsilon freezes the
  // profile and accepts it once it verifies as an epsilon-equilibrium.
  if (uniform_mode) {
    std::vector<double> multipliers = init.multipliers();
    int round = 0;
    bool converged = false;
    while (round < max_rounds) {
      ++round;
      const std::vector<double> snapshot = multipliers;
      bool quiet = true;
      for (int i = 0; i < n; ++i) {
        const BidProfile current = BidProfile::uniform(instance, multipliers);
        const UniformBestResponse br = best_response_uniform(instance, i, mechanism, current);
        quiet = quiet && br.value - eval_bidder(instance, mechanism, current.bids(), i).first <= eps;
        multipliers[i] = br.multiplier;
      }
      if (multipliers == snapshot) {
        converged = true;
        break;
      }
      if (quiet) {
        BidProfile frozen = BidProfile::uniform(instance, multipliers);
        if (verify_equilibrium(instance, mechanism, frozen, families, eps).is_equilibrium()) {
          return {std::move(frozen), true, round};
        }
      }
    }
    return {BidProfile::uniform(instance, multipliers), converged, round};
  }

  Matrix bids = init.bids();
  int round = 0;
  bool converged = false;
  while (round < max_rounds) {
    ++round;
    const Matrix snapshot = bids;
    bool quiet = true;
    for (int i = 0; i < n; ++i) {
      if (subset_mode) {
        const SubsetBestResponse br = best_response_fpa(instance, i, bids, mechanism.tie());
        quiet = quiet && br.value - eval_bidder(instance, mechanism, bids, i).first <= eps;
        bids[i] = canonical_fpa_rebid(instance, i, bids, mechanism.tie(), br);
      } else {
        // Local search over the grid families: apply strict improvements
        // until none is left (or the profile needs repairing first).
        for (int moves = 0; moves < 200; ++moves) {
          const auto [value, spend] = eval_bidder(instance, mechanism, bids, i);
          const bool feasible =
              spend <= std::min(instance.budget(i).value(), value) + feas_tol();
          GridMove move = best_grid_move(instance, mechanism, bids, i, families);
          if (!move.feasible) break;
          if (feasible && move.gain <= eps) break;
          quiet = false;
          apply_grid_move(bids, i, move);
          if (!feasible && move.gain <= eps) break;  // repaired, nothing more to gain
        }
      }
    }
    if (bids == snapshot) {
      converged = true;
      break;
    }
    if (quiet) {
      BidProfile frozen = BidProfile::per_query(bids);
      if (verify_equilibrium(instance, mechanism, frozen, families, eps).is_equilibrium()) {
        return {std::move(frozen), true, round};
      }
    }
  }
  return {BidProfile::per_query(std::move(bids)), converged, round};
}

namespace {

struct CheckBuilder {
  NamedCheck check;
  explicit CheckBuilder(std::string name) { check.name = std::move(name); }
  void observe(double margin) {
    ++check.evaluated;
    if (check.evaluated == 1 || margin < check.margin) check.margin = margin;
    if (margin < 0) check.pass = false;
  }
};

}  // namespace

std::vector<NamedCheck> equilibrium_diagnostics(const Instance& instance, const TieBreak& tie,
                                                const BidProfile& bids,
                                                const DiagnosticsOptions& options) {
  const double eps = options.epsilon > 0 ? options.epsilon : default_epsilon(instance);
  const Outcome outcome = fpa_allocate(instance, bids, tie);
  const EquilibriumPartition part = partition_bidders(instance, outcome);
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  const double lw = liquid_welfare(instance, outcome.allocation());
  const bool small_values = instance.values_within_budgets();
  const double scale_tol = 1e-12 * (1.0 + instance.welfare_scale());

  const auto spend_slack = [&](int query) {
    return eps + outbid_delta(outcome.spend_of_query(query)) + 2 * feas_tol() + scale_tol;
  };

  std::vector<bool> won(n * q, false);
  for (int i = 0; i < n; ++i) {
    for (int j : part.won[i]) won[i * q + j] = true;
  }

  std::vector<NamedCheck> checks;

  {
    CheckBuilder b("spend_le_lw");
    b.observe(lw + eps + n * feas_tol() + scale_tol - outcome.total_spend());
    checks.push_back(b.check);
  }

  // Spend floors outside N(i) for bidders below their budget: queries whose
  // extra value would reach B_i must price at B_i - V_i, and if no query
  // can reach B_i every outside query must price at the bidder's value.
  CheckBuilder ab1("ab1_spend_floor");
  CheckBuilder ab0("ab0_spend_floor");
  CheckBuilder d_budget("d_budget_pressure");
  CheckBuilder d_value("d_value_capped");
  for (int i : part.uncapped) {
    const double vi = outcome.value_of_bidder(i);
    const double budget = instance.budget(i).value();
    bool reaches_budget = false;
    for (int j = 0; j < q; ++j) {
      if (!won[i * q + j] && instance.value(i, j) + vi >= budget) reaches_budget = true;
    }
    for (int j = 0; j < q; ++j) {
      if (won[i * q + j]) continue;
      const double v = instance.value(i, j);
      const double spend = outcome.spend_of_query(j);
      if (reaches_budget) {
        if (v + vi >= budget) ab1.observe(spend - (budget - vi) + spend_slack(j));
      } else {
        ab0.observe(spend - v + spend_slack(j));
      }
      // D(i): queries still priced below the bidder's value.
      if (spend + outbid_delta(spend) < v && v > eps) {
        d_budget.observe(spend + outcome.spend_of_bidder(i) - budget + spend_slack(j));
        if (small_values) d_value.observe(vi + eps + spend_slack(j) - v);
      }
    }
  }
  checks.push_back(ab1.check);
  checks.push_back(ab0.check);
  checks.push_back(d_budget.check);
  checks.push_back(d_value.check);

  double max_spend = 0;
  for (int j = 0; j < q; ++j) max_spend = std::max(max_spend, outcome.spend_of_query(j));
  const double chain_slack =
      n * (eps + outbid_delta(max_spend) + 2 * feas_tol()) + 1e-9 * (1.0 + instance.welfare_scale());

  if (options.fractional_benchmark != nullptr) {
    const double opt = liquid_welfare(instance, *options.fractional_benchmark);
    CheckBuilder b("opt_le_n_lw");
    b.observe(n * lw + chain_slack - opt);
    checks.push_back(b.check);
    CheckBuilder b2("opt_le_2_lw_small_values");
    if (small_values) b2.observe(2 * lw + chain_slack - opt);
    checks.push_back(b2.check);
  }

  if (options.integral_benchmark != nullptr) {
    const double iopt = liquid_welfare(instance, *options.integral_benchmark);
    CheckBuilder b("iopt_le_2_lw");
    b.observe(2 * lw + chain_slack - iopt);
    checks.push_back(b.check);

    // Same spend floors restricted to benchmark queries O(i) \ N(i).
    CheckBuilder ob1("o_ab1_spend_floor");
    CheckBuilder ob0("o_ab0_spend_floor");
    for (int i : part.uncapped) {
      const double vi = outcome.value_of_bidder(i);
      const double budget = instance.budget(i).value();
      std::vector<int> outside;
      bool reaches_budget = false;
      for (int j = 0; j < q; ++j) {
        if (options.integral_benchmark->pi(i, j) > 0.5 && !won[i * q + j]) {
          outside.push_back(j);
          if (instance.value(i, j) + vi >= budget) reaches_budget = true;
        }
      }
      for (int j : outside) {
        const double spend = outcome.spend_of_query(j);
        if (reaches_budget) {
          if (instance.value(i, j) + vi >= budget) {
            ob1.observe(spend - (budget - vi) + spend_slack(j));
          }
        } else {
          ob0.observe(spend - instance.value(i, j) + spend_slack(j));
        }
      }
    }
    checks.push_back(ob1.check);
    checks.push_back(ob0.check);
  }

  return checks;
}

std::vector<NamedCheck> rfpa_equilibrium_checks(const Instance& instance, const BidProfile& bids,
                                                double alpha, double grid_step, double epsilon) {
  if (instance.num_bidders() != 2) {
    throw ValidationError("rFPA checks are defined for two bidders");
  }
  const double eps = epsilon > 0 ? epsilon : default_epsilon(instance);
  const Outcome outcome = rfpa_allocate(instance, bids, alpha);
  const double g = std::max(grid_step, 1.0 + 1e-12);
  const double log_alpha = std::log(alpha);
  const double dp = 0.5 * std::log(g) / log_alpha;  // win-prob gain of one grid step

  // A query won outright must be priced at alpha times the loser's value,
  // up to two grid steps, whenever a probing bid just inside the random
  // region would have been affordable and worth more than epsilon.
  CheckBuilder outright("won_query_bid_floor");
  // Interior queries must be priced at v / (1 + ln(alpha) + ln(beta)); the
  // finite-step form divides the one-step value gain by the one-step cost.
  CheckBuilder interior("interior_bid_floor");

  for (int i = 0; i < 2; ++i) {
    const int other = 1 - i;
    const double v_other_budget = instance.budget(other).value();
    const double v_other_room = v_other_budget - outcome.value_of_bidder(other);
    const double my_room = instance.budget(i).value() - outcome.value_of_bidder(i);
    for (int j = 0; j < instance.num_queries(); ++j) {
      const double pi = outcome.allocation().pi(i, j);
      const double b = bids.bid(i, j);
      const double v_other = instance.value(other, j);
      if (pi >= 1.0 - 1e-12 && b > 0) {
        const double probe_gain = 0.5 * std::log(g) / log_alpha * v_other;
        const double probe_cost = v_other * g * g * std::log(g) / log_alpha + eps;
        if (v_other_room > probe_cost && probe_gain > 2 * eps) {
          outright.observe(b - alpha * v_other / (g * g) + 1e-12);
        }
      } else if (pi > 0.02 && pi < 0.98 && b > 0) {
        const double v = instance.value(i, j);
        const double step_cost = b * ((g - 1.0) + g * dp);
        if (my_room > 2 * step_cost + eps && v * dp > 2 * eps) {
          const double floor = v * dp / (pi * (g - 1.0) + g * dp);
          interior.observe(b - floor + 1e-12);
        }
      }
    }
  }
  return {outright.check, interior.check};
}

PoaReport poa_ratio(const Instance& instance, const MechanismSpec& mechanism,
                    const BidProfile& bids) {
  const Outcome outcome = allocate(instance, bids, mechanism);
  PoaReport report;
  report.lw = liquid_welfare(instance, outcome.allocation());
  report.opt = opt_fractional(instance).value;
  report.iopt = opt_integral(instance).value;
  const auto ratio = [&](double target) {
    if (report.lw > 0) return target / report.lw;
    return target > 0 ? kInf : 1.0;
  };
  report.poa = ratio(report.opt);
  report.ipoa = ratio(report.iopt);
  return report;
}

}  // namespace liquidbid
