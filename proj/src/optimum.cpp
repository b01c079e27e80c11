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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "liquidbid/simplex.hpp"

namespace liquidbid {

OptResult opt_fractional(const Instance& instance) {
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  // Variables: pi_ij (n*q of them, index i*q+j) followed by u_i.
  const int num_vars = n * q + n;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c(num_vars, 0.0);
  for (int i = 0; i < n; ++i) c[n * q + i] = 1.0;

  for (int i = 0; i < n; ++i) {
    if (!instance.budget(i).is_infinite()) {
      std::vector<double> row(num_vars, 0.0);
      row[n * q + i] = 1.0;
      A.push_back(std::move(row));
      b.push_back(instance.budget(i).value());
    }
    std::vector<double> row(num_vars, 0.0);
    row[n * q + i] = 1.0;
    for (int j = 0; j < q; ++j) row[i * q + j] = -instance.value(i, j);
    A.push_back(std::move(row));
    b.push_back(0.0);
  }
  for (int j = 0; j < q; ++j) {
    std::vector<double> row(num_vars, 0.0);
    for (int i = 0; i < n; ++i) row[i * q + j] = 1.0;
    A.push_back(std::move(row));
    b.push_back(1.0);
  }

  const SimplexSolution sol = simplex_max(A, b, c);
  Matrix pi(n, std::vector<double>(q, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < q; ++j) {
      pi[i][j] = std::clamp(sol.x[i * q + j], 0.0, 1.0);
    }
  }
  return OptResult{sol.objective, Allocation(std::move(pi)), false};
}

namespace {

struct IntegralSearch {
  const Instance& instance;
  std::int64_t budget;
  std::int64_t nodes = 0;
  std::vector<double> got;        // value accumulated per bidder
  Matrix suffix;                  // suffix[i][j] = sum of v_i over queries >= j
  double best = -1;
  std::vector<int> best_assign;
  std::vector<int> assign;        // -1 = unassigned

  explicit IntegralSearch(const Instance& inst, std::int64_t node_budget)
      : instance(inst), budget(node_budget) {
    const int n = inst.num_bidders();
    const int q = inst.num_queries();
    got.assign(n, 0.0);
    assign.assign(q, -1);
    suffix.assign(n, std::vector<double>(q + 1, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = q - 1; j >= 0; --j) {
        suffix[i][j] = suffix[i][j + 1] + inst.value(i, j);
      }
    }
  }

  double current_welfare() const {
    double lw = 0;
    for (int i = 0; i < instance.num_bidders(); ++i) lw += instance.budget(i).cap(got[i]);
    return lw;
  }

  double upper_bound(int query) const {
    double ub = 0;
    for (int i = 0; i < instance.num_bidders(); ++i) {
      ub += instance.budget(i).cap(got[i] + suffix[i][query]);
    }
    return ub;
  }

  void run(int query) {
    if (++nodes > budget) {
      throw SizeLimitError("instance too large for exact integral search");
    }
    const int n = instance.num_bidders();
    const int q = instance.num_queries();
    if (query == q) {
      const double lw = current_welfare();
      if (lw > best) {
        best = lw;
        best_assign = assign;
      }
      return;
    }
    if (upper_bound(query) <= best) return;
    for (int i = 0; i < n; ++i) {
      assign[query] = i;
      got[i] += instance.value(i, query);
      run(query + 1);
      got[i] -= instance.value(i, query);
    }
    assign[query] = -1;
    run(query + 1);
  }
};

}  // namespace

OptResult opt_integral(const Instance& instance, std::int64_t node_budget) {
  const double tree = std::pow(instance.num_bidders() + 1.0, instance.num_queries());
  if (tree > static_cast<double>(node_budget)) {
    throw SizeLimitError("instance too large for exact integral search");
  }
  IntegralSearch search(instance, node_budget);
  search.run(0);
  Matrix pi(instance.num_bidders(), std::vector<double>(instance.num_queries(), 0.0));
  for (int j = 0; j < instance.num_queries(); ++j) {
    if (search.best_assign[j] >= 0) pi[search.best_assign[j]][j] = 1.0;
  }
  return OptResult{search.best, Allocation(std::move(pi)), true};
}

namespace {

// All per-query probability columns (k_0/g, .., k_{n-1}/g) with sum k <= g.
void enumerate_columns(int n, int g, std::vector<std::vector<double>>& out) {
  std::vector<int> k(n, 0);
  std::vector<double> col(n, 0.0);
  const auto recurse = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      for (int t = 0; t < n; ++t) col[t] = static_cast<double>(k[t]) / g;
      out.push_back(col);
      return;
    }
    for (int take = 0; take <= left; ++take) {
      k[i] = take;
      self(self, i + 1, left - take);
    }
  };
  recurse(recurse, 0, g);
}

}  // namespace

double opt_fractional_bruteforce(const Instance& instance, int grid_steps) {
  const int n = instance.num_bidders();
  const int q = instance.num_queries();
  if (n * q > 6) throw SizeLimitError("grid oracle limited to n*q <= 6");
  if (grid_steps < 1) throw ValidationError("grid_steps must be at least 1");

  std::vector<std::vector<double>> columns;
  enumerate_columns(n, grid_steps, columns);
  double leaves = 1;
  for (int j = 0; j < q; ++j) leaves *= static_cast<double>(columns.size());
  if (leaves > 2e7) throw SizeLimitError("grid oracle enumeration too large");

  double best = 0;
  std::vector<double> got(n, 0.0);
  const auto recurse = [&](auto&& self, int j) -> void {
    if (j == q) {
      double lw = 0;
      for (int i = 0; i < n; ++i) lw += instance.budget(i).cap(got[i]);
      best = std::max(best, lw);
      return;
    }
    for (const auto& col : columns) {
      for (int i = 0; i < n; ++i) got[i] += col[i] * instance.value(i, j);
      self(self, j + 1);
      for (int i = 0; i < n; ++i) got[i] -= col[i] * instance.value(i, j);
    }
  };
  recurse(recurse, 0);
  return best;
}

OptResult single_query_fractional_greedy(const Instance& instance) {
  if (instance.num_queries() != 1) {
    throw ValidationError("greedy oracle requires exactly one query");
  }
  const int n = instance.num_bidders();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.value(a, 0) > instance.value(b, 0);
  });
  Matrix pi(n, std::vector<double>(1, 0.0));
  double remaining = 1.0;
  double total = 0;
  for (int i : order) {
    if (remaining <= 0) break;
    const double v = instance.value(i, 0);
    if (v <= 0) break;
    // Beyond B_i/v_i more probability stops adding welfare for this bidder.
    const double cap = instance.budget(i).is_infinite()
                           ? remaining
                           : std::min(remaining, instance.budget(i).value() / v);
    pi[i][0] = cap;
    total += instance.budget(i).cap(cap * v);
    remaining -= cap;
  }
  return OptResult{total, Allocation(std::move(pi)), true};
}

}  // namespace liquidbid
