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

#include "liquidbid/simplex.hpp"

#include <cmath>

#include "liquidbid/model.hpp"

namespace liquidbid {

SimplexSolution simplex_max(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b,
                            const std::vector<double>& c,
                            const SimplexOptions& options) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(b.size()) != m) throw ValidationError("simplex: |b| != rows of A");
  for (const auto& row : A) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("simplex: ragged A");
  }
  for (double bi : b) {
    if (bi < 0) throw ValidationError("simplex: requires b >= 0 (slack basis start)");
  }

  // Tableau: m rows of [structural | slack | rhs], plus the objective row
  // kept as negated reduced costs.
  const int width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][width - 1] = b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double tol = options.pivot_tol;
  long iterations = 0;
  while (true) {
    // Bland: entering variable is the lowest-index improving column.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (t[m][j] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    // Ratio test; ties go to the smallest basis variable index (Bland).
    int leave = -1;
    double best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] > tol) {
        const double ratio = t[i][width - 1] / t[i][enter];
        if (leave < 0 || ratio < best_ratio - tol ||
            (std::fabs(ratio - best_ratio) <= tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      throw NumericError("simplex: objective unbounded above", iterations);
    }
    if (++iterations > options.max_iterations) {
      throw NumericError("simplex: iteration limit exceeded", iterations);
    }

    const double pivot = t[leave][enter];
    for (int j = 0; j < width; ++j) t[leave][j] /= pivot;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t[i][enter];
      if (factor == 0) continue;
      for (int j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  SimplexSolution sol;
  sol.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) sol.x[basis[i]] = t[i][width - 1];
  }
  sol.objective = t[m][width - 1];
  sol.iterations = iterations;
  return sol;
}

}  // namespace liquidbid
