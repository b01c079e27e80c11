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

#include <vector>

namespace liquidbid {

struct SimplexOptions {
  double pivot_tol = 1e-9;
  long max_iterations = 1000000;
};

struct SimplexSolution {
  std::vector<double> x;
  double objective = 0;
  long iterations = 0;
};

// Maximize c.x subject to A x <= b, x >= 0, where every b_i >= 0 so the
// slack basis is feasible from the start. Dense tableau with Bland's rule;
// sized for the tiny welfare LPs in this project, not for speed.
// Throws NumericError (carrying the iteration count) on iteration overrun
// or an unbounded ray.
SimplexSolution simplex_max(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b,
                            const std::vector<double>& c,
                            const SimplexOptions& options = {});

}  // namespace liquidbid
