// Copyright 2026 The optdiscrim Authors
//
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

#include <cmath>
#include <limits>

#include "optdiscrim/discrimination.hpp"
#include "solver_detail.hpp"

namespace optdiscrim {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;

// C(n, k), saturating at `cap` + 1.
std::size_t binomial(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(c));
}

}  // namespace

// The measurement polytope in the free coordinates y = (e_0, ..., e_{M-2}),
// with e_{M-1} = u - sum y. Effects are exactly the vectors with nonnegative
// pairing against every state generator, so the polytope is
//   <e_m, s_i> >= 0  for all m, i.
// Each vertex is the unique solution of some set of (M-1)d active rows.
SolveReport brute_force_oracle(const StatePreparation& rho, std::size_t budget) {
  detail::require_polyhedral(rho.system);
  const std::size_t outcomes = rho.outcomes();
  const std::size_t d = rho.system.dim();
  const auto u = unit_effect(rho.system);
  if (outcomes == 1) return detail::finish(Measurement{rho.system, {u}}, rho, "bruteforce", 0);

  const auto gens = state_generators(rho.system);
  const std::size_t free_dim = (outcomes - 1) * d;
  const std::size_t rows = outcomes * gens.size();
  RealMatrix a(rows, free_dim);
  std::vector<double> b(rows, 0.0);
  for (std::size_t m = 0; m < outcomes; ++m) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::size_t r = m * gens.size() + i;
      if (m + 1 < outcomes) {
        for (std::size_t k = 0; k < d; ++k) a(r, m * d + k) = gens[i][k];
      } else {
        for (std::size_t block = 0; block + 1 < outcomes; ++block)
          for (std::size_t k = 0; k < d; ++k) a(r, block * d + k) = -gens[i][k];
        b[r] = -dot(u, gens[i]);
      }
    }
  }
  std::vector<double> c(free_dim);
  const auto& last = rho.states.back();
  for (std::size_t m = 0; m + 1 < outcomes; ++m)
    for (std::size_t k = 0; k < d; ++k) c[m * d + k] = rho.states[m][k] - last[k];
  const double offset = dot(u, last);

  if (binomial(rows, free_dim, budget) > budget) {
    throw Error(ErrorKind::TooLarge, "vertex enumeration needs more than " +
                                         std::to_string(budget) + " active sets");
  }

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_y;
  std::size_t visited = 0;
  std::vector<std::size_t> pick(free_dim);
  for (std::size_t k = 0; k < free_dim; ++k) pick[k] = k;
  while (true) {
    ++visited;
    RealMatrix sub(free_dim, free_dim);
    std::vector<double> rhs(free_dim);
    for (std::size_t k = 0; k < free_dim; ++k) {
      sub.set_row(k, a.row_vector(pick[k]));
      rhs[k] = b[pick[k]];
    }
    if (const auto y = solve_linear(sub, rhs, 1e-10)) {
      const auto lhs = matvec(a, *y);
      bool feasible = true;
      for (std::size_t r = 0; r < rows && feasible; ++r)
        feasible = lhs[r] >= b[r] - kFeasibilityTolerance;
      if (feasible) {
        const double value = dot(c, *y) + offset;
        if (value > best) {
          best = value;
          best_y = *y;
        }
      }
    }
    // Next combination in lexicographic order.
    std::size_t k = free_dim;
    while (k > 0 && pick[k - 1] == rows - free_dim + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < free_dim; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (best_y.empty()) throw Error(ErrorKind::NoConvergence, "measurement polytope has no vertex");

  Measurement e{rho.system, {}};
  std::vector<double> rest = u;
  for (std::size_t m = 0; m + 1 < outcomes; ++m) {
    std::vector<double> em(best_y.begin() + static_cast<std::ptrdiff_t>(m * d),
                           best_y.begin() + static_cast<std::ptrdiff_t>((m + 1) * d));
    rest = axpy(-1.0, em, rest);
    e.effects.push_back(std::move(em));
  }
  e.effects.push_back(std::move(rest));
  return detail::finish(std::move(e), rho, "bruteforce", visited);
}

}  // namespace optdiscrim
