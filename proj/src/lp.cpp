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

#include "optdiscrim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace optdiscrim::lp {
namespace {

class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs, stored
  // as "c_j - z_j"). Column `width` holds the right-hand side.
  Tableau(std::size_t m, std::size_t width) : m_(m), width_(width), t_(m + 1, width + 1) {}

  double& at(std::size_t r, std::size_t c) { return t_(r, c); }
  double at(std::size_t r, std::size_t c) const { return t_(r, c); }
  double& rhs(std::size_t r) { return t_(r, width_); }
  std::size_t rows() const { return m_; }
  std::size_t width() const { return width_; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t_(row, col);
    for (std::size_t j = 0; j <= width_; ++j) t_(row, j) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const double factor = t_(r, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= width_; ++j) t_(r, j) -= factor * t_(row, j);
      t_(r, col) = 0.0;
    }
  }

  void drop_row(std::size_t row) {
    RealMatrix smaller(m_, width_ + 1);
    for (std::size_t r = 0, out = 0; r <= m_; ++r) {
      if (r == row) continue;
      for (std::size_t j = 0; j <= width_; ++j) smaller(out, j) = t_(r, j);
      ++out;
    }
    t_ = std::move(smaller);
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t width_;
  RealMatrix t_;
};

// Runs Bland-rule pivots on columns [0, active_cols). Objective row holds
// reduced costs; a positive entry means the column improves the maximum.
Status run_simplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t active_cols,
                   const Options& options, std::size_t& iterations) {
  const std::size_t m = t.rows();
  while (true) {
    if (iterations >= options.max_iterations) return Status::IterationLimit;
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < active_cols; ++j) {
      if (t.at(m, j) > options.tolerance) {
        entering = j;
        break;
      }
    }
    if (!entering) return Status::Optimal;

    std::optional<std::size_t> leaving;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double coef = t.at(r, *entering);
      if (coef <= options.tolerance) continue;
      const double ratio = t.rhs(r) / coef;
      if (ratio < best_ratio - options.tolerance ||
          (std::abs(ratio - best_ratio) <= options.tolerance && leaving &&
           basis[r] < basis[*leaving])) {
        best_ratio = std::min(best_ratio, ratio);
        leaving = r;
      }
    }
    if (!leaving) return Status::Unbounded;
    t.pivot(*leaving, *entering);
    basis[*leaving] = *entering;
    ++iterations;
  }
}

}  // namespace

Result maximize(const RealMatrix& a, std::span<const double> b, std::span<const double> c,
                const Options& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "lp::maximize: inconsistent problem shape");
  }

  // Columns: n structural, then m artificial.
  Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * a(r, j);
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * b[r];
    basis[r] = n + r;
  }
  // Phase 1: maximize -sum(artificials). Reduced costs after pricing out the
  // artificial basis equal the column sums of the constraint rows.
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += t.at(r, j);
    t.at(m, j) = s;
  }
  double infeasibility = 0.0;
  for (std::size_t r = 0; r < m; ++r) infeasibility += t.rhs(r);
  // The objective row's right-hand side holds minus the current objective.
  t.rhs(m) = infeasibility;

  Result result;
  const Status phase1 = run_simplex(t, basis, n + m, options, result.iterations);
  if (phase1 == Status::IterationLimit) {
    result.status = phase1;
    return result;
  }
  if (t.rhs(t.rows()) > options.tolerance * std::max<double>(1.0, infeasibility) * 10.0) {
    result.status = Status::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows that cannot pivot are
  // redundant equalities.
  for (std::size_t r = 0; r < t.rows();) {
    if (basis[r] < n) {
      ++r;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.at(r, j)) > options.tolerance) {
        col = j;
        break;
      }
    }
    if (col) {
      t.pivot(r, *col);
      basis[r] = *col;
      ++r;
    } else {
      t.drop_row(r);
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
    }
  }

  // Phase 2 objective row: c_j - c_B^T B^{-1} A_j.
  const std::size_t rows = t.rows();
  for (std::size_t j = 0; j < n + m; ++j) t.at(rows, j) = j < n ? c[j] : 0.0;
  t.rhs(rows) = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double cb = basis[r] < n ? c[basis[r]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < n + m; ++j) t.at(rows, j) -= cb * t.at(r, j);
    t.rhs(rows) -= cb * t.rhs(r);
  }

  result.status = run_simplex(t, basis, n, options, result.iterations);
  if (result.status != Status::Optimal) return result;

  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < n) result.x[basis[r]] = std::max(0.0, t.rhs(r));
  result.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
  return result;
}

bool in_cone(std::span<const std::vector<double>> generators, std::span<const double> v,
             double tolerance) {
  const std::size_t d = v.size();
  if (generators.empty()) {
    for (double x : v)
      if (std::abs(x) > tolerance) return false;
    return true;
  }
  RealMatrix a(d, generators.size());
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "in_cone: generator length mismatch");
    }
    for (std::size_t i = 0; i < d; ++i) a(i, j) = generators[j][i];
  }
  const std::vector<double> zero(generators.size(), 0.0);
  Options opts;
  opts.tolerance = std::min(tolerance, 1e-10);
  const auto res = maximize(a, v, zero, opts);
  if (res.status != Status::Optimal) return false;
  // Confirm the certificate directly rather than trusting the tableau.
  return max_abs_diff(matvec(a, res.x), v) <= std::max(tolerance, 1e-9);
}

}  // namespace optdiscrim::lp
