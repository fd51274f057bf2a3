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

#include "optdiscrim/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace optdiscrim {

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& x : out.entries()) x = std::conj(x);
  return out;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.entries().size(); ++k) out.entries()[k] = a.entries()[k];
  return out;
}

Complex trace(const ComplexMatrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double trace(const RealMatrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> kron(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  return out;
}

std::vector<double> matvec(const RealMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matvec: length mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
  return out;
}

std::vector<double> vecmat(std::span<const double> x, const RealMatrix& a) {
  if (a.rows() != x.size()) throw Error(ErrorKind::DimensionMismatch, "vecmat: length mismatch");
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += x[i] * a(i, j);
  }
  return out;
}

std::vector<double> axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "axpy: length mismatch");
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::optional<std::vector<double>> solve_linear(RealMatrix a, std::vector<double> b,
                                                double pivot_tol) {
  const std::size_t n = a.rows();
  if (!a.is_square() || b.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "solve_linear expects a square system");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < pivot_tol) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

namespace {

// In-place reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(RealMatrix& a, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < a.rows(); ++r)
      if (std::abs(a(r, col)) > std::abs(a(best, col))) best = r;
    if (std::abs(a(best, col)) <= tol) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(best, j));
    const double p = a(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) /= p;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const double factor = a(r, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) -= factor * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(RealMatrix a, double tol) { return rref(a, tol).size(); }

std::vector<std::vector<double>> null_space(RealMatrix a, double tol) {
  const auto pivots = rref(a, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<double>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<double> v(a.cols(), 0.0);
    v[free] = 1.0;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) : m_(m.rows(), m.cols()) {
  if (!m.is_square() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square and non-empty");
  }
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
        throw Error(ErrorKind::NotHermitian, "entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") breaks symmetry");
      }
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = (i == j) ? Complex(avg.real(), 0.0) : avg;
      m_(j, i) = std::conj(m_(i, j));
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::projector(std::span<const Complex> psi) {
  ComplexMatrix m(psi.size(), psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return HermitianMatrix(m);
}

double HermitianMatrix::trace() const { return optdiscrim::trace(m_).real(); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}
HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}
HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= Complex(s);
  return *this;
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return max_abs_diff(a.matrix(), b.matrix());
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "trace_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

HermitianMatrix conjugate_by(const ComplexMatrix& u, const HermitianMatrix& h) {
  return HermitianMatrix(u * h.matrix() * adjoint(u), 1e-9);
}

// ---------------------------------------------------------------------------
// Eigen-decomposition

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalStop = 1e-14;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& x : a.entries()) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol) {
  if (!h.is_square() || h.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "eigh expects a non-empty square matrix");
  }
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(h(i, j) - std::conj(h(j, i))) > hermitian_tol) {
        throw Error(ErrorKind::NotHermitian, "eigh input is not Hermitian at (" +
                                                 std::to_string(i) + "," + std::to_string(j) + ")");
      }

  ComplexMatrix a = HermitianMatrix(h, hermitian_tol).matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double stop = kOffDiagonalStop * std::max(1.0, frobenius_norm(a));

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) >= stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        // Phase S = diag(1, e^{-i phi}) makes the (p,q) entry real, then a real
        // Jacobi rotation annihilates it.
        const Complex phase = std::conj(apq) / r;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * r);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {  // a <- a J
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // a <- J^dagger a
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // v <- v J
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

EigenDecomposition eigh(const HermitianMatrix& h) { return eigh(h.matrix()); }

double min_eigenvalue(const HermitianMatrix& h) { return eigh(h).values.front(); }

HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& f) {
  const auto eig = eigh(h);
  const std::size_t n = h.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (!std::isfinite(fk)) {
      throw Error(ErrorKind::DomainError,
                  "function undefined at eigenvalue " + std::to_string(eig.values[k]));
    }
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fk * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return HermitianMatrix(out, 1e-9);
}

ComplexMatrix partial_transpose(const ComplexMatrix& h, std::size_t dim_a, std::size_t dim_b) {
  if (!h.is_square() || h.rows() != dim_a * dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "partial_transpose: dim != dim_a * dim_b");
  }
  ComplexMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j)
      for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l)
          out(i * dim_b + k, j * dim_b + l) = h(i * dim_b + l, j * dim_b + k);
  return out;
}

HermitianMatrix partial_transpose(const HermitianMatrix& h, std::size_t dim_a, std::size_t dim_b) {
  return HermitianMatrix(partial_transpose(h.matrix(), dim_a, dim_b));
}

HermitianMatrix partial_trace(const HermitianMatrix& h, std::size_t dim_a, std::size_t dim_b,
                              bool trace_first) {
  if (h.dim() != dim_a * dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "partial_trace: dim != dim_a * dim_b");
  }
  const std::size_t keep = trace_first ? dim_b : dim_a;
  ComplexMatrix out(keep, keep);
  if (trace_first) {
    for (std::size_t k = 0; k < dim_b; ++k)
      for (std::size_t l = 0; l < dim_b; ++l)
        for (std::size_t i = 0; i < dim_a; ++i) out(k, l) += h(i * dim_b + k, i * dim_b + l);
  } else {
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) out(i, j) += h(i * dim_b + k, j * dim_b + k);
  }
  return HermitianMatrix(out);
}

double trace_norm(const HermitianMatrix& h) {
  double s = 0.0;
  for (double x : eigh(h).values) s += std::abs(x);
  return s;
}

}  // namespace optdiscrim
