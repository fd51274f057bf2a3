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

#pragma once

// Dense linear algebra at desk scale (dimensions up to roughly 16).
//
// Matrices are row-major value types. Complex arithmetic is std::complex<double>,
// i.e. a (re, im) pair of 64-bit floats.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "optdiscrim/error.hpp"

namespace optdiscrim {

using Complex = std::complex<double>;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw Error(ErrorKind::DimensionMismatch, "entry count does not match shape");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }
  static Matrix column(std::span<const T> v) {
    return Matrix(v.size(), 1, std::vector<T>(v.begin(), v.end()));
  }
  static Matrix row(std::span<const T> v) {
    return Matrix(1, v.size(), std::vector<T>(v.begin(), v.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const T> entries() const noexcept { return entries_; }
  std::span<T> entries() noexcept { return entries_; }

  std::vector<T> row_vector(std::size_t i) const {
    return std::vector<T>(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> column_vector(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  void set_row(std::size_t i, std::span<const T> v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }
  void set_column(std::size_t j, std::span<const T> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& x : entries_) x *= s;
    return *this;
  }

  bool operator==(const Matrix&) const = default;

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> entries_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  a += b;
  return a;
}
template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  a -= b;
  return a;
}
template <typename T>
Matrix<T> operator*(T s, Matrix<T> a) {
  a *= s;
  return a;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ in matrix product");
  }
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

template <typename T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    worst = std::max(worst, static_cast<double>(std::abs(a.entries()[k] - b.entries()[k])));
  }
  return worst;
}

template <typename T>
double max_abs(const Matrix<T>& a) {
  double worst = 0.0;
  for (const auto& x : a.entries()) worst = std::max(worst, static_cast<double>(std::abs(x)));
  return worst;
}

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
ComplexMatrix to_complex(const RealMatrix& a);
Complex trace(const ComplexMatrix& a);
double trace(const RealMatrix& a);

// Vector helpers.
double dot(std::span<const double> a, std::span<const double> b);
std::vector<double> kron(std::span<const double> a, std::span<const double> b);
std::vector<double> matvec(const RealMatrix& a, std::span<const double> x);
// x^T A, returned as a plain vector of length a.cols().
std::vector<double> vecmat(std::span<const double> x, const RealMatrix& a);
std::vector<double> axpy(double alpha, std::span<const double> x, std::span<const double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Gaussian elimination with partial pivoting. Returns nullopt when a pivot
// falls below `pivot_tol` (numerically singular).
std::optional<std::vector<double>> solve_linear(RealMatrix a, std::vector<double> b,
                                                double pivot_tol = 1e-12);
std::size_t rank(RealMatrix a, double tol = 1e-10);
// Orthogonal-ish basis of {x : a x = 0} from reduced row echelon form.
std::vector<std::vector<double>> null_space(RealMatrix a, double tol = 1e-10);

// Hermitian matrix: entries(i,j) == conj(entries(j,i)) within tolerance. The
// stored matrix is the exact Hermitian part of the input.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix identity(std::size_t n);
  // |psi><psi|
  static HermitianMatrix projector(std::span<const Complex> psi);

  std::size_t dim() const noexcept { return m_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  double trace() const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

 private:
  ComplexMatrix m_;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);
double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b);
// Re Tr(a b) for Hermitian a, b.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);
// u h u^dagger
HermitianMatrix conjugate_by(const ComplexMatrix& u, const HermitianMatrix& h);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k belongs to values[k]
};

// Cyclic complex Jacobi. Throws NotHermitian when |h(i,j) - conj(h(j,i))|
// exceeds `hermitian_tol`.
EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol = 1e-10);
EigenDecomposition eigh(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);

// f applied on the spectrum. DomainError when f is not finite at an eigenvalue.
HermitianMatrix matrix_function(const HermitianMatrix& h, const std::function<double(double)>& f);

// Transpose on the second tensor factor; dim must equal dim_a * dim_b.
HermitianMatrix partial_transpose(const HermitianMatrix& h, std::size_t dim_a, std::size_t dim_b);
ComplexMatrix partial_transpose(const ComplexMatrix& h, std::size_t dim_a, std::size_t dim_b);

// Partial trace over the first (trace_first = true) or second factor.
HermitianMatrix partial_trace(const HermitianMatrix& h, std::size_t dim_a, std::size_t dim_b,
                              bool trace_first);

double trace_norm(const HermitianMatrix& h);

}  // namespace optdiscrim
