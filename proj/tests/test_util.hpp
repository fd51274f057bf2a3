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

#include <cmath>
#include <random>
#include <vector>

#include "optdiscrim/linalg.hpp"
#include "optdiscrim/models.hpp"

namespace optdiscrim::testing {

inline ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (auto& x : m.entries()) x = Complex(normal(rng), normal(rng));
  return m;
}

inline HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
  const auto g = random_complex(n, n, rng);
  return HermitianMatrix(Complex(0.5) * (g + adjoint(g)));
}

inline RealMatrix random_real(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (auto& x : m.entries()) x = normal(rng);
  return m;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

// Random density matrix of full rank.
inline HermitianMatrix random_density(std::size_t n, Rng& rng) {
  const auto g = random_complex(n, n, rng);
  ComplexMatrix rho = g * adjoint(g);
  const Complex t = trace(rho);
  rho *= Complex(1.0) / t;
  return HermitianMatrix(rho, 1e-9);
}

inline std::vector<Complex> ket(std::initializer_list<Complex> amps) { return amps; }

}  // namespace optdiscrim::testing

namespace optdiscrim::testing {

// Random full-rank POVM with `outcomes` elements: e_m = S^{-1/2} G_m S^{-1/2}.
inline std::vector<HermitianMatrix> random_povm(std::size_t n, std::size_t outcomes, Rng& rng) {
  std::vector<HermitianMatrix> g;
  ComplexMatrix total(n, n);
  for (std::size_t m = 0; m < outcomes; ++m) {
    const auto x = random_complex(n, n, rng);
    g.emplace_back(x * adjoint(x), 1e-9);
    total += g.back().matrix();
  }
  const auto s = matrix_function(HermitianMatrix(total, 1e-9),
                                 [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<HermitianMatrix> out;
  for (const auto& gm : g) out.emplace_back(s.matrix() * gm.matrix() * s.matrix(), 1e-9);
  return out;
}

}  // namespace optdiscrim::testing
