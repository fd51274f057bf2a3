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

// Theory plugins. Every model realizes states and effects of a system as real
// vectors in a fixed basis, so all processes are real matrices and the pairing
// <e|rho> is the Euclidean dot product.
//
// Quantum systems use the orthonormal Hermitian basis
//   index a*N + a      : |a><a|
//   index a*N + b (a<b): (|a><b| + |b><a|) / sqrt(2)
//   index b*N + a (a<b): (-i|a><b| + i|b><a|) / sqrt(2)
// and composites use the tensor product of the local bases.

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "optdiscrim/linalg.hpp"

namespace optdiscrim {

using Rng = std::mt19937_64;

inline constexpr double kConeTolerance = 1e-10;

enum class ModelKind { Classical, Quantum, Polytope };

std::string_view to_string(ModelKind kind);

class ModelDescriptor {
 public:
  static ModelDescriptor classical(std::size_t outcomes);
  static ModelDescriptor quantum(std::size_t level);
  // Effect generators default to the full dual cone of the state cone.
  static ModelDescriptor polytope(std::string name, std::vector<std::vector<double>> state_generators,
                                  std::vector<double> unit,
                                  std::vector<std::vector<double>> effect_generators = {});
  // Square state space: generators (1, +-1, +-1), unit (1, 0, 0).
  static ModelDescriptor gbit_square();

  ModelKind kind() const noexcept { return kind_; }
  // Classical: number of outcomes; quantum: Hilbert-space dimension;
  // polytope: vector-space dimension.
  std::size_t level() const noexcept { return level_; }
  // Dimension of the real vector space holding states and effects.
  std::size_t dim() const noexcept;
  const std::string& name() const noexcept { return name_; }

  // Extreme rays of the state / effect cones. Empty for quantum models, whose
  // cones are not polyhedral.
  const std::vector<std::vector<double>>& state_generators() const noexcept { return states_; }
  const std::vector<std::vector<double>>& effect_generators() const noexcept { return effects_; }
  const std::vector<double>& unit() const noexcept { return unit_; }
  bool is_polyhedral() const noexcept { return kind_ != ModelKind::Quantum; }

  bool operator==(const ModelDescriptor& o) const = default;

 private:
  ModelKind kind_ = ModelKind::Classical;
  std::size_t level_ = 1;
  std::string name_;
  std::vector<std::vector<double>> states_;
  std::vector<std::vector<double>> effects_;
  std::vector<double> unit_;
};

struct EffectCheck {
  bool in_cone = false;
  bool feasible = false;  // u - w is also in the effect cone
};

bool contains_state(const ModelDescriptor& m, std::span<const double> v);
EffectCheck contains_effect(const ModelDescriptor& m, std::span<const double> w);
std::vector<double> unit_effect(const ModelDescriptor& m);
// Normalized pure states. UnsupportedModel for quantum; use random_pure_state.
std::vector<std::vector<double>> pure_states(const ModelDescriptor& m);
// Haar-random rank-1 projector for quantum models; a uniformly chosen pure
// generator for polyhedral ones.
std::vector<double> random_pure_state(const ModelDescriptor& m, Rng& rng);

// Extreme rays of the dual cone {w : <w, s> >= 0 for all s}, by enumerating
// facets spanned by (d-1)-subsets of generators. Rays are scaled so their
// largest entry has magnitude one.
std::vector<std::vector<double>> dual_cone_generators(
    std::span<const std::vector<double>> generators);

// ---------------------------------------------------------------------------
// Quantum vectorization

// Basis element `index` for the product of local dimensions `levels`.
ComplexMatrix hermitian_basis_element(std::size_t index, std::span<const std::size_t> levels);
std::vector<double> vectorize(const HermitianMatrix& h, std::span<const std::size_t> levels);
HermitianMatrix devectorize(std::span<const double> v, std::span<const std::size_t> levels);
inline std::vector<double> vectorize(const HermitianMatrix& h) {
  const std::size_t level = h.dim();
  return vectorize(h, std::span<const std::size_t>(&level, 1));
}
inline HermitianMatrix devectorize(std::span<const double> v, std::size_t level) {
  return devectorize(v, std::span<const std::size_t>(&level, 1));
}

// Real matrix of a real-linear map on Hermitian operators, in the basis above.
using HermitianMap = std::function<HermitianMatrix(const HermitianMatrix&)>;
RealMatrix superoperator(const HermitianMap& f, std::span<const std::size_t> in_levels,
                         std::span<const std::size_t> out_levels);
// rho -> u rho u^dagger, or u rho^T u^dagger when `antiunitary` is set.
RealMatrix conjugation_superoperator(const ComplexMatrix& u, bool antiunitary = false);

// Random unitary from the QR decomposition of a complex Ginibre matrix.
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);
std::vector<Complex> haar_state(std::size_t n, Rng& rng);

}  // namespace optdiscrim
