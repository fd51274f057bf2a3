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

#include "optdiscrim/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optdiscrim/lp.hpp"

namespace optdiscrim {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Classical: return "classical";
    case ModelKind::Quantum: return "quantum";
    case ModelKind::Polytope: return "polytope";
  }
  return "unknown";
}

namespace {

std::vector<std::vector<double>> unit_vectors(std::size_t n) {
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
  return out;
}

void require_dim(const ModelDescriptor& m, std::span<const double> v) {
  if (v.size() != m.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(v.size()) +
                                                  " for model " + m.name() + " of dim " +
                                                  std::to_string(m.dim()));
  }
}

// Enumerates all k-subsets of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ModelDescriptor ModelDescriptor::classical(std::size_t outcomes) {
  if (outcomes == 0) throw Error(ErrorKind::DimensionMismatch, "classical model needs M >= 1");
  ModelDescriptor m;
  m.kind_ = ModelKind::Classical;
  m.level_ = outcomes;
  m.name_ = "classical(" + std::to_string(outcomes) + ")";
  m.states_ = unit_vectors(outcomes);
  m.effects_ = m.states_;
  m.unit_.assign(outcomes, 1.0);
  return m;
}

ModelDescriptor ModelDescriptor::quantum(std::size_t level) {
  if (level == 0) throw Error(ErrorKind::DimensionMismatch, "quantum model needs N >= 1");
  ModelDescriptor m;
  m.kind_ = ModelKind::Quantum;
  m.level_ = level;
  m.name_ = "quantum(" + std::to_string(level) + ")";
  m.unit_ = vectorize(HermitianMatrix::identity(level));
  return m;
}

ModelDescriptor ModelDescriptor::polytope(std::string name,
                                          std::vector<std::vector<double>> state_generators,
                                          std::vector<double> unit,
                                          std::vector<std::vector<double>> effect_generators) {
  const std::size_t d = unit.size();
  if (d == 0 || state_generators.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "polytope model needs a unit and state generators");
  }
  for (const auto& s : state_generators) {
    if (s.size() != d) throw Error(ErrorKind::DimensionMismatch, "state generator length");
    if (std::abs(dot(unit, s) - 1.0) > kConeTolerance) {
      throw Error(ErrorKind::ValidationError, "state generators must satisfy <u, s> = 1");
    }
  }
  if (effect_generators.empty()) effect_generators = dual_cone_generators(state_generators);
  for (const auto& w : effect_generators) {
    if (w.size() != d) throw Error(ErrorKind::DimensionMismatch, "effect generator length");
    for (const auto& s : state_generators) {
      if (dot(w, s) < -kConeTolerance) {
        throw Error(ErrorKind::ValidationError,
                    "effect generator is negative on a state generator");
      }
    }
  }
  ModelDescriptor m;
  m.kind_ = ModelKind::Polytope;
  m.level_ = d;
  m.name_ = std::move(name);
  m.states_ = std::move(state_generators);
  m.effects_ = std::move(effect_generators);
  m.unit_ = std::move(unit);
  return m;
}

ModelDescriptor ModelDescriptor::gbit_square() {
  return polytope("gbit-square",
                  {{1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, {1.0, -1.0, -1.0}, {1.0, 1.0, -1.0}},
                  {1.0, 0.0, 0.0});
}

std::size_t ModelDescriptor::dim() const noexcept {
  return kind_ == ModelKind::Quantum ? level_ * level_ : level_;
}

bool contains_state(const ModelDescriptor& m, std::span<const double> v) {
  require_dim(m, v);
  switch (m.kind()) {
    case ModelKind::Classical:
      return std::all_of(v.begin(), v.end(), [](double x) { return x >= -kConeTolerance; });
    case ModelKind::Quantum:
      return min_eigenvalue(devectorize(v, m.level())) >= -kConeTolerance;
    case ModelKind::Polytope:
      return lp::in_cone(m.state_generators(), v, kConeTolerance);
  }
  return false;
}

EffectCheck contains_effect(const ModelDescriptor& m, std::span<const double> w) {
  require_dim(m, w);
  const auto complement = axpy(-1.0, w, m.unit());
  auto member = [&](std::span<const double> x) {
    switch (m.kind()) {
      case ModelKind::Classical:
        return std::all_of(x.begin(), x.end(), [](double y) { return y >= -kConeTolerance; });
      case ModelKind::Quantum:
        return min_eigenvalue(devectorize(x, m.level())) >= -kConeTolerance;
      case ModelKind::Polytope:
        return lp::in_cone(m.effect_generators(), x, kConeTolerance);
    }
    return false;
  };
  EffectCheck out;
  out.in_cone = member(w);
  out.feasible = out.in_cone && member(complement);
  return out;
}

std::vector<double> unit_effect(const ModelDescriptor& m) { return m.unit(); }

std::vector<std::vector<double>> pure_states(const ModelDescriptor& m) {
  if (m.kind() == ModelKind::Quantum) {
    throw Error(ErrorKind::UnsupportedModel,
                "quantum pure states are not finitely generated; use random_pure_state");
  }
  return m.state_generators();
}

std::vector<double> random_pure_state(const ModelDescriptor& m, Rng& rng) {
  if (m.kind() == ModelKind::Quantum) {
    const auto psi = haar_state(m.level(), rng);
    return vectorize(HermitianMatrix::projector(psi));
  }
  std::uniform_int_distribution<std::size_t> pick(0, m.state_generators().size() - 1);
  return m.state_generators()[pick(rng)];
}

std::vector<std::vector<double>> dual_cone_generators(
    std::span<const std::vector<double>> generators) {
  if (generators.empty()) return {};
  const std::size_t d = generators.front().size();
  std::vector<std::vector<double>> rays;
  auto known = [&](const std::vector<double>& r) {
    return std::any_of(rays.begin(), rays.end(),
                       [&](const auto& x) { return max_abs_diff(x, r) < 1e-9; });
  };
  if (d == 1) return {{1.0}};
  for_each_subset(generators.size(), d - 1, [&](std::span<const std::size_t> subset) {
    RealMatrix a(d - 1, d);
    for (std::size_t r = 0; r < subset.size(); ++r) a.set_row(r, generators[subset[r]]);
    const auto kernel = null_space(a, 1e-10);
    if (kernel.size() != 1) return;
    auto normal = kernel.front();
    bool all_nonneg = true, all_nonpos = true;
    for (const auto& s : generators) {
      const double p = dot(normal, s);
      all_nonneg = all_nonneg && p >= -1e-10;
      all_nonpos = all_nonpos && p <= 1e-10;
    }
    if (!all_nonneg && !all_nonpos) return;
    if (!all_nonneg) {
      for (auto& x : normal) x = -x;
    }
    double scale = 0.0;
    for (double x : normal) scale = std::max(scale, std::abs(x));
    for (auto& x : normal) {
      x /= scale;
      if (std::abs(x) < 1e-14) x = 0.0;
    }
    if (!known(normal)) rays.push_back(std::move(normal));
  });
  return rays;
}

// ---------------------------------------------------------------------------
// Quantum vectorization

namespace {

ComplexMatrix local_basis_element(std::size_t index, std::size_t n) {
  const std::size_t a = index / n;
  const std::size_t b = index % n;
  ComplexMatrix m(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  if (a == b) {
    m(a, a) = 1.0;
  } else if (a < b) {
    m(a, b) = r;
    m(b, a) = r;
  } else {  // antisymmetric element of the pair (b, a)
    m(b, a) = Complex(0.0, -r);
    m(a, b) = Complex(0.0, r);
  }
  return m;
}

std::size_t total_dim(std::span<const std::size_t> levels) {
  std::size_t d = 1;
  for (auto n : levels) d *= n * n;
  return d;
}

std::size_t hilbert_dim(std::span<const std::size_t> levels) {
  std::size_t d = 1;
  for (auto n : levels) d *= n;
  return d;
}

}  // namespace

ComplexMatrix hermitian_basis_element(std::size_t index, std::span<const std::size_t> levels) {
  if (index >= total_dim(levels)) throw Error(ErrorKind::DimensionMismatch, "basis index");
  ComplexMatrix out = ComplexMatrix::identity(1);
  std::size_t stride = total_dim(levels);
  for (auto n : levels) {
    stride /= n * n;
    const std::size_t local = (index / stride) % (n * n);
    out = kron(out, local_basis_element(local, n));
  }
  return out;
}

std::vector<double> vectorize(const HermitianMatrix& h, std::span<const std::size_t> levels) {
  if (h.dim() != hilbert_dim(levels)) {
    throw Error(ErrorKind::DimensionMismatch, "vectorize: matrix size does not match levels");
  }
  if (levels.size() == 1) {
    const std::size_t n = levels[0];
    std::vector<double> v(n * n);
    const double s2 = std::sqrt(2.0);
    for (std::size_t a = 0; a < n; ++a) {
      v[a * n + a] = h(a, a).real();
      for (std::size_t b = a + 1; b < n; ++b) {
        v[a * n + b] = s2 * h(a, b).real();
        v[b * n + a] = -s2 * h(a, b).imag();
      }
    }
    return v;
  }
  const std::size_t d = total_dim(levels);
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto basis = hermitian_basis_element(k, levels);
    double s = 0.0;
    for (std::size_t i = 0; i < h.dim(); ++i)
      for (std::size_t j = 0; j < h.dim(); ++j) {
        if (basis(i, j) == Complex{}) continue;
        s += (basis(i, j) * h(j, i)).real();
      }
    v[k] = s;
  }
  return v;
}

HermitianMatrix devectorize(std::span<const double> v, std::span<const std::size_t> levels) {
  const std::size_t d = total_dim(levels);
  if (v.size() != d) throw Error(ErrorKind::DimensionMismatch, "devectorize: length mismatch");
  const std::size_t n = hilbert_dim(levels);
  ComplexMatrix m(n, n);
  if (levels.size() == 1) {
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t a = 0; a < n; ++a) {
      m(a, a) = v[a * n + a];
      for (std::size_t b = a + 1; b < n; ++b) {
        m(a, b) = Complex(r * v[a * n + b], -r * v[b * n + a]);
        m(b, a) = std::conj(m(a, b));
      }
    }
    return HermitianMatrix(m);
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (v[k] == 0.0) continue;
    m += Complex(v[k]) * hermitian_basis_element(k, levels);
  }
  return HermitianMatrix(m, 1e-9);
}

RealMatrix superoperator(const HermitianMap& f, std::span<const std::size_t> in_levels,
                         std::span<const std::size_t> out_levels) {
  const std::size_t din = total_dim(in_levels);
  const std::size_t dout = total_dim(out_levels);
  RealMatrix out(dout, din);
  for (std::size_t j = 0; j < din; ++j) {
    const HermitianMatrix basis(hermitian_basis_element(j, in_levels));
    const auto image = vectorize(f(basis), out_levels);
    out.set_column(j, image);
  }
  return out;
}

RealMatrix conjugation_superoperator(const ComplexMatrix& u, bool antiunitary) {
  if (!u.is_square()) throw Error(ErrorKind::DimensionMismatch, "unitary must be square");
  const std::size_t n = u.rows();
  return superoperator(
      [&](const HermitianMatrix& rho) {
        const ComplexMatrix x = antiunitary ? transpose(rho.matrix()) : rho.matrix();
        return HermitianMatrix(u * x * adjoint(u), 1e-9);
      },
      std::span<const std::size_t>(&n, 1), std::span<const std::size_t>(&n, 1));
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix q(n, n);
  for (auto& x : q.entries()) x = Complex(normal(rng), normal(rng));
  // Modified Gram-Schmidt on columns; R has a positive diagonal, so Q is Haar.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

std::vector<Complex> haar_state(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> psi(n);
  double norm = 0.0;
  for (auto& x : psi) {
    x = Complex(normal(rng), normal(rng));
    norm += std::norm(x);
  }
  norm = std::sqrt(norm);
  for (auto& x : psi) x /= norm;
  return psi;
}

}  // namespace optdiscrim
