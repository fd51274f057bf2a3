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

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace optdiscrim;

TEST(models, contains_state_examples) {
  EXPECT_TRUE(contains_state(ModelDescriptor::classical(2), std::vector<double>{0.3, 0.7}));
  const double d[] = {1.0, -0.1};
  EXPECT_FALSE(contains_state(ModelDescriptor::quantum(2), vectorize(HermitianMatrix::diagonal(d))));
  EXPECT_TRUE(contains_state(ModelDescriptor::gbit_square(), std::vector<double>{1, 1, 1}));
  EXPECT_FALSE(contains_state(ModelDescriptor::gbit_square(), std::vector<double>{1, 1.2, 0}));
  try {
    contains_state(ModelDescriptor::classical(3), std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(models, contains_effect_examples) {
  auto check = contains_effect(ModelDescriptor::quantum(2), vectorize(HermitianMatrix::identity(2)));
  EXPECT_TRUE(check.in_cone);
  EXPECT_TRUE(check.feasible);

  check = contains_effect(ModelDescriptor::classical(2), std::vector<double>{2.0, 0.0});
  EXPECT_TRUE(check.in_cone);
  EXPECT_FALSE(check.feasible);

  check = contains_effect(ModelDescriptor::gbit_square(), std::vector<double>{0.5, 0.0, 0.0});
  EXPECT_TRUE(check.in_cone);
  EXPECT_TRUE(check.feasible);

  // (1, 1, 1)/2 pairs to -1/2 with the vertex (1, -1, -1).
  check = contains_effect(ModelDescriptor::gbit_square(), std::vector<double>{0.5, 0.5, 0.5});
  EXPECT_FALSE(check.in_cone);
}

TEST(models, gbit_effect_cone_is_the_diamond) {
  auto rays = ModelDescriptor::gbit_square().effect_generators();
  std::sort(rays.begin(), rays.end());
  const std::vector<std::vector<double>> expected{{1, -1, 0}, {1, 0, -1}, {1, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(rays, expected);
}

TEST(models, dual_cone_agrees_with_lp_membership) {
  // Effect-cone LP membership must coincide with the inequality description
  // <w, s_i> >= 0 over the state generators.
  const auto gbit = ModelDescriptor::gbit_square();
  Rng rng(4);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<double> w{coord(rng), coord(rng), coord(rng)};
    bool by_inequalities = true;
    for (const auto& s : gbit.state_generators()) by_inequalities &= dot(w, s) >= -kConeTolerance;
    EXPECT_EQ(contains_effect(gbit, w).in_cone, by_inequalities);
  }
}

TEST(models, unit_effects) {
  EXPECT_EQ(unit_effect(ModelDescriptor::classical(3)), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(unit_effect(ModelDescriptor::quantum(2)), vectorize(HermitianMatrix::identity(2)));
  EXPECT_EQ(unit_effect(ModelDescriptor::gbit_square()), (std::vector<double>{1, 0, 0}));
}

TEST(models, pure_states) {
  EXPECT_EQ(pure_states(ModelDescriptor::classical(2)),
            (std::vector<std::vector<double>>{{1, 0}, {0, 1}}));
  EXPECT_EQ(pure_states(ModelDescriptor::gbit_square()).size(), 4u);
  try {
    pure_states(ModelDescriptor::quantum(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedModel);
  }
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = devectorize(random_pure_state(ModelDescriptor::quantum(3), rng), 3);
    EXPECT_NEAR(psi.trace(), 1.0, 1e-12);
    EXPECT_LE(max_abs_diff(psi.matrix() * psi.matrix(), psi.matrix()), 1e-12);
  }
}

TEST(models, duality_of_shipped_polyhedral_models) {
  for (const auto& m : {ModelDescriptor::classical(4), ModelDescriptor::gbit_square()}) {
    for (const auto& w : m.effect_generators())
      for (const auto& s : m.state_generators()) EXPECT_GE(dot(w, s), 0.0) << m.name();
    for (const auto& s : m.state_generators()) EXPECT_DOUBLE_EQ(dot(m.unit(), s), 1.0);
  }
  Rng rng(2);
  const auto q = ModelDescriptor::quantum(3);
  for (int trial = 0; trial < 50; ++trial) {
    EXPECT_NEAR(dot(q.unit(), random_pure_state(q, rng)), 1.0, 1e-12);
  }
}

TEST(models, quantum_membership_agrees_with_eigh) {
  Rng rng(99);
  const auto q = ModelDescriptor::quantum(3);
  int positives = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Shift toward the identity so both outcomes occur.
    auto h = optdiscrim::testing::random_hermitian(3, rng);
    h += 2.5 * HermitianMatrix::identity(3);
    const bool psd = eigh(h).values.front() >= -kConeTolerance;
    positives += psd;
    EXPECT_EQ(contains_state(q, vectorize(h)), psd);
  }
  EXPECT_GT(positives, 50);
  EXPECT_LT(positives, 950);
}

TEST(models, vectorization_is_an_isometry) {
  Rng rng(6);
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    const auto a = optdiscrim::testing::random_hermitian(n, rng);
    const auto b = optdiscrim::testing::random_hermitian(n, rng);
    EXPECT_NEAR(dot(vectorize(a), vectorize(b)), trace_product(a, b), 1e-12);
    EXPECT_LE(max_abs_diff(devectorize(vectorize(a), n), a), 1e-14);
  }
  // Composite basis is the product of local bases.
  const std::size_t levels[] = {2, 3};
  const auto a = optdiscrim::testing::random_hermitian(2, rng);
  const auto b = optdiscrim::testing::random_hermitian(3, rng);
  EXPECT_LE(max_abs_diff(vectorize(kron(a, b), levels), kron(vectorize(a), vectorize(b))), 1e-13);
  const auto c = optdiscrim::testing::random_hermitian(6, rng);
  EXPECT_LE(max_abs_diff(devectorize(vectorize(c, levels), levels), c), 1e-13);
}

TEST(models, conjugation_superoperator_matches_direct_action) {
  Rng rng(7);
  const auto u = haar_unitary(3, rng);
  EXPECT_LE(max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(3)), 1e-13);
  const auto rho = optdiscrim::testing::random_density(3, rng);
  const auto p = conjugation_superoperator(u);
  EXPECT_LE(max_abs_diff(matvec(p, vectorize(rho)), vectorize(conjugate_by(u, rho))), 1e-13);
  const auto t = conjugation_superoperator(u, true);
  const HermitianMatrix rho_t(transpose(rho.matrix()));
  EXPECT_LE(max_abs_diff(matvec(t, vectorize(rho)), vectorize(conjugate_by(u, rho_t))), 1e-13);
}
