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

#include "optdiscrim/classes.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "optdiscrim/scenarios.hpp"
#include "optdiscrim/symmetry.hpp"
#include "test_util.hpp"

using namespace optdiscrim;

namespace {

const System kA = System::quantum(2, "A");
const System kB = System::quantum(2, "B");

HermitianMatrix basis_projector(std::size_t n, std::size_t k) {
  std::vector<Complex> psi(n, 0.0);
  psi[k] = 1.0;
  return HermitianMatrix::projector(psi);
}

Measurement z_basis(const System& s) { return quantum_measurement({basis_projector(2, 0), basis_projector(2, 1)}, s); }

// First Z on A, then Z on B, reporting both bits: outcome 2i + j.
SequentialMeasurement z_then_z() {
  const HermitianMatrix zero = 0.0 * HermitianMatrix::identity(2);
  std::vector<Measurement> branches;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<HermitianMatrix> effects(4, zero);
    effects[2 * i] = basis_projector(2, 0);
    effects[2 * i + 1] = basis_projector(2, 1);
    branches.push_back(quantum_measurement(effects, kB));
  }
  return make_sequential(z_basis(kA), branches);
}

double reconstruction_error(const Measurement& x, const Measurement& y) { return max_abs_diff(x.matrix(), y.matrix()); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::ValidationError;
}

}  // namespace

TEST(classes, sequential_z_then_z_is_product_basis) {
  const auto sm = z_then_z();
  const auto e = sm.composite();
  ASSERT_EQ(e.outcomes(), 4u);
  EXPECT_TRUE(is_valid_measurement(e));
  const auto ops = operators(e.system, e.effects);
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_LE(max_abs_diff(ops[m], basis_projector(4, m)), 1e-15) << "outcome " << m;
  }
  // Built by kernel composition, the process agrees with the closed form.
  EXPECT_LE(max_abs_diff(sm.composite_process().matrix(), e.matrix()), 1e-14);

  const auto sep = seq_to_separable(sm);
  for (const auto& terms : sep.terms) {
    std::size_t nonzero = 0;
    for (const auto& t : terms) nonzero += t.weight * max_abs(RealMatrix::row(t.beta)) > 0.0 ? 1 : 0;
    EXPECT_EQ(nonzero, 1u);
  }
  EXPECT_LE(reconstruction_error(sep.composite(), e), 1e-15);
}

TEST(classes, sequential_trivial_message_is_product) {
  const Measurement trivial{kA, {unit_effect(kA)}};
  const auto sm = make_sequential(trivial, {z_basis(kB)});
  const auto sep = seq_to_separable(sm);
  ASSERT_EQ(sep.terms.size(), 2u);
  for (const auto& terms : sep.terms) EXPECT_EQ(terms.size(), 1u);
  EXPECT_LE(reconstruction_error(sep.composite(), sm.composite()), 1e-15);
}

TEST(classes, sequential_errors) {
  EXPECT_EQ(kind_of([] { make_sequential(z_basis(kA), {z_basis(kB)}); }), ErrorKind::SystemMismatch);
  EXPECT_EQ(kind_of([] {
              make_sequential(z_basis(kA), {z_basis(kB), Measurement{kB, {unit_effect(kB)}}});
            }),
            ErrorKind::SystemMismatch);
  const Measurement broken{kA, {unit_effect(kA), unit_effect(kA)}};
  EXPECT_EQ(kind_of([&] { make_sequential(broken, {z_basis(kB), z_basis(kB)}); }), ErrorKind::ValidationError);
}

TEST(classes, helstrom_then_adaptive) {
  // A performs the Helstrom measurement for |0>/|+>, B measures in a basis chosen by the result.
  const auto hel = solve_quantum(helstrom_scenario().preparation).measurement;
  const Measurement a{kA, hel.effects};
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> plus{r, r}, minus{r, -r};
  const auto x_basis = quantum_measurement({HermitianMatrix::projector(plus), HermitianMatrix::projector(minus)}, kB);
  const auto sm = make_sequential(a, {z_basis(kB), x_basis});
  EXPECT_TRUE(is_valid_measurement(sm.composite()));
  EXPECT_LE(reconstruction_error(seq_to_separable(sm).composite(), sm.composite()), 1e-12);
}

TEST(classes, random_sequential_and_locc_convert_exactly) {
  Rng rng(2027);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sm = random_sequential(kA, kB, 2, 2, rng);
    const auto e = sm.composite();
    ASSERT_TRUE(is_valid_measurement(e));
    ASSERT_LE(reconstruction_error(seq_to_separable(sm).composite(), e), 1e-12);
    const auto lm = sequential_to_locc(sm);
    ASSERT_LE(reconstruction_error(lm.composite(), e), 1e-12);
    ASSERT_LE(reconstruction_error(locc_to_separable(lm).composite(), e), 1e-12);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto lm = random_two_round_locc(kA, kB, 2, rng);
    validate_locc(lm);
    const auto e = lm.composite();
    ASSERT_TRUE(is_valid_measurement(e));
    ASSERT_LE(max_abs_diff(lm.composite_process().matrix(), e.matrix()), 1e-12);
    const auto sep = locc_to_separable(lm);
    validate_separable(sep);
    ASSERT_LE(reconstruction_error(sep.composite(), e), 1e-12);
  }
}

TEST(classes, one_round_locc_matches_sequential) {
  const auto sm = z_then_z();
  const auto via_locc = locc_to_separable(sequential_to_locc(sm)).composite();
  EXPECT_LE(reconstruction_error(via_locc, seq_to_separable(sm).composite()), 1e-14);
}

TEST(classes, zero_message_protocol_is_product) {
  Rng rng(5);
  const auto instrument = random_instrument(kA, 3, rng);
  LoccMeasurement lm{kA, kB, {LoccStep{Party::A, {instrument}, std::nullopt}}};
  validate_locc(lm);
  const auto sep = locc_to_separable(lm);
  for (const auto& terms : sep.terms) {
    for (const auto& t : terms) EXPECT_LE(max_abs_diff(t.beta, unit_effect(kB)), 1e-15);
  }
  EXPECT_LE(reconstruction_error(sep.composite(), lm.composite()), 1e-14);
}

TEST(classes, locc_rejects_quantum_messages_and_large_messages) {
  Rng rng(6);
  auto lm = random_two_round_locc(kA, kB, 2, rng);
  lm.steps[0].message = System::quantum(2, "D");
  EXPECT_EQ(kind_of([&] { validate_locc(lm); }), ErrorKind::UnsupportedWiring);

  const auto wide = random_instrument(kA, kMaxMessageDim + 1, rng);
  LoccMeasurement big{kA, kB, {LoccStep{Party::A, {wide}, std::nullopt}, LoccStep{Party::B, {}, std::nullopt}}};
  for (std::size_t i = 0; i < wide.size(); ++i) big.steps[1].maps.push_back(random_instrument(kB, 2, rng));
  EXPECT_EQ(kind_of([&] { validate_locc(big); }), ErrorKind::TooLarge);
}

TEST(classes, separable_validation) {
  auto sep = seq_to_separable(z_then_z());
  validate_separable(sep);
  sep.terms[0][0].weight = -1.0;
  EXPECT_EQ(kind_of([&] { validate_separable(sep); }), ErrorKind::ValidationError);
}

TEST(classes, check_pt_identity_and_sampled_maps) {
  Rng rng(31);
  const auto id = ExtendedProcess::identity(kA);
  const auto bell = bell_scenario().measurement.value();
  EXPECT_TRUE(check_pt(bell, kA, kB, id));

  for (int trial = 0; trial < 5; ++trial) {
    const auto e = seq_to_separable(random_sequential(kA, kB, 2, 3, rng)).composite();
    for (int k = 0; k < 100; ++k) {
      const auto f = random_positive_map(kA, rng);
      ASSERT_TRUE(check_pt(e, kA, kB, f));
      ASSERT_GE(pt_residual(e, kA, kB, f), -1e-10);
    }
  }
  const auto twice = 2.0 * id;
  EXPECT_EQ(kind_of([&] { check_pt(bell, kA, kB, twice); }), ErrorKind::PreconditionFailed);
}

TEST(classes, bell_witness) {
  const auto bell = bell_scenario().measurement.value();
  const auto w = pt_witness(bell, kA, kB);
  ASSERT_TRUE(w.has_value());
  // Tr[(Phi+)^{T_B} Psi-] = -1/2.
  EXPECT_NEAR(w->unperturbed_pairing, -0.5, 1e-12);
  EXPECT_LT(w->pairing, 0.0);
  EXPECT_LE(w->violation, -0.1);
  EXPECT_LE(w->determinism_residual, 1e-10);
  EXPECT_GE(w->block_positivity, -1e-10);
  EXPECT_GE(w->positivity_margin, -1e-10);
  EXPECT_TRUE(is_deterministic(w->fbar, 1e-10));
  EXPECT_FALSE(check_pt(bell, kA, kB, w->fbar));
}

TEST(classes, witness_not_found_for_product_measurement) {
  EXPECT_FALSE(pt_witness(z_then_z().composite(), kA, kB).has_value());
}

TEST(classes, noisy_bell_effect_witness) {
  const auto projectors = bell_projectors();
  const double p = 0.1;
  const auto noisy = (1.0 - p) * projectors[0] + (p / 4.0) * HermitianMatrix::identity(4);
  const auto e = quantum_measurement({noisy, HermitianMatrix::identity(4) - noisy}, two_qubits());
  const auto pt = eigh(partial_transpose(noisy, 2, 2));
  ASSERT_LT(pt.values[0], 0.0);  // NPT: (1 - p)(-1/2) + p/4 < 0
  const auto w = pt_witness(e, kA, kB);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->outcome, 0u);
  EXPECT_LT(w->violation, 0.0);
  EXPECT_FALSE(check_pt(e, kA, kB, w->fbar));
}

TEST(classes, witness_two_by_three_and_unsupported) {
  const auto b3 = System::quantum(3, "B");
  const auto sys = tensor(kA, b3);
  // |psi> = (|00> + |11>)/sqrt(2) on 2 (x) 3.
  std::vector<Complex> psi(6, 0.0);
  psi[0] = psi[4] = 1.0 / std::sqrt(2.0);
  const auto proj = HermitianMatrix::projector(psi);
  const auto e = quantum_measurement({proj, HermitianMatrix::identity(6) - proj}, sys);
  const auto w = pt_witness(e, kA, b3);
  ASSERT_TRUE(w.has_value());
  EXPECT_LT(w->violation, 0.0);
  EXPECT_LE(w->determinism_residual, 1e-10);

  const auto a3 = System::quantum(3, "A");
  const auto big = tensor(a3, b3);
  const auto e9 = quantum_measurement({HermitianMatrix::identity(9)}, big);
  EXPECT_EQ(kind_of([&] { pt_witness(e9, a3, b3); }), ErrorKind::UnsupportedSystem);
}

TEST(classes, permute_outcomes_in_class) {
  const ClassMeasurement seq = z_then_z();
  const auto same = permute_outcomes_in_class(seq, {0, 1, 2, 3});
  EXPECT_LE(reconstruction_error(effects_of(same), effects_of(seq)), 0.0);

  const Permutation swap{1, 0, 2, 3};
  const auto swapped = permute_outcomes_in_class(seq, swap);
  EXPECT_EQ(class_of(swapped), ClassTag::Sequential);
  EXPECT_LE(reconstruction_error(effects_of(swapped), permute_outcomes(effects_of(seq), swap)), 1e-15);

  Rng rng(3);
  const ClassMeasurement sep = seq_to_separable(random_sequential(kA, kB, 2, 3, rng));
  const Permutation cycle{1, 2, 0};
  const auto cycled = std::get<SeparableMeasurement>(permute_outcomes_in_class(sep, cycle));
  for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(cycled.terms[cycle[m]], std::get<SeparableMeasurement>(sep).terms[m]);

  const ClassMeasurement locc = random_two_round_locc(kA, kB, 3, rng);
  const auto lp = permute_outcomes_in_class(locc, cycle);
  EXPECT_EQ(class_of(lp), ClassTag::Locc);
  EXPECT_LE(reconstruction_error(effects_of(lp), permute_outcomes(effects_of(locc), cycle)), 1e-14);
}

TEST(classes, convex_mix_in_class) {
  Rng rng(17);
  const ClassMeasurement x = random_sequential(kA, kB, 2, 2, rng);
  const ClassMeasurement y = random_sequential(kA, kB, 3, 2, rng);
  const auto one = convex_mix_in_class(x, y, 1.0);
  EXPECT_LE(reconstruction_error(effects_of(one), effects_of(x)), 1e-15);

  const auto half = convex_mix_in_class(x, y, 0.5);
  const auto& hs = std::get<SequentialMeasurement>(half);
  EXPECT_EQ(hs.messages(), 5u);
  EXPECT_TRUE(is_valid_measurement(hs.composite()));
  const auto expected = 0.5 * effects_of(x).matrix() + 0.5 * effects_of(y).matrix();
  EXPECT_LE(max_abs_diff(effects_of(half).matrix(), expected), 1e-12);

  // Two product measurements: the separable term lists concatenate.
  const Measurement trivial{kA, {unit_effect(kA)}};
  const ClassMeasurement p1 = seq_to_separable(make_sequential(trivial, {z_basis(kB)}));
  const ClassMeasurement p2 = seq_to_separable(make_sequential(z_basis(kA), {Measurement{kB, {unit_effect(kB), std::vector<double>(4, 0.0)}}, Measurement{kB, {std::vector<double>(4, 0.0), unit_effect(kB)}}}));
  const auto mixed = std::get<SeparableMeasurement>(convex_mix_in_class(p1, p2, 0.5));
  for (std::size_t m = 0; m < 2; ++m) {
    EXPECT_EQ(mixed.terms[m].size(),
              std::get<SeparableMeasurement>(p1).terms[m].size() + std::get<SeparableMeasurement>(p2).terms[m].size());
  }

  const ClassMeasurement l1 = random_two_round_locc(kA, kB, 2, rng);
  const ClassMeasurement l2 = random_two_round_locc(kA, kB, 2, rng);
  const auto lmix = convex_mix_in_class(l1, l2, 0.3);
  EXPECT_LE(max_abs_diff(effects_of(lmix).matrix(), 0.3 * effects_of(l1).matrix() + 0.7 * effects_of(l2).matrix()),
            1e-12);

  EXPECT_EQ(kind_of([&] { convex_mix_in_class(x, p1, 0.5); }), ErrorKind::ClassMismatch);
  EXPECT_EQ(kind_of([&] { convex_mix_in_class(x, y, 1.5); }), ErrorKind::DomainError);
}

TEST(classes, symmetrize_in_class_keeps_representation) {
  // Z_2 acting by X (x) X swaps |00> and |11>, and the two outcomes.
  const double r = 0.5;
  const auto sys = two_qubits();
  const auto rho = quantum_preparation({r * basis_projector(4, 0), r * basis_projector(4, 3)}, sys);
  const ComplexMatrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
  const auto local = state_action_from_unitaries({ComplexMatrix::identity(2), x});
  const ProductSymmetry sym{FiniteGroup::cyclic(2), cyclic_shift_action(2, 2), local, local, kA, kB};
  const auto joint = sym.joint();
  ASSERT_TRUE(validate_setup(joint).valid);
  ASSERT_TRUE(is_covariant_preparation(rho, joint));

  Rng rng(23);
  const std::vector<ClassMeasurement> members{random_sequential(kA, kB, 2, 2, rng), random_two_round_locc(kA, kB, 2, rng),
                                              seq_to_separable(random_sequential(kA, kB, 3, 2, rng))};
  for (const auto& member : members) {
    const auto s = symmetrize_in_class(member, sym);
    EXPECT_EQ(class_of(s), class_of(member));
    const auto plain = symmetrize(effects_of(member), joint);
    EXPECT_LE(reconstruction_error(effects_of(s), plain), 1e-12);
    EXPECT_NEAR(success_probability(effects_of(s), rho), success_probability(effects_of(member), rho), 1e-12);
    EXPECT_TRUE(is_covariant_measurement(effects_of(s), joint));
    if (const auto* sep = std::get_if<SeparableMeasurement>(&s)) validate_separable(*sep);
    if (const auto* lm = std::get_if<LoccMeasurement>(&s)) validate_locc(*lm);
  }
}
