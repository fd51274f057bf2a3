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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "optdiscrim/classes.hpp"
#include "optdiscrim/scenarios.hpp"
#include "optdiscrim/symmetry.hpp"
#include "test_util.hpp"

using namespace optdiscrim;
using optdiscrim::testing::random_density;
using optdiscrim::testing::random_real;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<DiscriminationInstance> symmetric_instances() {
  return {trine_scenario(), symmetric_pure_scenario(5), gbit_square_scenario(), classical_cyclic_scenario(4)};
}

Outcome symmetrization_suite() {
  Timer timer;
  double dev = 0.0, res = 0.0;
  bool ok = true;
  Rng rng(1);
  for (const auto& inst : symmetric_instances()) {
    const auto& setup = *inst.symmetry;
    for (int trial = 0; trial < 100; ++trial) {
      const auto e = random_measurement(inst.preparation.system, inst.preparation.outcomes(), rng);
      const auto sym = symmetrize(e, setup);
      const double d = std::abs(success_probability(sym, inst.preparation) - success_probability(e, inst.preparation));
      const double r = measurement_covariance_residual(sym.matrix(), setup);
      dev = std::max(dev, d);
      res = std::max(res, r);
      ok = ok && d <= 1e-12 && r <= 1e-10 && is_valid_measurement(sym);
    }
  }
  const double t = timer.seconds();
  return {ok && t < 10.0, fmt("4 instances x 100 trials: max |dP_S| = %.2e, max covariance residual = %.2e, %.2f s",
                              dev, res, t)};
}

Outcome covariant_optimum_suite() {
  double worst = 0.0;
  for (const auto& inst : symmetric_instances()) {
    const auto full = solve(inst);
    const auto cov = solve_covariant(inst.preparation, *inst.symmetry);
    if (full.gap && *full.gap > 1e-8) return {false, "unrestricted quantum solve not gap-certified"};
    worst = std::max(worst, std::abs(full.value - cov.value));
  }
  return {worst <= 1e-8, fmt("max |full - covariant| = %.2e over 4 instances", worst)};
}

Outcome helstrom_check() {
  Timer timer;
  const auto inst = helstrom_scenario();
  const auto r = solve_quantum(inst.preparation);
  // 1/2 + (1/4) ||rho_1 - rho_2||_1 with unweighted rho: priors are 1/2 each.
  const auto ops = operators(inst.preparation.system, inst.preparation.states);
  const double oracle = 0.5 + 0.25 * trace_norm(2.0 * ops[0] - 2.0 * ops[1]);
  const double closed = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
  const double t = timer.seconds();
  const bool ok = std::abs(r.value - oracle) <= 1e-6 && std::abs(oracle - closed) <= 1e-12 && r.gap && *r.gap < 1e-6 &&
                  t < 1.0;
  return {ok, fmt("P_S = %.12f, oracle = %.12f, gap = %.2e, %.3f s", r.value, oracle, r.gap.value_or(NAN), t)};
}

Outcome trine_check() {
  const auto inst = trine_scenario();
  const auto r = solve_quantum(inst.preparation);
  const auto cert = dual_certificate(r.measurement, inst.preparation);
  // Independent evaluation with the square-root measurement (2/3)|psi_k><psi_k|.
  double srm = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 3.0;
    const std::vector<Complex> psi{std::cos(t / 2), std::sin(t / 2)};
    const auto p = HermitianMatrix::projector(psi);
    srm += trace_product((1.0 / 3.0) * p, (2.0 / 3.0) * p);
  }
  const bool ok = std::abs(r.value - 2.0 / 3.0) <= 1e-6 && std::abs(srm - 2.0 / 3.0) <= 1e-12 && cert.feasible &&
                  std::abs(cert.bound - r.value) <= 1e-6;
  return {ok, fmt("P_S = %.12f, SRM oracle = %.12f, certificate feasible = %s (min slack %.2e), bound = %.12f",
                  r.value, srm, cert.feasible ? "yes" : "no", cert.min_slack, cert.bound)};
}

Outcome oracle_equivalence() {
  Timer timer;
  double worst = 0.0;
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed, ++count) {
    const std::size_t m = 1 + seed % 3, d = 1 + seed % 4;
    const auto inst = classical_random_scenario(m, d, 1000 + seed);
    worst = std::max(worst, std::abs(solve_lp(inst.preparation).value - brute_force_oracle(inst.preparation).value));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed, ++count) {
    const auto inst = gbit_random_scenario(2 + seed % 3, 2000 + seed);
    worst = std::max(worst, std::abs(solve_lp(inst.preparation).value - brute_force_oracle(inst.preparation).value));
  }
  const double t = timer.seconds();
  return {worst <= 1e-9 && t < 30.0,
          fmt("%d instances (50 classical, 20 gbit): max |LP - brute force| = %.2e, %.2f s", count, worst, t)};
}

Outcome inclusion_suite() {
  const auto a = System::quantum(2, "A"), b = System::quantum(2, "B");
  Rng rng(6);
  double recon = 0.0, residual = std::numeric_limits<double>::infinity();
  std::vector<SeparableMeasurement> separable;
  for (int trial = 0; trial < 50; ++trial) {
    const auto sm = random_sequential(a, b, 2, 2 + trial % 3, rng);
    const auto sep = seq_to_separable(sm);
    recon = std::max(recon, max_abs_diff(sep.composite().matrix(), sm.composite().matrix()));
    separable.push_back(sep);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto lm = random_two_round_locc(a, b, 2 + trial % 3, rng);
    const auto sep = locc_to_separable(lm);
    recon = std::max(recon, max_abs_diff(sep.composite().matrix(), lm.composite().matrix()));
    separable.push_back(sep);
  }
  bool all_pt = true;
  for (const auto& sep : separable) {
    const auto e = sep.composite();
    for (int k = 0; k < 100; ++k) {
      const auto f = random_positive_map(a, rng);
      residual = std::min(residual, pt_residual(e, a, b, f));
      all_pt = all_pt && check_pt(e, a, b, f);
    }
  }
  return {recon <= 1e-12 && residual >= -1e-10 && all_pt,
          fmt("70 measurements: max reconstruction error = %.2e, min PT residual over 7000 maps = %.3e", recon,
              residual)};
}

Outcome witness_demo() {
  const auto a = System::quantum(2, "A"), b = System::quantum(2, "B");
  const auto bell = bell_scenario().measurement.value();
  const auto w = pt_witness(bell, a, b);
  if (!w) return {false, "no witness for the Bell measurement"};
  // Product Z (x) Z measurement.
  std::vector<HermitianMatrix> zz;
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<Complex> psi(4, 0.0);
    psi[k] = 1.0;
    zz.push_back(HermitianMatrix::projector(psi));
  }
  const bool product_clean = !pt_witness(quantum_measurement(zz, two_qubits()), a, b).has_value();
  const bool ok = w->determinism_residual <= 1e-10 && w->block_positivity >= -1e-10 && w->positivity_margin >= -1e-10 &&
                  w->violation <= -0.1 && std::abs(w->unperturbed_pairing + 0.5) <= 1e-12 && product_clean &&
                  !check_pt(bell, a, b, w->fbar);
  return {ok, fmt("pairing %.4f (fixed %.4f), determinism %.1e, effect margin %.2e, product-effect margin %.2e, "
                  "violation %.4f, Z(x)Z NotFound = %s",
                  w->unperturbed_pairing, w->pairing, w->determinism_residual, w->positivity_margin,
                  w->block_positivity, w->violation, product_clean ? "yes" : "no")};
}

ExtendedProcess random_process(const System& in, const System& out, Rng& rng) {
  return ExtendedProcess(in, out, random_real(out.dim(), in.dim(), rng));
}

double relative(const RealMatrix& x, const RealMatrix& y) { return max_abs_diff(x, y) / (1.0 + max_abs(x)); }

Outcome kernel_laws() {
  const auto q = System::quantum(2, "A"), c = System::classical(3, "C"), r = System::quantum(3, "B");
  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_process(q, c, rng), g = random_process(c, r, rng), h = random_process(r, q, rng);
    worst = std::max(worst, relative(compose_seq(compose_seq(f, g), h).matrix(), compose_seq(f, compose_seq(g, h)).matrix()));
    const auto f2 = random_process(c, q, rng), g2 = random_process(q, c, rng);
    worst = std::max(worst, relative(compose_seq(compose_par(f, f2), compose_par(g, g2)).matrix(),
                                     compose_par(compose_seq(f, g), compose_seq(f2, g2)).matrix()));
    // swap o (f (x) g) = (g (x) f) o swap
    worst = std::max(worst, relative(compose_seq(compose_par(f, f2), swap(c, q)).matrix(),
                                     compose_seq(swap(q, c), compose_par(f2, f)).matrix()));
  }
  bool yank = true;
  for (std::size_t n : {1u, 2u, 3u, 5u}) yank = yank && yank_check(ClassicalStructure::canonical(n), 1e-12);
  const auto povm = optdiscrim::testing::random_povm(3, 4, rng);
  std::vector<ExtendedProcess> effects;
  for (const auto& e : povm) effects.push_back(ExtendedProcess::effect(System::quantum(3, "Q"), vectorize(e)));
  const bool meas = is_measurement(effects, 1e-12);
  double norm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = vectorize(random_density(3, rng));
    double total = 0.0;
    for (const auto& e : effects) total += dot(e.as_vector(), rho);
    norm = std::max(norm, std::abs(total - 1.0));
  }
  return {worst <= 1e-12 && yank && meas && norm <= 1e-12,
          fmt("associativity/interchange/naturality max rel. error %.2e, yanking %s, normalization max error %.2e",
              worst, yank ? "ok" : "FAILED", norm)};
}

// Random setups: Z_n rotations about a random axis, and cyclic coordinate
// shifts on classical systems.
SymmetrySetup random_setup(Rng& rng, std::size_t& outcomes) {
  std::uniform_int_distribution<std::size_t> order(2, 5);
  const std::size_t n = order(rng);
  outcomes = n;
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
    const auto v = haar_unitary(2, rng);
    std::vector<ComplexMatrix> us;
    for (std::size_t k = 0; k < n; ++k) us.push_back(v * bloch_z_rotation(2.0 * std::numbers::pi * k / n) * adjoint(v));
    return {FiniteGroup::cyclic(n), cyclic_shift_action(n, n), state_action_from_unitaries(us), System::quantum(2, "Q")};
  }
  const auto shift = cyclic_shift_action(n, n);
  std::vector<RealMatrix> maps;
  for (std::size_t g = 0; g < n; ++g) maps.push_back(shift.matrix(g));
  return {FiniteGroup::cyclic(n), shift, StateSpaceAction{maps}, System::classical(n, "X")};
}

Outcome symmetrizer_algebra() {
  Rng rng(9);
  double idem = 0.0, lin = 0.0, fixed = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 0;
    const auto setup = random_setup(rng, m);
    const auto e = random_measurement(setup.system, m, rng);
    const auto f = random_measurement(setup.system, m, rng);
    const auto se = symmetrize(e, setup), sf = symmetrize(f, setup);
    idem = std::max(idem, max_abs_diff(symmetrize(se, setup).matrix(), se.matrix()));
    const double l = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto mixed = Measurement::from_matrix(setup.system, l * e.matrix() + (1.0 - l) * f.matrix());
    lin = std::max(lin, max_abs_diff(symmetrize(mixed, setup).matrix(), l * se.matrix() + (1.0 - l) * sf.matrix()));
    // se is covariant, so it is a fixed point; check on a freshly built copy.
    const auto copy = Measurement::from_matrix(setup.system, se.matrix());
    fixed = std::max(fixed, max_abs_diff(symmetrize(copy, setup).matrix(), copy.matrix()));
  }
  return {idem <= 1e-12 && lin <= 1e-12 && fixed <= 1e-12,
          fmt("100 random pairs: idempotence %.2e, linearity %.2e, fixed point %.2e", idem, lin, fixed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"symmetrization preserves P_S and yields covariance", symmetrization_suite},
      {"covariant optimum equals unrestricted optimum", covariant_optimum_suite},
      {"Helstrom pair", helstrom_check},
      {"trine", trine_check},
      {"LP versus brute-force oracle", oracle_equivalence},
      {"sequential/LOCC -> separable -> PT", inclusion_suite},
      {"PT witness for the Bell measurement", witness_demo},
      {"kernel laws", kernel_laws},
      {"symmetrizer algebra", symmetrizer_algebra},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("criterion %zu %s: %s -- %s\n", k + 1, out.pass ? "PASS" : "FAIL", criteria[k].first,
                out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
