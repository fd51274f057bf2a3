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

#include "optdiscrim/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optdiscrim/lp.hpp"
#include "solver_detail.hpp"

namespace optdiscrim {

// ---------------------------------------------------------------------------
// Preparations and measurements

std::vector<double> StatePreparation::priors() const {
  const auto u = unit_effect(system);
  std::vector<double> xi;
  for (const auto& s : states) xi.push_back(dot(u, s));
  return xi;
}

RealMatrix StatePreparation::matrix() const {
  RealMatrix r(system.dim(), states.size());
  for (std::size_t m = 0; m < states.size(); ++m) r.set_column(m, states[m]);
  return r;
}

ExtendedProcess StatePreparation::as_process() const {
  std::vector<ExtendedProcess> parts;
  for (const auto& s : states) parts.push_back(ExtendedProcess::state(system, s));
  return preparation_to_process(parts);
}

RealMatrix Measurement::matrix() const {
  RealMatrix e(effects.size(), system.dim());
  for (std::size_t m = 0; m < effects.size(); ++m) e.set_row(m, effects[m]);
  return e;
}

ExtendedProcess Measurement::as_process() const {
  std::vector<ExtendedProcess> parts;
  for (const auto& w : effects) parts.push_back(ExtendedProcess::effect(system, w));
  return measurement_to_process(parts);
}

Measurement Measurement::from_matrix(System system, const RealMatrix& rows) {
  if (rows.cols() != system.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "effect length does not match the system");
  }
  Measurement e{std::move(system), {}};
  for (std::size_t m = 0; m < rows.rows(); ++m) e.effects.push_back(rows.row_vector(m));
  return e;
}

void validate_preparation(const StatePreparation& rho, double tolerance) {
  if (rho.states.empty()) throw Error(ErrorKind::ValidationError, "preparation has no states");
  for (std::size_t m = 0; m < rho.states.size(); ++m) {
    if (rho.states[m].size() != rho.system.dim()) {
      throw Error(ErrorKind::ValidationError,
                  "state " + std::to_string(m) + " has the wrong dimension");
    }
    if (!contains_state(rho.system, rho.states[m])) {
      throw Error(ErrorKind::ValidationError,
                  "state " + std::to_string(m) + " is not in the state cone");
    }
  }
  const auto xi = rho.priors();
  const double total = std::accumulate(xi.begin(), xi.end(), 0.0);
  if (std::abs(total - 1.0) > tolerance) {
    throw Error(ErrorKind::ValidationError,
                "preparation not normalized (sum of priors = " + std::to_string(total) + ")");
  }
}

void validate_measurement(const Measurement& e, double tolerance) {
  if (e.effects.empty()) throw Error(ErrorKind::ValidationError, "measurement has no effects");
  std::vector<double> total(e.system.dim(), 0.0);
  for (std::size_t m = 0; m < e.effects.size(); ++m) {
    if (e.effects[m].size() != e.system.dim()) {
      throw Error(ErrorKind::ValidationError,
                  "effect " + std::to_string(m) + " has the wrong dimension");
    }
    if (!contains_effect(e.system, e.effects[m]).in_cone) {
      throw Error(ErrorKind::ValidationError,
                  "effect " + std::to_string(m) + " is not in the effect cone");
    }
    total = axpy(1.0, e.effects[m], total);
  }
  if (max_abs_diff(total, unit_effect(e.system)) > tolerance) {
    throw Error(ErrorKind::ValidationError, "effects do not sum to the unit effect");
  }
}

bool is_valid_measurement(const Measurement& e, double tolerance) {
  try {
    validate_measurement(e, tolerance);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<HermitianMatrix> operators(const System& system,
                                       const std::vector<std::vector<double>>& vectors) {
  if (!system.is_quantum()) throw Error(ErrorKind::UnsupportedModel, "system is not quantum");
  const auto levels = system.quantum_levels();
  std::vector<HermitianMatrix> out;
  for (const auto& v : vectors) out.push_back(devectorize(v, levels));
  return out;
}

StatePreparation quantum_preparation(const std::vector<HermitianMatrix>& weighted_states,
                                     const System& system) {
  if (!system.is_quantum()) throw Error(ErrorKind::UnsupportedModel, "system is not quantum");
  const auto levels = system.quantum_levels();
  StatePreparation rho{system, {}};
  for (const auto& s : weighted_states) rho.states.push_back(vectorize(s, levels));
  return rho;
}

Measurement quantum_measurement(const std::vector<HermitianMatrix>& effects, const System& system) {
  if (!system.is_quantum()) throw Error(ErrorKind::UnsupportedModel, "system is not quantum");
  const auto levels = system.quantum_levels();
  Measurement e{system, {}};
  for (const auto& s : effects) e.effects.push_back(vectorize(s, levels));
  return e;
}

double success_probability(const Measurement& e, const StatePreparation& rho) {
  if (!(e.system == rho.system)) {
    throw Error(ErrorKind::SystemMismatch, "measurement on " + e.system.label() +
                                               " but preparation on " + rho.system.label());
  }
  if (e.outcomes() != rho.outcomes()) {
    throw Error(ErrorKind::SystemMismatch, "measurement and preparation have different outcome counts");
  }
  double p = 0.0;
  for (std::size_t m = 0; m < e.outcomes(); ++m) p += dot(e.effects[m], rho.states[m]);
  return p;
}

Measurement guessing_measurement(const System& system, std::size_t outcomes, std::size_t outcome) {
  Measurement e{system, std::vector<std::vector<double>>(outcomes,
                                                         std::vector<double>(system.dim(), 0.0))};
  e.effects.at(outcome) = unit_effect(system);
  return e;
}

namespace {

// u = sum_j c_j w_j with c >= 0, a vertex picked by a random objective.
std::vector<double> random_unit_decomposition(const std::vector<std::vector<double>>& gens,
                                              const std::vector<double>& u, Rng& rng) {
  RealMatrix a(u.size(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) a.set_column(j, gens[j]);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(gens.size());
  for (auto& x : c) x = normal(rng);
  const auto res = lp::maximize(a, u, c);
  if (res.status != lp::Status::Optimal) {
    throw Error(ErrorKind::UnsupportedModel, "unit effect is not in the effect cone");
  }
  return res.x;
}

}  // namespace

Measurement random_measurement(const System& system, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw Error(ErrorKind::ValidationError, "need at least one outcome");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (system.is_quantum()) {
    const auto levels = system.quantum_levels();
    const std::size_t n = std::accumulate(levels.begin(), levels.end(), std::size_t{1},
                                          std::multiplies<>());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<HermitianMatrix> g;
    ComplexMatrix total(n, n);
    for (std::size_t m = 0; m < outcomes; ++m) {
      ComplexMatrix x(n, n);
      for (auto& z : x.entries()) z = Complex(normal(rng), normal(rng));
      g.emplace_back(x * adjoint(x), 1e-9);
      total += g.back().matrix();
    }
    const auto s = matrix_function(HermitianMatrix(total, 1e-9),
                                   [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<HermitianMatrix> effects;
    for (const auto& gm : g) effects.emplace_back(s.matrix() * gm.matrix() * s.matrix(), 1e-9);
    return quantum_measurement(effects, system);
  }
  const auto gens = effect_generators(system);
  const auto u = unit_effect(system);
  const auto c1 = random_unit_decomposition(gens, u, rng);
  const auto c2 = random_unit_decomposition(gens, u, rng);
  const double t = unif(rng);
  Measurement e{system, std::vector<std::vector<double>>(outcomes,
                                                         std::vector<double>(system.dim(), 0.0))};
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    const double cj = t * c1[j] + (1.0 - t) * c2[j];
    if (cj == 0.0) continue;
    std::vector<double> p(outcomes);
    for (auto& x : p) x = expo(rng);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (std::size_t m = 0; m < outcomes; ++m) {
      e.effects[m] = axpy(cj * p[m] / sum, gens[j], e.effects[m]);
    }
  }
  // Remove the rounding drift of the decomposition.
  std::vector<double> total(system.dim(), 0.0);
  for (const auto& w : e.effects) total = axpy(1.0, w, total);
  const auto drift = axpy(-1.0, total, u);
  if (max_abs(RealMatrix::column(drift)) > 1e-9) {
    throw Error(ErrorKind::UnsupportedModel, "unit decomposition failed");
  }
  e.effects[0] = axpy(1.0, drift, e.effects[0]);
  return e;
}

// ---------------------------------------------------------------------------
// Linear programming

namespace detail {

void require_polyhedral(const System& s) {
  if (!is_polyhedral(s)) {
    throw Error(ErrorKind::UnsupportedModel,
                "system " + s.label() + " is not polyhedral; use the quantum solver");
  }
}

SolveReport finish(Measurement e, const StatePreparation& rho, std::string method,
                   std::size_t iterations) {
  SolveReport r;
  r.value = success_probability(e, rho);
  r.measurement = std::move(e);
  r.method = std::move(method);
  r.iterations = iterations;
  return r;
}

}  // namespace detail

SolveReport solve_lp(const StatePreparation& rho) {
  detail::require_polyhedral(rho.system);
  const std::size_t outcomes = rho.outcomes();
  const auto gens = effect_generators(rho.system);
  const auto u = unit_effect(rho.system);
  const std::size_t d = rho.system.dim(), j_count = gens.size();

  // e_m = sum_j lambda_{m,j} w_j, sum_m e_m = u, lambda >= 0.
  RealMatrix a(d, outcomes * j_count);
  std::vector<double> c(outcomes * j_count);
  for (std::size_t m = 0; m < outcomes; ++m) {
    for (std::size_t j = 0; j < j_count; ++j) {
      for (std::size_t i = 0; i < d; ++i) a(i, m * j_count + j) = gens[j][i];
      c[m * j_count + j] = dot(gens[j], rho.states[m]);
    }
  }
  const auto res = lp::maximize(a, u, c);
  if (res.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NoConvergence, "simplex did not reach an optimum");
  }
  Measurement e{rho.system, std::vector<std::vector<double>>(outcomes, std::vector<double>(d, 0.0))};
  for (std::size_t m = 0; m < outcomes; ++m)
    for (std::size_t j = 0; j < j_count; ++j)
      if (res.x[m * j_count + j] != 0.0) {
        e.effects[m] = axpy(res.x[m * j_count + j], gens[j], e.effects[m]);
      }
  return detail::finish(std::move(e), rho, "lp", res.iterations);
}

// ---------------------------------------------------------------------------
// Covariant reduction

namespace {

void require_covariant(const StatePreparation& rho, const SymmetrySetup& setup) {
  if (!(setup.system == rho.system)) {
    throw Error(ErrorKind::SystemMismatch, "symmetry setup acts on a different system");
  }
  const auto check = validate_setup(setup);
  if (!check.valid) throw Error(ErrorKind::InvalidSetup, check.violation);
  if (setup.tau.outcomes() != rho.outcomes()) {
    throw Error(ErrorKind::DimensionMismatch, "tau acts on a different number of outcomes");
  }
  if (preparation_covariance_residual(rho.matrix(), setup) > 1e-10) {
    throw Error(ErrorKind::NotCovariant, "preparation is not covariant under the setup");
  }
}

SolveReport covariant_lp(const StatePreparation& rho, const SymmetrySetup& setup) {
  const auto transports = covariant_transports(setup);
  const auto gens = effect_generators(rho.system);
  const auto u = unit_effect(rho.system);
  const std::size_t d = rho.system.dim(), outcomes = rho.outcomes();

  // Seed x = sum_j lambda_j w_j; outcome m gets L_m x.
  RealMatrix total(d, d);
  for (const auto& l : transports) total += l;
  RealMatrix a(d, gens.size());
  std::vector<double> c(gens.size(), 0.0);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    a.set_column(j, matvec(total, gens[j]));
    for (std::size_t m = 0; m < outcomes; ++m) c[j] += dot(matvec(transports[m], gens[j]), rho.states[m]);
  }
  const auto res = lp::maximize(a, u, c);
  if (res.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NoConvergence, "covariant simplex did not reach an optimum");
  }
  std::vector<double> seed(d, 0.0);
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (res.x[j] != 0.0) seed = axpy(res.x[j], gens[j], seed);
  Measurement e{rho.system, {}};
  for (const auto& l : transports) e.effects.push_back(matvec(l, seed));
  auto report = detail::finish(std::move(e), rho, "covariant-lp", res.iterations);
  report.covariant = true;
  return report;
}

}  // namespace

SolveReport solve_covariant(const StatePreparation& rho, const SymmetrySetup& setup,
                            const SolverOptions& options) {
  require_covariant(rho, setup);
  if (!is_transitive(setup)) {
    auto report = rho.system.is_quantum() ? solve_quantum(rho, options) : solve_lp(rho);
    report.warnings.push_back("tau is not transitive on the outcomes; solved without reduction");
    return report;
  }
  if (rho.system.is_quantum()) return detail::covariant_fixed_point(rho, setup, options);
  detail::require_polyhedral(rho.system);
  return covariant_lp(rho, setup);
}

// ---------------------------------------------------------------------------
// Dispatch

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Lp: return "lp";
    case SolverKind::FixedPoint: return "fixedpoint";
    case SolverKind::BruteForce: return "bruteforce";
    case SolverKind::Covariant: return "covariant";
  }
  return "auto";
}

SolverKind solver_kind_from_string(std::string_view name) {
  for (auto k : {SolverKind::Auto, SolverKind::Lp, SolverKind::FixedPoint, SolverKind::BruteForce,
                 SolverKind::Covariant}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::ValidationError, "unknown solver '" + std::string(name) + "'");
}

SolveReport solve(const DiscriminationInstance& instance, SolverKind kind) {
  const auto& rho = instance.preparation;
  if (instance.restriction != ClassTag::All) {
    throw Error(ErrorKind::UnsupportedModel, "optimization restricted to class '" +
                                                 std::string(to_string(instance.restriction)) +
                                                 "' is not supported");
  }
  switch (kind) {
    case SolverKind::Lp: return solve_lp(rho);
    case SolverKind::FixedPoint: return solve_quantum(rho, instance.solver);
    case SolverKind::BruteForce: return brute_force_oracle(rho);
    case SolverKind::Covariant:
      if (!instance.symmetry) {
        throw Error(ErrorKind::InvalidSetup, "covariant solver needs a symmetry section");
      }
      return solve_covariant(rho, *instance.symmetry, instance.solver);
    case SolverKind::Auto: break;
  }
  return rho.system.is_quantum() ? solve_quantum(rho, instance.solver) : solve_lp(rho);
}

}  // namespace optdiscrim
