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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "optdiscrim/discrimination.hpp"
#include "solver_detail.hpp"

namespace optdiscrim {

namespace {

constexpr double kPseudoInverseCutoff = 1e-12;
constexpr double kInitialTilt = 1e-3;

void require_quantum(const StatePreparation& rho) {
  if (!rho.system.is_quantum()) {
    throw Error(ErrorKind::UnsupportedModel,
                "system " + rho.system.label() + " is not quantum; use the LP solver");
  }
}

HermitianMatrix hermitian_part(const ComplexMatrix& z) {
  return HermitianMatrix(Complex(0.5) * (z + adjoint(z)), std::numeric_limits<double>::infinity());
}

using Completion = std::function<void(std::vector<HermitianMatrix>&)>;
using Projection = std::function<void(std::vector<HermitianMatrix>&)>;

SolveReport fixed_point(const StatePreparation& rho, const SolverOptions& options,
                        const Completion& complete, const Projection& project,
                        const std::string& method) {
  require_quantum(rho);
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  const auto states = operators(rho.system, rho.states);
  const std::size_t outcomes = states.size();
  const std::size_t n = states.front().dim();
  const auto xi = rho.priors();

  HermitianMatrix total(ComplexMatrix(n, n));
  for (const auto& s : states) total += s;
  std::vector<HermitianMatrix> e;
  for (std::size_t m = 0; m < outcomes; ++m) {
    e.push_back(xi[m] * HermitianMatrix::identity(n) + kInitialTilt * (states[m] - xi[m] * total));
  }

  auto report_for = [&](std::size_t iterations) {
    auto r = detail::finish(quantum_measurement(e, rho.system), rho, method, iterations);
    const auto cert = dual_certificate(r.measurement, rho);
    r.dual_bound = cert.bound;
    r.gap = cert.bound - r.value;
    return r;
  };

  SolveReport best = report_for(0);
  for (std::size_t it = 1; it <= options.max_iterations && *best.gap >= options.tolerance; ++it) {
    HermitianMatrix lambda(ComplexMatrix(n, n));
    std::vector<ComplexMatrix> sandwiched;
    for (std::size_t m = 0; m < outcomes; ++m) {
      sandwiched.push_back(states[m].matrix() * e[m].matrix() * states[m].matrix());
      lambda += hermitian_part(sandwiched.back());
    }
    const auto eig = eigh(lambda);
    const double cutoff = kPseudoInverseCutoff * std::max(1.0, eig.values.back());
    const auto inv_sqrt = matrix_function(lambda, [cutoff](double x) {
      return x > cutoff ? 1.0 / std::sqrt(x) : 0.0;
    });
    for (std::size_t m = 0; m < outcomes; ++m) {
      e[m] = hermitian_part(inv_sqrt.matrix() * sandwiched[m] * inv_sqrt.matrix());
    }
    complete(e);
    project(e);
    auto r = report_for(it);
    if (*r.gap < *best.gap) best = std::move(r);
    else best.iterations = it;
  }
  if (*best.gap >= options.tolerance) {
    throw NoConvergence("fixed-point iteration stopped after " +
                            std::to_string(best.iterations) + " iterations with gap " +
                            std::to_string(*best.gap),
                        best);
  }
  return best;
}

// I - sum_m e_m: the part of the identity outside the support of Lambda.
HermitianMatrix residual(const std::vector<HermitianMatrix>& e) {
  auto r = HermitianMatrix::identity(e.front().dim());
  for (const auto& x : e) r -= x;
  return r;
}

}  // namespace

DualCertificate dual_certificate(const Measurement& e, const StatePreparation& rho) {
  require_quantum(rho);
  if (!(e.system == rho.system) || e.outcomes() != rho.outcomes()) {
    throw Error(ErrorKind::SystemMismatch, "measurement does not match the preparation");
  }
  const auto states = operators(rho.system, rho.states);
  const auto effects = operators(e.system, e.effects);
  const std::size_t n = states.front().dim();
  ComplexMatrix z(n, n);
  for (std::size_t m = 0; m < states.size(); ++m) z += effects[m].matrix() * states[m].matrix();
  const auto y = hermitian_part(z);

  DualCertificate cert;
  cert.trace = y.trace();
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& s : states) cert.min_slack = std::min(cert.min_slack, min_eigenvalue(y - s));
  cert.feasible = cert.min_slack >= -kDualFeasibilityTolerance;
  cert.bound = cert.trace + static_cast<double>(n) * std::max(0.0, -cert.min_slack);
  return cert;
}

SolveReport solve_quantum(const StatePreparation& rho, const SolverOptions& options) {
  require_quantum(rho);
  const auto xi = rho.priors();
  const std::size_t likeliest =
      static_cast<std::size_t>(std::max_element(xi.begin(), xi.end()) - xi.begin());
  return fixed_point(
      rho, options,
      [likeliest](std::vector<HermitianMatrix>& e) { e[likeliest] += residual(e); },
      [](std::vector<HermitianMatrix>&) {}, "fixedpoint");
}

namespace detail {

SolveReport covariant_fixed_point(const StatePreparation& rho, const SymmetrySetup& setup,
                                  const SolverOptions& options) {
  const auto levels = rho.system.quantum_levels();
  auto report = fixed_point(
      rho, options,
      [](std::vector<HermitianMatrix>& e) {
        const auto r = (1.0 / static_cast<double>(e.size())) * residual(e);
        for (auto& x : e) x += r;
      },
      [&](std::vector<HermitianMatrix>& e) {
        const auto avg = group_average(quantum_measurement(e, rho.system).matrix(), setup);
        for (std::size_t m = 0; m < e.size(); ++m) e[m] = devectorize(avg.row_vector(m), levels);
      },
      "covariant-fixedpoint");
  report.covariant = true;
  return report;
}

}  // namespace detail

}  // namespace optdiscrim
