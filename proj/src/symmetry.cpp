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

#include "optdiscrim/symmetry.hpp"

#include <cmath>
#include <sstream>

namespace optdiscrim {

namespace {

void require_valid(const SymmetrySetup& setup) {
  const auto check = validate_setup(setup);
  if (!check.valid) {
    std::string where;
    if (check.witness) {
      where = " at (" + std::to_string(check.witness->first) + ", " +
              std::to_string(check.witness->second) + ")";
    }
    throw Error(ErrorKind::InvalidSetup, check.violation + where);
  }
}

void require_same_system(const System& s, const SymmetrySetup& setup) {
  if (!(s == setup.system)) {
    throw Error(ErrorKind::DimensionMismatch,
                "setup acts on " + setup.system.label() + ", not " + s.label());
  }
}

}  // namespace

bool is_covariant_preparation(const StatePreparation& rho, const SymmetrySetup& setup,
                              double tolerance) {
  require_same_system(rho.system, setup);
  return preparation_covariance_residual(rho.matrix(), setup) <= tolerance;
}

bool is_covariant_measurement(const Measurement& e, const SymmetrySetup& setup, double tolerance) {
  require_same_system(e.system, setup);
  return measurement_covariance_residual(e.matrix(), setup) <= tolerance;
}

Measurement symmetrize(const Measurement& e, const SymmetrySetup& setup) {
  require_valid(setup);
  require_same_system(e.system, setup);
  return Measurement::from_matrix(e.system, group_average(e.matrix(), setup));
}

Measurement permute_outcomes(const Measurement& e, const Permutation& perm) {
  if (perm.size() != e.outcomes()) {
    throw Error(ErrorKind::DimensionMismatch, "permutation size differs from the outcome count");
  }
  Measurement out{e.system, std::vector<std::vector<double>>(e.outcomes())};
  std::vector<bool> hit(perm.size(), false);
  for (std::size_t m = 0; m < perm.size(); ++m) {
    if (perm[m] >= perm.size() || hit[perm[m]]) {
      throw Error(ErrorKind::ValidationError, "not a permutation");
    }
    hit[perm[m]] = true;
    out.effects[perm[m]] = e.effects[m];
  }
  return out;
}

TheoremReport verify_symmetry_theorem(const StatePreparation& rho, const SymmetrySetup& setup,
                                      std::size_t trials, std::uint64_t seed,
                                      const SolverOptions& options,
                                      const TheoremTolerances& tolerances) {
  const auto check = validate_setup(setup);
  if (!check.valid) throw Error(ErrorKind::PreconditionFailed, "invalid setup: " + check.violation);
  require_same_system(rho.system, setup);
  if (setup.tau.outcomes() != rho.outcomes() || !is_covariant_preparation(rho, setup)) {
    throw Error(ErrorKind::PreconditionFailed, "preparation is not covariant under the setup");
  }

  TheoremReport report;
  report.trials = trials;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto e = random_measurement(rho.system, rho.outcomes(), rng);
    const auto sym = Measurement::from_matrix(e.system, group_average(e.matrix(), setup));
    const double dev = std::abs(success_probability(sym, rho) - success_probability(e, rho));
    const double res = measurement_covariance_residual(sym.matrix(), setup);
    report.max_value_deviation = std::max(report.max_value_deviation, dev);
    report.max_covariance_residual = std::max(report.max_covariance_residual, res);
    if (dev > tolerances.value) {
      report.counterexamples.push_back("trial " + std::to_string(t) +
                                       ": success probability changed by " + std::to_string(dev));
    }
    if (res > tolerances.covariance) {
      report.counterexamples.push_back("trial " + std::to_string(t) +
                                       ": averaged measurement not covariant (residual " +
                                       std::to_string(res) + ")");
    }
    if (!is_valid_measurement(sym)) {
      report.counterexamples.push_back("trial " + std::to_string(t) +
                                       ": averaged measurement is not a measurement");
    }
  }

  const auto full = rho.system.is_quantum() ? solve_quantum(rho, options) : solve_lp(rho);
  const auto cov = solve_covariant(rho, setup, options);
  report.full_optimum = full.value;
  report.covariant_optimum = cov.value;
  if (std::abs(full.value - cov.value) > tolerances.optimum) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "optimum " << full.value << " differs from covariant optimum " << cov.value;
    report.counterexamples.push_back(msg.str());
  }
  return report;
}

}  // namespace optdiscrim
