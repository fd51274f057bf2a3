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

// Covariance predicates, the group-averaging symmetrizer, and an end-to-end
// check that averaging preserves the success probability and that the
// covariant optimum matches the unrestricted one.

#include <cstdint>
#include <string>
#include <vector>

#include "optdiscrim/discrimination.hpp"
#include "optdiscrim/group.hpp"

namespace optdiscrim {

inline constexpr double kCovarianceTolerance = 1e-10;

bool is_covariant_preparation(const StatePreparation& rho, const SymmetrySetup& setup,
                              double tolerance = kCovarianceTolerance);
bool is_covariant_measurement(const Measurement& e, const SymmetrySetup& setup,
                              double tolerance = kCovarianceTolerance);

// (1/|G|) sum_h T_h^{-1} E P_h. InvalidSetup when the setup fails validation.
Measurement symmetrize(const Measurement& e, const SymmetrySetup& setup);

// Relabels outcomes: outcome m of the result is outcome perm^{-1}(m) of e,
// i.e. effects move to position perm[m].
Measurement permute_outcomes(const Measurement& e, const Permutation& perm);

struct TheoremReport {
  std::size_t trials = 0;
  double max_value_deviation = 0.0;       // |P_S(e^sym) - P_S(e)|
  double max_covariance_residual = 0.0;   // max_g |E^sym P_g - T_g E^sym|
  double full_optimum = 0.0;
  double covariant_optimum = 0.0;
  std::vector<std::string> counterexamples;

  bool passed() const noexcept { return counterexamples.empty(); }
};

struct TheoremTolerances {
  double value = 1e-12;
  double covariance = 1e-10;
  double optimum = 1e-8;
};

// PreconditionFailed unless rho is covariant under a valid setup.
TheoremReport verify_symmetry_theorem(const StatePreparation& rho, const SymmetrySetup& setup,
                                      std::size_t trials, std::uint64_t seed,
                                      const SolverOptions& options = {},
                                      const TheoremTolerances& tolerances = {});

}  // namespace optdiscrim
