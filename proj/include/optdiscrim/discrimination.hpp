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

// Minimum-error discrimination: preparations, measurements, the average
// success probability, and solvers (simplex for polyhedral models, a
// fixed-point iteration with a dual certificate for quantum ones).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optdiscrim/group.hpp"
#include "optdiscrim/kernel.hpp"

namespace optdiscrim {

inline constexpr double kNormalizationTolerance = 1e-10;

// Subnormalized states rho_m = xi_m rho_m^N; priors are xi_m = <u|rho_m>.
struct StatePreparation {
  System system;
  std::vector<std::vector<double>> states;

  std::size_t outcomes() const noexcept { return states.size(); }
  std::vector<double> priors() const;
  // d x M, columns rho_m.
  RealMatrix matrix() const;
  ExtendedProcess as_process() const;

  bool operator==(const StatePreparation&) const = default;
};

struct Measurement {
  System system;
  std::vector<std::vector<double>> effects;

  std::size_t outcomes() const noexcept { return effects.size(); }
  // M x d, rows e_m.
  RealMatrix matrix() const;
  ExtendedProcess as_process() const;
  static Measurement from_matrix(System system, const RealMatrix& rows);

  bool operator==(const Measurement&) const = default;
};

// Throws ValidationError naming the violated invariant.
void validate_preparation(const StatePreparation& rho, double tolerance = kNormalizationTolerance);
void validate_measurement(const Measurement& e, double tolerance = kNormalizationTolerance);
bool is_valid_measurement(const Measurement& e, double tolerance = kNormalizationTolerance);

// Quantum helpers: build from density operators (already weighted by priors).
StatePreparation quantum_preparation(const std::vector<HermitianMatrix>& weighted_states,
                                     const System& system);
Measurement quantum_measurement(const std::vector<HermitianMatrix>& effects, const System& system);
std::vector<HermitianMatrix> operators(const System& system,
                                       const std::vector<std::vector<double>>& vectors);

double success_probability(const Measurement& e, const StatePreparation& rho);

// Uniformly random-ish measurement with `outcomes` effects: a random POVM for
// quantum systems, a random garbling of a cone decomposition of the unit for
// polyhedral ones.
Measurement random_measurement(const System& system, std::size_t outcomes, Rng& rng);
// The measurement that always answers `outcome`.
Measurement guessing_measurement(const System& system, std::size_t outcomes, std::size_t outcome);

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 200000;
};

struct SolveReport {
  Measurement measurement;
  double value = 0.0;
  std::string method;
  std::size_t iterations = 0;
  std::optional<double> dual_bound;
  std::optional<double> gap;
  bool covariant = false;
  std::vector<std::string> warnings;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& message, SolveReport best)
      : Error(ErrorKind::NoConvergence, message), best_(std::move(best)) {}
  const SolveReport& best() const noexcept { return best_; }

 private:
  SolveReport best_;
};

struct DualCertificate {
  double trace = 0.0;      // Tr Y
  double min_slack = 0.0;  // min_m lambda_min(Y - rho_m)
  bool feasible = false;   // min_slack >= -1e-8
  // Tr(Y + s I) with s = max(0, -min_slack): a valid upper bound on every P_S.
  double bound = 0.0;
};

inline constexpr double kDualFeasibilityTolerance = 1e-8;

DualCertificate dual_certificate(const Measurement& e, const StatePreparation& rho);

SolveReport solve_lp(const StatePreparation& rho);
SolveReport solve_quantum(const StatePreparation& rho, const SolverOptions& options = {});

inline constexpr std::size_t kBruteForceBudget = 5'000'000;
// Vertex enumeration of the measurement polytope from its inequality
// description. Independent of the simplex code path.
SolveReport brute_force_oracle(const StatePreparation& rho, std::size_t budget = kBruteForceBudget);

// Optimizes over covariant measurements only. NotCovariant if rho is not
// covariant; falls back (with a warning) to the full solver when tau is not
// transitive.
SolveReport solve_covariant(const StatePreparation& rho, const SymmetrySetup& setup,
                            const SolverOptions& options = {});

struct DiscriminationInstance {
  StatePreparation preparation;
  std::optional<SymmetrySetup> symmetry;
  ClassTag restriction = ClassTag::All;
  std::optional<Measurement> measurement;
  SolverOptions solver;
  std::optional<std::uint64_t> seed;
};

enum class SolverKind { Auto, Lp, FixedPoint, BruteForce, Covariant };

std::string_view to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view name);

SolveReport solve(const DiscriminationInstance& instance, SolverKind kind = SolverKind::Auto);

}  // namespace optdiscrim
