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

// Finite groups acting on outcome labels (tau) and on the state space of a
// system (pibar), together with the matrix-level covariance identities.
//
// Conventions, with T_g the permutation matrix of tau_g (T_g |m> = |tau_g(m)>),
// P_g the matrix of pibar_g, R the d x M matrix with columns rho_m and E the
// M x d matrix with rows e_m:
//   preparation covariance   P_g R = R T_g
//   measurement covariance   E P_g = T_g E
//   group average            E^sym = (1/|G|) sum_h T_h^{-1} E P_h
// with T_g T_h = T_{gh} and P_g P_h = P_{gh}.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optdiscrim/kernel.hpp"
#include "optdiscrim/linalg.hpp"

namespace optdiscrim {

enum class ClassTag { All, Sequential, Locc, Separable, Pt };

std::string_view to_string(ClassTag tag);
ClassTag class_tag_from_string(std::string_view name);

using Permutation = std::vector<std::size_t>;

class FiniteGroup {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kClosureCap = 10000;

  // Only the shape of the table is checked here; group axioms are reported by
  // validate_setup so that broken inputs can be diagnosed.
  explicit FiniteGroup(std::vector<std::vector<std::size_t>> table);

  static FiniteGroup trivial();
  static FiniteGroup cyclic(std::size_t n);
  // Order 2n; element k + n*f stands for r^k s^f with s r s = r^{-1}.
  static FiniteGroup dihedral(std::size_t n);
  // Closes a set of permutations under composition ((a*b)(x) = a(b(x))).
  // Returns the group and the permutation of each element.
  static std::pair<FiniteGroup, std::vector<Permutation>> from_permutation_generators(
      const std::vector<Permutation>& generators, std::size_t cap = kClosureCap);

  std::size_t order() const noexcept { return table_.size(); }
  std::size_t multiply(std::size_t g, std::size_t h) const { return table_[g][h]; }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }

  bool operator==(const FiniteGroup&) const = default;

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::size_t identity_ = npos;
  std::vector<std::size_t> inverse_;
};

// tau: per-element permutation of outcome labels, perms[g][m] = tau_g(m).
struct OutcomeAction {
  std::vector<Permutation> perms;

  std::size_t outcomes() const { return perms.empty() ? 0 : perms.front().size(); }
  RealMatrix matrix(std::size_t g) const;
  bool operator==(const OutcomeAction&) const = default;
};

// pibar: per-element real matrix on the state space.
struct StateSpaceAction {
  std::vector<RealMatrix> maps;
  bool operator==(const StateSpaceAction&) const = default;
};

struct SymmetrySetup {
  FiniteGroup group;
  OutcomeAction tau;
  StateSpaceAction pibar;
  System system;
  ClassTag preserves = ClassTag::All;
};

struct SetupValidation {
  bool valid = true;
  std::string violation;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // (g, h)
};

SetupValidation validate_setup(const SymmetrySetup& setup, double tolerance = kProcessTolerance);

// Named setups.
OutcomeAction cyclic_shift_action(std::size_t order, std::size_t outcomes);
StateSpaceAction state_action_from_unitaries(const std::vector<ComplexMatrix>& unitaries,
                                             const std::vector<bool>& antiunitary = {});
ComplexMatrix bloch_z_rotation(double angle);

// Residuals of the covariance identities, maximized over group elements.
double preparation_covariance_residual(const RealMatrix& states_by_column,
                                       const SymmetrySetup& setup);
double measurement_covariance_residual(const RealMatrix& effects_by_row,
                                       const SymmetrySetup& setup);
// (1/|G|) sum_h T_h^{-1} E P_h, summed with compensated accumulation.
RealMatrix group_average(const RealMatrix& effects_by_row, const SymmetrySetup& setup);

// Orbit of `outcome` under tau.
std::vector<std::size_t> outcome_orbit(const SymmetrySetup& setup, std::size_t outcome = 0);
bool is_transitive(const SymmetrySetup& setup);
// Maps seed effect x (for outcome 0) to the effect of outcome m of the
// covariant measurement it generates: L_m = (M/|G|) sum_{g: tau_g(0)=m} P_{g^{-1}}^T.
std::vector<RealMatrix> covariant_transports(const SymmetrySetup& setup);

}  // namespace optdiscrim
