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

// Restricted measurement classes on a bipartite system A (x) B. Membership is
// carried constructively: sequential and LOCC measurements by their protocol,
// separable ones by an explicit product decomposition. PT is tested against
// positive-for-effects maps and refuted by a partial-transpose witness.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "optdiscrim/discrimination.hpp"
#include "optdiscrim/group.hpp"
#include "optdiscrim/symmetry.hpp"

namespace optdiscrim {

inline constexpr std::size_t kMaxMessageDim = 16;
inline constexpr std::size_t kPositivitySamples = 200;
inline constexpr std::uint64_t kPositivitySeed = 20260;
inline constexpr double kClassTolerance = 1e-10;

// A measures first with D outcomes; B then measures with branch b^i chosen by
// the outcome i. e_m = sum_i a_i (x) b^i_m.
struct SequentialMeasurement {
  Measurement a;
  std::vector<Measurement> branches;

  std::size_t messages() const noexcept { return a.outcomes(); }
  std::size_t outcomes() const { return branches.front().outcomes(); }
  System system() const;
  Measurement composite() const;
  // b o (a (x) id_B) built from kernel compositions.
  ExtendedProcess composite_process() const;
};

SequentialMeasurement make_sequential(const Measurement& a, const std::vector<Measurement>& branches);

enum class Party { A, B };

// One local operation: given incoming message i, party applies instrument
// maps[i][j] (a superoperator on its own system) and sends message j. The
// branches maps[i][.] sum to a deterministic map for every i.
struct LoccStep {
  Party party = Party::A;
  std::vector<std::vector<RealMatrix>> maps;
  // The wire carrying j to the next step; must be classical when set.
  std::optional<System> message;

  std::size_t in_messages() const noexcept { return maps.size(); }
  std::size_t out_messages() const { return maps.front().size(); }
};

// The first step receives a single (trivial) message; the last step's
// messages are the outcomes. Both local systems are discarded at the end.
struct LoccMeasurement {
  System a_system;
  System b_system;
  std::vector<LoccStep> steps;

  std::size_t outcomes() const { return steps.back().out_messages(); }
  System system() const { return tensor(a_system, b_system); }
  Measurement composite() const;
  ExtendedProcess composite_process() const;
};

// Checks shapes, the message cap, classical wires and determinism of every
// step. UnsupportedWiring / TooLarge / ValidationError.
void validate_locc(const LoccMeasurement& lm);
LoccMeasurement sequential_to_locc(const SequentialMeasurement& sm);

struct ProductTerm {
  double weight = 1.0;
  std::vector<double> alpha;  // effect on A
  std::vector<double> beta;   // effect on B

  bool operator==(const ProductTerm&) const = default;
};

struct SeparableMeasurement {
  System a_system;
  System b_system;
  std::vector<std::vector<ProductTerm>> terms;  // per outcome

  std::size_t outcomes() const noexcept { return terms.size(); }
  System system() const { return tensor(a_system, b_system); }
  Measurement composite() const;
};

void validate_separable(const SeparableMeasurement& sm, double tolerance = kClassTolerance);
SeparableMeasurement seq_to_separable(const SequentialMeasurement& sm);
SeparableMeasurement locc_to_separable(const LoccMeasurement& lm);

// ---------------------------------------------------------------------------
// PT

// Minimum over outcomes of the cone margin of e o (fbar (x) id_B): the least
// eigenvalue for quantum composites, the least normalized pairing with a state
// generator for polyhedral ones.
double pt_residual(const Measurement& e, const System& a, const System& b,
                   const ExtendedProcess& fbar);
// PreconditionFailed when fbar is not deterministic or maps a sampled effect
// of A outside the effect cone of its input.
bool check_pt(const Measurement& e, const System& a, const System& b, const ExtendedProcess& fbar);

// Mixture of `components` reversible deterministic maps on `s` that are
// positive for effects: unitary or antiunitary conjugations for quantum
// systems, coordinate permutations for classical ones.
ExtendedProcess random_positive_map(const System& s, Rng& rng, std::size_t components = 3);

struct PTWitnessReport {
  std::size_t outcome = 0;
  std::vector<double> witness;       // v on A (x) B, after the marginal fix
  double unperturbed_pairing = 0.0;  // <e_m | v> before the fix
  double pairing = 0.0;              // <e_m | v> after the fix
  RealMatrix normalizer;             // g on B: sigma -> v_B^{-1/2} sigma v_B^{-1/2}
  ExtendedProcess fbar = ExtendedProcess::scalar(0.0);  // B' -> A
  double determinism_residual = 0.0;
  double positivity_margin = 0.0;     // sampled effects of A pulled back through fbar
  double block_positivity = 0.0;      // sampled product effects against v
  double violation = 0.0;             // least eigenvalue over transformed effects
};

// Quantum 2 (x) 2, 2 (x) 3 or 3 (x) 2 only (UnsupportedSystem otherwise).
// nullopt when every effect has a positive partial transpose.
std::optional<PTWitnessReport> pt_witness(const Measurement& e, const System& a, const System& b);

// ---------------------------------------------------------------------------
// Class-preserving operations

using ClassMeasurement =
    std::variant<Measurement, SequentialMeasurement, LoccMeasurement, SeparableMeasurement>;

ClassTag class_of(const ClassMeasurement& x);
Measurement effects_of(const ClassMeasurement& x);

ClassMeasurement permute_outcomes_in_class(const ClassMeasurement& x, const Permutation& perm);
// p x + (1 - p) y, ClassMismatch when the representations differ.
ClassMeasurement convex_mix_in_class(const ClassMeasurement& x, const ClassMeasurement& y, double p);

// A symmetry acting locally: P_g = P^A_g (x) P^B_g.
struct ProductSymmetry {
  FiniteGroup group;
  OutcomeAction tau;
  StateSpaceAction on_a;
  StateSpaceAction on_b;
  System a_system;
  System b_system;

  SymmetrySetup joint() const;
};

ClassMeasurement symmetrize_in_class(const ClassMeasurement& x, const ProductSymmetry& sym);

// Random members for tests and demos (quantum local systems).
std::vector<RealMatrix> random_instrument(const System& s, std::size_t outcomes, Rng& rng);
SequentialMeasurement random_sequential(const System& a, const System& b, std::size_t messages,
                                        std::size_t outcomes, Rng& rng);
// A -> B -> A: two classical messages, final measurement by A.
LoccMeasurement random_two_round_locc(const System& a, const System& b, std::size_t outcomes,
                                      Rng& rng);

}  // namespace optdiscrim
