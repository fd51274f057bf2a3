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

// Finite-dimensional realization of the process calculus: systems, extended
// processes (real matrices between system vector spaces), sequential and
// parallel composition, swaps, discarding, and classical systems.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "optdiscrim/linalg.hpp"
#include "optdiscrim/models.hpp"

namespace optdiscrim {

inline constexpr double kProcessTolerance = 1e-12;

struct Atom {
  std::string label;
  ModelDescriptor model;

  bool operator==(const Atom&) const = default;
};

// An ordered tensor product of atomic systems. The empty product is the
// trivial system I (dimension 1).
class System {
 public:
  System() = default;

  static System trivial() { return System(); }
  static System atomic(std::string label, ModelDescriptor model);
  static System classical(std::size_t outcomes, std::string label = "C");
  static System quantum(std::size_t level, std::string label);

  const std::vector<Atom>& factors() const noexcept { return atoms_; }
  std::size_t dim() const noexcept;
  bool is_trivial() const noexcept { return atoms_.empty(); }
  bool is_classical() const noexcept;
  bool is_quantum() const noexcept;
  // Hilbert-space levels of the atoms; only meaningful when is_quantum().
  std::vector<std::size_t> quantum_levels() const;
  std::string label() const;

  bool operator==(const System&) const = default;

 private:
  friend System tensor(const System& a, const System& b);
  std::vector<Atom> atoms_;
};

// A (x) B. Throws UnsupportedSystem unless the non-classical atoms are all
// quantum or consist of a single polytope atom.
System tensor(const System& a, const System& b);

std::vector<double> unit_effect(const System& s);
bool is_polyhedral(const System& s);
// Products of the atoms' cone generators. UnsupportedModel when an atom is quantum.
std::vector<std::vector<double>> state_generators(const System& s);
std::vector<std::vector<double>> effect_generators(const System& s);
// Extreme effects for sampled positivity checks: all generators for polyhedral
// systems; otherwise `count` random rank-one projectors on the quantum part
// (entangled across quantum atoms) tensored with classical basis effects.
std::vector<std::vector<double>> sample_effects(const System& s, std::size_t count, Rng& rng);
bool contains_state(const System& s, std::span<const double> v);
EffectCheck contains_effect(const System& s, std::span<const double> w);

// Element of Vec_{A->B}: a real matrix of shape (output.dim x input.dim).
class ExtendedProcess {
 public:
  ExtendedProcess(System input, System output, RealMatrix matrix);

  static ExtendedProcess identity(const System& s);
  static ExtendedProcess state(const System& s, std::span<const double> v);
  static ExtendedProcess effect(const System& s, std::span<const double> w);
  static ExtendedProcess scalar(double a);
  static ExtendedProcess discard(const System& s);

  const System& input() const noexcept { return input_; }
  const System& output() const noexcept { return output_; }
  const RealMatrix& matrix() const noexcept { return matrix_; }

  bool is_state() const noexcept { return input_.is_trivial(); }
  bool is_effect() const noexcept { return output_.is_trivial(); }
  bool is_scalar() const noexcept { return is_state() && is_effect(); }
  double scalar_value() const;
  // The column of a state or the row of an effect.
  std::vector<double> as_vector() const;

  ExtendedProcess& operator+=(const ExtendedProcess& o);
  ExtendedProcess& operator*=(double a);

 private:
  System input_;
  System output_;
  RealMatrix matrix_;
};

ExtendedProcess operator+(ExtendedProcess a, const ExtendedProcess& b);
ExtendedProcess operator*(double a, ExtendedProcess f);

// g o f; requires f.output() == g.input().
ExtendedProcess compose_seq(const ExtendedProcess& f, const ExtendedProcess& g);
// f (x) g
ExtendedProcess compose_par(const ExtendedProcess& f, const ExtendedProcess& g);
// The swap A (x) B -> B (x) A.
ExtendedProcess swap(const System& a, const System& b);

bool processes_equal(const ExtendedProcess& a, const ExtendedProcess& b,
                     double tolerance = kProcessTolerance);
// discard_B o f == discard_A within tolerance.
bool is_deterministic(const ExtendedProcess& f, double tolerance = kConeTolerance);

struct ClassicalStructure {
  std::size_t outcomes = 0;
  System system;
  std::vector<ExtendedProcess> basis_states;   // |m>
  std::vector<ExtendedProcess> basis_effects;  // <m|
  ExtendedProcess cup;                         // sum_m |m>|m>
  ExtendedProcess cap;                         // sum_m <m|<m|
  ExtendedProcess chi;                         // sum_m |m>

  static ClassicalStructure canonical(std::size_t outcomes, std::string label = "C");
};

// (cap (x) id) o (id (x) cup) == id == (id (x) cap) o (cup (x) id)
bool yank_check(const ClassicalStructure& cs, double tolerance = kProcessTolerance);

// Packs effects {<e_m|} on A into e = sum_m |m><e_m| : A -> C_M.
ExtendedProcess measurement_to_process(std::span<const ExtendedProcess> effects,
                                       const std::string& outcome_label = "C");
std::vector<ExtendedProcess> process_to_effects(const ExtendedProcess& e);
// Packs states {|rho_m>} on A into rho = sum_m |rho_m><m| : C_M -> A.
ExtendedProcess preparation_to_process(std::span<const ExtendedProcess> states,
                                       const std::string& outcome_label = "C");

// Every effect in the effect cone and sum_m e_m == discard within tolerance.
bool is_measurement(std::span<const ExtendedProcess> effects, double tolerance = kConeTolerance);

}  // namespace optdiscrim
