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

#include "optdiscrim/kernel.hpp"

#include <algorithm>
#include <map>

namespace optdiscrim {

// ---------------------------------------------------------------------------
// System

System System::atomic(std::string label, ModelDescriptor model) {
  System s;
  s.atoms_.push_back(Atom{std::move(label), std::move(model)});
  return s;
}

System System::classical(std::size_t outcomes, std::string label) {
  return atomic(std::move(label), ModelDescriptor::classical(outcomes));
}

System System::quantum(std::size_t level, std::string label) {
  return atomic(std::move(label), ModelDescriptor::quantum(level));
}

std::size_t System::dim() const noexcept {
  std::size_t d = 1;
  for (const auto& a : atoms_) d *= a.model.dim();
  return d;
}

bool System::is_classical() const noexcept {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.model.kind() == ModelKind::Classical; });
}

bool System::is_quantum() const noexcept {
  return !atoms_.empty() &&
         std::all_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.model.kind() == ModelKind::Quantum; });
}

std::vector<std::size_t> System::quantum_levels() const {
  std::vector<std::size_t> levels;
  for (const auto& a : atoms_)
    if (a.model.kind() == ModelKind::Quantum) levels.push_back(a.model.level());
  return levels;
}

std::string System::label() const {
  if (atoms_.empty()) return "I";
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += "*";
    out += atoms_[i].label;
  }
  return out;
}

System tensor(const System& a, const System& b) {
  System out;
  out.atoms_ = a.atoms_;
  out.atoms_.insert(out.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
  std::size_t quantum = 0, polytope = 0;
  for (const auto& atom : out.atoms_) {
    quantum += atom.model.kind() == ModelKind::Quantum;
    polytope += atom.model.kind() == ModelKind::Polytope;
  }
  if (polytope > 1 || (polytope == 1 && quantum > 0)) {
    throw Error(ErrorKind::UnsupportedSystem,
                "no tensor product is defined for " + a.label() + " and " + b.label());
  }
  return out;
}

namespace {

enum class Cone { State, Effect };

// Splits a vector on a composite system into blocks indexed by the classical
// coordinates; each block lives on the product of the non-classical atoms.
std::map<std::vector<std::size_t>, std::vector<double>> classical_blocks(
    const System& s, std::span<const double> v) {
  const auto& atoms = s.factors();
  std::vector<std::size_t> dims;
  for (const auto& a : atoms) dims.push_back(a.model.dim());
  std::size_t block_size = 1;
  for (const auto& a : atoms)
    if (a.model.kind() != ModelKind::Classical) block_size *= a.model.dim();

  std::map<std::vector<std::size_t>, std::vector<double>> blocks;
  std::vector<std::size_t> digits(atoms.size(), 0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::size_t rem = k;
    for (std::size_t i = atoms.size(); i-- > 0;) {
      digits[i] = rem % dims[i];
      rem /= dims[i];
    }
    std::vector<std::size_t> key;
    std::size_t inner = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].model.kind() == ModelKind::Classical) {
        key.push_back(digits[i]);
      } else {
        inner = inner * dims[i] + digits[i];
      }
    }
    auto& block = blocks[key];
    if (block.empty()) block.assign(block_size, 0.0);
    block[inner] = v[k];
  }
  return blocks;
}

bool block_member(const System& s, std::span<const double> block, Cone cone) {
  std::vector<const ModelDescriptor*> rest;
  for (const auto& a : s.factors())
    if (a.model.kind() != ModelKind::Classical) rest.push_back(&a.model);
  if (rest.empty()) return block[0] >= -kConeTolerance;
  if (rest.size() == 1) {
    return cone == Cone::State ? contains_state(*rest[0], block)
                               : contains_effect(*rest[0], block).in_cone;
  }
  // Several quantum atoms: positive semidefiniteness of the composite operator
  // (states and effects share the self-dual cone).
  std::vector<std::size_t> levels;
  for (const auto* m : rest) levels.push_back(m->level());
  return min_eigenvalue(devectorize(block, levels)) >= -kConeTolerance;
}

bool member(const System& s, std::span<const double> v, Cone cone) {
  if (v.size() != s.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length " + std::to_string(v.size()) +
                                                  " on system " + s.label() + " of dim " +
                                                  std::to_string(s.dim()));
  }
  if (s.factors().size() == 1) {
    const auto& m = s.factors()[0].model;
    return cone == Cone::State ? contains_state(m, v) : contains_effect(m, v).in_cone;
  }
  for (const auto& [key, block] : classical_blocks(s, v))
    if (!block_member(s, block, cone)) return false;
  return true;
}

}  // namespace

std::vector<double> unit_effect(const System& s) {
  std::vector<double> u{1.0};
  for (const auto& a : s.factors()) u = kron(u, unit_effect(a.model));
  return u;
}

bool is_polyhedral(const System& s) {
  return std::all_of(s.factors().begin(), s.factors().end(),
                     [](const Atom& a) { return a.model.is_polyhedral(); });
}

namespace {

std::vector<std::vector<double>> product_generators(const System& s, bool effects) {
  if (!is_polyhedral(s)) {
    throw Error(ErrorKind::UnsupportedModel, "system " + s.label() + " is not polyhedral");
  }
  std::vector<std::vector<double>> out{{1.0}};
  for (const auto& a : s.factors()) {
    const auto& gens = effects ? a.model.effect_generators() : a.model.state_generators();
    std::vector<std::vector<double>> next;
    for (const auto& x : out)
      for (const auto& g : gens) next.push_back(kron(x, g));
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> state_generators(const System& s) {
  return product_generators(s, false);
}

std::vector<std::vector<double>> effect_generators(const System& s) {
  return product_generators(s, true);
}

std::vector<std::vector<double>> sample_effects(const System& s, std::size_t count, Rng& rng) {
  if (is_polyhedral(s)) return effect_generators(s);
  // Classical atoms contribute basis effects; quantum atoms a joint random
  // pure projector. Reassemble in the original atom order.
  std::vector<std::size_t> levels;
  for (const auto& a : s.factors())
    if (a.model.kind() == ModelKind::Quantum) levels.push_back(a.model.level());
  std::size_t hilbert = 1;
  for (auto n : levels) hilbert *= n;

  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto quantum_part =
        vectorize(HermitianMatrix::projector(haar_state(hilbert, rng)), levels);
    // Classical basis label chosen per sample.
    std::vector<double> v(s.dim(), 0.0);
    std::vector<std::size_t> classical_digit;
    for (const auto& a : s.factors()) {
      if (a.model.kind() == ModelKind::Classical) {
        std::uniform_int_distribution<std::size_t> pick(0, a.model.level() - 1);
        classical_digit.push_back(pick(rng));
      }
    }
    // Walk all indices; nonzero where classical digits match.
    std::vector<std::size_t> dims;
    for (const auto& a : s.factors()) dims.push_back(a.model.dim());
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
      std::size_t rem = idx, inner = 0, inner_stride = 1, ci = classical_digit.size();
      bool match = true;
      for (std::size_t i = dims.size(); i-- > 0;) {
        const std::size_t digit = rem % dims[i];
        rem /= dims[i];
        if (s.factors()[i].model.kind() == ModelKind::Classical) {
          match = match && digit == classical_digit[--ci];
        } else {
          inner += digit * inner_stride;
          inner_stride *= dims[i];
        }
      }
      if (match) v[idx] = quantum_part[inner];
    }
    out.push_back(std::move(v));
  }
  return out;
}

bool contains_state(const System& s, std::span<const double> v) {
  return member(s, v, Cone::State);
}

EffectCheck contains_effect(const System& s, std::span<const double> w) {
  EffectCheck out;
  out.in_cone = member(s, w, Cone::Effect);
  out.feasible = out.in_cone && member(s, axpy(-1.0, w, unit_effect(s)), Cone::Effect);
  return out;
}

// ---------------------------------------------------------------------------
// ExtendedProcess

ExtendedProcess::ExtendedProcess(System input, System output, RealMatrix matrix)
    : input_(std::move(input)), output_(std::move(output)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != output_.dim() || matrix_.cols() != input_.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "process matrix " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + " does not match " + input_.label() +
                    " -> " + output_.label());
  }
}

ExtendedProcess ExtendedProcess::identity(const System& s) {
  return ExtendedProcess(s, s, RealMatrix::identity(s.dim()));
}

ExtendedProcess ExtendedProcess::state(const System& s, std::span<const double> v) {
  return ExtendedProcess(System::trivial(), s, RealMatrix::column(v));
}

ExtendedProcess ExtendedProcess::effect(const System& s, std::span<const double> w) {
  return ExtendedProcess(s, System::trivial(), RealMatrix::row(w));
}

ExtendedProcess ExtendedProcess::scalar(double a) {
  return ExtendedProcess(System::trivial(), System::trivial(), RealMatrix(1, 1, a));
}

ExtendedProcess ExtendedProcess::discard(const System& s) { return effect(s, unit_effect(s)); }

double ExtendedProcess::scalar_value() const {
  if (!is_scalar()) throw Error(ErrorKind::SystemMismatch, "process is not a scalar");
  return matrix_(0, 0);
}

std::vector<double> ExtendedProcess::as_vector() const {
  if (is_state()) return matrix_.column_vector(0);
  if (is_effect()) return matrix_.row_vector(0);
  throw Error(ErrorKind::SystemMismatch, "process is neither a state nor an effect");
}

ExtendedProcess& ExtendedProcess::operator+=(const ExtendedProcess& o) {
  if (!(input_ == o.input_) || !(output_ == o.output_)) {
    throw Error(ErrorKind::SystemMismatch, "cannot add processes with different systems");
  }
  matrix_ += o.matrix_;
  return *this;
}

ExtendedProcess& ExtendedProcess::operator*=(double a) {
  matrix_ *= a;
  return *this;
}

ExtendedProcess operator+(ExtendedProcess a, const ExtendedProcess& b) { return a += b; }
ExtendedProcess operator*(double a, ExtendedProcess f) { return f *= a; }

ExtendedProcess compose_seq(const ExtendedProcess& f, const ExtendedProcess& g) {
  if (!(f.output() == g.input())) {
    throw Error(ErrorKind::SystemMismatch,
                "cannot compose: " + f.output().label() + " vs " + g.input().label());
  }
  return ExtendedProcess(f.input(), g.output(), g.matrix() * f.matrix());
}

ExtendedProcess compose_par(const ExtendedProcess& f, const ExtendedProcess& g) {
  return ExtendedProcess(tensor(f.input(), g.input()), tensor(f.output(), g.output()),
                         kron(f.matrix(), g.matrix()));
}

ExtendedProcess swap(const System& a, const System& b) {
  const System ab = tensor(a, b);
  const System ba = tensor(b, a);
  const std::size_t da = a.dim(), db = b.dim();
  RealMatrix p(da * db, da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) p(j * da + i, i * db + j) = 1.0;
  return ExtendedProcess(ab, ba, std::move(p));
}

bool processes_equal(const ExtendedProcess& a, const ExtendedProcess& b, double tolerance) {
  return a.input() == b.input() && a.output() == b.output() &&
         max_abs_diff(a.matrix(), b.matrix()) <= tolerance;
}

bool is_deterministic(const ExtendedProcess& f, double tolerance) {
  const auto lhs = vecmat(unit_effect(f.output()), f.matrix());
  return max_abs_diff(lhs, unit_effect(f.input())) <= tolerance;
}

// ---------------------------------------------------------------------------
// Classical structure

ClassicalStructure ClassicalStructure::canonical(std::size_t outcomes, std::string label) {
  const System c = System::classical(outcomes, std::move(label));
  const System cc = tensor(c, c);
  std::vector<ExtendedProcess> states, effects;
  std::vector<double> diag(outcomes * outcomes, 0.0);
  for (std::size_t m = 0; m < outcomes; ++m) {
    std::vector<double> e(outcomes, 0.0);
    e[m] = 1.0;
    states.push_back(ExtendedProcess::state(c, e));
    effects.push_back(ExtendedProcess::effect(c, e));
    diag[m * outcomes + m] = 1.0;
  }
  return ClassicalStructure{
      outcomes,
      c,
      std::move(states),
      std::move(effects),
      ExtendedProcess::state(cc, diag),
      ExtendedProcess::effect(cc, diag),
      ExtendedProcess::state(c, std::vector<double>(outcomes, 1.0)),
  };
}

bool yank_check(const ClassicalStructure& cs, double tolerance) {
  const auto id = ExtendedProcess::identity(cs.system);
  const auto left = compose_seq(compose_par(id, cs.cup), compose_par(cs.cap, id));
  const auto right = compose_seq(compose_par(cs.cup, id), compose_par(id, cs.cap));
  return processes_equal(left, id, tolerance) && processes_equal(right, id, tolerance);
}

ExtendedProcess measurement_to_process(std::span<const ExtendedProcess> effects,
                                       const std::string& outcome_label) {
  if (effects.empty()) throw Error(ErrorKind::SystemMismatch, "measurement needs an outcome");
  const System& a = effects.front().input();
  const System c = System::classical(effects.size(), outcome_label);
  RealMatrix m(effects.size(), a.dim());
  for (std::size_t k = 0; k < effects.size(); ++k) {
    if (!effects[k].is_effect() || !(effects[k].input() == a)) {
      throw Error(ErrorKind::SystemMismatch, "effects must share the input system");
    }
    m.set_row(k, effects[k].matrix().entries());
  }
  return ExtendedProcess(a, c, std::move(m));
}

std::vector<ExtendedProcess> process_to_effects(const ExtendedProcess& e) {
  const auto& out = e.output().factors();
  if (out.size() != 1 || out[0].model.kind() != ModelKind::Classical) {
    throw Error(ErrorKind::SystemMismatch, "measurement process must output a classical system");
  }
  std::vector<ExtendedProcess> effects;
  for (std::size_t k = 0; k < e.matrix().rows(); ++k) {
    effects.push_back(ExtendedProcess::effect(e.input(), e.matrix().row_vector(k)));
  }
  return effects;
}

ExtendedProcess preparation_to_process(std::span<const ExtendedProcess> states,
                                       const std::string& outcome_label) {
  if (states.empty()) throw Error(ErrorKind::SystemMismatch, "preparation needs a state");
  const System& a = states.front().output();
  RealMatrix m(a.dim(), states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!states[k].is_state() || !(states[k].output() == a)) {
      throw Error(ErrorKind::SystemMismatch, "states must share the output system");
    }
    m.set_column(k, states[k].matrix().entries());
  }
  return ExtendedProcess(System::classical(states.size(), outcome_label), a, std::move(m));
}

bool is_measurement(std::span<const ExtendedProcess> effects, double tolerance) {
  if (effects.empty()) return false;
  const System& a = effects.front().input();
  std::vector<double> total(a.dim(), 0.0);
  for (const auto& e : effects) {
    if (!e.is_effect() || !(e.input() == a)) {
      throw Error(ErrorKind::SystemMismatch, "effects must share the input system");
    }
    const auto w = e.as_vector();
    if (!contains_effect(a, w).in_cone) return false;
    total = axpy(1.0, w, total);
  }
  return max_abs_diff(total, unit_effect(a)) <= tolerance;
}

}  // namespace optdiscrim
