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

#include "optdiscrim/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace optdiscrim {

namespace {

using std::numbers::pi;

HermitianMatrix pure(std::vector<Complex> psi) { return HermitianMatrix::projector(psi); }

SymmetrySetup rotation_setup(std::size_t n, const System& qubit) {
  std::vector<ComplexMatrix> u;
  for (std::size_t g = 0; g < n; ++g) u.push_back(bloch_z_rotation(2.0 * pi * g / n));
  return SymmetrySetup{FiniteGroup::cyclic(n), cyclic_shift_action(n, n),
                       state_action_from_unitaries(u), qubit, ClassTag::All};
}

DiscriminationInstance equal_prior_qubit(const std::vector<std::vector<Complex>>& kets) {
  const auto qubit = System::quantum(2, "Q");
  std::vector<HermitianMatrix> states;
  const double w = 1.0 / static_cast<double>(kets.size());
  for (const auto& k : kets) states.push_back(w * pure(k));
  DiscriminationInstance inst;
  inst.preparation = quantum_preparation(states, qubit);
  return inst;
}

}  // namespace

System two_qubits() { return tensor(System::quantum(2, "A"), System::quantum(2, "B")); }

DiscriminationInstance helstrom_scenario() {
  const double r = 1.0 / std::sqrt(2.0);
  auto inst = equal_prior_qubit({{1.0, 0.0}, {r, r}});
  // The Hadamard gate swaps |0> and |+>.
  const ComplexMatrix h(2, 2, {r, r, r, -r});
  inst.symmetry = SymmetrySetup{FiniteGroup::cyclic(2), cyclic_shift_action(2, 2),
                                state_action_from_unitaries({ComplexMatrix::identity(2), h}),
                                inst.preparation.system, ClassTag::All};
  return inst;
}

DiscriminationInstance trine_scenario() { return symmetric_pure_scenario(3); }

DiscriminationInstance symmetric_pure_scenario(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ValidationError, "need at least one state");
  // Equatorial for the trine, tilted towards |0> otherwise.
  const double polar = n == 3 ? pi / 2.0 : pi / 3.0;
  std::vector<std::vector<Complex>> kets;
  for (std::size_t k = 0; k < n; ++k) {
    kets.push_back({std::cos(polar / 2.0), std::polar(std::sin(polar / 2.0), 2.0 * pi * k / n)});
  }
  auto inst = equal_prior_qubit(kets);
  inst.symmetry = rotation_setup(n, inst.preparation.system);
  return inst;
}

DiscriminationInstance gbit_square_scenario() {
  const auto sys = System::atomic("G", ModelDescriptor::gbit_square());
  DiscriminationInstance inst;
  // Vertices in counterclockwise order.
  inst.preparation = StatePreparation{
      sys, {{0.25, 0.25, 0.25}, {0.25, -0.25, 0.25}, {0.25, -0.25, -0.25}, {0.25, 0.25, -0.25}}};
  const RealMatrix quarter_turn(3, 3, {1, 0, 0, 0, 0, -1, 0, 1, 0});
  std::vector<RealMatrix> maps{RealMatrix::identity(3)};
  for (int g = 1; g < 4; ++g) maps.push_back(quarter_turn * maps.back());
  inst.symmetry = SymmetrySetup{FiniteGroup::cyclic(4), cyclic_shift_action(4, 4),
                                StateSpaceAction{maps}, sys, ClassTag::All};
  return inst;
}

DiscriminationInstance classical_cyclic_scenario(std::size_t outcomes) {
  if (outcomes == 0) throw Error(ErrorKind::ValidationError, "need at least one outcome");
  const auto sys = System::classical(outcomes, "X");
  std::vector<double> base(outcomes);
  for (std::size_t i = 0; i < outcomes; ++i) base[i] = std::pow(0.5, static_cast<double>(i + 1));
  const double total = std::accumulate(base.begin(), base.end(), 0.0);
  DiscriminationInstance inst;
  inst.preparation.system = sys;
  std::vector<RealMatrix> maps;
  for (std::size_t g = 0; g < outcomes; ++g) {
    std::vector<double> s(outcomes);
    for (std::size_t i = 0; i < outcomes; ++i) s[(i + g) % outcomes] = base[i] / total / outcomes;
    inst.preparation.states.push_back(s);
    RealMatrix p(outcomes, outcomes);
    for (std::size_t i = 0; i < outcomes; ++i) p((i + g) % outcomes, i) = 1.0;
    maps.push_back(p);
  }
  inst.symmetry = SymmetrySetup{FiniteGroup::cyclic(outcomes), cyclic_shift_action(outcomes, outcomes),
                                StateSpaceAction{maps}, sys, ClassTag::All};
  return inst;
}

DiscriminationInstance classical_random_scenario(std::size_t outcomes, std::size_t dim,
                                                 std::uint64_t seed) {
  if (outcomes == 0 || dim == 0) throw Error(ErrorKind::ValidationError, "empty classical scenario");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> xi(outcomes);
  for (auto& x : xi) x = expo(rng);
  const double z = std::accumulate(xi.begin(), xi.end(), 0.0);
  DiscriminationInstance inst;
  inst.preparation.system = System::classical(dim, "X");
  for (std::size_t m = 0; m < outcomes; ++m) {
    std::vector<double> p(dim);
    for (auto& x : p) x = expo(rng);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x *= xi[m] / z / s;
    inst.preparation.states.push_back(std::move(p));
  }
  inst.seed = seed;
  return inst;
}

DiscriminationInstance gbit_random_scenario(std::size_t outcomes, std::uint64_t seed) {
  if (outcomes == 0) throw Error(ErrorKind::ValidationError, "need at least one outcome");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const auto model = ModelDescriptor::gbit_square();
  const auto& vertices = model.state_generators();
  std::vector<double> xi(outcomes);
  for (auto& x : xi) x = expo(rng);
  const double z = std::accumulate(xi.begin(), xi.end(), 0.0);
  DiscriminationInstance inst;
  inst.preparation.system = System::atomic("G", model);
  for (std::size_t m = 0; m < outcomes; ++m) {
    std::vector<double> w(vertices.size());
    for (auto& x : w) x = expo(rng);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> state(3, 0.0);
    for (std::size_t j = 0; j < vertices.size(); ++j) state = axpy(w[j] / s, vertices[j], state);
    for (auto& x : state) x *= xi[m] / z;
    inst.preparation.states.push_back(std::move(state));
  }
  inst.seed = seed;
  return inst;
}

std::vector<HermitianMatrix> bell_projectors() {
  const double r = 1.0 / std::sqrt(2.0);
  return {pure({r, 0.0, 0.0, r}), pure({r, 0.0, 0.0, -r}), pure({0.0, r, r, 0.0}),
          pure({0.0, r, -r, 0.0})};
}

DiscriminationInstance bell_scenario() {
  const auto sys = two_qubits();
  auto projectors = bell_projectors();
  DiscriminationInstance inst;
  inst.measurement = quantum_measurement(projectors, sys);
  for (auto& p : projectors) p *= 0.25;
  inst.preparation = quantum_preparation(projectors, sys);
  return inst;
}

std::vector<std::string> scenario_names() {
  return {"helstrom", "trine", "symmetric-pure", "gbit-square", "classical-random",
          "classical-cyclic", "gbit-random", "bell-measurement"};
}

DiscriminationInstance make_scenario(std::string_view name, const ScenarioParams& params) {
  if (name == "helstrom") return helstrom_scenario();
  if (name == "trine") return trine_scenario();
  if (name == "symmetric-pure") return symmetric_pure_scenario(params.n);
  if (name == "gbit-square") return gbit_square_scenario();
  if (name == "classical-random") {
    return classical_random_scenario(params.outcomes, params.dim, params.seed);
  }
  if (name == "classical-cyclic") return classical_cyclic_scenario(params.n);
  if (name == "gbit-random") return gbit_random_scenario(params.outcomes, params.seed);
  if (name == "bell-measurement") return bell_scenario();
  throw Error(ErrorKind::UnknownScenario, "unknown scenario '" + std::string(name) + "'");
}

}  // namespace optdiscrim
