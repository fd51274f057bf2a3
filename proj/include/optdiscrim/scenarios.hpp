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

// Canonical instances: the Helstrom pair, trine, tilted symmetric pure states,
// the square gbit, cyclic and random classical sets, and the Bell basis.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "optdiscrim/discrimination.hpp"

namespace optdiscrim {

DiscriminationInstance helstrom_scenario();
DiscriminationInstance trine_scenario();
// n pure qubit states at polar angle pi/3, equally spaced in azimuth; Z_n.
DiscriminationInstance symmetric_pure_scenario(std::size_t n);
// The four vertex states of the square, equal priors; Z_4 rotations.
DiscriminationInstance gbit_square_scenario();
// Cyclic shifts of a fixed distribution on M points; Z_M.
DiscriminationInstance classical_cyclic_scenario(std::size_t outcomes);
DiscriminationInstance classical_random_scenario(std::size_t outcomes, std::size_t dim,
                                                 std::uint64_t seed);
// Random vertex mixtures on the square gbit; no symmetry.
DiscriminationInstance gbit_random_scenario(std::size_t outcomes, std::uint64_t seed);
// Four Bell states with equal priors, carrying the Bell measurement.
DiscriminationInstance bell_scenario();

// Bell basis projectors Phi+, Phi-, Psi+, Psi- on 2 (x) 2.
std::vector<HermitianMatrix> bell_projectors();
System two_qubits();

struct ScenarioParams {
  std::size_t n = 5;
  std::size_t outcomes = 3;
  std::size_t dim = 4;
  std::uint64_t seed = 7;
};

std::vector<std::string> scenario_names();
// UnknownScenario for names outside scenario_names().
DiscriminationInstance make_scenario(std::string_view name, const ScenarioParams& params = {});

}  // namespace optdiscrim
