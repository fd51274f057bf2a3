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

#include <string>

#include "optdiscrim/discrimination.hpp"

namespace optdiscrim::detail {

void require_polyhedral(const System& s);
// Wraps a measurement into a report whose value is recomputed from it.
SolveReport finish(Measurement e, const StatePreparation& rho, std::string method,
                   std::size_t iterations);
// Fixed-point iteration restricted to covariant measurements; assumes the
// setup is valid, rho covariant and tau transitive.
SolveReport covariant_fixed_point(const StatePreparation& rho, const SymmetrySetup& setup,
                                  const SolverOptions& options);

}  // namespace optdiscrim::detail
