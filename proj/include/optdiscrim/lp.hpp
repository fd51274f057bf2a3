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

#include <cstddef>
#include <span>
#include <vector>

#include "optdiscrim/linalg.hpp"

namespace optdiscrim::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
};

struct Options {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
};

/// Maximizes c^T x subject to A x = b, x >= 0.
///
/// Dense two-phase tableau simplex. Pivot selection follows Bland's rule
/// (lowest-index entering column, lowest-index leaving basic variable on
/// ratio ties), so the result is deterministic and cycling cannot occur.
Result maximize(const RealMatrix& a, std::span<const double> b, std::span<const double> c,
                const Options& options = {});

/// True iff v lies in the cone generated by `generators` (within tolerance).
bool in_cone(std::span<const std::vector<double>> generators, std::span<const double> v,
             double tolerance = 1e-10);

}  // namespace optdiscrim::lp
