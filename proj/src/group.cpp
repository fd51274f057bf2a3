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

#include "optdiscrim/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

namespace optdiscrim {

std::string_view to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::All: return "all";
    case ClassTag::Sequential: return "sequential";
    case ClassTag::Locc: return "locc";
    case ClassTag::Separable: return "separable";
    case ClassTag::Pt: return "pt";
  }
  return "all";
}

ClassTag class_tag_from_string(std::string_view name) {
  for (auto tag : {ClassTag::All, ClassTag::Sequential, ClassTag::Locc, ClassTag::Separable,
                   ClassTag::Pt}) {
    if (to_string(tag) == name) return tag;
  }
  throw Error(ErrorKind::ValidationError, "unknown measurement class '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table) : table_(std::move(table)) {
  const std::size_t n = table_.size();
  if (n == 0) throw Error(ErrorKind::InvalidSetup, "group must have at least one element");
  for (const auto& row : table_) {
    if (row.size() != n) throw Error(ErrorKind::InvalidSetup, "multiplication table is not square");
    for (auto x : row)
      if (x >= n) throw Error(ErrorKind::InvalidSetup, "multiplication table entry out of range");
  }
  for (std::size_t e = 0; e < n && identity_ == npos; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
    if (ok) identity_ = e;
  }
  inverse_.assign(n, npos);
  if (identity_ == npos) return;
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (table_[g][h] == identity_ && table_[h][g] == identity_) {
        inverse_[g] = h;
        break;
      }
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup(std::vector<std::vector<std::size_t>>{{0}}); }

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidSetup, "cyclic group order must be positive");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) t[g][h] = (g + h) % n;
  return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::dihedral(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidSetup, "dihedral group parameter must be positive");
  const std::size_t order = 2 * n;
  std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      const std::size_t k1 = a % n, f1 = a / n, k2 = b % n, f2 = b / n;
      // r^k1 s^f1 r^k2 s^f2 = r^(k1 +- k2) s^(f1+f2)
      const std::size_t k = f1 ? (k1 + n - k2) % n : (k1 + k2) % n;
      t[a][b] = k + n * ((f1 + f2) % 2);
    }
  }
  return FiniteGroup(std::move(t));
}

std::pair<FiniteGroup, std::vector<Permutation>> FiniteGroup::from_permutation_generators(
    const std::vector<Permutation>& generators, std::size_t cap) {
  if (generators.empty()) throw Error(ErrorKind::InvalidSetup, "no generators");
  const std::size_t points = generators.front().size();
  Permutation id(points);
  for (std::size_t i = 0; i < points; ++i) id[i] = i;
  auto compose = [&](const Permutation& a, const Permutation& b) {
    Permutation c(points);
    for (std::size_t i = 0; i < points; ++i) c[i] = a[b[i]];
    return c;
  };
  for (const auto& g : generators) {
    Permutation sorted = g;
    std::sort(sorted.begin(), sorted.end());
    if (g.size() != points || sorted != id) {
      throw Error(ErrorKind::InvalidSetup, "generator is not a permutation of the same points");
    }
  }

  std::vector<Permutation> elements{id};
  std::map<Permutation, std::size_t> index{{id, 0}};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const auto current = elements[frontier.front()];
    frontier.pop_front();
    for (const auto& g : generators) {
      auto next = compose(g, current);
      if (index.count(next)) continue;
      if (elements.size() >= cap) {
        throw Error(ErrorKind::TooLarge, "group closure exceeds " + std::to_string(cap) + " elements");
      }
      index.emplace(next, elements.size());
      elements.push_back(std::move(next));
      frontier.push_back(elements.size() - 1);
    }
  }
  const std::size_t n = elements.size();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));
  return {FiniteGroup(std::move(table)), std::move(elements)};
}

// ---------------------------------------------------------------------------
// Actions

RealMatrix OutcomeAction::matrix(std::size_t g) const {
  const auto& p = perms.at(g);
  RealMatrix t(p.size(), p.size());
  for (std::size_t m = 0; m < p.size(); ++m) t(p[m], m) = 1.0;
  return t;
}

OutcomeAction cyclic_shift_action(std::size_t order, std::size_t outcomes) {
  OutcomeAction tau;
  for (std::size_t g = 0; g < order; ++g) {
    Permutation p(outcomes);
    for (std::size_t m = 0; m < outcomes; ++m) p[m] = (m + g) % outcomes;
    tau.perms.push_back(std::move(p));
  }
  return tau;
}

StateSpaceAction state_action_from_unitaries(const std::vector<ComplexMatrix>& unitaries,
                                             const std::vector<bool>& antiunitary) {
  StateSpaceAction out;
  for (std::size_t g = 0; g < unitaries.size(); ++g) {
    const bool anti = g < antiunitary.size() && antiunitary[g];
    out.maps.push_back(conjugation_superoperator(unitaries[g], anti));
  }
  return out;
}

ComplexMatrix bloch_z_rotation(double angle) {
  ComplexMatrix u(2, 2);
  u(0, 0) = std::polar(1.0, -angle / 2.0);
  u(1, 1) = std::polar(1.0, angle / 2.0);
  return u;
}

namespace {

SetupValidation fail(std::string what, std::size_t g, std::size_t h) {
  return SetupValidation{false, std::move(what), std::make_pair(g, h)};
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

SetupValidation validate_setup(const SymmetrySetup& setup, double tolerance) {
  const auto& grp = setup.group;
  const std::size_t n = grp.order();

  // Group axioms.
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<bool> row(n, false), col(n, false);
    for (std::size_t h = 0; h < n; ++h) {
      if (row[grp.multiply(g, h)]) return fail("multiplication table row is not a permutation", g, h);
      if (col[grp.multiply(h, g)]) return fail("multiplication table column is not a permutation", h, g);
      row[grp.multiply(g, h)] = true;
      col[grp.multiply(h, g)] = true;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (grp.multiply(grp.multiply(a, b), c) != grp.multiply(a, grp.multiply(b, c))) {
          return fail("multiplication is not associative", a, b);
        }
  if (grp.identity() == FiniteGroup::npos) return fail("no identity element", 0, 0);
  for (std::size_t g = 0; g < n; ++g)
    if (grp.inverse(g) == FiniteGroup::npos) return fail("element has no inverse", g, g);

  // tau
  if (setup.tau.perms.size() != n) return fail("tau must list one permutation per element", 0, 0);
  const std::size_t outcomes = setup.tau.outcomes();
  for (std::size_t g = 0; g < n; ++g) {
    if (setup.tau.perms[g].size() != outcomes || !is_permutation(setup.tau.perms[g])) {
      return fail("tau_g is not a permutation of the outcomes", g, g);
    }
  }
  if (setup.tau.matrix(grp.identity()) != RealMatrix::identity(outcomes)) {
    return fail("tau of the identity is not the identity", grp.identity(), grp.identity());
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (setup.tau.matrix(g) * setup.tau.matrix(h) != setup.tau.matrix(grp.multiply(g, h))) {
        return fail("tau_g tau_h != tau_gh", g, h);
      }

  // pibar
  const std::size_t d = setup.system.dim();
  if (setup.pibar.maps.size() != n) return fail("pibar must list one map per element", 0, 0);
  for (std::size_t g = 0; g < n; ++g) {
    const auto& p = setup.pibar.maps[g];
    if (p.rows() != d || p.cols() != d) return fail("pibar_g has the wrong shape", g, g);
  }
  const auto id = RealMatrix::identity(d);
  if (max_abs_diff(setup.pibar.maps[grp.identity()], id) > tolerance) {
    return fail("pibar of the identity is not the identity", grp.identity(), grp.identity());
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (max_abs_diff(setup.pibar.maps[g] * setup.pibar.maps[h],
                       setup.pibar.maps[grp.multiply(g, h)]) > tolerance) {
        return fail("pibar_g pibar_h != pibar_gh", g, h);
      }
  const auto u = unit_effect(setup.system);
  for (std::size_t g = 0; g < n; ++g) {
    if (max_abs_diff(setup.pibar.maps[g] * setup.pibar.maps[grp.inverse(g)], id) > tolerance) {
      return fail("pibar_g is not reversed by pibar_{g^-1}", g, grp.inverse(g));
    }
    if (max_abs_diff(vecmat(u, setup.pibar.maps[g]), u) > tolerance) {
      return fail("pibar_g is not deterministic", g, g);
    }
  }
  Rng rng(0x5eed);
  const auto effects = sample_effects(setup.system, 64, rng);
  for (std::size_t g = 0; g < n; ++g) {
    for (const auto& w : effects) {
      if (!contains_effect(setup.system, vecmat(w, setup.pibar.maps[g])).in_cone) {
        return fail("pibar_g is not positive for effects", g, g);
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Covariance algebra

double preparation_covariance_residual(const RealMatrix& states_by_column,
                                       const SymmetrySetup& setup) {
  if (states_by_column.cols() != setup.tau.outcomes() ||
      states_by_column.rows() != setup.system.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "preparation does not match the symmetry setup");
  }
  double worst = 0.0;
  for (std::size_t g = 0; g < setup.group.order(); ++g) {
    worst = std::max(worst, max_abs_diff(setup.pibar.maps[g] * states_by_column,
                                         states_by_column * setup.tau.matrix(g)));
  }
  return worst;
}

double measurement_covariance_residual(const RealMatrix& effects_by_row,
                                       const SymmetrySetup& setup) {
  if (effects_by_row.rows() != setup.tau.outcomes() ||
      effects_by_row.cols() != setup.system.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "measurement does not match the symmetry setup");
  }
  double worst = 0.0;
  for (std::size_t g = 0; g < setup.group.order(); ++g) {
    worst = std::max(worst, max_abs_diff(effects_by_row * setup.pibar.maps[g],
                                         setup.tau.matrix(g) * effects_by_row));
  }
  return worst;
}

RealMatrix group_average(const RealMatrix& effects_by_row, const SymmetrySetup& setup) {
  const std::size_t outcomes = effects_by_row.rows();
  const std::size_t d = effects_by_row.cols();
  if (outcomes != setup.tau.outcomes() || d != setup.system.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "measurement does not match the symmetry setup");
  }
  // Neumaier summation per entry.
  RealMatrix sum(outcomes, d), carry(outcomes, d);
  for (std::size_t h = 0; h < setup.group.order(); ++h) {
    const auto term = setup.tau.matrix(setup.group.inverse(h)) * effects_by_row * setup.pibar.maps[h];
    for (std::size_t k = 0; k < term.entries().size(); ++k) {
      double& s = sum.entries()[k];
      const double x = term.entries()[k];
      const double t = s + x;
      carry.entries()[k] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
  }
  sum += carry;
  sum *= 1.0 / static_cast<double>(setup.group.order());
  return sum;
}

std::vector<std::size_t> outcome_orbit(const SymmetrySetup& setup, std::size_t outcome) {
  std::vector<std::size_t> orbit;
  for (const auto& p : setup.tau.perms) orbit.push_back(p.at(outcome));
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

bool is_transitive(const SymmetrySetup& setup) {
  return outcome_orbit(setup).size() == setup.tau.outcomes();
}

std::vector<RealMatrix> covariant_transports(const SymmetrySetup& setup) {
  const std::size_t outcomes = setup.tau.outcomes();
  const std::size_t d = setup.system.dim();
  std::vector<RealMatrix> transports(outcomes, RealMatrix(d, d));
  const double scale =
      static_cast<double>(outcomes) / static_cast<double>(setup.group.order());
  for (std::size_t g = 0; g < setup.group.order(); ++g) {
    const std::size_t m = setup.tau.perms[g][0];
    transports[m] += transpose(setup.pibar.maps[setup.group.inverse(g)]);
  }
  for (auto& t : transports) t *= scale;
  return transports;
}

}  // namespace optdiscrim
