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

#include "optdiscrim/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace optdiscrim {

namespace {

std::size_t hilbert_dim(const System& s) {
  const auto levels = s.quantum_levels();
  return std::accumulate(levels.begin(), levels.end(), std::size_t{1}, std::multiplies<>());
}

// A normalized state used to re-prepare a system after it has been measured.
std::vector<double> reference_state(const System& s) {
  if (s.is_quantum()) {
    const std::size_t n = hilbert_dim(s);
    return vectorize((1.0 / static_cast<double>(n)) * HermitianMatrix::identity(n), s.quantum_levels());
  }
  const auto gens = state_generators(s);
  const auto u = unit_effect(s);
  std::vector<double> mean(s.dim(), 0.0);
  for (const auto& g : gens) mean = axpy(1.0 / (dot(u, g) * static_cast<double>(gens.size())), g, mean);
  return mean;
}

// x -> <w, x> ref
RealMatrix measure_and_prepare(const std::vector<double>& w, const std::vector<double>& ref) {
  return RealMatrix::column(ref) * RealMatrix::row(w);
}

// Cone margin of an effect: least eigenvalue (quantum) or least pairing with
// a normalized state generator (polyhedral).
double effect_margin(const System& s, std::span<const double> w) {
  if (s.is_quantum()) return min_eigenvalue(devectorize(w, s.quantum_levels()));
  if (is_polyhedral(s)) {
    const auto u = unit_effect(s);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& g : state_generators(s)) worst = std::min(worst, dot(w, g) / dot(u, g));
    return worst;
  }
  return contains_effect(s, w).in_cone ? 0.0 : -1.0;
}

void require_measurement(const Measurement& e, const char* what) {
  try {
    validate_measurement(e);
  } catch (const Error& err) {
    throw Error(ErrorKind::ValidationError, std::string(what) + ": " + err.what());
  }
}

const System& party_system(const LoccMeasurement& lm, Party p) {
  return p == Party::A ? lm.a_system : lm.b_system;
}

// Superoperator F : P (x) D_in -> P (x) D_out of a step.
RealMatrix step_matrix(const LoccStep& step, std::size_t d) {
  const std::size_t in = step.in_messages(), out = step.out_messages();
  RealMatrix f(d * out, d * in);
  for (std::size_t i = 0; i < in; ++i)
    for (std::size_t j = 0; j < out; ++j)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) f(r * out + j, c * in + i) = step.maps[i][j](r, c);
  return f;
}

Measurement mix(const Measurement& x, const Measurement& y, double p) {
  Measurement out{x.system, {}};
  for (std::size_t m = 0; m < x.outcomes(); ++m) {
    out.effects.push_back(axpy(1.0 - p, y.effects[m], std::vector<double>(x.effects[m].size(), 0.0)));
    out.effects.back() = axpy(p, x.effects[m], out.effects.back());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sequential

System SequentialMeasurement::system() const { return tensor(a.system, branches.front().system); }

Measurement SequentialMeasurement::composite() const {
  Measurement e{system(), std::vector<std::vector<double>>(outcomes(),
                                                           std::vector<double>(system().dim(), 0.0))};
  for (std::size_t i = 0; i < messages(); ++i)
    for (std::size_t m = 0; m < outcomes(); ++m)
      e.effects[m] = axpy(1.0, kron(a.effects[i], branches[i].effects[m]), e.effects[m]);
  return e;
}

ExtendedProcess SequentialMeasurement::composite_process() const {
  const System& b_sys = branches.front().system;
  std::vector<ExtendedProcess> a_effects;
  for (const auto& w : a.effects) a_effects.push_back(ExtendedProcess::effect(a.system, w));
  const auto a_proc = measurement_to_process(a_effects, "D");
  // Controlled measurement D (x) B -> C.
  const System d_sys = a_proc.output();
  RealMatrix b(outcomes(), d_sys.dim() * b_sys.dim());
  for (std::size_t m = 0; m < outcomes(); ++m)
    for (std::size_t i = 0; i < messages(); ++i)
      for (std::size_t k = 0; k < b_sys.dim(); ++k) b(m, i * b_sys.dim() + k) = branches[i].effects[m][k];
  const ExtendedProcess b_proc(tensor(d_sys, b_sys), System::classical(outcomes(), "C"), std::move(b));
  return compose_seq(compose_par(a_proc, ExtendedProcess::identity(b_sys)), b_proc);
}

SequentialMeasurement make_sequential(const Measurement& a, const std::vector<Measurement>& branches) {
  require_measurement(a, "first measurement");
  if (a.outcomes() > kMaxMessageDim) {
    throw Error(ErrorKind::TooLarge, "message dimension " + std::to_string(a.outcomes()) +
                                         " exceeds " + std::to_string(kMaxMessageDim));
  }
  if (branches.size() != a.outcomes()) {
    throw Error(ErrorKind::SystemMismatch, "need one branch measurement per outcome of the first");
  }
  for (const auto& b : branches) {
    if (!(b.system == branches.front().system) || b.outcomes() != branches.front().outcomes()) {
      throw Error(ErrorKind::SystemMismatch, "branch measurements differ in system or outcomes");
    }
    require_measurement(b, "branch measurement");
  }
  return SequentialMeasurement{a, branches};
}

SeparableMeasurement seq_to_separable(const SequentialMeasurement& sm) {
  SeparableMeasurement out{sm.a.system, sm.branches.front().system, {}};
  out.terms.resize(sm.outcomes());
  for (std::size_t m = 0; m < sm.outcomes(); ++m)
    for (std::size_t i = 0; i < sm.messages(); ++i)
      out.terms[m].push_back({1.0, sm.a.effects[i], sm.branches[i].effects[m]});
  return out;
}

LoccMeasurement sequential_to_locc(const SequentialMeasurement& sm) {
  LoccMeasurement lm{sm.a.system, sm.branches.front().system, {}};
  const auto ref_a = reference_state(lm.a_system);
  const auto ref_b = reference_state(lm.b_system);
  LoccStep first{Party::A, {{}}, std::nullopt};
  for (const auto& w : sm.a.effects) first.maps[0].push_back(measure_and_prepare(w, ref_a));
  LoccStep second{Party::B, {}, std::nullopt};
  for (const auto& branch : sm.branches) {
    second.maps.emplace_back();
    for (const auto& w : branch.effects) second.maps.back().push_back(measure_and_prepare(w, ref_b));
  }
  lm.steps = {std::move(first), std::move(second)};
  return lm;
}

// ---------------------------------------------------------------------------
// LOCC

void validate_locc(const LoccMeasurement& lm) {
  if (lm.steps.empty()) throw Error(ErrorKind::ValidationError, "protocol has no steps");
  if (lm.steps.front().in_messages() != 1) {
    throw Error(ErrorKind::ValidationError, "the first step must take a single trivial message");
  }
  for (std::size_t k = 0; k < lm.steps.size(); ++k) {
    const auto& step = lm.steps[k];
    const std::string where = "step " + std::to_string(k);
    if (step.maps.empty() || step.maps.front().empty()) {
      throw Error(ErrorKind::ValidationError, where + " has no branches");
    }
    if (k > 0 && step.in_messages() != lm.steps[k - 1].out_messages()) {
      throw Error(ErrorKind::ValidationError, where + " does not accept the previous message");
    }
    const bool last = k + 1 == lm.steps.size();
    if (!last && step.out_messages() > kMaxMessageDim) {
      throw Error(ErrorKind::TooLarge, where + " message dimension exceeds " +
                                           std::to_string(kMaxMessageDim));
    }
    if (step.message && (!step.message->is_classical() || step.message->dim() != step.out_messages())) {
      throw Error(ErrorKind::UnsupportedWiring,
                  where + " sends a non-classical system " + step.message->label() + " across parties");
    }
    const System& sys = party_system(lm, step.party);
    const auto u = unit_effect(sys);
    for (const auto& row : step.maps) {
      if (row.size() != step.out_messages()) {
        throw Error(ErrorKind::ValidationError, where + " has ragged branches");
      }
      std::vector<double> total(sys.dim(), 0.0);
      for (const auto& f : row) {
        if (f.rows() != sys.dim() || f.cols() != sys.dim()) {
          throw Error(ErrorKind::ValidationError, where + " map has the wrong shape");
        }
        total = axpy(1.0, vecmat(u, f), total);
      }
      if (max_abs_diff(total, u) > kClassTolerance) {
        throw Error(ErrorKind::ValidationError, where + " is not deterministic");
      }
    }
  }
}

ExtendedProcess LoccMeasurement::composite_process() const {
  validate_locc(*this);
  const System ab = tensor(a_system, b_system);
  System d_in = System::classical(1, "M0");
  const double one = 1.0;
  auto proc = compose_par(ExtendedProcess::identity(ab),
                          ExtendedProcess::state(d_in, std::span<const double>(&one, 1)));
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& step = steps[k];
    const bool last = k + 1 == steps.size();
    const System d_out = System::classical(step.out_messages(), last ? "C" : "M" + std::to_string(k + 1));
    const System& own = party_system(*this, step.party);
    const ExtendedProcess f(tensor(own, d_in), tensor(own, d_out), step_matrix(step, own.dim()));
    ExtendedProcess full = [&] {
      if (step.party == Party::B) return compose_par(ExtendedProcess::identity(a_system), f);
      const auto id_a = ExtendedProcess::identity(a_system);
      const auto before = compose_par(id_a, swap(b_system, d_in));
      const auto after = compose_par(id_a, swap(d_out, b_system));
      return compose_seq(compose_seq(before, compose_par(f, ExtendedProcess::identity(b_system))), after);
    }();
    proc = compose_seq(proc, full);
    d_in = d_out;
  }
  const auto discard = compose_par(
      compose_par(ExtendedProcess::discard(a_system), ExtendedProcess::discard(b_system)),
      ExtendedProcess::identity(d_in));
  return compose_seq(proc, discard);
}

Measurement LoccMeasurement::composite() const {
  const auto proc = composite_process();
  return Measurement::from_matrix(system(), proc.matrix());
}

SeparableMeasurement locc_to_separable(const LoccMeasurement& lm) {
  validate_locc(lm);
  SeparableMeasurement out{lm.a_system, lm.b_system, {}};
  out.terms.resize(lm.outcomes());
  const auto ua = unit_effect(lm.a_system);
  const auto ub = unit_effect(lm.b_system);
  // Depth-first over message histories; each party's maps compose in order.
  auto walk = [&](auto&& self, std::size_t k, std::size_t message, const RealMatrix& fa,
                  const RealMatrix& fb) -> void {
    const auto& step = lm.steps[k];
    for (std::size_t j = 0; j < step.out_messages(); ++j) {
      const auto& f = step.maps[message][j];
      const RealMatrix na = step.party == Party::A ? f * fa : fa;
      const RealMatrix nb = step.party == Party::B ? f * fb : fb;
      if (k + 1 < lm.steps.size()) {
        self(self, k + 1, j, na, nb);
        continue;
      }
      auto alpha = vecmat(ua, na);
      auto beta = vecmat(ub, nb);
      if (max_abs(RealMatrix::row(alpha)) == 0.0 || max_abs(RealMatrix::row(beta)) == 0.0) continue;
      out.terms[j].push_back({1.0, std::move(alpha), std::move(beta)});
    }
  };
  walk(walk, 0, 0, RealMatrix::identity(lm.a_system.dim()), RealMatrix::identity(lm.b_system.dim()));
  return out;
}

// ---------------------------------------------------------------------------
// Separable

Measurement SeparableMeasurement::composite() const {
  const System ab = system();
  Measurement e{ab, std::vector<std::vector<double>>(outcomes(), std::vector<double>(ab.dim(), 0.0))};
  for (std::size_t m = 0; m < outcomes(); ++m)
    for (const auto& t : terms[m]) e.effects[m] = axpy(t.weight, kron(t.alpha, t.beta), e.effects[m]);
  return e;
}

void validate_separable(const SeparableMeasurement& sm, double tolerance) {
  if (sm.terms.empty()) throw Error(ErrorKind::ValidationError, "measurement has no outcomes");
  for (std::size_t m = 0; m < sm.outcomes(); ++m) {
    for (const auto& t : sm.terms[m]) {
      const std::string where = "outcome " + std::to_string(m);
      if (!(t.weight >= -tolerance)) throw Error(ErrorKind::ValidationError, where + ": negative weight");
      if (t.alpha.size() != sm.a_system.dim() || t.beta.size() != sm.b_system.dim()) {
        throw Error(ErrorKind::ValidationError, where + ": local factor has the wrong dimension");
      }
      if (!contains_effect(sm.a_system, t.alpha).in_cone ||
          !contains_effect(sm.b_system, t.beta).in_cone) {
        throw Error(ErrorKind::ValidationError, where + ": local factor is not an effect");
      }
    }
  }
  const auto e = sm.composite();
  std::vector<double> total(e.system.dim(), 0.0);
  for (const auto& w : e.effects) total = axpy(1.0, w, total);
  if (max_abs_diff(total, unit_effect(e.system)) > tolerance) {
    throw Error(ErrorKind::ValidationError, "effects do not sum to the unit effect");
  }
}

// ---------------------------------------------------------------------------
// PT

namespace {

void require_bipartite(const Measurement& e, const System& a, const System& b) {
  if (!(e.system == tensor(a, b))) {
    throw Error(ErrorKind::SystemMismatch, "measurement is not on " + a.label() + "*" + b.label());
  }
}

std::vector<double> pull_back(std::span<const double> w, const RealMatrix& f) { return vecmat(w, f); }

}  // namespace

double pt_residual(const Measurement& e, const System& a, const System& b,
                   const ExtendedProcess& fbar) {
  require_bipartite(e, a, b);
  if (!(fbar.output() == a)) throw Error(ErrorKind::SystemMismatch, "fbar must output " + a.label());
  const System joint = tensor(fbar.input(), b);
  const RealMatrix lift = kron(fbar.matrix(), RealMatrix::identity(b.dim()));
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& w : e.effects) worst = std::min(worst, effect_margin(joint, pull_back(w, lift)));
  return worst;
}

bool check_pt(const Measurement& e, const System& a, const System& b, const ExtendedProcess& fbar) {
  require_bipartite(e, a, b);
  if (!(fbar.output() == a)) throw Error(ErrorKind::SystemMismatch, "fbar must output " + a.label());
  const auto ua = unit_effect(a);
  if (max_abs_diff(pull_back(ua, fbar.matrix()), unit_effect(fbar.input())) > kClassTolerance) {
    throw Error(ErrorKind::PreconditionFailed, "fbar is not deterministic");
  }
  Rng rng(kPositivitySeed);
  for (const auto& w : sample_effects(a, kPositivitySamples, rng)) {
    if (effect_margin(fbar.input(), pull_back(w, fbar.matrix())) < -kClassTolerance) {
      throw Error(ErrorKind::PreconditionFailed, "fbar is not positive for effects");
    }
  }
  return pt_residual(e, a, b, fbar) >= -kClassTolerance;
}

ExtendedProcess random_positive_map(const System& s, Rng& rng, std::size_t components) {
  if (components == 0) throw Error(ErrorKind::ValidationError, "need at least one component");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(components);
  for (auto& x : w) x = expo(rng);
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  RealMatrix total(s.dim(), s.dim());
  if (s.is_quantum()) {
    const auto levels = s.quantum_levels();
    const std::size_t n = hilbert_dim(s);
    std::bernoulli_distribution flip(0.5);
    for (std::size_t k = 0; k < components; ++k) {
      const auto u = haar_unitary(n, rng);
      const bool anti = flip(rng);
      const auto f = superoperator(
          [&](const HermitianMatrix& x) {
            const ComplexMatrix y = anti ? transpose(x.matrix()) : x.matrix();
            return HermitianMatrix(u * y * adjoint(u), 1e-9);
          },
          levels, levels);
      total += (w[k] / z) * f;
    }
  } else if (s.is_classical()) {
    std::vector<std::size_t> perm(s.dim());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 0; k < components; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < perm.size(); ++i) total(perm[i], i) += w[k] / z;
    }
  } else {
    throw Error(ErrorKind::UnsupportedModel, "random positive maps need a quantum or classical system");
  }
  return ExtendedProcess(s, s, std::move(total));
}

std::optional<PTWitnessReport> pt_witness(const Measurement& e, const System& a, const System& b) {
  require_bipartite(e, a, b);
  if (a.factors().size() != 1 || b.factors().size() != 1 || !a.is_quantum() || !b.is_quantum()) {
    throw Error(ErrorKind::UnsupportedSystem, "witness search needs two single quantum systems");
  }
  const std::size_t na = a.quantum_levels()[0], nb = b.quantum_levels()[0];
  if (!((na == 2 && (nb == 2 || nb == 3)) || (na == 3 && nb == 2))) {
    throw Error(ErrorKind::UnsupportedSystem, "witness search supports 2x2, 2x3 and 3x2 only");
  }
  const std::vector<std::size_t> levels{na, nb};

  // Outcome with the most negative partial transpose.
  std::optional<std::size_t> chosen;
  double lowest = -kClassTolerance;
  EigenDecomposition best_eig;
  for (std::size_t m = 0; m < e.outcomes(); ++m) {
    auto eig = eigh(partial_transpose(devectorize(e.effects[m], levels), na, nb));
    if (eig.values.front() < lowest) {
      lowest = eig.values.front();
      chosen = m;
      best_eig = std::move(eig);
    }
  }
  if (!chosen) return std::nullopt;

  PTWitnessReport r;
  r.outcome = *chosen;
  const auto em = devectorize(e.effects[r.outcome], levels);
  std::vector<Complex> phi(na * nb);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = best_eig.vectors(i, 0);
  auto v = partial_transpose(HermitianMatrix::projector(phi), na, nb);
  r.unperturbed_pairing = trace_product(em, v);

  // Make the B marginal full rank while keeping the pairing negative.
  const auto fix = (1.0 / static_cast<double>(na)) * HermitianMatrix::identity(na * nb);
  const double scale = std::max(trace_product(em, fix), std::numeric_limits<double>::min());
  const double c = std::min(1e-2, std::abs(r.unperturbed_pairing) / (2.0 * scale));
  v += c * fix;
  r.pairing = trace_product(em, v);
  r.witness = vectorize(v, levels);

  const auto vb = partial_trace(v, na, nb, true);
  const auto g = matrix_function(vb, [](double x) { return 1.0 / std::sqrt(x); });
  const std::size_t nb_level = nb;
  const std::span<const std::size_t> b_levels(&nb_level, 1);
  r.normalizer = superoperator(
      [&](const HermitianMatrix& s) { return HermitianMatrix(g.matrix() * s.matrix() * g.matrix(), 1e-9); },
      b_levels, b_levels);

  const ComplexMatrix lift = kron(ComplexMatrix::identity(na), g.matrix());
  const ComplexMatrix w = lift * v.matrix() * lift;
  const std::size_t na_level = na;
  const RealMatrix f = superoperator(
      [&](const HermitianMatrix& s) {
        ComplexMatrix out(na, na);
        for (std::size_t a1 = 0; a1 < na; ++a1)
          for (std::size_t a2 = 0; a2 < na; ++a2)
            for (std::size_t b1 = 0; b1 < nb; ++b1)
              for (std::size_t b2 = 0; b2 < nb; ++b2)
                out(a1, a2) += w(a1 * nb + b1, a2 * nb + b2) * s(b1, b2);
        return HermitianMatrix(out, 1e-9);
      },
      b_levels, std::span<const std::size_t>(&na_level, 1));
  const System b_copy = System::quantum(nb, b.factors()[0].label + "'");
  r.fbar = ExtendedProcess(b_copy, a, f);

  r.determinism_residual = max_abs_diff(pull_back(unit_effect(a), f), unit_effect(b_copy));
  Rng rng(kPositivitySeed);
  r.positivity_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : sample_effects(a, kPositivitySamples, rng))
    r.positivity_margin = std::min(r.positivity_margin, effect_margin(b_copy, pull_back(x, f)));
  const auto sa = sample_effects(a, kPositivitySamples, rng);
  const auto sb = sample_effects(b, kPositivitySamples, rng);
  r.block_positivity = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kPositivitySamples; ++k)
    r.block_positivity = std::min(r.block_positivity, dot(kron(sa[k], sb[k]), r.witness));
  r.violation = pt_residual(e, a, b, r.fbar);
  return r;
}

// ---------------------------------------------------------------------------
// Class-preserving operations

ClassTag class_of(const ClassMeasurement& x) {
  switch (x.index()) {
    case 1: return ClassTag::Sequential;
    case 2: return ClassTag::Locc;
    case 3: return ClassTag::Separable;
    default: return ClassTag::All;
  }
}

Measurement effects_of(const ClassMeasurement& x) {
  return std::visit([](const auto& v) -> Measurement {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Measurement>) {
      return v;
    } else {
      return v.composite();
    }
  }, x);
}

ClassMeasurement permute_outcomes_in_class(const ClassMeasurement& x, const Permutation& perm) {
  if (const auto* e = std::get_if<Measurement>(&x)) return permute_outcomes(*e, perm);
  const std::size_t outcomes = effects_of(x).outcomes();
  if (perm.size() != outcomes) {
    throw Error(ErrorKind::DimensionMismatch, "permutation size differs from the outcome count");
  }
  Permutation sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw Error(ErrorKind::ValidationError, "not a permutation");

  if (const auto* s = std::get_if<SequentialMeasurement>(&x)) {
    auto out = *s;
    for (auto& b : out.branches) b = permute_outcomes(b, perm);
    return out;
  }
  if (const auto* l = std::get_if<LoccMeasurement>(&x)) {
    auto out = *l;
    auto& last = out.steps.back();
    for (std::size_t i = 0; i < last.maps.size(); ++i)
      for (std::size_t m = 0; m < outcomes; ++m) last.maps[i][perm[m]] = l->steps.back().maps[i][m];
    last.message.reset();
    return out;
  }
  const auto& sep = std::get<SeparableMeasurement>(x);
  auto out = sep;
  for (std::size_t m = 0; m < outcomes; ++m) out.terms[perm[m]] = sep.terms[m];
  return out;
}

ClassMeasurement convex_mix_in_class(const ClassMeasurement& x, const ClassMeasurement& y, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::DomainError, "mixing weight must lie in [0, 1]");
  if (x.index() != y.index()) {
    throw Error(ErrorKind::ClassMismatch, std::string("cannot mix ") +
                                              std::string(to_string(class_of(x))) + " with " +
                                              std::string(to_string(class_of(y))));
  }
  const auto ex = effects_of(x), ey = effects_of(y);
  if (!(ex.system == ey.system) || ex.outcomes() != ey.outcomes()) {
    throw Error(ErrorKind::ClassMismatch, "measurements differ in system or outcome count");
  }
  if (std::holds_alternative<Measurement>(x)) return mix(ex, ey, p);

  if (const auto* sx = std::get_if<SequentialMeasurement>(&x)) {
    const auto& sy = std::get<SequentialMeasurement>(y);
    if (!(sx->a.system == sy.a.system)) throw Error(ErrorKind::ClassMismatch, "first parties differ");
    // A flips a p-coin and reports it along with its outcome.
    Measurement a{sx->a.system, {}};
    for (const auto& w : sx->a.effects) a.effects.push_back(axpy(p - 1.0, w, w));
    for (const auto& w : sy.a.effects) a.effects.push_back(axpy(-p, w, w));
    auto branches = sx->branches;
    branches.insert(branches.end(), sy.branches.begin(), sy.branches.end());
    return make_sequential(a, branches);
  }

  if (const auto* sx = std::get_if<SeparableMeasurement>(&x)) {
    const auto& sy = std::get<SeparableMeasurement>(y);
    if (!(sx->a_system == sy.a_system)) throw Error(ErrorKind::ClassMismatch, "local systems differ");
    auto out = *sx;
    for (std::size_t m = 0; m < out.outcomes(); ++m) {
      for (auto& t : out.terms[m]) t.weight *= p;
      for (auto t : sy.terms[m]) {
        t.weight *= 1.0 - p;
        out.terms[m].push_back(std::move(t));
      }
    }
    return out;
  }

  const auto& lx = std::get<LoccMeasurement>(x);
  const auto& ly = std::get<LoccMeasurement>(y);
  if (!(lx.a_system == ly.a_system) || lx.steps.size() != ly.steps.size()) {
    throw Error(ErrorKind::ClassMismatch, "protocols differ in systems or round count");
  }
  for (std::size_t k = 0; k < lx.steps.size(); ++k)
    if (lx.steps[k].party != ly.steps[k].party) {
      throw Error(ErrorKind::ClassMismatch, "protocols differ in the order of parties");
    }
  LoccMeasurement out{lx.a_system, lx.b_system, {}};
  const std::size_t n = lx.steps.size();
  if (n == 1) {
    LoccStep s{lx.steps[0].party, {{}}, std::nullopt};
    for (std::size_t m = 0; m < lx.outcomes(); ++m) {
      s.maps[0].push_back(p * lx.steps[0].maps[0][m] + (1.0 - p) * ly.steps[0].maps[0][m]);
    }
    out.steps.push_back(std::move(s));
    return out;
  }
  // Messages of the two protocols are carried side by side.
  for (std::size_t k = 0; k < n; ++k) {
    const auto& sx = lx.steps[k];
    const auto& sy = ly.steps[k];
    const std::size_t d = party_system(lx, sx.party).dim();
    const bool first = k == 0, last = k + 1 == n;
    const std::size_t in = first ? 1 : sx.in_messages() + sy.in_messages();
    const std::size_t out_x = sx.out_messages(), out_y = sy.out_messages();
    const std::size_t outs = last ? out_x : out_x + out_y;
    if (!last && outs > kMaxMessageDim) {
      throw Error(ErrorKind::TooLarge, "mixed protocol exceeds the message dimension cap");
    }
    LoccStep s{sx.party, std::vector<std::vector<RealMatrix>>(in, std::vector<RealMatrix>(outs, RealMatrix(d, d))),
               std::nullopt};
    for (std::size_t i = 0; i < in; ++i) {
      const bool from_x = first || i < sx.in_messages();
      const std::size_t src = first ? 0 : (from_x ? i : i - sx.in_messages());
      const auto& row = from_x ? sx.maps[src] : sy.maps[src];
      const double weight = first ? (from_x ? p : 0.0) : 1.0;
      for (std::size_t j = 0; j < row.size(); ++j) {
        const std::size_t dst = last ? j : (from_x ? j : out_x + j);
        s.maps[i][dst] = weight * row[j];
      }
      if (first) {
        for (std::size_t j = 0; j < out_y; ++j) s.maps[0][out_x + j] = (1.0 - p) * sy.maps[0][j];
      }
    }
    out.steps.push_back(std::move(s));
  }
  return out;
}

SymmetrySetup ProductSymmetry::joint() const {
  SymmetrySetup s{group, tau, {}, tensor(a_system, b_system), ClassTag::Separable};
  for (std::size_t g = 0; g < group.order(); ++g) {
    s.pibar.maps.push_back(kron(on_a.maps.at(g), on_b.maps.at(g)));
  }
  return s;
}

ClassMeasurement symmetrize_in_class(const ClassMeasurement& x, const ProductSymmetry& sym) {
  for (const auto& [maps, sys] : {std::pair{&sym.on_a, &sym.a_system}, std::pair{&sym.on_b, &sym.b_system}}) {
    const auto check = validate_setup(SymmetrySetup{sym.group, sym.tau, *maps, *sys, ClassTag::All});
    if (!check.valid) throw Error(ErrorKind::InvalidSetup, "local action: " + check.violation);
  }
  const auto joint = sym.joint();
  if (const auto* e = std::get_if<Measurement>(&x)) return symmetrize(*e, joint);

  const std::size_t order = sym.group.order();
  const double inv = 1.0 / static_cast<double>(order);
  const auto& pa = sym.on_a.maps;
  const auto& pb = sym.on_b.maps;
  // Row m of the average is e_{tau_h(m)} P_h averaged over h.
  auto source = [&](std::size_t h, std::size_t m) { return sym.tau.perms[h][m]; };

  if (const auto* s = std::get_if<SeparableMeasurement>(&x)) {
    SeparableMeasurement out{s->a_system, s->b_system, std::vector<std::vector<ProductTerm>>(s->outcomes())};
    for (std::size_t m = 0; m < s->outcomes(); ++m)
      for (std::size_t h = 0; h < order; ++h)
        for (const auto& t : s->terms[source(h, m)])
          out.terms[m].push_back({t.weight * inv, vecmat(t.alpha, pa[h]), vecmat(t.beta, pb[h])});
    return out;
  }

  if (const auto* s = std::get_if<SequentialMeasurement>(&x)) {
    if (order * s->messages() > kMaxMessageDim) {
      throw Error(ErrorKind::TooLarge, "symmetrized message dimension exceeds the cap");
    }
    Measurement a{s->a.system, {}};
    std::vector<Measurement> branches;
    for (std::size_t h = 0; h < order; ++h) {
      for (std::size_t i = 0; i < s->messages(); ++i) {
        auto w = vecmat(s->a.effects[i], pa[h]);
        for (auto& c : w) c *= inv;
        a.effects.push_back(std::move(w));
        Measurement b{s->branches[i].system, {}};
        for (std::size_t m = 0; m < s->outcomes(); ++m)
          b.effects.push_back(vecmat(s->branches[i].effects[source(h, m)], pb[h]));
        branches.push_back(std::move(b));
      }
    }
    return make_sequential(a, branches);
  }

  const auto& l = std::get<LoccMeasurement>(x);
  validate_locc(l);
  LoccMeasurement out{l.a_system, l.b_system, {}};
  bool seen_a = false, seen_b = false;
  const std::size_t n = l.steps.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& st = l.steps[k];
    const bool is_a = st.party == Party::A;
    const bool first_for_party = is_a ? !seen_a : !seen_b;
    (is_a ? seen_a : seen_b) = true;
    const std::size_t d = party_system(l, st.party).dim();
    const auto& local = is_a ? pa : pb;
    auto pre = [&](const RealMatrix& f, std::size_t h) {
      return first_for_party ? f * local[h] : f;
    };
    const bool first = k == 0, last = k + 1 == n;
    const std::size_t in = first ? 1 : order * st.in_messages();
    const std::size_t outs = last ? st.out_messages() : order * st.out_messages();
    if (!last && outs > kMaxMessageDim) {
      throw Error(ErrorKind::TooLarge, "symmetrized message dimension exceeds the cap");
    }
    LoccStep s{st.party, std::vector<std::vector<RealMatrix>>(in, std::vector<RealMatrix>(outs, RealMatrix(d, d))),
               std::nullopt};
    for (std::size_t h = 0; h < order; ++h) {
      for (std::size_t i = 0; i < st.in_messages(); ++i) {
        const std::size_t row = first ? 0 : h * st.in_messages() + i;
        const double weight = first ? inv : 1.0;
        for (std::size_t j = 0; j < outs / (last ? 1 : order); ++j) {
          if (last) {
            s.maps[row][j] += weight * pre(st.maps[i][source(h, j)], h);
          } else {
            s.maps[row][h * st.out_messages() + j] = weight * pre(st.maps[i][j], h);
          }
        }
      }
    }
    out.steps.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random members

std::vector<RealMatrix> random_instrument(const System& s, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw Error(ErrorKind::ValidationError, "need at least one outcome");
  std::vector<RealMatrix> maps;
  if (s.is_quantum()) {
    const auto levels = s.quantum_levels();
    const std::size_t n = hilbert_dim(s);
    const auto u = haar_unitary(n * outcomes, rng);
    for (std::size_t j = 0; j < outcomes; ++j) {
      ComplexMatrix k(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) k(r, c) = u(j * n + r, c);
      maps.push_back(superoperator(
          [&](const HermitianMatrix& x) { return HermitianMatrix(k * x.matrix() * adjoint(k), 1e-9); },
          levels, levels));
    }
    return maps;
  }
  if (s.is_classical()) {
    std::exponential_distribution<double> expo(1.0);
    maps.assign(outcomes, RealMatrix(s.dim(), s.dim()));
    for (std::size_t x = 0; x < s.dim(); ++x) {
      std::vector<double> p(outcomes);
      for (auto& v : p) v = expo(rng);
      const double z = std::accumulate(p.begin(), p.end(), 0.0);
      for (std::size_t j = 0; j < outcomes; ++j) maps[j](x, x) = p[j] / z;
    }
    return maps;
  }
  throw Error(ErrorKind::UnsupportedModel, "random instruments need a quantum or classical system");
}

SequentialMeasurement random_sequential(const System& a, const System& b, std::size_t messages,
                                        std::size_t outcomes, Rng& rng) {
  const auto first = random_measurement(a, messages, rng);
  std::vector<Measurement> branches;
  for (std::size_t i = 0; i < messages; ++i) branches.push_back(random_measurement(b, outcomes, rng));
  return make_sequential(first, branches);
}

LoccMeasurement random_two_round_locc(const System& a, const System& b, std::size_t outcomes,
                                      Rng& rng) {
  constexpr std::size_t kMessage = 2;
  LoccMeasurement lm{a, b, {}};
  lm.steps.push_back({Party::A, {random_instrument(a, kMessage, rng)}, System::classical(kMessage, "M1")});
  LoccStep second{Party::B, {}, std::nullopt};
  for (std::size_t i = 0; i < kMessage; ++i) second.maps.push_back(random_instrument(b, kMessage, rng));
  lm.steps.push_back(std::move(second));
  LoccStep third{Party::A, {}, std::nullopt};
  for (std::size_t j = 0; j < kMessage; ++j) third.maps.push_back(random_instrument(a, outcomes, rng));
  lm.steps.push_back(std::move(third));
  validate_locc(lm);
  return lm;
}

}  // namespace optdiscrim
