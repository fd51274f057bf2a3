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

#include "optdiscrim/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace optdiscrim {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(path + "/" + key, "missing");
  return *it;
}

const Json* optional_member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) parse_fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) parse_fail(path, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

std::vector<double> real_vector(const Json& j, const std::string& path) {
  std::vector<double> v;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) v.push_back(number(j[i], at(path, i)));
  return v;
}

RealMatrix real_matrix(const Json& j, const std::string& path) {
  const auto& rows = array(j, path);
  if (rows.empty()) parse_fail(path, "empty matrix");
  RealMatrix m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = real_vector(rows[i], at(path, i));
    if (i == 0) m = RealMatrix(rows.size(), row.size());
    if (row.size() != m.cols()) parse_fail(at(path, i), "ragged matrix row");
    m.set_row(i, row);
  }
  return m;
}

Complex complex_number(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) parse_fail(path, "expected a [re, im] pair");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

ComplexMatrix complex_matrix(const Json& j, const std::string& path) {
  const auto& rows = array(j, path);
  if (rows.empty()) parse_fail(path, "empty matrix");
  ComplexMatrix m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = array(rows[i], at(path, i));
    if (i == 0) m = ComplexMatrix(rows.size(), row.size());
    if (row.size() != m.cols()) parse_fail(at(path, i), "ragged matrix row");
    for (std::size_t k = 0; k < row.size(); ++k) m(i, k) = complex_number(row[k], at(at(path, i), k));
  }
  return m;
}

Json to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_vector(i));
  return rows;
}

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

// Vectors on a system: complex matrices for quantum systems, plain arrays otherwise.
std::vector<double> object_from_json(const Json& j, const System& s, const std::string& path) {
  if (s.is_quantum()) {
    const auto m = complex_matrix(j, path);
    std::size_t n = 1;
    for (auto l : s.quantum_levels()) n *= l;
    if (m.rows() != n || m.cols() != n) parse_fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    try {
      return vectorize(HermitianMatrix(m, 1e-10), s.quantum_levels());
    } catch (const Error&) {
      throw Error(ErrorKind::ValidationError, path + ": matrix is not Hermitian");
    }
  }
  auto v = real_vector(j, path);
  if (v.size() != s.dim()) parse_fail(path, "expected " + std::to_string(s.dim()) + " entries");
  return v;
}

Json object_to_json(std::span<const double> v, const System& s) {
  if (s.is_quantum()) return to_json(devectorize(v, s.quantum_levels()).matrix());
  return Json(std::vector<double>(v.begin(), v.end()));
}

// ---------------------------------------------------------------------------
// Model

std::vector<std::string> default_labels(const Json& model, std::size_t atoms) {
  const std::string kind = model.value("kind", "");
  if (kind == "classical") return {"X"};
  if (kind == "polytope") return {model.value("name", "") == "gbit-square" ? "G" : "P"};
  if (atoms == 1) return {"Q"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < atoms; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

System system_from_json(const Json& j, const std::string& path) {
  const std::string kind = text(member(j, "kind", path), path + "/kind");
  std::vector<ModelDescriptor> models;
  if (kind == "classical") {
    const auto n = count(member(j, "outcomes", path), path + "/outcomes");
    if (n == 0) throw Error(ErrorKind::ValidationError, "classical system needs at least one outcome");
    models.push_back(ModelDescriptor::classical(n));
  } else if (kind == "quantum") {
    const auto& dims = array(member(j, "dims", path), path + "/dims");
    if (dims.empty()) parse_fail(path + "/dims", "need at least one factor");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const auto n = count(dims[i], at(path + "/dims", i));
      if (n == 0) throw Error(ErrorKind::ValidationError, "quantum factor of dimension zero");
      models.push_back(ModelDescriptor::quantum(n));
    }
  } else if (kind == "polytope") {
    const std::string name = text(member(j, "name", path), path + "/name");
    if (name == "gbit-square") {
      models.push_back(ModelDescriptor::gbit_square());
    } else {
      std::vector<std::vector<double>> states, effects;
      const auto& st = array(member(j, "states", path), path + "/states");
      for (std::size_t i = 0; i < st.size(); ++i) states.push_back(real_vector(st[i], at(path + "/states", i)));
      const auto unit = real_vector(member(j, "unit", path), path + "/unit");
      if (const auto* ef = optional_member(j, "effects", path)) {
        for (std::size_t i = 0; i < array(*ef, path + "/effects").size(); ++i)
          effects.push_back(real_vector((*ef)[i], at(path + "/effects", i)));
      }
      models.push_back(ModelDescriptor::polytope(name, states, unit, effects));
    }
  } else {
    parse_fail(path + "/kind", "unknown model kind '" + kind + "'");
  }
  auto labels = default_labels(j, models.size());
  if (const auto* l = optional_member(j, "labels", path)) {
    labels.clear();
    for (std::size_t i = 0; i < array(*l, path + "/labels").size(); ++i)
      labels.push_back(text((*l)[i], at(path + "/labels", i)));
    if (labels.size() != models.size()) parse_fail(path + "/labels", "one label per factor");
  }
  System s;
  for (std::size_t i = 0; i < models.size(); ++i) s = tensor(s, System::atomic(labels[i], models[i]));
  return s;
}

Json system_to_json(const System& s) {
  Json j = Json::object();
  Json labels = Json::array();
  for (const auto& a : s.factors()) labels.push_back(a.label);
  if (s.is_quantum()) {
    j["kind"] = "quantum";
    j["dims"] = s.quantum_levels();
  } else if (s.factors().size() == 1 && s.is_classical()) {
    j["kind"] = "classical";
    j["outcomes"] = s.dim();
  } else if (s.factors().size() == 1) {
    const auto& m = s.factors()[0].model;
    j["kind"] = "polytope";
    j["name"] = m.name();
    if (!(m == ModelDescriptor::gbit_square())) {
      j["states"] = m.state_generators();
      j["unit"] = m.unit();
      j["effects"] = m.effect_generators();
    }
  } else {
    throw Error(ErrorKind::UnsupportedSystem, "system " + s.label() + " has no file representation");
  }
  j["labels"] = labels;
  return j;
}

// ---------------------------------------------------------------------------
// Symmetry

SymmetrySetup symmetry_from_json(const Json& j, const System& system, std::size_t outcomes,
                                 const std::string& path) {
  const auto& g = member(j, "group", path);
  const std::string gpath = path + "/group";
  std::optional<FiniteGroup> group;
  std::optional<OutcomeAction> tau;
  if (const auto* table = optional_member(g, "table", gpath)) {
    std::vector<std::vector<std::size_t>> t;
    for (std::size_t i = 0; i < array(*table, gpath + "/table").size(); ++i) {
      t.emplace_back();
      for (std::size_t k = 0; k < array((*table)[i], at(gpath + "/table", i)).size(); ++k)
        t.back().push_back(count((*table)[i][k], at(at(gpath + "/table", i), k)));
    }
    try {
      group = FiniteGroup(std::move(t));
    } catch (const Error& e) {
      throw Error(ErrorKind::ValidationError, std::string("symmetry: ") + e.what());
    }
  } else if (const auto* gens = optional_member(g, "generators", gpath)) {
    std::vector<Permutation> perms;
    for (std::size_t i = 0; i < array(*gens, gpath + "/generators").size(); ++i) {
      perms.emplace_back();
      for (std::size_t k = 0; k < array((*gens)[i], at(gpath + "/generators", i)).size(); ++k)
        perms.back().push_back(count((*gens)[i][k], at(at(gpath + "/generators", i), k)));
    }
    try {
      auto [grp, elements] = FiniteGroup::from_permutation_generators(perms);
      group = std::move(grp);
      tau = OutcomeAction{std::move(elements)};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::TooLarge) throw;
      throw Error(ErrorKind::ValidationError, std::string("symmetry: ") + e.what());
    }
  } else {
    const std::string name = text(member(g, "name", gpath), gpath + "/name");
    if (name == "trivial") {
      group = FiniteGroup::trivial();
    } else if (name == "cyclic" || name == "dihedral") {
      const auto n = count(member(g, "n", gpath), gpath + "/n");
      if (n == 0) throw Error(ErrorKind::ValidationError, "symmetry: group parameter must be positive");
      group = name == "cyclic" ? FiniteGroup::cyclic(n) : FiniteGroup::dihedral(n);
    } else {
      parse_fail(gpath + "/name", "unknown group '" + name + "'");
    }
  }

  if (const auto* perms = optional_member(j, "outcome_permutations", path)) {
    OutcomeAction t;
    const std::string ppath = path + "/outcome_permutations";
    for (std::size_t i = 0; i < array(*perms, ppath).size(); ++i) {
      t.perms.emplace_back();
      for (std::size_t k = 0; k < array((*perms)[i], at(ppath, i)).size(); ++k)
        t.perms.back().push_back(count((*perms)[i][k], at(at(ppath, i), k)));
    }
    tau = std::move(t);
  } else if (const auto* action = optional_member(j, "outcome_action", path)) {
    if (text(*action, path + "/outcome_action") != "cyclic-shift") {
      parse_fail(path + "/outcome_action", "only 'cyclic-shift' is predefined");
    }
    tau = cyclic_shift_action(group->order(), outcomes);
  }
  if (!tau) parse_fail(path + "/outcome_permutations", "missing");

  StateSpaceAction pibar;
  if (const auto* maps = optional_member(j, "state_maps", path)) {
    for (std::size_t i = 0; i < array(*maps, path + "/state_maps").size(); ++i)
      pibar.maps.push_back(real_matrix((*maps)[i], at(path + "/state_maps", i)));
  } else if (const auto* us = optional_member(j, "unitaries", path)) {
    if (!system.is_quantum() || system.factors().size() != 1) {
      throw Error(ErrorKind::ValidationError, "symmetry: unitaries need a single quantum system");
    }
    std::vector<ComplexMatrix> unitaries;
    std::vector<bool> anti;
    for (std::size_t i = 0; i < array(*us, path + "/unitaries").size(); ++i)
      unitaries.push_back(complex_matrix((*us)[i], at(path + "/unitaries", i)));
    if (const auto* a = optional_member(j, "antiunitary", path)) {
      for (std::size_t i = 0; i < array(*a, path + "/antiunitary").size(); ++i) {
        if (!(*a)[i].is_boolean()) parse_fail(at(path + "/antiunitary", i), "expected a boolean");
        anti.push_back((*a)[i].get<bool>());
      }
    }
    for (const auto& u : unitaries) {
      if (u.rows() != system.quantum_levels()[0] || !u.is_square()) {
        throw Error(ErrorKind::ValidationError, "symmetry: unitary has the wrong shape");
      }
    }
    pibar = state_action_from_unitaries(unitaries, anti);
  } else {
    parse_fail(path + "/state_maps", "missing");
  }

  SymmetrySetup setup{*group, *tau, std::move(pibar), system, ClassTag::All};
  if (const auto* p = optional_member(j, "preserves", path)) {
    setup.preserves = class_tag_from_string(text(*p, path + "/preserves"));
  }
  if (setup.tau.outcomes() != outcomes) {
    throw Error(ErrorKind::ValidationError, "symmetry: outcome permutations act on " +
                                                std::to_string(setup.tau.outcomes()) + " labels, expected " +
                                                std::to_string(outcomes));
  }
  const auto check = validate_setup(setup);
  if (!check.valid) {
    std::string msg = "symmetry: " + check.violation;
    if (check.witness) {
      msg += " (g=" + std::to_string(check.witness->first) + ", h=" + std::to_string(check.witness->second) + ")";
    }
    throw Error(ErrorKind::ValidationError, msg);
  }
  return setup;
}

Json symmetry_to_json(const SymmetrySetup& s) {
  Json j = Json::object();
  j["group"] = {{"table", s.group.table()}};
  j["outcome_permutations"] = s.tau.perms;
  Json maps = Json::array();
  for (const auto& p : s.pibar.maps) maps.push_back(to_json(p));
  j["state_maps"] = maps;
  j["preserves"] = std::string(to_string(s.preserves));
  return j;
}

template <typename F>
auto rethrow_validation(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ValidationError, context + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Json parse_json_text(std::string_view input) {
  try {
    return Json::parse(input);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, input.size()); ++i)
      if (input[i] == '\n') ++line;
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

DiscriminationInstance instance_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("", "expected an object");
  const auto version = count(member(j, "version", ""), "/version");
  if (version != static_cast<std::size_t>(kFormatVersion)) {
    parse_fail("/version", "unsupported version " + std::to_string(version));
  }
  DiscriminationInstance inst;
  const System system = rethrow_validation("model", [&] { return system_from_json(member(j, "model", ""), "/model"); });

  const auto& prep = member(j, "preparation", "");
  const auto priors = real_vector(member(prep, "priors", "/preparation"), "/preparation/priors");
  const auto& states = array(member(prep, "states", "/preparation"), "/preparation/states");
  if (priors.empty()) throw Error(ErrorKind::ValidationError, "preparation has no states");
  if (states.size() != priors.size()) {
    parse_fail("/preparation/states", "expected one state per prior");
  }
  inst.preparation.system = system;
  const auto u = unit_effect(system);
  for (std::size_t m = 0; m < priors.size(); ++m) {
    if (priors[m] < 0.0) throw Error(ErrorKind::ValidationError, "prior " + std::to_string(m) + " is negative");
    auto s = object_from_json(states[m], system, at("/preparation/states", m));
    if (priors[m] > 0.0 && std::abs(dot(u, s) - 1.0) > kNormalizationTolerance) {
      throw Error(ErrorKind::ValidationError, "state " + std::to_string(m) + " is not normalized");
    }
    for (auto& x : s) x *= priors[m];
    inst.preparation.states.push_back(std::move(s));
  }
  validate_preparation(inst.preparation);

  if (const auto* sym = optional_member(j, "symmetry", "")) {
    inst.symmetry = symmetry_from_json(*sym, system, priors.size(), "/symmetry");
  }
  if (const auto* cls = optional_member(j, "class", "")) {
    inst.restriction = rethrow_validation("class", [&] {
      return class_tag_from_string(text(member(*cls, "tag", "/class"), "/class/tag"));
    });
  }
  if (const auto* meas = optional_member(j, "measurement", "")) {
    inst.measurement = measurement_from_json(*meas, system);
    if (inst.measurement->outcomes() != priors.size()) {
      throw Error(ErrorKind::ValidationError, "measurement: outcome count differs from the preparation");
    }
    rethrow_validation("measurement", [&] {
      validate_measurement(*inst.measurement);
      return 0;
    });
  }
  if (const auto* solver = optional_member(j, "solver", "")) {
    if (const auto* t = optional_member(*solver, "tolerance", "/solver")) {
      inst.solver.tolerance = number(*t, "/solver/tolerance");
      if (!(inst.solver.tolerance > 0.0)) throw Error(ErrorKind::ValidationError, "solver tolerance must be positive");
    }
    if (const auto* n = optional_member(*solver, "max_iter", "/solver")) {
      inst.solver.max_iterations = count(*n, "/solver/max_iter");
    }
    if (const auto* s = optional_member(*solver, "seed", "/solver")) {
      if (!s->is_number_unsigned()) parse_fail("/solver/seed", "expected a nonnegative integer");
      inst.seed = s->get<std::uint64_t>();
    }
  }
  return inst;
}

DiscriminationInstance parse_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json_file(path));
}

Json instance_to_json(const DiscriminationInstance& inst) {
  Json j = Json::object();
  j["version"] = kFormatVersion;
  j["model"] = system_to_json(inst.preparation.system);
  const auto xi = inst.preparation.priors();
  Json states = Json::array();
  for (std::size_t m = 0; m < xi.size(); ++m) {
    auto s = inst.preparation.states[m];
    if (xi[m] != 0.0)
      for (auto& x : s) x /= xi[m];
    states.push_back(object_to_json(s, inst.preparation.system));
  }
  j["preparation"] = {{"priors", xi}, {"states", states}};
  if (inst.symmetry) j["symmetry"] = symmetry_to_json(*inst.symmetry);
  if (inst.restriction != ClassTag::All) j["class"] = {{"tag", std::string(to_string(inst.restriction))}};
  if (inst.measurement) j["measurement"] = measurement_to_json(*inst.measurement);
  Json solver = {{"tolerance", inst.solver.tolerance}, {"max_iter", inst.solver.max_iterations}};
  if (inst.seed) solver["seed"] = *inst.seed;
  j["solver"] = solver;
  return j;
}

namespace {

bool is_leafy(const Json& j) {
  if (j.is_object()) return false;
  if (!j.is_array()) return true;
  for (const auto& x : j)
    if (!is_leafy(x)) return false;
  return true;
}

void format_into(const Json& j, int indent, std::string& out) {
  constexpr std::size_t kInlineWidth = 96;
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (const auto& [key, value] : j.items()) {
      out += pad + Json(key).dump() + ": ";
      format_into(value, indent + 2, out);
      out += ++k < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
    return;
  }
  if (j.is_array() && !j.empty()) {
    if (is_leafy(j)) {
      std::string flat = j.dump();
      if (flat.size() <= kInlineWidth) {
        out += flat;
        return;
      }
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += pad;
      format_into(j[k], indent + 2, out);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
    return;
  }
  out += j.dump();
}

}  // namespace

std::string format_json(const Json& j) {
  std::string out;
  format_into(j, 0, out);
  return out + "\n";
}

std::string emit_instance(const DiscriminationInstance& inst) { return format_json(instance_to_json(inst)); }

Json measurement_to_json(const Measurement& e) {
  Json effects = Json::array();
  for (const auto& w : e.effects) effects.push_back(object_to_json(w, e.system));
  return {{"effects", effects}};
}

Measurement measurement_from_json(const Json& j, const System& system) {
  const auto& effects = array(member(j, "effects", "/measurement"), "/measurement/effects");
  Measurement e{system, {}};
  for (std::size_t m = 0; m < effects.size(); ++m)
    e.effects.push_back(object_from_json(effects[m], system, at("/measurement/effects", m)));
  return e;
}

std::string instance_hash(const DiscriminationInstance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : instance_to_json(inst).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

Json report_to_json(const SolveReport& r) {
  Json j = Json::object();
  j["method"] = r.method;
  j["value"] = r.value;
  j["iterations"] = r.iterations;
  if (r.dual_bound) j["dual_bound"] = *r.dual_bound;
  if (r.gap) j["gap"] = *r.gap;
  j["covariant"] = r.covariant;
  j["warnings"] = r.warnings;
  j["measurement"] = measurement_to_json(r.measurement);
  return j;
}

// ---------------------------------------------------------------------------
// Classes

std::pair<System, System> split_parties(const System& s) {
  if (s.factors().size() < 2) {
    throw Error(ErrorKind::SystemMismatch, "system " + s.label() + " is not bipartite");
  }
  const auto& atoms = s.factors();
  System a = System::atomic(atoms[0].label, atoms[0].model);
  System b;
  for (std::size_t i = 1; i < atoms.size(); ++i) b = tensor(b, System::atomic(atoms[i].label, atoms[i].model));
  return {a, b};
}

namespace {

Json effects_json(const std::vector<std::vector<double>>& effects, const System& s) {
  Json out = Json::array();
  for (const auto& w : effects) out.push_back(object_to_json(w, s));
  return out;
}

std::vector<std::vector<double>> effects_from(const Json& j, const System& s, const std::string& path) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(object_from_json(j[i], s, at(path, i)));
  return out;
}

}  // namespace

std::optional<ClassMeasurement> class_from_json(const Json& j, const DiscriminationInstance& inst) {
  const auto* cls = optional_member(j, "class", "");
  if (!cls) return std::nullopt;
  const std::string tag = text(member(*cls, "tag", "/class"), "/class/tag");
  const auto [a, b] = split_parties(inst.preparation.system);
  return rethrow_validation("class", [&, &a = a, &b = b]() -> std::optional<ClassMeasurement> {
    if (tag == "sequential") {
      Measurement first{a, effects_from(member(*cls, "first", "/class"), a, "/class/first")};
      std::vector<Measurement> branches;
      const auto& br = array(member(*cls, "branches", "/class"), "/class/branches");
      for (std::size_t i = 0; i < br.size(); ++i)
        branches.push_back(Measurement{b, effects_from(br[i], b, at("/class/branches", i))});
      return make_sequential(first, branches);
    }
    if (tag == "separable") {
      SeparableMeasurement sm{a, b, {}};
      const auto& terms = array(member(*cls, "terms", "/class"), "/class/terms");
      for (std::size_t m = 0; m < terms.size(); ++m) {
        sm.terms.emplace_back();
        const std::string mp = at("/class/terms", m);
        for (std::size_t k = 0; k < array(terms[m], mp).size(); ++k) {
          const std::string tp = at(mp, k);
          sm.terms.back().push_back({number(member(terms[m][k], "weight", tp), tp + "/weight"),
                                     object_from_json(member(terms[m][k], "alpha", tp), a, tp + "/alpha"),
                                     object_from_json(member(terms[m][k], "beta", tp), b, tp + "/beta")});
        }
      }
      validate_separable(sm);
      return sm;
    }
    if (tag == "locc") {
      LoccMeasurement lm{a, b, {}};
      const auto& steps = array(member(*cls, "steps", "/class"), "/class/steps");
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string sp = at("/class/steps", k);
        LoccStep step;
        const std::string party = text(member(steps[k], "party", sp), sp + "/party");
        if (party != "A" && party != "B") parse_fail(sp + "/party", "expected 'A' or 'B'");
        step.party = party == "A" ? Party::A : Party::B;
        const auto& maps = array(member(steps[k], "maps", sp), sp + "/maps");
        for (std::size_t i = 0; i < maps.size(); ++i) {
          step.maps.emplace_back();
          for (std::size_t o = 0; o < array(maps[i], at(sp + "/maps", i)).size(); ++o)
            step.maps.back().push_back(real_matrix(maps[i][o], at(at(sp + "/maps", i), o)));
        }
        if (const auto* msg = optional_member(steps[k], "message", sp)) step.message = system_from_json(*msg, sp + "/message");
        lm.steps.push_back(std::move(step));
      }
      validate_locc(lm);
      return lm;
    }
    class_tag_from_string(tag);
    return std::nullopt;
  });
}

Json class_to_json(const ClassMeasurement& x) {
  Json j = Json::object();
  j["tag"] = std::string(to_string(class_of(x)));
  if (const auto* s = std::get_if<SequentialMeasurement>(&x)) {
    j["first"] = effects_json(s->a.effects, s->a.system);
    Json br = Json::array();
    for (const auto& b : s->branches) br.push_back(effects_json(b.effects, b.system));
    j["branches"] = br;
  } else if (const auto* sm = std::get_if<SeparableMeasurement>(&x)) {
    Json terms = Json::array();
    for (const auto& list : sm->terms) {
      Json out = Json::array();
      for (const auto& t : list) {
        out.push_back({{"weight", t.weight},
                       {"alpha", object_to_json(t.alpha, sm->a_system)},
                       {"beta", object_to_json(t.beta, sm->b_system)}});
      }
      terms.push_back(out);
    }
    j["terms"] = terms;
  } else if (const auto* lm = std::get_if<LoccMeasurement>(&x)) {
    Json steps = Json::array();
    for (const auto& st : lm->steps) {
      Json maps = Json::array();
      for (const auto& row : st.maps) {
        Json r = Json::array();
        for (const auto& f : row) r.push_back(to_json(f));
        maps.push_back(r);
      }
      Json step = {{"party", st.party == Party::A ? "A" : "B"}, {"maps", maps}};
      if (st.message) step["message"] = system_to_json(*st.message);
      steps.push_back(step);
    }
    j["steps"] = steps;
  }
  return j;
}

}  // namespace optdiscrim
