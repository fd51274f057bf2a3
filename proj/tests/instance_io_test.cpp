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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "gtest/gtest.h"
#include "optdiscrim/scenarios.hpp"
#include "optdiscrim/symmetry.hpp"
#include "test_util.hpp"

using namespace optdiscrim;

namespace {

const std::filesystem::path kScenarios = OPTDISCRIM_SCENARIO_DIR;

template <typename F>
std::pair<ErrorKind, std::string> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.kind(), e.what()};
  }
  ADD_FAILURE() << "expected an error";
  return {ErrorKind::ValidationError, ""};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// The scale-and-normalize step of the format costs at most a few ulps.
constexpr double kRoundTrip = 1e-15;

void expect_same_instance(const DiscriminationInstance& a, const DiscriminationInstance& b) {
  ASSERT_EQ(a.preparation.system, b.preparation.system);
  ASSERT_EQ(a.preparation.outcomes(), b.preparation.outcomes());
  EXPECT_LE(max_abs_diff(a.preparation.matrix(), b.preparation.matrix()), kRoundTrip);
  ASSERT_EQ(a.symmetry.has_value(), b.symmetry.has_value());
  if (a.symmetry) {
    EXPECT_EQ(a.symmetry->group, b.symmetry->group);
    EXPECT_EQ(a.symmetry->tau, b.symmetry->tau);
    EXPECT_EQ(a.symmetry->pibar, b.symmetry->pibar);
    EXPECT_EQ(a.symmetry->preserves, b.symmetry->preserves);
  }
  ASSERT_EQ(a.measurement.has_value(), b.measurement.has_value());
  if (a.measurement) {
    EXPECT_LE(max_abs_diff(a.measurement->matrix(), b.measurement->matrix()), kRoundTrip);
  }
  EXPECT_EQ(a.restriction, b.restriction);
  EXPECT_EQ(a.solver.tolerance, b.solver.tolerance);
  EXPECT_EQ(a.solver.max_iterations, b.solver.max_iterations);
  EXPECT_EQ(a.seed, b.seed);
}

Json minimal_classical() {
  return parse_json_text(R"({
    "version": 1,
    "model": {"kind": "classical", "outcomes": 2},
    "preparation": {"priors": [0.5, 0.5], "states": [[0.8, 0.2], [0.3, 0.7]]}
  })");
}

}  // namespace

TEST(instance_io, shipped_trine_fixture) {
  const auto inst = parse_instance(kScenarios / "trine.json");
  EXPECT_TRUE(inst.preparation.system.is_quantum());
  EXPECT_EQ(inst.preparation.system.quantum_levels(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(inst.preparation.outcomes(), 3u);
  ASSERT_TRUE(inst.symmetry.has_value());
  EXPECT_EQ(inst.symmetry->group.order(), 3u);
  EXPECT_TRUE(is_covariant_preparation(inst.preparation, *inst.symmetry));
}

TEST(instance_io, shipped_fixtures_validate) {
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    SCOPED_TRACE(entry.path().string());
    const auto inst = parse_instance(entry.path());
    validate_preparation(inst.preparation);
    if (inst.symmetry) {
      EXPECT_TRUE(validate_setup(*inst.symmetry).valid);
    }
  }
}

TEST(instance_io, preparation_not_normalized) {
  auto j = minimal_classical();
  j["preparation"]["priors"] = {0.45, 0.45};
  const auto [kind, what] = error_of([&] { instance_from_json(j); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "preparation not normalized")) << what;
}

TEST(instance_io, empty_and_malformed_text) {
  EXPECT_EQ(error_of([] { parse_json_text(""); }).first, ErrorKind::ParseError);
  const auto [kind, what] = error_of([] { parse_json_text("{\n  \"version\": 1,\n  \"model\": [1, 2,]\n}\n"); });
  EXPECT_EQ(kind, ErrorKind::ParseError);
  EXPECT_TRUE(contains(what, "line 3")) << what;
  EXPECT_EQ(error_of([] { parse_instance("/nonexistent/instance.json"); }).first, ErrorKind::ParseError);
}

TEST(instance_io, field_anchored_errors) {
  auto j = minimal_classical();
  j["preparation"]["states"][1][0] = "x";
  auto [kind, what] = error_of([&] { instance_from_json(j); });
  EXPECT_EQ(kind, ErrorKind::ParseError);
  EXPECT_TRUE(contains(what, "/preparation/states/1/0")) << what;

  j = minimal_classical();
  j.erase("model");
  std::tie(kind, what) = error_of([&] { instance_from_json(j); });
  EXPECT_TRUE(contains(what, "/model")) << what;

  j = minimal_classical();
  j["version"] = 2;
  std::tie(kind, what) = error_of([&] { instance_from_json(j); });
  EXPECT_TRUE(contains(what, "/version")) << what;

  j = minimal_classical();
  j["model"]["kind"] = "boxworld";
  EXPECT_EQ(error_of([&] { instance_from_json(j); }).first, ErrorKind::ParseError);
}

TEST(instance_io, validation_errors_name_the_invariant) {
  auto j = minimal_classical();
  j["preparation"]["states"][0] = {0.9, 0.2};
  auto [kind, what] = error_of([&] { instance_from_json(j); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "not normalized")) << what;

  j = minimal_classical();
  j["preparation"]["states"][0] = {1.2, -0.2};
  EXPECT_EQ(error_of([&] { instance_from_json(j); }).first, ErrorKind::ValidationError);

  j = minimal_classical();
  j["symmetry"] = parse_json_text(R"({"group": {"table": [[0, 1], [1, 1]]},
      "outcome_permutations": [[0, 1], [1, 0]], "state_maps": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]})");
  std::tie(kind, what) = error_of([&] { instance_from_json(j); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "symmetry")) << what;

  j = minimal_classical();
  j["measurement"] = parse_json_text(R"({"effects": [[1, 0.5], [0, 0.4]]})");
  std::tie(kind, what) = error_of([&] { instance_from_json(j); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "measurement")) << what;

  const auto q = parse_json_text(R"({"version": 1, "model": {"kind": "quantum", "dims": [2]},
      "preparation": {"priors": [1.0], "states": [[[[0.5, 0], [0.5, 0]], [[0.1, 0], [0.5, 0]]]]}})");
  std::tie(kind, what) = error_of([&] { instance_from_json(q); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "Hermitian")) << what;
}

TEST(instance_io, named_symmetry_sections) {
  // Helstrom-style pair symmetric under the swap, using named group and outcome action.
  auto j = parse_json_text(R"({
    "version": 1,
    "model": {"kind": "classical", "outcomes": 2},
    "preparation": {"priors": [0.5, 0.5], "states": [[0.8, 0.2], [0.2, 0.8]]},
    "symmetry": {"group": {"name": "cyclic", "n": 2}, "outcome_action": "cyclic-shift",
                 "state_maps": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], "preserves": "separable"}
  })");
  const auto inst = instance_from_json(j);
  ASSERT_TRUE(inst.symmetry.has_value());
  EXPECT_EQ(inst.symmetry->preserves, ClassTag::Separable);
  EXPECT_TRUE(is_covariant_preparation(inst.preparation, *inst.symmetry));

  j["symmetry"] = parse_json_text(R"({"group": {"generators": [[1, 0]]},
      "state_maps": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]})");
  EXPECT_EQ(instance_from_json(j).symmetry->group.order(), 2u);

  // Quantum rotations given as unitaries.
  const auto trine = trine_scenario();
  auto tj = instance_to_json(trine);
  tj["symmetry"] = Json::object();
  tj["symmetry"]["group"] = {{"name", "cyclic"}, {"n", 3}};
  tj["symmetry"]["outcome_action"] = "cyclic-shift";
  tj["symmetry"]["unitaries"] = Json::array();
  for (int k = 0; k < 3; ++k) {
    const auto u = bloch_z_rotation(2.0 * std::numbers::pi * k / 3.0);
    Json rows = Json::array();
    for (std::size_t i = 0; i < 2; ++i) {
      Json row = Json::array();
      for (std::size_t l = 0; l < 2; ++l) row.push_back({u(i, l).real(), u(i, l).imag()});
      rows.push_back(row);
    }
    tj["symmetry"]["unitaries"].push_back(rows);
  }
  const auto parsed = instance_from_json(tj);
  EXPECT_TRUE(is_covariant_preparation(parsed.preparation, *parsed.symmetry));
}

TEST(instance_io, round_trip_every_scenario) {
  for (const auto& name : scenario_names()) {
    SCOPED_TRACE(name);
    auto inst = make_scenario(name);
    inst.seed = 42;
    inst.solver.tolerance = 1e-9;
    const auto text = emit_instance(inst);
    const auto back = instance_from_json(parse_json_text(text));
    expect_same_instance(inst, back);
    // Once in file form the text is a fixed point.
    const auto again = instance_from_json(parse_json_text(emit_instance(back)));
    expect_same_instance(back, again);
  }
}

TEST(instance_io, round_trip_is_exact_for_exact_data) {
  const auto inst = instance_from_json(minimal_classical());
  const auto back = instance_from_json(parse_json_text(emit_instance(inst)));
  EXPECT_EQ(back.preparation, inst.preparation);
  EXPECT_EQ(emit_instance(back), emit_instance(inst));
}

TEST(instance_io, custom_polytope_and_labels) {
  const auto j = parse_json_text(R"({
    "version": 1,
    "model": {"kind": "polytope", "name": "triangle",
              "states": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "unit": [1, 1, 1]},
    "preparation": {"priors": [0.5, 0.5], "states": [[1, 0, 0], [0, 0.5, 0.5]]}
  })");
  const auto inst = instance_from_json(j);
  EXPECT_EQ(inst.preparation.system.factors()[0].label, "P");
  EXPECT_NEAR(solve(inst).value, 1.0, 1e-12);
  expect_same_instance(inst, instance_from_json(parse_json_text(emit_instance(inst))));

  const auto bell = instance_from_json(instance_to_json(bell_scenario()));
  EXPECT_EQ(bell.preparation.system, two_qubits());
  const auto [a, b] = split_parties(bell.preparation.system);
  EXPECT_EQ(a, System::quantum(2, "A"));
  EXPECT_EQ(b, System::quantum(2, "B"));
}

TEST(instance_io, classical_random_is_reproducible) {
  EXPECT_EQ(emit_instance(classical_random_scenario(3, 4, 7)), emit_instance(classical_random_scenario(3, 4, 7)));
  EXPECT_NE(emit_instance(classical_random_scenario(3, 4, 7)), emit_instance(classical_random_scenario(3, 4, 8)));
  EXPECT_EQ(error_of([] { make_scenario("no-such-scenario"); }).first, ErrorKind::UnknownScenario);
}

TEST(instance_io, hash_is_stable_and_discriminating) {
  const auto a = instance_hash(trine_scenario());
  EXPECT_EQ(a, instance_hash(trine_scenario()));
  EXPECT_NE(a, instance_hash(helstrom_scenario()));
  EXPECT_EQ(a.rfind("fnv1a64:", 0), 0u);
}

TEST(instance_io, reports_are_self_validating) {
  for (const auto& name : {"helstrom", "trine", "gbit-square", "classical-random"}) {
    SCOPED_TRACE(name);
    const auto inst = make_scenario(name);
    const auto report = report_to_json(solve(inst));
    // Round-trip through text as a consumer would.
    const auto j = parse_json_text(format_json(report));
    const auto e = measurement_from_json(j["measurement"], inst.preparation.system);
    EXPECT_NEAR(success_probability(e, inst.preparation), j["value"].get<double>(), 1e-9);
    EXPECT_TRUE(is_valid_measurement(e));
  }
}

TEST(instance_io, class_sections_round_trip) {
  Rng rng(9);
  const auto inst = bell_scenario();
  const auto [a, b] = split_parties(inst.preparation.system);
  const std::vector<ClassMeasurement> members{random_sequential(a, b, 2, 4, rng),
                                              random_two_round_locc(a, b, 4, rng),
                                              seq_to_separable(random_sequential(a, b, 2, 4, rng))};
  for (const auto& x : members) {
    auto j = instance_to_json(inst);
    j["class"] = class_to_json(x);
    const auto parsed = instance_from_json(j);
    EXPECT_EQ(parsed.restriction, class_of(x));
    const auto back = class_from_json(j, parsed);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(class_of(*back), class_of(x));
    EXPECT_LE(max_abs_diff(effects_of(*back).matrix(), effects_of(x).matrix()), 1e-15);
  }

  auto j = instance_to_json(inst);
  auto locc = class_to_json(random_two_round_locc(a, b, 4, rng));
  locc["steps"][0]["message"] = {{"kind", "quantum"}, {"dims", {2}}};
  j["class"] = locc;
  const auto [kind, what] = error_of([&] { class_from_json(j, instance_from_json(j)); });
  EXPECT_EQ(kind, ErrorKind::ValidationError);
  EXPECT_TRUE(contains(what, "UnsupportedWiring")) << what;
}

TEST(instance_io, format_json_is_valid_json) {
  const auto j = instance_to_json(gbit_square_scenario());
  EXPECT_EQ(parse_json_text(format_json(j)), j);
}
