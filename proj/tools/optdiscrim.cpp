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

// optdiscrim: command-line front end for instance files.
//
//   optdiscrim solve FILE [--solver lp|fixedpoint|bruteforce|covariant]
//   optdiscrim symmetrize FILE
//   optdiscrim verify-theorem FILE [--trials N]
//   optdiscrim classes check FILE
//   optdiscrim pt-witness FILE
//   optdiscrim gen SCENARIO
//
// Exit status: 0 success, 1 invalid input or failed check, 2 no convergence.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "optdiscrim/classes.hpp"
#include "optdiscrim/instance_io.hpp"
#include "optdiscrim/scenarios.hpp"
#include "optdiscrim/symmetry.hpp"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

using namespace optdiscrim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

struct Options {
  std::string file;
  std::string solver = "auto";
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iter;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string report = "json";
  std::string out;
  // gen
  std::string scenario;
  ScenarioParams params;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("optdiscrim");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::err);
  if (const char* env = std::getenv("OPTDISCRIM_LOG")) {
    const std::string level = env;
    if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (level != "error") {
      spdlog::warn("OPTDISCRIM_LOG={} not recognized; using error", level);
    }
  }
}

void render_table(const Json& j, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render_table(value, name, os);
    } else if (value.is_array() && key == "effects") {
      os << std::left << std::setw(32) << name << value.size() << " effects\n";
    } else if (value.is_number_float()) {
      std::ostringstream num;
      num << std::setprecision(12) << value.get<double>();
      os << std::left << std::setw(32) << name << num.str() << "\n";
    } else {
      os << std::left << std::setw(32) << name << (value.is_string() ? value.get<std::string>() : value.dump())
         << "\n";
    }
  }
}

void write_output(const Options& opt, const Json& report) {
  std::ostringstream body;
  if (opt.report == "table") {
    render_table(report, "", body);
  } else {
    body << format_json(report);
  }
  if (opt.out.empty()) {
    std::cout << body.str();
    return;
  }
  std::ofstream os(opt.out, std::ios::binary);
  if (!os) throw Error(ErrorKind::ParseError, "cannot write " + opt.out);
  os << body.str();
  spdlog::info("wrote {}", opt.out);
}

DiscriminationInstance load(const Options& opt) {
  spdlog::debug("parsing {}", opt.file);
  auto inst = parse_instance(opt.file);
  if (opt.tolerance) inst.solver.tolerance = *opt.tolerance;
  if (opt.max_iter) inst.solver.max_iterations = *opt.max_iter;
  if (opt.seed) inst.seed = *opt.seed;
  spdlog::info("instance {} on {} with {} states", instance_hash(inst), inst.preparation.system.label(),
               inst.preparation.outcomes());
  return inst;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Json covariance_flags(const DiscriminationInstance& inst, const Measurement& e) {
  if (!inst.symmetry) return nullptr;
  return {{"preparation", is_covariant_preparation(inst.preparation, *inst.symmetry)},
          {"measurement", is_covariant_measurement(e, *inst.symmetry)}};
}

Json solve_report(const DiscriminationInstance& inst, const SolveReport& r) {
  Json j = {{"command", "solve"}, {"instance", instance_hash(inst)}};
  j.update(report_to_json(r));
  j["covariance"] = covariance_flags(inst, r.measurement);
  return j;
}

int run_solve(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = load(opt);
  const auto kind = solver_kind_from_string(opt.solver);
  try {
    const auto r = solve(inst, kind);
    spdlog::info("{}: P_S = {:.12f} after {} iterations", r.method, r.value, r.iterations);
    auto j = solve_report(inst, r);
    j["converged"] = true;
    j["elapsed_ms"] = elapsed_ms(start);
    write_output(opt, j);
    return kExitOk;
  } catch (const NoConvergence& e) {
    spdlog::error("{}", e.what());
    auto j = solve_report(inst, e.best());
    j["converged"] = false;
    j["elapsed_ms"] = elapsed_ms(start);
    write_output(opt, j);
    return kExitNoConvergence;
  }
}

const SymmetrySetup& require_symmetry(const DiscriminationInstance& inst) {
  if (!inst.symmetry) throw Error(ErrorKind::ValidationError, "instance has no symmetry section");
  return *inst.symmetry;
}

int run_symmetrize(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = load(opt);
  const auto& setup = require_symmetry(inst);
  Measurement e;
  if (inst.measurement) {
    e = *inst.measurement;
  } else {
    Rng rng(inst.seed.value_or(0));
    e = random_measurement(inst.preparation.system, inst.preparation.outcomes(), rng);
    spdlog::info("no measurement section; symmetrizing a random measurement");
  }
  const auto sym = symmetrize(e, setup);
  Json j = {{"command", "symmetrize"},
            {"instance", instance_hash(inst)},
            {"value_before", success_probability(e, inst.preparation)},
            {"value_after", success_probability(sym, inst.preparation)},
            {"covariance", covariance_flags(inst, sym)},
            {"measurement", measurement_to_json(sym)},
            {"elapsed_ms", elapsed_ms(start)}};
  write_output(opt, j);
  return kExitOk;
}

int run_verify(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = load(opt);
  const auto& setup = require_symmetry(inst);
  const auto r = verify_symmetry_theorem(inst.preparation, setup, opt.trials, inst.seed.value_or(0), inst.solver);
  for (const auto& c : r.counterexamples) spdlog::error("counterexample: {}", c);
  Json j = {{"command", "verify-theorem"},
            {"instance", instance_hash(inst)},
            {"trials", r.trials},
            {"max_value_deviation", r.max_value_deviation},
            {"max_covariance_residual", r.max_covariance_residual},
            {"full_optimum", r.full_optimum},
            {"covariant_optimum", r.covariant_optimum},
            {"counterexamples", r.counterexamples},
            {"passed", r.passed()},
            {"elapsed_ms", elapsed_ms(start)}};
  write_output(opt, j);
  return r.passed() ? kExitOk : kExitInvalid;
}

Json witness_json(const std::optional<PTWitnessReport>& w) {
  if (!w) return {{"found", false}};
  return {{"found", true},
          {"outcome", w->outcome},
          {"unperturbed_pairing", w->unperturbed_pairing},
          {"pairing", w->pairing},
          {"violation", w->violation},
          {"determinism_residual", w->determinism_residual},
          {"positivity_margin", w->positivity_margin},
          {"block_positivity", w->block_positivity},
          {"fbar", [&] {
             Json rows = Json::array();
             for (std::size_t i = 0; i < w->fbar.matrix().rows(); ++i) rows.push_back(w->fbar.matrix().row_vector(i));
             return rows;
           }()}};
}

// Sampled necessary check of the PT property: the least residual over random
// deterministic positive maps on A.
double sampled_pt_residual(const Measurement& e, const System& a, const System& b, std::uint64_t seed) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kPositivitySamples; ++k) {
    worst = std::min(worst, pt_residual(e, a, b, random_positive_map(a, rng)));
  }
  return worst;
}

std::optional<PTWitnessReport> try_witness(const Measurement& e, const System& a, const System& b) {
  try {
    return pt_witness(e, a, b);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::UnsupportedSystem) throw;
    spdlog::info("witness search skipped: {}", err.what());
    return std::nullopt;
  }
}

int run_classes_check(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = load(opt);
  const auto [a, b] = split_parties(inst.preparation.system);
  const auto json = load_json_file(opt.file);
  const auto cls = class_from_json(json, inst);

  Measurement e;
  Json j = {{"command", "classes check"}, {"instance", instance_hash(inst)}};
  bool ok = true;
  if (cls) {
    e = effects_of(*cls);
    j["class"] = std::string(to_string(class_of(*cls)));
    std::optional<SeparableMeasurement> sep;
    if (const auto* s = std::get_if<SequentialMeasurement>(&*cls)) {
      const auto lm = sequential_to_locc(*s);
      j["locc_reconstruction_error"] = max_abs_diff(lm.composite().matrix(), e.matrix());
      sep = seq_to_separable(*s);
    } else if (const auto* l = std::get_if<LoccMeasurement>(&*cls)) {
      sep = locc_to_separable(*l);
    } else if (const auto* p = std::get_if<SeparableMeasurement>(&*cls)) {
      sep = *p;
    }
    if (sep) {
      const double err = max_abs_diff(sep->composite().matrix(), e.matrix());
      j["separable_reconstruction_error"] = err;
      ok = ok && err <= 1e-12;
    }
    if (inst.measurement) {
      const double err = max_abs_diff(inst.measurement->matrix(), e.matrix());
      j["measurement_mismatch"] = err;
      ok = ok && err <= kClassTolerance;
    }
  } else if (inst.measurement) {
    e = *inst.measurement;
    j["class"] = std::string(to_string(ClassTag::All));
  } else {
    throw Error(ErrorKind::ValidationError, "instance has neither a class nor a measurement section");
  }
  j["valid_measurement"] = is_valid_measurement(e);
  const double residual = sampled_pt_residual(e, a, b, inst.seed.value_or(kPositivitySeed));
  j["pt_samples"] = kPositivitySamples;
  j["pt_min_residual"] = residual;
  j["pt_sampled_passed"] = residual >= -kClassTolerance;
  const auto w = try_witness(e, a, b);
  j["pt_witness"] = witness_json(w);
  // Separable measurements always have PT; a witness for one means bad input.
  if (cls && class_of(*cls) != ClassTag::All && (w || residual < -kClassTolerance)) ok = false;
  j["passed"] = ok;
  j["value"] = success_probability(e, inst.preparation);
  j["elapsed_ms"] = elapsed_ms(start);
  write_output(opt, j);
  return ok ? kExitOk : kExitInvalid;
}

int run_pt_witness(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto inst = load(opt);
  const auto [a, b] = split_parties(inst.preparation.system);
  Measurement e;
  if (inst.measurement) {
    e = *inst.measurement;
  } else if (const auto cls = class_from_json(load_json_file(opt.file), inst)) {
    e = effects_of(*cls);
  } else {
    throw Error(ErrorKind::ValidationError, "instance has no measurement section");
  }
  const auto w = pt_witness(e, a, b);
  Json j = {{"command", "pt-witness"}, {"instance", instance_hash(inst)}};
  j.update(witness_json(w));
  if (w) {
    j["pt_check_passed"] = check_pt(e, a, b, w->fbar);
    spdlog::info("outcome {} violates PT: least eigenvalue {:.6f}", w->outcome, w->violation);
  } else {
    spdlog::info("no PT violation found");
  }
  j["elapsed_ms"] = elapsed_ms(start);
  write_output(opt, j);
  return kExitOk;
}

// Accepts both `name --n 5` and `name(5)` spellings.
std::string parse_scenario_spec(const std::string& spec, ScenarioParams& params) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return spec;
  if (spec.back() != ')') throw Error(ErrorKind::UnknownScenario, "malformed scenario '" + spec + "'");
  const std::string name = spec.substr(0, open);
  std::vector<std::uint64_t> args;
  std::stringstream ss(spec.substr(open + 1, spec.size() - open - 2));
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      args.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::UnknownScenario, "bad scenario parameter '" + item + "'");
    }
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw Error(ErrorKind::UnknownScenario, name + " takes " + std::to_string(n) + " parameters");
  };
  if (name == "symmetric-pure" || name == "classical-cyclic") {
    need(1);
    params.n = args[0];
  } else if (name == "classical-random") {
    need(3);
    params.outcomes = args[0];
    params.dim = args[1];
    params.seed = args[2];
  } else if (name == "gbit-random") {
    need(2);
    params.outcomes = args[0];
    params.seed = args[1];
  } else {
    need(0);
  }
  return name;
}

int run_gen(Options opt) {
  const auto name = parse_scenario_spec(opt.scenario, opt.params);
  const auto inst = make_scenario(name, opt.params);
  const auto text = emit_instance(inst);
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(opt.out, std::ios::binary);
    if (!os) throw Error(ErrorKind::ParseError, "cannot write " + opt.out);
    os << text;
  }
  spdlog::info("generated {} ({})", name, instance_hash(inst));
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("file", opt.file, "Instance file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tolerance", opt.tolerance, "Solver tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "Iteration cap for the quantum solver");
  cmd->add_option("--seed", opt.seed, "Random seed");
  cmd->add_option("--report", opt.report, "Report format")->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--out", opt.out, "Write the report to PATH");
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Minimum-error state discrimination in operational probabilistic theories"};
  app.require_subcommand(1);
  Options opt;

  auto* solve = app.add_subcommand("solve", "Find a minimum-error measurement");
  add_common(solve, opt);
  solve->add_option("--solver", opt.solver, "Solver")
      ->check(CLI::IsMember({"auto", "lp", "fixedpoint", "bruteforce", "covariant"}));

  auto* symmetrize_cmd = app.add_subcommand("symmetrize", "Group-average the instance measurement");
  add_common(symmetrize_cmd, opt);

  auto* verify = app.add_subcommand("verify-theorem", "Check the symmetrization theorem on random measurements");
  add_common(verify, opt);
  verify->add_option("--trials", opt.trials, "Number of random measurements");

  auto* classes = app.add_subcommand("classes", "Measurement-class tools");
  classes->require_subcommand(1);
  auto* check = classes->add_subcommand("check", "Convert along the class hierarchy and test PT");
  add_common(check, opt);

  auto* witness = app.add_subcommand("pt-witness", "Construct a PT violation for a bipartite measurement");
  add_common(witness, opt);

  auto* gen = app.add_subcommand("gen", "Emit a canonical scenario instance");
  gen->add_option("scenario", opt.scenario, "Scenario name")->required();
  gen->add_option("--n", opt.params.n, "Number of states (symmetric-pure, classical-cyclic)");
  gen->add_option("--outcomes", opt.params.outcomes, "Number of states (random scenarios)");
  gen->add_option("--dim", opt.params.dim, "Classical dimension");
  gen->add_option("--seed", opt.params.seed, "Seed for random scenarios");
  gen->add_option("--out", opt.out, "Write the instance to PATH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (symmetrize_cmd->parsed()) return run_symmetrize(opt);
    if (verify->parsed()) return run_verify(opt);
    if (check->parsed()) return run_classes_check(opt);
    if (witness->parsed()) return run_pt_witness(opt);
    if (gen->parsed()) return run_gen(opt);
  } catch (const NoConvergence& e) {
    spdlog::error("{}", e.what());
    return kExitNoConvergence;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
