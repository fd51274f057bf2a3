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

// JSON instance and report files ("version": 1). Complex numbers are
// [re, im] pairs, matrices are row-major nested arrays. Doubles are written
// in shortest round-trip form, so re-reading a file reproduces every number.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "optdiscrim/classes.hpp"
#include "optdiscrim/discrimination.hpp"

namespace optdiscrim {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// ParseError carrying "line N" for syntax errors.
Json parse_json_text(std::string_view text);
Json load_json_file(const std::filesystem::path& path);

// ParseError naming the offending field (as a JSON pointer) for structural
// problems; ValidationError naming the violated invariant otherwise.
DiscriminationInstance instance_from_json(const Json& j);
DiscriminationInstance parse_instance(const std::filesystem::path& path);
Json instance_to_json(const DiscriminationInstance& inst);
std::string emit_instance(const DiscriminationInstance& inst);
// Indented JSON with short numeric arrays kept on one line.
std::string format_json(const Json& j);

// Class representation of the "class" section. The bipartition is the first
// atom versus the rest of the system. nullopt when the section is absent or
// carries only a tag.
std::optional<ClassMeasurement> class_from_json(const Json& j, const DiscriminationInstance& inst);
Json class_to_json(const ClassMeasurement& x);
// The two parties of a bipartite system.
std::pair<System, System> split_parties(const System& s);

Json measurement_to_json(const Measurement& e);
Measurement measurement_from_json(const Json& j, const System& system);

// FNV-1a over the compact serialization of the instance.
std::string instance_hash(const DiscriminationInstance& inst);

Json report_to_json(const SolveReport& r);

}  // namespace optdiscrim
