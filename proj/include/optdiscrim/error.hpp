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

#include <stdexcept>
#include <string>
#include <string_view>

namespace optdiscrim {

enum class ErrorKind {
  NotHermitian,
  DomainError,
  DimensionMismatch,
  SystemMismatch,
  UnsupportedSystem,
  UnsupportedModel,
  NoConvergence,
  TooLarge,
  NotCovariant,
  InvalidSetup,
  PreconditionFailed,
  UnsupportedWiring,
  ClassMismatch,
  ParseError,
  ValidationError,
  UnknownScenario,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SystemMismatch: return "SystemMismatch";
    case ErrorKind::UnsupportedSystem: return "UnsupportedSystem";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotCovariant: return "NotCovariant";
    case ErrorKind::InvalidSetup: return "InvalidSetup";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::UnsupportedWiring: return "UnsupportedWiring";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
  }
  return "Unknown";
}

}  // namespace optdiscrim
