// Copyright 2026 The Robusta Authors
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

// Failure predicates: is the mutant's output different from the seed's?

#ifndef ROBUSTA_ORACLES_H_
#define ROBUSTA_ORACLES_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace robusta {

enum class OracleKind { kExact, kNormalized, kExternalCommand };

struct OracleSpec {
  OracleKind kind = OracleKind::kNormalized;
  // Shell command with {A} and {B} placeholders; exit 0 = equivalent,
  // 1 = different, anything else = oracle error.
  std::optional<std::string> command_template;
  std::chrono::seconds timeout{60};
};

std::string_view OracleKindName(OracleKind kind);
OracleKind ParseOracleKind(std::string_view name);

// Throws PreconditionError for an external oracle without both placeholders.
void Validate(const OracleSpec& spec);

// Drops // # and /* */ comments, trims each line, collapses whitespace runs,
// and removes blank lines.
std::string NormalizeCode(std::string_view code);

// True when the outputs behave differently. Throws OracleError when an
// external command exits with >= 2, is killed, or times out.
bool Fail(const OracleSpec& oracle, std::string_view out_seed,
          std::string_view out_mutant);

}  // namespace robusta

#endif  // ROBUSTA_ORACLES_H_
