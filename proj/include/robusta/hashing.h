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

#ifndef ROBUSTA_HASHING_H_
#define ROBUSTA_HASHING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace robusta {

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// FNV-1a over bytes. Stable across platforms; used for tie-break seeds.
uint64_t Fnv1a64(std::string_view data, uint64_t basis = 0xcbf29ce484222325ULL);

uint64_t SplitMix64(uint64_t x);

}  // namespace robusta

#endif  // ROBUSTA_HASHING_H_
