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

#ifndef ROBUSTA_SEED_TASK_H_
#define ROBUSTA_SEED_TASK_H_

#include <optional>
#include <string>

namespace robusta {

// One benchmark coding task.
struct SeedTask {
  std::string id;
  std::string prompt;
  std::string topic = "unknown";
  int complexity = 1;
  std::optional<std::string> reference_solution;
  std::optional<std::string> language_tag;
};

}  // namespace robusta

#endif  // ROBUSTA_SEED_TASK_H_
