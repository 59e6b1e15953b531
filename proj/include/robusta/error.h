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

#ifndef ROBUSTA_ERROR_H_
#define ROBUSTA_ERROR_H_

#include <stdexcept>
#include <string>

namespace robusta {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: files, datasets, trees, CLI values.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A model endpoint failed. Retriable errors were already retried.
class ModelError : public Error {
 public:
  ModelError(const std::string& what, bool retriable)
      : Error(what), retriable_(retriable) {}
  bool retriable() const { return retriable_; }

 private:
  bool retriable_;
};

// The remote semantic scorer could not produce a score.
class MetricUnavailableError : public Error {
 public:
  MetricUnavailableError(const std::string& what, bool retriable)
      : Error(what), retriable_(retriable) {}
  bool retriable() const { return retriable_; }

 private:
  bool retriable_;
};

// An external oracle command exited with >= 2 or timed out.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace robusta

#endif  // ROBUSTA_ERROR_H_
