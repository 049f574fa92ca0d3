// Copyright 2026 The chestsep Authors
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
#ifndef CHESTSEP_COMMON_ERRORS_H_
#define CHESTSEP_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace chestsep {

// Malformed arguments: wrong shapes, out-of-range parameters, short clips.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs that are individually valid but do not belong together, e.g. a
// dictionary trained under a different STFT configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A score that has no finite definition (zero-energy target).
class UndefinedScore : public std::domain_error {
 public:
  explicit UndefinedScore(const std::string& what) : std::domain_error(what) {}
};

// Non-finite values produced during optimisation.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chestsep

#endif  // CHESTSEP_COMMON_ERRORS_H_
