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
#ifndef CHESTSEP_CLI_APP_H_
#define CHESTSEP_CLI_APP_H_

#include <exception>
#include <iosfwd>

namespace chestsep::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitNumerical = 4;

int ExitCodeFor(const std::exception& e);

// Parses argv, runs one subcommand and returns the exit code. Failures print
// a single JSON object on `err`.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chestsep::cli

#endif  // CHESTSEP_CLI_APP_H_
