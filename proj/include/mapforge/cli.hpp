/* Copyright 2026 The Mapforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <ostream>

namespace mapforge {

// Exit codes of the `mapforge` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUser = 1,
  kExitIo = 2,
  kExitSimulation = 3,
};

// Entire command line, argv[0] included. Never writes to std::cout/cerr.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mapforge
