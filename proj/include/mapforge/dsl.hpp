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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapforge/ast.hpp"

namespace mapforge {

struct ParseResult {
  std::optional<MapperProgram> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

// Parses a mapper program. Function bodies are brace-delimited; `#` starts a
// line comment. Stops at the first syntax error.
ParseResult parse(std::string_view source);

// Canonical text. parse(print(p)) == p; comments are not preserved.
std::string print(const MapperProgram& program);
std::string print(const Statement& stmt);
std::string print(const Expr& expr);

// Semantic checks. Function names may also resolve against `library` (the
// built-in index-mapping functions); pass nullptr to check in isolation.
std::vector<Diagnostic> validate(const MapperProgram& program,
                                 const MapperProgram* library = nullptr);

}  // namespace mapforge
