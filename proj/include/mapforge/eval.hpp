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

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "mapforge/ast.hpp"
#include "mapforge/machine.hpp"

namespace mapforge {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskHandle;
using TaskPtr = std::shared_ptr<const TaskHandle>;

struct TaskHandle {
  std::string task_name;
  Extents ipoint;
  Extents ispace;
  TaskPtr parent;
  // Where this task instance ran; needed by `task.processor(space)`.
  std::optional<ProcKind> proc_kind;
  std::optional<ProcIndex> processor;
};

struct ProcValue {
  ProcKind kind = ProcKind::GPU;
  ProcIndex index;
  bool operator==(const ProcValue&) const = default;
};

using Value = std::variant<std::int64_t, Extents, ProcessorSpace, ProcValue, TaskPtr>;

std::string_view type_name(const Value& v);

// The bindings of one program: its functions and its eagerly evaluated
// top-level assignments. A binding whose evaluation failed (for example
// Machine(OMP) on a machine without OMP) only errors when it is used.
// Function lookup falls back to `fallback` (the built-in library), whose
// functions then run against the library's own bindings.
class Scope {
 public:
  Scope(const MapperProgram& program, const MachineModel& machine,
        const Scope* fallback = nullptr);

  const MachineModel& machine() const { return *machine_; }
  // The function and the scope it must run in, or {nullptr, nullptr}.
  std::pair<const FuncDef*, const Scope*> find_function(std::string_view name) const;
  // Throws EvalError("<name> not found") or the binding's stored error.
  const Value& global(const std::string& name) const;
  bool has_global(const std::string& name) const { return globals_.count(name) > 0; }

 private:
  const MapperProgram* program_;
  const MachineModel* machine_;
  const Scope* fallback_;
  std::map<std::string, std::variant<Value, std::string>, std::less<>> globals_;
};

using Locals = std::map<std::string, Value, std::less<>>;

Value eval_expr(const Expr& e, const Scope& scope, const Locals& locals = {});
Value call_function(const FuncDef& f, std::vector<Value> args, const Scope& scope);

// Runs an index-mapping function for one task instance. Accepts both the
// (Task task) and the (Tuple ipoint, Tuple ispace) calling conventions.
ProcValue eval_mapping(const FuncDef& f, const TaskPtr& task, const Scope& scope);

// Parsed definitions of the common index-mapping functions and the matrix
// multiplication helpers, shipped in corpus/builtins.
const MapperProgram& builtin_library();
std::string_view builtin_library_source();

}  // namespace mapforge
