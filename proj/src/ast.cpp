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
#include "mapforge/ast.hpp"

#include <fmt/format.h>

namespace mapforge {

std::string_view to_string(ProcKind kind) {
  switch (kind) {
    case ProcKind::GPU: return "GPU";
    case ProcKind::CPU: return "CPU";
    case ProcKind::OMP: return "OMP";
  }
  return "?";
}

std::string_view to_string(MemKind kind) {
  switch (kind) {
    case MemKind::SYSMEM: return "SYSMEM";
    case MemKind::FBMEM: return "FBMEM";
    case MemKind::ZCMEM: return "ZCMEM";
    case MemKind::RDMEM: return "RDMEM";
    case MemKind::SOCKMEM: return "SOCKMEM";
  }
  return "?";
}

std::optional<ProcKind> parse_proc_kind(std::string_view text) {
  for (ProcKind k : kAllProcKinds)
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::optional<MemKind> parse_mem_kind(std::string_view text) {
  for (MemKind k : kAllMemKinds)
    if (to_string(k) == text) return k;
  if (text == "SYMEM" || text == "SYSEM" || text == "SYSTEMEM" || text == "SYSTEM")
    return MemKind::SYSMEM;
  return std::nullopt;
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
  }
  return "?";
}

std::string_view to_string(AlignOp op) {
  switch (op) {
    case AlignOp::Eq: return "==";
    case AlignOp::Le: return "<=";
    case AlignOp::Ge: return ">=";
  }
  return "?";
}

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Task: return "Task";
    case ParamKind::Tuple: return "Tuple";
    case ParamKind::Int: return "int";
  }
  return "?";
}

SourcePos position_of(const Statement& stmt) {
  return std::visit([](const auto& s) { return s.pos; }, stmt);
}

const FuncDef* MapperProgram::find_function(std::string_view name) const {
  const FuncDef* found = nullptr;
  for (const auto& stmt : statements)
    if (const auto* def = std::get_if<FuncDef>(&stmt); def && def->name == name) found = def;
  return found;
}

std::vector<const FuncDef*> MapperProgram::functions() const {
  std::vector<const FuncDef*> out;
  for (const auto& stmt : statements)
    if (const auto* def = std::get_if<FuncDef>(&stmt)) out.push_back(def);
  return out;
}

std::vector<const AssignStmt*> MapperProgram::globals() const {
  std::vector<const AssignStmt*> out;
  for (const auto& stmt : statements)
    if (const auto* a = std::get_if<AssignStmt>(&stmt)) out.push_back(a);
  return out;
}

std::string format_diagnostic(const Diagnostic& diag, std::string_view file) {
  const char* severity = diag.severity == Diagnostic::Severity::Error ? "error" : "warning";
  if (diag.line <= 0) return fmt::format("{}: {}: {}", file, severity, diag.message);
  return fmt::format("{}:{}:{}: {}: {}", file, diag.line, diag.column, severity, diag.message);
}

std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += d.message;
  }
  return out;
}

}  // namespace mapforge
