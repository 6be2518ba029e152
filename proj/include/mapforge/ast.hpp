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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mapforge {

enum class ProcKind { GPU, CPU, OMP };
enum class MemKind { SYSMEM, FBMEM, ZCMEM, RDMEM, SOCKMEM };

inline constexpr ProcKind kAllProcKinds[] = {ProcKind::GPU, ProcKind::CPU, ProcKind::OMP};
inline constexpr MemKind kAllMemKinds[] = {MemKind::SYSMEM, MemKind::FBMEM, MemKind::ZCMEM,
                                           MemKind::RDMEM, MemKind::SOCKMEM};

std::string_view to_string(ProcKind kind);
std::string_view to_string(MemKind kind);
std::optional<ProcKind> parse_proc_kind(std::string_view text);
// Accepts the canonical names plus the SYSMEM spellings found in mapper
// corpora (SYMEM, SYSEM, SYSTEMEM, SYSTEM).
std::optional<MemKind> parse_mem_kind(std::string_view text);

// Source positions never participate in structural equality: a program and
// its pretty-printed re-parse compare equal.
struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

// Owning pointer with value semantics, for recursive AST nodes.
template <typename T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T& operator*() { return *ptr_; }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) {
    if (!a.ptr_ || !b.ptr_) return !a.ptr_ && !b.ptr_;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::unique_ptr<T> ptr_;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;

struct VarRef {
  std::string name;
  bool operator==(const VarRef&) const = default;
};

struct IntLit {
  std::int64_t value = 0;
  bool operator==(const IntLit&) const = default;
};

struct MachineExpr {
  ProcKind kind = ProcKind::GPU;
  bool operator==(const MachineExpr&) const = default;
};

struct CallExpr {
  std::string callee;
  std::vector<Expr> args;
  bool operator==(const CallExpr&) const = default;
};

// `object.method(args)`, e.g. m.split(0, 2) or task.parent.processor(m).
struct MethodCallExpr {
  Box<Expr> object;
  std::string method;
  std::vector<Expr> args;
  bool operator==(const MethodCallExpr&) const = default;
};

struct FieldExpr {
  Box<Expr> object;
  std::string field;
  bool operator==(const FieldExpr&) const = default;
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne };
std::string_view to_string(BinaryOp op);

struct BinaryExpr {
  BinaryOp op = BinaryOp::Add;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const BinaryExpr&) const = default;
};

struct NegateExpr {
  Box<Expr> operand;
  bool operator==(const NegateExpr&) const = default;
};

struct ParenExpr {
  Box<Expr> inner;
  bool operator==(const ParenExpr&) const = default;
};

struct TupleExpr {
  std::vector<Expr> elements;  // at least two
  bool operator==(const TupleExpr&) const = default;
};

struct IndexExpr {
  Box<Expr> object;
  std::vector<Expr> subscripts;  // may contain SplatExpr
  bool operator==(const IndexExpr&) const = default;
};

// `*expr`; only valid as an IndexExpr subscript.
struct SplatExpr {
  Box<Expr> operand;
  bool operator==(const SplatExpr&) const = default;
};

struct TernaryExpr {
  Box<Expr> cond;
  Box<Expr> then_expr;
  Box<Expr> else_expr;
  bool operator==(const TernaryExpr&) const = default;
};

struct Expr {
  using Node = std::variant<VarRef, IntLit, MachineExpr, CallExpr, MethodCallExpr, FieldExpr,
                            BinaryExpr, NegateExpr, ParenExpr, TupleExpr, IndexExpr, SplatExpr,
                            TernaryExpr>;
  Node node;
  SourcePos pos;
  bool operator==(const Expr&) const = default;
};

// ---------------------------------------------------------------------------
// Statements

inline constexpr std::string_view kWildcard = "*";

struct RegionPattern {
  enum class Kind { Wildcard, Name, Index };
  Kind kind = Kind::Wildcard;
  std::string name;
  std::int64_t index = 0;

  static RegionPattern wildcard() { return {}; }
  static RegionPattern named(std::string n) { return {Kind::Name, std::move(n), 0}; }
  static RegionPattern positional(std::int64_t i) { return {Kind::Index, {}, i}; }
  bool is_wildcard() const { return kind == Kind::Wildcard; }
  bool operator==(const RegionPattern&) const = default;
};

enum class AlignOp { Eq, Le, Ge };
std::string_view to_string(AlignOp op);

struct LayoutConstraint {
  enum class Kind { SOA, AOS, COrder, FOrder, Align, NoAlign };
  Kind kind = Kind::SOA;
  AlignOp op = AlignOp::Eq;  // Align only
  std::int64_t bytes = 0;    // Align only
  bool operator==(const LayoutConstraint&) const = default;
};

struct TaskStmt {
  std::string task;  // name or "*"
  std::vector<ProcKind> procs;
  SourcePos pos;
  bool operator==(const TaskStmt&) const = default;
};

struct RegionStmt {
  std::string task;
  RegionPattern region;
  std::optional<ProcKind> proc;  // nullopt = `*`
  std::vector<MemKind> memories;
  SourcePos pos;
  bool operator==(const RegionStmt&) const = default;
};

struct LayoutStmt {
  std::string task;
  RegionPattern region;
  std::optional<ProcKind> proc;
  std::vector<LayoutConstraint> constraints;
  SourcePos pos;
  bool operator==(const LayoutStmt&) const = default;
};

struct IndexTaskMapStmt {
  std::vector<std::string> tasks;
  std::string func;
  SourcePos pos;
  bool operator==(const IndexTaskMapStmt&) const = default;
};

struct SingleTaskMapStmt {
  std::vector<std::string> tasks;
  std::string func;
  SourcePos pos;
  bool operator==(const SingleTaskMapStmt&) const = default;
};

struct InstanceLimitStmt {
  std::string task;
  std::int64_t limit = 1;
  SourcePos pos;
  bool operator==(const InstanceLimitStmt&) const = default;
};

// Both `GarbageCollect` and `CollectMemory` parse to this.
struct CollectStmt {
  std::string task;
  RegionPattern region;
  SourcePos pos;
  bool operator==(const CollectStmt&) const = default;
};

// Program-scope binding, e.g. `mgpu = Machine(GPU);`.
struct AssignStmt {
  std::string name;
  Expr value;
  SourcePos pos;
  bool operator==(const AssignStmt&) const = default;
};

enum class ParamKind { Task, Tuple, Int };
std::string_view to_string(ParamKind kind);

struct Param {
  std::string name;
  ParamKind kind = ParamKind::Task;
  bool operator==(const Param&) const = default;
};

struct LocalAssign {
  std::string name;
  Expr value;
  bool operator==(const LocalAssign&) const = default;
};

struct ReturnStmt {
  Expr value;
  bool operator==(const ReturnStmt&) const = default;
};

struct FuncStmt {
  std::variant<LocalAssign, ReturnStmt> node;
  SourcePos pos;
  bool operator==(const FuncStmt&) const = default;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  std::vector<FuncStmt> body;
  SourcePos pos;
  bool operator==(const FuncDef&) const = default;
};

using Statement = std::variant<TaskStmt, RegionStmt, LayoutStmt, IndexTaskMapStmt,
                               SingleTaskMapStmt, InstanceLimitStmt, CollectStmt, AssignStmt,
                               FuncDef>;

SourcePos position_of(const Statement& stmt);

struct MapperProgram {
  std::vector<Statement> statements;

  // Last definition wins if a name is duplicated (validate reports that).
  const FuncDef* find_function(std::string_view name) const;
  std::vector<const FuncDef*> functions() const;
  std::vector<const AssignStmt*> globals() const;

  bool operator==(const MapperProgram&) const = default;
};

// ---------------------------------------------------------------------------
// Diagnostics

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 0;    // 1-based; 0 when the source has no positions (config files)
  int column = 0;  // 1-based; 0 when unknown
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

// `<file>:<line>:<col>: error: <message>`
std::string format_diagnostic(const Diagnostic& diag, std::string_view file);

// Messages only, joined with "; ".
std::string join_messages(const std::vector<Diagnostic>& diags);

}  // namespace mapforge
