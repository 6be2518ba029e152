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
#include <fmt/format.h>

#include "mapforge/dsl.hpp"

namespace mapforge {
namespace {

// Parenthesization is carried by ParenExpr nodes, so printing never needs to
// invent parentheses for trees that came out of the parser.
struct ExprPrinter {
  std::string operator()(const VarRef& v) const { return v.name; }
  std::string operator()(const IntLit& v) const { return std::to_string(v.value); }
  std::string operator()(const MachineExpr& v) const {
    return fmt::format("Machine({})", to_string(v.kind));
  }
  std::string operator()(const CallExpr& v) const {
    return fmt::format("{}({})", v.callee, list(v.args));
  }
  std::string operator()(const MethodCallExpr& v) const {
    return fmt::format("{}.{}({})", print(*v.object), v.method, list(v.args));
  }
  std::string operator()(const FieldExpr& v) const {
    return fmt::format("{}.{}", print(*v.object), v.field);
  }
  std::string operator()(const BinaryExpr& v) const {
    return fmt::format("{} {} {}", print(*v.lhs), to_string(v.op), print(*v.rhs));
  }
  std::string operator()(const NegateExpr& v) const { return "-" + print(*v.operand); }
  std::string operator()(const ParenExpr& v) const { return "(" + print(*v.inner) + ")"; }
  std::string operator()(const TupleExpr& v) const { return "(" + list(v.elements) + ")"; }
  std::string operator()(const IndexExpr& v) const {
    return fmt::format("{}[{}]", print(*v.object), list(v.subscripts));
  }
  std::string operator()(const SplatExpr& v) const { return "*" + print(*v.operand); }
  std::string operator()(const TernaryExpr& v) const {
    return fmt::format("{} ? {} : {}", print(*v.cond), print(*v.then_expr), print(*v.else_expr));
  }

  static std::string list(const std::vector<Expr>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ", ";
      out += print(xs[i]);
    }
    return out;
  }
};

std::string region_text(const RegionPattern& r) {
  switch (r.kind) {
    case RegionPattern::Kind::Wildcard: return "*";
    case RegionPattern::Kind::Name: return r.name;
    case RegionPattern::Kind::Index: return std::to_string(r.index);
  }
  return "*";
}

std::string proc_text(const std::optional<ProcKind>& p) {
  return p ? std::string(to_string(*p)) : std::string("*");
}

std::string constraint_text(const LayoutConstraint& c) {
  switch (c.kind) {
    case LayoutConstraint::Kind::SOA: return "SOA";
    case LayoutConstraint::Kind::AOS: return "AOS";
    case LayoutConstraint::Kind::COrder: return "C_order";
    case LayoutConstraint::Kind::FOrder: return "F_order";
    case LayoutConstraint::Kind::NoAlign: return "No_Align";
    case LayoutConstraint::Kind::Align:
      return fmt::format("Align{}{}", to_string(c.op), c.bytes);
  }
  return "";
}

template <typename T, typename F>
std::string joined(const std::vector<T>& xs, std::string_view sep, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

struct StmtPrinter {
  std::string operator()(const TaskStmt& s) const {
    return fmt::format("Task {} {};", s.task,
                       joined(s.procs, ",", [](ProcKind k) { return std::string(to_string(k)); }));
  }
  std::string operator()(const RegionStmt& s) const {
    return fmt::format("Region {} {} {} {};", s.task, region_text(s.region), proc_text(s.proc),
                       joined(s.memories, ",", [](MemKind k) { return std::string(to_string(k)); }));
  }
  std::string operator()(const LayoutStmt& s) const {
    return fmt::format("Layout {} {} {} {};", s.task, region_text(s.region), proc_text(s.proc),
                       joined(s.constraints, " ", constraint_text));
  }
  std::string operator()(const IndexTaskMapStmt& s) const {
    return fmt::format("IndexTaskMap {} {};", joined(s.tasks, ",", ident), s.func);
  }
  std::string operator()(const SingleTaskMapStmt& s) const {
    return fmt::format("SingleTaskMap {} {};", joined(s.tasks, ",", ident), s.func);
  }
  std::string operator()(const InstanceLimitStmt& s) const {
    return fmt::format("InstanceLimit {} {};", s.task, s.limit);
  }
  std::string operator()(const CollectStmt& s) const {
    return fmt::format("GarbageCollect {} {};", s.task, region_text(s.region));
  }
  std::string operator()(const AssignStmt& s) const {
    return fmt::format("{} = {};", s.name, print(s.value));
  }
  std::string operator()(const FuncDef& f) const {
    std::string out = fmt::format(
        "def {}({}) {{\n", f.name, joined(f.params, ", ", [](const Param& p) {
          return fmt::format("{} {}", to_string(p.kind), p.name);
        }));
    for (const auto& st : f.body) {
      if (const auto* a = std::get_if<LocalAssign>(&st.node))
        out += fmt::format("    {} = {};\n", a->name, print(a->value));
      else
        out += fmt::format("    return {};\n", print(std::get<ReturnStmt>(st.node).value));
    }
    out += "}";
    return out;
  }

  static std::string ident(const std::string& s) { return s; }
};

}  // namespace

std::string print(const Expr& expr) { return std::visit(ExprPrinter{}, expr.node); }

std::string print(const Statement& stmt) { return std::visit(StmtPrinter{}, stmt); }

std::string print(const MapperProgram& program) {
  std::string out;
  for (const auto& stmt : program.statements) {
    out += print(stmt);
    out += '\n';
  }
  return out;
}

}  // namespace mapforge
