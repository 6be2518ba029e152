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
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

#include "mapforge/dsl.hpp"

namespace mapforge {
namespace {

const std::set<std::string, std::less<>> kMethods = {"split", "merge", "swap", "slice",
                                                     "decompose", "processor"};
const std::set<std::string, std::less<>> kFields = {"size", "ipoint", "ispace", "parent"};

class Validator {
 public:
  Validator(const MapperProgram& prog, const MapperProgram* lib) : prog_(prog), lib_(lib) {
    for (const auto* a : prog.globals()) globals_.insert(a->name);
  }

  std::vector<Diagnostic> run() {
    check_globals();
    std::set<std::string> seen_funcs;
    for (const auto* f : prog_.functions()) {
      if (!seen_funcs.insert(f->name).second)
        error(f->pos, fmt::format("duplicate function definition {}", f->name));
      check_function(*f);
    }
    for (const auto& stmt : prog_.statements) std::visit([&](const auto& s) { check(s); }, stmt);
    check_recursion();
    return std::move(diags_);
  }

 private:
  void error(SourcePos pos, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, pos.line, pos.column, std::move(msg)});
  }

  const FuncDef* lookup_function(std::string_view name) const {
    if (const auto* f = prog_.find_function(name)) return f;
    if (lib_) return lib_->find_function(name);
    return nullptr;
  }

  // Program-scope bindings may only refer to bindings made above them.
  void check_globals() {
    std::set<std::string> defined;
    for (const auto& stmt : prog_.statements) {
      const auto* a = std::get_if<AssignStmt>(&stmt);
      if (!a) continue;
      check_expr(a->value, [&](const std::string& n) { return defined.count(n) > 0; });
      defined.insert(a->name);
    }
  }

  void check_function(const FuncDef& f) {
    std::set<std::string> scope;
    for (const auto& p : f.params) {
      if (!scope.insert(p.name).second)
        error(f.pos, fmt::format("duplicate parameter {} in function {}", p.name, f.name));
    }
    auto visible = [&](const std::string& n) { return scope.count(n) || globals_.count(n); };
    bool has_return = false;
    for (const auto& st : f.body) {
      if (const auto* a = std::get_if<LocalAssign>(&st.node)) {
        check_expr(a->value, visible);
        scope.insert(a->name);
      } else {
        check_expr(std::get<ReturnStmt>(st.node).value, visible);
        has_return = true;
      }
    }
    if (!has_return) error(f.pos, fmt::format("function {} has no return statement", f.name));
  }

  void check_expr(const Expr& e, const std::function<bool(const std::string&)>& visible) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            if (!visible(n.name)) error(e.pos, fmt::format("{} not found", n.name));
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            const FuncDef* f = lookup_function(n.callee);
            if (!f) {
              error(e.pos, fmt::format("function {} undefined", n.callee));
            } else if (f->params.size() != n.args.size()) {
              error(e.pos, fmt::format("function {} expects {} arguments, got {}", n.callee,
                                       f->params.size(), n.args.size()));
            }
            for (const auto& a : n.args) check_expr(a, visible);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            if (!kMethods.count(n.method)) error(e.pos, fmt::format("unknown method {}", n.method));
            check_expr(*n.object, visible);
            for (const auto& a : n.args) check_expr(a, visible);
          } else if constexpr (std::is_same_v<T, FieldExpr>) {
            if (!kFields.count(n.field)) error(e.pos, fmt::format("unknown field {}", n.field));
            check_expr(*n.object, visible);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            check_expr(*n.lhs, visible);
            check_expr(*n.rhs, visible);
          } else if constexpr (std::is_same_v<T, NegateExpr>) {
            check_expr(*n.operand, visible);
          } else if constexpr (std::is_same_v<T, ParenExpr>) {
            check_expr(*n.inner, visible);
          } else if constexpr (std::is_same_v<T, TupleExpr>) {
            for (const auto& x : n.elements) check_expr(x, visible);
          } else if constexpr (std::is_same_v<T, IndexExpr>) {
            check_expr(*n.object, visible);
            for (const auto& x : n.subscripts) check_expr(x, visible);
          } else if constexpr (std::is_same_v<T, SplatExpr>) {
            check_expr(*n.operand, visible);
          } else if constexpr (std::is_same_v<T, TernaryExpr>) {
            check_expr(*n.cond, visible);
            check_expr(*n.then_expr, visible);
            check_expr(*n.else_expr, visible);
          }
        },
        e.node);
  }

  static bool is_index_access(const Expr& e) {
    if (const auto* p = std::get_if<ParenExpr>(&e.node)) return is_index_access(*p->inner);
    if (const auto* t = std::get_if<TernaryExpr>(&e.node))
      return is_index_access(*t->then_expr) && is_index_access(*t->else_expr);
    return std::holds_alternative<IndexExpr>(e.node);
  }

  void check_mapping_function(std::string_view stmt_kind, const std::string& name, SourcePos pos) {
    const FuncDef* f = lookup_function(name);
    if (!f) {
      error(pos, fmt::format("{}'s function undefined", stmt_kind));
      return;
    }
    const bool task_sig = f->params.size() == 1 && f->params[0].kind == ParamKind::Task;
    const bool point_sig = f->params.size() == 2 && f->params[0].kind == ParamKind::Tuple &&
                           f->params[1].kind == ParamKind::Tuple;
    if (!task_sig && !point_sig)
      error(pos, fmt::format("function {} must take (Task) or (Tuple ipoint, Tuple ispace)", name));
    for (const auto& st : f->body) {
      if (const auto* r = std::get_if<ReturnStmt>(&st.node); r && !is_index_access(r->value))
        error(st.pos, fmt::format("function {} must return a processor-space index access", name));
    }
  }

  void check_task_list(const std::vector<std::string>& tasks, SourcePos pos) {
    std::set<std::string> seen;
    for (const auto& t : tasks)
      if (!seen.insert(t).second) error(pos, fmt::format("task {} listed twice", t));
  }

  void check(const TaskStmt& s) {
    std::set<ProcKind> seen;
    for (ProcKind k : s.procs)
      if (!seen.insert(k).second)
        error(s.pos, fmt::format("duplicate processor kind {} in Task statement", to_string(k)));
  }
  void check(const RegionStmt& s) {
    std::set<MemKind> seen;
    for (MemKind k : s.memories)
      if (!seen.insert(k).second)
        error(s.pos, fmt::format("duplicate memory kind {} in Region statement", to_string(k)));
    if (s.region.kind == RegionPattern::Kind::Index && s.region.index < 0)
      error(s.pos, "region index must be non-negative");
  }
  void check(const LayoutStmt& s) {
    int soa = 0, order = 0, align = 0;
    for (const auto& c : s.constraints) {
      switch (c.kind) {
        case LayoutConstraint::Kind::SOA:
        case LayoutConstraint::Kind::AOS: ++soa; break;
        case LayoutConstraint::Kind::COrder:
        case LayoutConstraint::Kind::FOrder: ++order; break;
        case LayoutConstraint::Kind::NoAlign: ++align; break;
        case LayoutConstraint::Kind::Align:
          ++align;
          if (c.bytes <= 0 || (c.bytes & (c.bytes - 1)) != 0)
            error(s.pos, fmt::format("Align bytes must be a power of two, got {}", c.bytes));
          break;
      }
    }
    if (soa > 1) error(s.pos, "Layout statement has more than one of SOA/AOS");
    if (order > 1) error(s.pos, "Layout statement has more than one of C_order/F_order");
    if (align > 1) error(s.pos, "Layout statement has more than one alignment constraint");
  }
  void check(const IndexTaskMapStmt& s) {
    check_task_list(s.tasks, s.pos);
    check_mapping_function("IndexTaskMap", s.func, s.pos);
  }
  void check(const SingleTaskMapStmt& s) {
    check_task_list(s.tasks, s.pos);
    check_mapping_function("SingleTaskMap", s.func, s.pos);
  }
  void check(const InstanceLimitStmt& s) {
    if (s.limit < 1) error(s.pos, "InstanceLimit must be at least 1");
  }
  void check(const CollectStmt&) {}
  void check(const AssignStmt&) {}
  void check(const FuncDef&) {}

  static void collect_calls(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CallExpr>) {
            out.insert(n.callee);
            for (const auto& a : n.args) collect_calls(a, out);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            collect_calls(*n.object, out);
            for (const auto& a : n.args) collect_calls(a, out);
          } else if constexpr (std::is_same_v<T, FieldExpr>) {
            collect_calls(*n.object, out);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            collect_calls(*n.lhs, out);
            collect_calls(*n.rhs, out);
          } else if constexpr (std::is_same_v<T, NegateExpr>) {
            collect_calls(*n.operand, out);
          } else if constexpr (std::is_same_v<T, ParenExpr>) {
            collect_calls(*n.inner, out);
          } else if constexpr (std::is_same_v<T, TupleExpr>) {
            for (const auto& x : n.elements) collect_calls(x, out);
          } else if constexpr (std::is_same_v<T, IndexExpr>) {
            collect_calls(*n.object, out);
            for (const auto& x : n.subscripts) collect_calls(x, out);
          } else if constexpr (std::is_same_v<T, SplatExpr>) {
            collect_calls(*n.operand, out);
          } else if constexpr (std::is_same_v<T, TernaryExpr>) {
            collect_calls(*n.cond, out);
            collect_calls(*n.then_expr, out);
            collect_calls(*n.else_expr, out);
          }
        },
        e.node);
  }

  // Depth-first search for cycles in the program's call graph.
  void check_recursion() {
    std::map<std::string, std::set<std::string>> graph;
    std::map<std::string, SourcePos> where;
    for (const auto* f : prog_.functions()) {
      auto& callees = graph[f->name];
      where[f->name] = f->pos;
      for (const auto& st : f->body) {
        std::visit([&](const auto& s) { collect_calls(s.value, callees); }, st.node);
      }
    }
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::set<std::string> reported;
    std::function<void(const std::string&)> dfs = [&](const std::string& n) {
      state[n] = 1;
      for (const auto& c : graph[n]) {
        if (!graph.count(c)) continue;
        if (state[c] == 1) {
          if (reported.insert(c).second)
            error(where[c], fmt::format("recursive call to function {}", c));
        } else if (state[c] == 0) {
          dfs(c);
        }
      }
      state[n] = 2;
    };
    for (const auto& [name, _] : graph)
      if (state[name] == 0) dfs(name);
  }

  const MapperProgram& prog_;
  const MapperProgram* lib_;
  std::set<std::string> globals_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const MapperProgram& program, const MapperProgram* library) {
  return Validator(program, library).run();
}

}  // namespace mapforge
