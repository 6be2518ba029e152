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
#include "mapforge/eval.hpp"

#include <fmt/format.h>

#include "mapforge/dsl.hpp"

namespace mapforge {

std::string_view type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "int";
    case 1: return "tuple";
    case 2: return "processor space";
    case 3: return "processor";
    default: return "task";
  }
}

Scope::Scope(const MapperProgram& program, const MachineModel& machine, const Scope* fallback)
    : program_(&program), machine_(&machine), fallback_(fallback) {
  for (const auto* a : program.globals()) {
    try {
      globals_.insert_or_assign(a->name, eval_expr(a->value, *this));
    } catch (const std::exception& e) {
      globals_.insert_or_assign(a->name, std::string(e.what()));
    }
  }
}

std::pair<const FuncDef*, const Scope*> Scope::find_function(std::string_view name) const {
  if (const auto* f = program_->find_function(name)) return {f, this};
  if (fallback_) return fallback_->find_function(name);
  return {nullptr, nullptr};
}

const Value& Scope::global(const std::string& name) const {
  auto it = globals_.find(name);
  if (it == globals_.end()) throw EvalError(fmt::format("{} not found", name));
  if (const auto* err = std::get_if<std::string>(&it->second)) throw EvalError(*err);
  return std::get<Value>(it->second);
}

namespace {

constexpr int kMaxDepth = 64;
thread_local int g_depth = 0;

struct DepthGuard {
  DepthGuard() {
    if (++g_depth > kMaxDepth) {
      --g_depth;
      throw EvalError("maximum call depth exceeded");
    }
  }
  ~DepthGuard() { --g_depth; }
};

std::int64_t as_int(const Value& v, std::string_view what) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw EvalError(fmt::format("{} must be an int, got {}", what, type_name(v)));
}

// Spaces coerce to their extents wherever a tuple is expected.
Extents as_tuple(const Value& v, std::string_view what) {
  if (const auto* t = std::get_if<Extents>(&v)) return *t;
  if (const auto* s = std::get_if<ProcessorSpace>(&v)) return s->dims();
  throw EvalError(fmt::format("{} must be a tuple, got {}", what, type_name(v)));
}

std::int64_t apply_int(BinaryOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div:
      if (b == 0) throw EvalError("division by zero");
      return a / b;
    case BinaryOp::Mod:
      if (b == 0) throw EvalError("division by zero");
      return a % b;
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
  }
  return 0;
}

Value apply_binary(BinaryOp op, const Value& lhs, const Value& rhs) {
  const bool li = std::holds_alternative<std::int64_t>(lhs);
  const bool ri = std::holds_alternative<std::int64_t>(rhs);
  if (li && ri) return apply_int(op, std::get<std::int64_t>(lhs), std::get<std::int64_t>(rhs));
  if (!li && !std::holds_alternative<Extents>(lhs) && !std::holds_alternative<ProcessorSpace>(lhs))
    throw EvalError(fmt::format("operator {} not defined on {}", to_string(op), type_name(lhs)));
  if (!ri && !std::holds_alternative<Extents>(rhs) && !std::holds_alternative<ProcessorSpace>(rhs))
    throw EvalError(fmt::format("operator {} not defined on {}", to_string(op), type_name(rhs)));
  if (li) {
    Extents b = as_tuple(rhs, "operand");
    for (auto& x : b) x = apply_int(op, std::get<std::int64_t>(lhs), x);
    return b;
  }
  Extents a = as_tuple(lhs, "operand");
  if (ri) {
    for (auto& x : a) x = apply_int(op, x, std::get<std::int64_t>(rhs));
    return a;
  }
  const Extents b = as_tuple(rhs, "operand");
  if (a.size() != b.size())
    throw EvalError(fmt::format("tuple length mismatch: {} vs {}", a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = apply_int(op, a[i], b[i]);
  return a;
}

class Evaluator {
 public:
  Evaluator(const Scope& scope, const Locals& locals) : scope_(scope), locals_(locals) {}

  Value eval(const Expr& e) {
    try {
      return std::visit([&](const auto& n) { return (*this)(n); }, e.node);
    } catch (const SpaceError& err) {
      throw EvalError(err.what());
    }
  }

  Value operator()(const VarRef& v) {
    if (auto it = locals_.find(v.name); it != locals_.end()) return it->second;
    return scope_.global(v.name);
  }
  Value operator()(const IntLit& v) { return v.value; }
  Value operator()(const MachineExpr& v) {
    return ProcessorSpace::machine(scope_.machine(), v.kind);
  }
  Value operator()(const CallExpr& v) {
    auto [f, fscope] = scope_.find_function(v.callee);
    if (!f) throw EvalError(fmt::format("function {} undefined", v.callee));
    std::vector<Value> args;
    for (const auto& a : v.args) args.push_back(eval(a));
    return call_function(*f, std::move(args), *fscope);
  }
  Value operator()(const MethodCallExpr& v) {
    Value obj = eval(*v.object);
    std::vector<Value> args;
    for (const auto& a : v.args) args.push_back(eval(a));
    if (auto* task = std::get_if<TaskPtr>(&obj)) return task_method(**task, v.method, args);
    auto* space = std::get_if<ProcessorSpace>(&obj);
    if (!space)
      throw EvalError(fmt::format("method {} not defined on {}", v.method, type_name(obj)));
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw EvalError(fmt::format("{} expects {} arguments, got {}", v.method, n, args.size()));
    };
    if (v.method == "split") {
      need(2);
      return space->split(as_int(args[0], "split dimension"), as_int(args[1], "split factor"));
    }
    if (v.method == "merge") {
      need(2);
      return space->merge(as_int(args[0], "merge dimension"), as_int(args[1], "merge dimension"));
    }
    if (v.method == "swap") {
      need(2);
      return space->swap(as_int(args[0], "swap dimension"), as_int(args[1], "swap dimension"));
    }
    if (v.method == "slice") {
      need(3);
      return space->slice(as_int(args[0], "slice dimension"), as_int(args[1], "slice bound"),
                          as_int(args[2], "slice bound"));
    }
    if (v.method == "decompose") {
      need(2);
      return space->decompose(as_int(args[0], "decompose dimension"),
                              as_tuple(args[1], "decompose shape"));
    }
    throw EvalError(fmt::format("method {} not defined on processor space", v.method));
  }
  Value operator()(const FieldExpr& v) {
    Value obj = eval(*v.object);
    if (const auto* s = std::get_if<ProcessorSpace>(&obj); s && v.field == "size") return s->dims();
    if (const auto* t = std::get_if<TaskPtr>(&obj)) {
      const TaskHandle& task = **t;
      if (v.field == "ipoint") return task.ipoint;
      if (v.field == "ispace") return task.ispace;
      if (v.field == "parent") {
        if (!task.parent) throw EvalError(fmt::format("task {} has no parent", task.task_name));
        return task.parent;
      }
    }
    throw EvalError(fmt::format("field {} not defined on {}", v.field, type_name(obj)));
  }
  Value operator()(const BinaryExpr& v) { return apply_binary(v.op, eval(*v.lhs), eval(*v.rhs)); }
  Value operator()(const NegateExpr& v) { return apply_binary(BinaryOp::Sub, std::int64_t{0}, eval(*v.operand)); }
  Value operator()(const ParenExpr& v) { return eval(*v.inner); }
  Value operator()(const TupleExpr& v) {
    Extents out;
    for (const auto& x : v.elements) out.push_back(as_int(eval(x), "tuple element"));
    return out;
  }
  Value operator()(const IndexExpr& v) {
    Value obj = eval(*v.object);
    Extents subs;
    for (const auto& s : v.subscripts) {
      if (const auto* sp = std::get_if<SplatExpr>(&s.node)) {
        Extents t = as_tuple(eval(*sp->operand), "splat operand");
        subs.insert(subs.end(), t.begin(), t.end());
      } else {
        subs.push_back(as_int(eval(s), "subscript"));
      }
    }
    if (const auto* space = std::get_if<ProcessorSpace>(&obj)) {
      if (subs.size() != space->rank())
        throw EvalError(fmt::format(
            "Slice processor index out of bound: {} subscripts on space of size {}", subs.size(),
            format_tuple(space->dims())));
      return ProcValue{space->kind(), space->lookup(subs)};
    }
    if (const auto* t = std::get_if<Extents>(&obj)) {
      if (subs.size() != 1)
        throw EvalError(fmt::format("tuple indexed with {} subscripts", subs.size()));
      if (subs[0] < 0 || subs[0] >= static_cast<std::int64_t>(t->size()))
        throw EvalError(fmt::format("tuple index {} out of range for {}", subs[0], format_tuple(*t)));
      return (*t)[subs[0]];
    }
    throw EvalError(fmt::format("cannot index {}", type_name(obj)));
  }
  Value operator()(const SplatExpr&) { throw EvalError("splat outside of a subscript list"); }
  Value operator()(const TernaryExpr& v) {
    return as_int(eval(*v.cond), "condition") != 0 ? eval(*v.then_expr) : eval(*v.else_expr);
  }

 private:
  Value task_method(const TaskHandle& task, const std::string& method,
                    const std::vector<Value>& args) {
    if (method != "processor" || args.size() != 1)
      throw EvalError(fmt::format("method {} not defined on task", method));
    const auto* space = std::get_if<ProcessorSpace>(&args[0]);
    if (!space) throw EvalError("processor() expects a processor space");
    if (!task.processor || !task.proc_kind)
      throw EvalError(fmt::format("task {} is not mapped to a processor", task.task_name));
    if (*task.proc_kind != space->kind())
      throw EvalError(fmt::format("task {} ran on {}, not in a {} processor space", task.task_name,
                                  to_string(*task.proc_kind), to_string(space->kind())));
    auto idx = space->locate(*task.processor);
    if (!idx)
      throw EvalError(fmt::format("processor of task {} lies outside the processor space",
                                  task.task_name));
    return *idx;
  }

  const Scope& scope_;
  const Locals& locals_;
};

}  // namespace

Value eval_expr(const Expr& e, const Scope& scope, const Locals& locals) {
  return Evaluator(scope, locals).eval(e);
}

Value call_function(const FuncDef& f, std::vector<Value> args, const Scope& scope) {
  DepthGuard guard;
  if (args.size() != f.params.size())
    throw EvalError(fmt::format("function {} expects {} arguments, got {}", f.name,
                                f.params.size(), args.size()));
  Locals locals;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Param& p = f.params[i];
    Value v = std::move(args[i]);
    switch (p.kind) {
      case ParamKind::Task:
        if (!std::holds_alternative<TaskPtr>(v))
          throw EvalError(fmt::format("argument {} of {} must be a task", p.name, f.name));
        break;
      case ParamKind::Tuple: v = as_tuple(v, fmt::format("argument {} of {}", p.name, f.name)); break;
      case ParamKind::Int: as_int(v, fmt::format("argument {} of {}", p.name, f.name)); break;
    }
    locals.insert_or_assign(p.name, std::move(v));
  }
  for (const auto& st : f.body) {
    if (const auto* a = std::get_if<LocalAssign>(&st.node)) {
      locals.insert_or_assign(a->name, eval_expr(a->value, scope, locals));
    } else {
      return eval_expr(std::get<ReturnStmt>(st.node).value, scope, locals);
    }
  }
  throw EvalError(fmt::format("function {} returned no value", f.name));
}

ProcValue eval_mapping(const FuncDef& f, const TaskPtr& task, const Scope& scope) {
  std::vector<Value> args;
  if (f.params.size() == 1 && f.params[0].kind == ParamKind::Task) {
    args.push_back(task);
  } else if (f.params.size() == 2 && f.params[0].kind == ParamKind::Tuple &&
             f.params[1].kind == ParamKind::Tuple) {
    args.push_back(task->ipoint);
    args.push_back(task->ispace);
  } else {
    throw EvalError(
        fmt::format("function {} must take (Task) or (Tuple ipoint, Tuple ispace)", f.name));
  }
  Value r = call_function(f, std::move(args), scope);
  if (const auto* p = std::get_if<ProcValue>(&r)) return *p;
  throw EvalError(fmt::format("mapping function {} returned {} instead of a processor", f.name,
                              type_name(r)));
}

const MapperProgram& builtin_library() {
  static const MapperProgram lib = [] {
    ParseResult r = parse(builtin_library_source());
    if (!r.ok())
      throw std::logic_error("built-in library does not parse: " + join_messages(r.diagnostics));
    return std::move(*r.program);
  }();
  return lib;
}

}  // namespace mapforge
