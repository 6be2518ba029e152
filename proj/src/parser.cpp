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
#include <cctype>
#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

#include "mapforge/dsl.hpp"

namespace mapforge {
namespace {

enum class TokKind { Ident, Int, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(std::string msg, int l, int c) : std::runtime_error(std::move(msg)), line(l), column(c) {}
  int line;
  int column;
};

std::string describe(const Token& tok) {
  return tok.kind == TokKind::End ? "end of file" : tok.text;
}

// Longest-match punctuation; two-character operators first.
constexpr std::string_view kTwoCharPuncts[] = {"==", "<=", ">=", "!="};
constexpr std::string_view kOneCharPuncts = ";,()[]{}.*+-/%?:=<>";

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      tok.kind = TokKind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = TokKind::Int;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      std::string_view rest = src.substr(i);
      bool matched = false;
      for (auto p : kTwoCharPuncts) {
        if (rest.substr(0, 2) == p) {
          tok.kind = TokKind::Punct;
          tok.text = std::string(p);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched && kOneCharPuncts.find(c) != std::string_view::npos) {
        tok.kind = TokKind::Punct;
        tok.text = std::string(1, c);
        advance(1);
        matched = true;
      }
      if (!matched) {
        throw SyntaxError(fmt::format("Syntax error, unexpected character '{}'", c), line, col);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokKind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  MapperProgram program() {
    MapperProgram prog;
    while (peek().kind != TokKind::End) prog.statements.push_back(statement());
    return prog;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokKind::Punct && t.text == p;
  }
  bool is_ident(std::string_view word) const {
    return peek().kind == TokKind::Ident && peek().text == word;
  }
  [[noreturn]] void fail(std::string_view expecting) const {
    const Token& t = peek();
    throw SyntaxError(fmt::format("Syntax error, unexpected {}, expecting {}", describe(t), expecting),
                      t.line, t.column);
  }
  Token expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(p);
    return next();
  }
  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokKind::Ident) fail(what);
    return next().text;
  }
  std::int64_t expect_int(std::string_view what = "integer") {
    if (peek().kind != TokKind::Int) fail(what);
    const Token t = next();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) throw SyntaxError("Syntax error, integer literal out of range", t.line, t.column);
    return v;
  }
  static SourcePos pos_of(const Token& t) { return {t.line, t.column}; }

  std::string task_pattern() {
    if (is_punct("*")) {
      next();
      return std::string(kWildcard);
    }
    return expect_ident("task name or *");
  }

  RegionPattern region_pattern() {
    if (is_punct("*")) {
      next();
      return RegionPattern::wildcard();
    }
    if (peek().kind == TokKind::Int) return RegionPattern::positional(expect_int());
    if (peek().kind == TokKind::Ident) return RegionPattern::named(next().text);
    fail("region name, index or *");
  }

  std::optional<ProcKind> proc_pattern() {
    if (is_punct("*")) {
      next();
      return std::nullopt;
    }
    return proc_kind();
  }

  ProcKind proc_kind(bool required = true) {
    if (peek().kind == TokKind::Ident) {
      if (auto k = parse_proc_kind(peek().text)) {
        next();
        return *k;
      }
    }
    fail(required ? "processor kind" : "processor kind or ;");
  }

  // Items may be separated by commas or whitespace.
  template <typename F>
  auto item_list(F&& item, std::string_view terminator) {
    std::vector<decltype(item(true))> out;
    out.push_back(item(true));
    while (!is_punct(terminator)) {
      const bool comma = is_punct(",");
      if (comma) next();
      out.push_back(item(comma));
    }
    return out;
  }

  MemKind mem_kind(bool required) {
    if (peek().kind == TokKind::Ident) {
      if (auto k = parse_mem_kind(peek().text)) {
        next();
        return *k;
      }
    }
    fail(required ? "memory kind" : "memory kind or ;");
  }

  LayoutConstraint constraint(bool required) {
    if (peek().kind == TokKind::Ident) {
      const std::string& w = peek().text;
      LayoutConstraint c;
      if (w == "SOA") c.kind = LayoutConstraint::Kind::SOA;
      else if (w == "AOS") c.kind = LayoutConstraint::Kind::AOS;
      else if (w == "C_order") c.kind = LayoutConstraint::Kind::COrder;
      else if (w == "F_order") c.kind = LayoutConstraint::Kind::FOrder;
      else if (w == "No_Align") c.kind = LayoutConstraint::Kind::NoAlign;
      else if (w == "Align") {
        next();
        c.kind = LayoutConstraint::Kind::Align;
        if (is_punct("==")) c.op = AlignOp::Eq;
        else if (is_punct("<=")) c.op = AlignOp::Le;
        else if (is_punct(">=")) c.op = AlignOp::Ge;
        else fail("==, <= or >=");
        next();
        c.bytes = expect_int("alignment in bytes");
        return c;
      } else {
        fail(required ? "layout constraint" : "layout constraint or ;");
      }
      next();
      return c;
    }
    fail(required ? "layout constraint" : "layout constraint or ;");
  }

  Statement statement() {
    const Token head = peek();
    if (head.kind != TokKind::Ident) fail("statement");
    const std::string& kw = head.text;
    const SourcePos pos = pos_of(head);

    if (kw == "Task") {
      next();
      TaskStmt s;
      s.pos = pos;
      s.task = task_pattern();
      s.procs = item_list([&](bool required) { return proc_kind(required); }, ";");
      expect_punct(";");
      return s;
    }
    if (kw == "Region") {
      next();
      RegionStmt s;
      s.pos = pos;
      s.task = task_pattern();
      s.region = region_pattern();
      s.proc = proc_pattern();
      s.memories = item_list([&](bool required) { return mem_kind(required); }, ";");
      expect_punct(";");
      return s;
    }
    if (kw == "Layout") {
      next();
      LayoutStmt s;
      s.pos = pos;
      s.task = task_pattern();
      s.region = region_pattern();
      s.proc = proc_pattern();
      s.constraints = item_list([&](bool required) { return constraint(required); }, ";");
      expect_punct(";");
      return s;
    }
    if (kw == "IndexTaskMap" || kw == "SingleTaskMap") {
      next();
      std::vector<std::string> names{expect_ident("task name")};
      while (is_punct(",")) {
        next();
        names.push_back(expect_ident("task name"));
      }
      std::string func = expect_ident("function name");
      expect_punct(";");
      if (kw == "IndexTaskMap") return IndexTaskMapStmt{std::move(names), std::move(func), pos};
      return SingleTaskMapStmt{std::move(names), std::move(func), pos};
    }
    if (kw == "InstanceLimit" || kw == "Instancelimit") {
      next();
      InstanceLimitStmt s;
      s.pos = pos;
      s.task = expect_ident("task name");
      s.limit = expect_int("instance limit");
      expect_punct(";");
      return s;
    }
    if (kw == "GarbageCollect" || kw == "CollectMemory") {
      next();
      CollectStmt s;
      s.pos = pos;
      s.task = task_pattern();
      s.region = region_pattern();
      expect_punct(";");
      return s;
    }
    if (kw == "def") return func_def();
    if (is_punct("=", 1)) {
      next();
      next();
      AssignStmt s;
      s.pos = pos;
      s.name = kw;
      s.value = expr();
      expect_punct(";");
      return s;
    }
    fail("statement");
  }

  FuncDef func_def() {
    FuncDef def;
    def.pos = pos_of(next());
    def.name = expect_ident("function name");
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        Param p;
        const std::string type = expect_ident("parameter type");
        if (type == "Task") p.kind = ParamKind::Task;
        else if (type == "Tuple") p.kind = ParamKind::Tuple;
        else if (type == "int") p.kind = ParamKind::Int;
        else {
          --pos_;
          fail("parameter type (Task, Tuple or int)");
        }
        p.name = expect_ident("parameter name");
        def.params.push_back(std::move(p));
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind == TokKind::End) fail("}");
      FuncStmt st;
      st.pos = pos_of(peek());
      if (is_ident("return")) {
        next();
        st.node = ReturnStmt{expr()};
      } else {
        std::string name = expect_ident("statement or }");
        expect_punct("=");
        st.node = LocalAssign{std::move(name), expr()};
      }
      expect_punct(";");
      def.body.push_back(std::move(st));
    }
    expect_punct("}");
    return def;
  }

  // Expression grammar, lowest to highest precedence:
  //   ternary > comparison > additive > multiplicative > unary > postfix.
  Expr expr() { return ternary(); }

  Expr ternary() {
    Expr cond = comparison();
    if (!is_punct("?")) return cond;
    const SourcePos pos = cond.pos;
    next();
    Expr a = ternary();
    expect_punct(":");
    Expr b = ternary();
    return Expr{TernaryExpr{std::move(cond), std::move(a), std::move(b)}, pos};
  }

  std::optional<BinaryOp> comparison_op() const {
    if (peek().kind != TokKind::Punct) return std::nullopt;
    const std::string& t = peek().text;
    if (t == "<") return BinaryOp::Lt;
    if (t == "<=") return BinaryOp::Le;
    if (t == ">") return BinaryOp::Gt;
    if (t == ">=") return BinaryOp::Ge;
    if (t == "==") return BinaryOp::Eq;
    if (t == "!=") return BinaryOp::Ne;
    return std::nullopt;
  }

  Expr comparison() {
    Expr lhs = additive();
    while (auto op = comparison_op()) {
      next();
      Expr rhs = additive();
      const SourcePos pos = lhs.pos;
      lhs = Expr{BinaryExpr{*op, std::move(lhs), std::move(rhs)}, pos};
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      BinaryOp op = next().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      Expr rhs = multiplicative();
      const SourcePos pos = lhs.pos;
      lhs = Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, pos};
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      const std::string t = next().text;
      BinaryOp op = t == "*" ? BinaryOp::Mul : t == "/" ? BinaryOp::Div : BinaryOp::Mod;
      Expr rhs = unary();
      const SourcePos pos = lhs.pos;
      lhs = Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, pos};
    }
    return lhs;
  }

  Expr unary() {
    if (is_punct("-")) {
      const SourcePos pos = pos_of(next());
      return Expr{NegateExpr{unary()}, pos};
    }
    return postfix();
  }

  std::vector<Expr> call_args() {
    expect_punct("(");
    std::vector<Expr> args;
    if (!is_punct(")")) {
      args.push_back(expr());
      while (is_punct(",")) {
        next();
        args.push_back(expr());
      }
    }
    expect_punct(")");
    return args;
  }

  Expr subscript() {
    if (is_punct("*")) {
      const SourcePos pos = pos_of(next());
      return Expr{SplatExpr{unary()}, pos};
    }
    return expr();
  }

  Expr postfix() {
    Expr e = primary();
    while (true) {
      if (is_punct(".")) {
        next();
        std::string name = expect_ident("field or method name");
        const SourcePos pos = e.pos;
        if (is_punct("(")) {
          auto args = call_args();
          e = Expr{MethodCallExpr{std::move(e), std::move(name), std::move(args)}, pos};
        } else {
          e = Expr{FieldExpr{std::move(e), std::move(name)}, pos};
        }
      } else if (is_punct("[")) {
        next();
        std::vector<Expr> subs{subscript()};
        while (is_punct(",")) {
          next();
          subs.push_back(subscript());
        }
        expect_punct("]");
        const SourcePos pos = e.pos;
        e = Expr{IndexExpr{std::move(e), std::move(subs)}, pos};
      } else {
        return e;
      }
    }
  }

  Expr primary() {
    const Token t = peek();
    const SourcePos pos = pos_of(t);
    if (t.kind == TokKind::Int) return Expr{IntLit{expect_int()}, pos};
    if (t.kind == TokKind::Ident) {
      next();
      if (t.text == "Machine" && is_punct("(")) {
        next();
        ProcKind k = proc_kind();
        expect_punct(")");
        return Expr{MachineExpr{k}, pos};
      }
      if (is_punct("(")) return Expr{CallExpr{t.text, call_args()}, pos};
      return Expr{VarRef{t.text}, pos};
    }
    if (is_punct("(")) {
      next();
      Expr first = expr();
      if (is_punct(",")) {
        std::vector<Expr> elems;
        elems.push_back(std::move(first));
        while (is_punct(",")) {
          next();
          elems.push_back(expr());
        }
        expect_punct(")");
        return Expr{TupleExpr{std::move(elems)}, pos};
      }
      expect_punct(")");
      return Expr{ParenExpr{std::move(first)}, pos};
    }
    fail("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  try {
    Parser p(lex(source));
    result.program = p.program();
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back(
        Diagnostic{Diagnostic::Severity::Error, e.line, e.column, e.what()});
  }
  return result;
}

}  // namespace mapforge
