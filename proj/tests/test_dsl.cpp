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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapforge/dsl.hpp"
#include "mapforge/eval.hpp"
#include "support.hpp"

using namespace mapforge;
using mapforge::testing::slurp;

namespace {

MapperProgram must_parse(std::string_view src) {
  ParseResult r = parse(src);
  INFO(join_messages(r.diagnostics));
  REQUIRE(r.ok());
  return *r.program;
}

std::string first_error(std::string_view src) {
  ParseResult r = parse(src);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  return r.diagnostics[0].message;
}

std::string validate_text(std::string_view src, bool with_library = false) {
  auto p = must_parse(src);
  return join_messages(validate(p, with_library ? &builtin_library() : nullptr));
}

}  // namespace

TEST_CASE("every shipped mapper parses, validates and round-trips") {
  for (const auto& path : mapforge::testing::corpus_mappers()) {
    CAPTURE(path.string());
    const auto program = must_parse(slurp(path));
    CHECK(validate(program, &builtin_library()).empty());
    const std::string text = print(program);
    const auto again = must_parse(text);
    CHECK(again == program);
    CHECK(print(again) == text);
  }
}

TEST_CASE("colon-style function definition is rejected") {
  ParseResult r = parse(slurp(mapforge::testing::fixture_dir() / "dsl/fig3a_colon.dsl"));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].message == "Syntax error, unexpected :, expecting {");
  CHECK(r.diagnostics[0].line == 12);
}

TEST_CASE("stray bracket in generated mapper is rejected") {
  ParseResult r = parse(slurp(mapforge::testing::fixture_dir() / "dsl/solomonik_iter10_verbatim.dsl"));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].line == 9);
  CHECK(r.diagnostics[0].message.rfind("Syntax error, unexpected", 0) == 0);
}

TEST_CASE("syntax error messages") {
  CHECK(first_error("Task t GPU") == "Syntax error, unexpected end of file, expecting processor kind or ;");
  CHECK(first_error("Task t $;") == "Syntax error, unexpected character '$'");
  CHECK(first_error("Region t r GPU;").find("expecting memory kind") != std::string::npos);
  CHECK(first_error("Task t TPU;").rfind("Syntax error, unexpected TPU", 0) == 0);
}

TEST_CASE("diagnostic formatting") {
  Diagnostic d{Diagnostic::Severity::Error, 3, 7, "boom"};
  CHECK(format_diagnostic(d, "m.dsl") == "m.dsl:3:7: error: boom");
  Diagnostic w{Diagnostic::Severity::Error, 0, 0, "no position"};
  CHECK(format_diagnostic(w, "m.dsl") == "m.dsl: error: no position");
}

TEST_CASE("comments and blank lines are insignificant") {
  const auto a = must_parse("Task * GPU; # trailing\n\n# whole line\nRegion * * GPU FBMEM;\n");
  const auto b = must_parse("Task * GPU;\nRegion * * GPU FBMEM;");
  CHECK(a == b);
}

TEST_CASE("memory aliases") {
  for (const char* alias : {"SYSEM", "SYMEM", "SYSTEMEM", "SYSTEM", "SYSMEM"}) {
    const auto p = must_parse(std::string("Region * * CPU ") + alias + ";");
    CHECK(print(p) == "Region * * CPU SYSMEM;\n");
  }
}

TEST_CASE("canonical printing of statements") {
  CHECK(print(must_parse("Task   *  GPU , CPU ;")) == "Task * GPU,CPU;\n");
  CHECK(print(must_parse("Region * *GPU FBMEM ZCMEM;")) == "Region * * GPU FBMEM,ZCMEM;\n");
  CHECK(print(must_parse("Region t 1 * ZCMEM;")) == "Region t 1 * ZCMEM;\n");
  CHECK(print(must_parse("Layout * * * Align==64 F_order;")) == "Layout * * * Align==64 F_order;\n");
  CHECK(print(must_parse("Layout a b GPU AOS No_Align;")) == "Layout a b GPU AOS No_Align;\n");
  CHECK(print(must_parse("Instancelimit t 4;")) == "InstanceLimit t 4;\n");
  CHECK(print(must_parse("CollectMemory t *;")) == "GarbageCollect t *;\n");
  CHECK(print(must_parse("IndexTaskMap a, b f;")) == "IndexTaskMap a,b f;\n");
  CHECK(print(must_parse("SingleTaskMap a f;")) == "SingleTaskMap a f;\n");
  CHECK(print(must_parse("def f(Tuple a, Tuple b){ x=a+b; return m[*x]; }")) ==
        "def f(Tuple a, Tuple b) {\n    x = a + b;\n    return m[*x];\n}\n");
  CHECK(print(must_parse("m = Machine( GPU ) .merge(0,1);")) == "m = Machine(GPU).merge(0, 1);\n");
}

TEST_CASE("expression precedence survives printing") {
  const auto p = must_parse("x = 1 + 2 * 3 - (4 - 5) % 2;\ny = a < b ? -c : d.size[0] / 2;");
  CHECK(print(p) == "x = 1 + 2 * 3 - (4 - 5) % 2;\ny = a < b ? -c : d.size[0] / 2;\n");
  const auto& x = std::get<AssignStmt>(p.statements[0]);
  const auto& top = std::get<BinaryExpr>(x.value.node);
  CHECK(top.op == BinaryOp::Sub);
}

namespace {

// Random expression text drawn from the grammar.
std::string gen_expr(mapforge::testing::Rng& rng, int depth) {
  if (depth <= 0) {
    switch (rng.below(4)) {
      case 0: return std::to_string(rng.below(100));
      case 1: return "v" + std::to_string(rng.below(3));
      case 2: return "Machine(GPU)";
      default: return "(" + std::to_string(rng.below(9)) + ", " + std::to_string(rng.below(9)) + ")";
    }
  }
  static const char* ops[] = {"+", "-", "*", "/", "%", "==", "<", ">=", "!="};
  switch (rng.below(8)) {
    case 0: return gen_expr(rng, depth - 1) + " " + ops[rng.below(9)] + " " + gen_expr(rng, depth - 1);
    case 1: return "(" + gen_expr(rng, depth - 1) + ")";
    case 2: return "-" + gen_expr(rng, 0);
    case 3: return gen_expr(rng, depth - 1) + " ? " + gen_expr(rng, depth - 1) + " : " + gen_expr(rng, depth - 1);
    case 4: return "v0[" + gen_expr(rng, depth - 1) + ", *" + gen_expr(rng, 0) + "]";
    case 5: return "v1.split(0, " + gen_expr(rng, depth - 1) + ").size";
    case 6: return "f(" + gen_expr(rng, depth - 1) + ", " + gen_expr(rng, depth - 1) + ")";
    default: return "(" + gen_expr(rng, depth - 1) + ", " + gen_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("property: random expressions round-trip through the printer") {
  mapforge::testing::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::string src = "x = " + gen_expr(rng, 1 + static_cast<int>(rng.below(4))) + ";";
    CAPTURE(src);
    const auto p = must_parse(src);
    const std::string text = print(p);
    const auto q = must_parse(text);
    CHECK(q == p);
    CHECK(print(q) == text);
  }
}

TEST_CASE("validation diagnostics") {
  CHECK(validate_text("IndexTaskMap t nope;") == "IndexTaskMap's function undefined");
  CHECK(validate_text("SingleTaskMap t nope;") == "SingleTaskMap's function undefined");
  CHECK(validate_text("def f(Task task) { return mgpu[0, 0]; }") == "mgpu not found");
  CHECK(validate_text("def f(Task task) { x = 1; }") == "function f has no return statement");
  CHECK(validate_text("def f(Task t) { return g(t); }") == "function g undefined");
  CHECK(validate_text("def g(Task t) { return 1; }\ndef f(Task t) { return g(t, t); }") ==
        "function g expects 1 arguments, got 2");
  CHECK(validate_text("def f(Task t) { return f(t); }") == "recursive call to function f");
  CHECK(validate_text("Layout * * * Align==48;") == "Align bytes must be a power of two, got 48");
  CHECK(validate_text("Layout * * * SOA AOS;") != "");
  CHECK(validate_text("InstanceLimit t 0;") != "");
  CHECK(validate_text("Task t GPU,GPU;") != "");
  CHECK(validate_text("x = y;\ny = 1;") == "y not found");
  CHECK(validate_text("m = Machine(GPU);\ndef f(Task t) { return 3; }\nIndexTaskMap t f;") ==
        "function f must return a processor-space index access");
  CHECK(validate_text("m = Machine(GPU);\ndef f(Task t) { return m[0, 0]; }\nIndexTaskMap t f;") == "");
}

TEST_CASE("library functions resolve only when the library is supplied") {
  CHECK(validate_text("IndexTaskMap t block2D;") == "IndexTaskMap's function undefined");
  CHECK(validate_text("IndexTaskMap t block2D;", true) == "");
}

TEST_CASE("last definition of a function wins") {
  const auto p = must_parse("def f(Task t) { return 1; }\ndef f(Task t) { return 2; }");
  const FuncDef* f = p.find_function("f");
  REQUIRE(f != nullptr);
  CHECK(print(p) != "");
}
