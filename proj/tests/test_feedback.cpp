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

#include "feedback_rows.hpp"
#include "mapforge/feedback.hpp"

using namespace mapforge;
using namespace mapforge::testing;

namespace {

FeedbackReport perf(double wall, double throughput, Metric metric) {
  SimResult r;
  r.wall_time = wall;
  r.throughput = throughput;
  ApplicationDescriptor app;
  app.metric = metric;
  return classify(r, app);
}

}  // namespace

TEST_CASE("every rule row reproduces its texts at the full level") {
  const auto rows = feedback_rows();
  REQUIRE(rows.size() == 9);
  for (const auto& row : rows) {
    CAPTURE(row.mapper.string());
    const FeedbackReport r = evaluate_row(row, FeedbackLevel::SystemExplainSuggest);
    CHECK(to_string(r.kind) == row.kind);
    CHECK(r.system_message.rfind(row.system_prefix, 0) == 0);
    CHECK(r.explain == row.explain);
    CHECK(r.suggest == row.suggest);
    CHECK(r.score.has_value() == (r.kind == FeedbackKind::PerformanceMetric));
  }
}

TEST_CASE("lower levels are prefixes of higher levels") {
  for (const auto& row : feedback_rows()) {
    CAPTURE(row.mapper.string());
    const auto levels = rendered_levels(row);
    CHECK(is_prefix(levels[0], levels[1]));
    CHECK(is_prefix(levels[1], levels[2]));
    CHECK(levels[0].find('\n') == std::string::npos);
    CHECK(levels[1].find("Suggestion:") == std::string::npos);
    CHECK((levels[1] != levels[0]) == row.explain.has_value());
    CHECK((levels[2] != levels[1]) == row.suggest.has_value());
  }
}

TEST_CASE("classification") {
  SUBCASE("diagnostics join distinct messages") {
    const std::vector<Diagnostic> d = {{Diagnostic::Severity::Error, 3, 1, "mgpu not found"},
                                       {Diagnostic::Severity::Error, 4, 1, "x not found"},
                                       {Diagnostic::Severity::Error, 5, 1, "mgpu not found"}};
    const FeedbackReport r = classify(d);
    CHECK(r.kind == FeedbackKind::CompileError);
    CHECK(r.system_message == "mgpu not found; x not found");
    CHECK_FALSE(r.score);
  }
  SUBCASE("simulation errors") {
    const FeedbackReport r = classify(SimError{LayoutMismatch{"t", "r", false}});
    CHECK(r.kind == FeedbackKind::ExecutionError);
    CHECK(r.system_message.find("stride does not match expected value") != std::string::npos);
  }
  SUBCASE("performance") {
    CHECK(perf(0.03, 1, Metric::Time).system_message == "Execution time is 0.03s.");
    CHECK(perf(1.23456789, 1, Metric::Time).system_message == "Execution time is 1.235s.");
    CHECK(perf(1, 2.1675e13, Metric::Flops).system_message == "Achieved throughput = 21675 GFLOPS");
    CHECK(perf(1, 7.5, Metric::Time).score == 7.5);
  }
}

TEST_CASE("enhancement") {
  const auto& rules = default_rules();
  FeedbackReport r{FeedbackKind::PerformanceMetric, "Execution time is 0.03s.", {}, {}, 1.0};
  const FeedbackReport full = enhance(r, rules, FeedbackLevel::SystemExplainSuggest);
  CHECK_FALSE(full.explain);
  CHECK(full.suggest == "Move more tasks to GPU to reduce execution time.");
  CHECK(render(full) ==
        "Performance Metric: Execution time is 0.03s.\n"
        "Suggestion: Move more tasks to GPU to reduce execution time.");
  CHECK(render(enhance(full, rules, FeedbackLevel::System)) ==
        "Performance Metric: Execution time is 0.03s.");

  FeedbackReport none{FeedbackKind::ExecutionError, "everything fine", {}, {}, {}};
  const FeedbackReport n = enhance(none, rules, FeedbackLevel::SystemExplainSuggest);
  CHECK_FALSE(n.explain);
  CHECK_FALSE(n.suggest);

  // Case-sensitive; first rule in file order wins.
  FeedbackReport lower{FeedbackKind::ExecutionError, "STRIDE DOES NOT MATCH", {}, {}, {}};
  CHECK_FALSE(enhance(lower, rules, FeedbackLevel::SystemExplainSuggest).explain);
  const std::vector<EnhancerRule> custom = {{"a", "first", std::nullopt}, {"ab", "second", "s"}};
  FeedbackReport ab{FeedbackKind::CompileError, "xaby", {}, {}, {}};
  const FeedbackReport e = enhance(ab, custom, FeedbackLevel::SystemExplainSuggest);
  CHECK(e.explain == "first");
  CHECK_FALSE(e.suggest);
  CHECK(render(e) == "Compile Error: xaby\nExplanation: first");
}

TEST_CASE("levels") {
  for (auto l : {FeedbackLevel::System, FeedbackLevel::SystemExplain,
                 FeedbackLevel::SystemExplainSuggest})
    CHECK(parse_level(to_string(l)) == l);
  CHECK_FALSE(parse_level("full"));
  CHECK_FALSE(parse_level("System"));
}

TEST_CASE("rule files") {
  SUBCASE("bundled rules parse and keep file order") {
    auto loaded = parse_rules(default_rules_source());
    REQUIRE(loaded.ok());
    CHECK(*loaded.value == default_rules());
    CHECK(default_rules().front().keyword == "unexpected :");
    CHECK(default_rules().size() == 11);
  }
  SUBCASE("custom rules") {
    auto loaded = parse_rules(R"(// comment
      {"rules": [{"keyword": "boom", "explain": "It exploded."}]})");
    REQUIRE(loaded.ok());
    CHECK(loaded.value->size() == 1);
    CHECK((*loaded.value)[0].explain == "It exploded.");
    CHECK_FALSE((*loaded.value)[0].suggest);
  }
  auto error_of = [](std::string_view text) {
    auto loaded = parse_rules(text);
    REQUIRE_FALSE(loaded.ok());
    return join_messages(loaded.diagnostics);
  };
  CHECK(error_of(R"({"rules": [{"keyword": ""}]})") == "rules[0].keyword: must not be empty");
  CHECK(error_of(R"({"rules": [{"explain": "x"}]})").find("rules[0].keyword") != std::string::npos);
  CHECK(error_of(R"({"rules": [{"keyword": "k", "hint": "x"}]})").find("hint") != std::string::npos);
  CHECK(error_of(R"({"rules": {}})") == "rules: expected an array");
  CHECK_FALSE(error_of("{").empty());
  auto missing = load_rules("/nonexistent/rules.cfg");
  CHECK(missing.io_error);
}
