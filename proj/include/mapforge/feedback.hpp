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

#include "mapforge/app.hpp"
#include "mapforge/ast.hpp"
#include "mapforge/simulator.hpp"

namespace mapforge {

enum class FeedbackKind { CompileError, ExecutionError, PerformanceMetric };
enum class FeedbackLevel { System, SystemExplain, SystemExplainSuggest };

std::string_view to_string(FeedbackKind kind);
// "system", "system+explain", "system+explain+suggest"
std::string_view to_string(FeedbackLevel level);
std::optional<FeedbackLevel> parse_level(std::string_view text);

struct FeedbackReport {
  FeedbackKind kind = FeedbackKind::CompileError;
  std::string system_message;
  std::optional<std::string> explain;
  std::optional<std::string> suggest;
  std::optional<double> score;  // set iff kind is PerformanceMetric
  bool operator==(const FeedbackReport&) const = default;
};

struct EnhancerRule {
  std::string keyword;
  std::optional<std::string> explain;
  std::optional<std::string> suggest;
  bool operator==(const EnhancerRule&) const = default;
};

// Distinct messages joined with "; ".
FeedbackReport classify(const std::vector<Diagnostic>& diagnostics);
FeedbackReport classify(const SimError& error);
// "Execution time is <t>s." for time apps, "Achieved throughput = <v> GFLOPS"
// for flops apps. The score is the result's throughput.
FeedbackReport classify(const SimResult& result, const ApplicationDescriptor& app);

// First rule whose keyword occurs in the system message, case-sensitive.
FeedbackReport enhance(FeedbackReport report, const std::vector<EnhancerRule>& rules,
                       FeedbackLevel level);

// System line, then "Explanation: ..." and "Suggestion: ..." when present.
// Lines are separated by '\n' with no trailing newline.
std::string render(const FeedbackReport& report);

// {"rules": [{"keyword": ..., "explain": ..., "suggest": ...}, ...]}
Loaded<std::vector<EnhancerRule>> parse_rules(std::string_view text);
Loaded<std::vector<EnhancerRule>> load_rules(const std::string& path);
// The bundled corpus/feedback_rules.cfg, compiled in.
const std::vector<EnhancerRule>& default_rules();
std::string_view default_rules_source();

}  // namespace mapforge
