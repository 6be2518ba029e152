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
#include "mapforge/feedback.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "json_reader.hpp"

namespace mapforge {

std::string_view to_string(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::CompileError: return "Compile Error";
    case FeedbackKind::ExecutionError: return "Execution Error";
    case FeedbackKind::PerformanceMetric: return "Performance Metric";
  }
  return "";
}

std::string_view to_string(FeedbackLevel level) {
  switch (level) {
    case FeedbackLevel::System: return "system";
    case FeedbackLevel::SystemExplain: return "system+explain";
    case FeedbackLevel::SystemExplainSuggest: return "system+explain+suggest";
  }
  return "";
}

std::optional<FeedbackLevel> parse_level(std::string_view text) {
  for (auto l : {FeedbackLevel::System, FeedbackLevel::SystemExplain,
                 FeedbackLevel::SystemExplainSuggest})
    if (text == to_string(l)) return l;
  return std::nullopt;
}

FeedbackReport classify(const std::vector<Diagnostic>& diagnostics) {
  // One message per distinct text; the validator reports every use site.
  std::vector<Diagnostic> unique;
  for (const auto& d : diagnostics)
    if (std::none_of(unique.begin(), unique.end(),
                     [&](const Diagnostic& u) { return u.message == d.message; }))
      unique.push_back(d);
  return {FeedbackKind::CompileError, join_messages(unique), {}, {}, {}};
}

FeedbackReport classify(const SimError& error) {
  return {FeedbackKind::ExecutionError, error.message(), {}, {}, {}};
}

FeedbackReport classify(const SimResult& result, const ApplicationDescriptor& app) {
  FeedbackReport r;
  r.kind = FeedbackKind::PerformanceMetric;
  r.system_message = app.metric == Metric::Flops
                         ? fmt::format("Achieved throughput = {:.0f} GFLOPS", result.throughput / 1e9)
                         : fmt::format("Execution time is {:.4g}s.", result.wall_time);
  r.score = result.throughput;
  return r;
}

FeedbackReport enhance(FeedbackReport report, const std::vector<EnhancerRule>& rules,
                       FeedbackLevel level) {
  report.explain.reset();
  report.suggest.reset();
  for (const auto& rule : rules) {
    if (report.system_message.find(rule.keyword) == std::string::npos) continue;
    if (level != FeedbackLevel::System) report.explain = rule.explain;
    if (level == FeedbackLevel::SystemExplainSuggest) report.suggest = rule.suggest;
    break;
  }
  return report;
}

std::string render(const FeedbackReport& report) {
  std::string out = fmt::format("{}: {}", to_string(report.kind), report.system_message);
  if (report.explain) out += "\nExplanation: " + *report.explain;
  if (report.suggest) out += "\nSuggestion: " + *report.suggest;
  return out;
}

Loaded<std::vector<EnhancerRule>> parse_rules(std::string_view text) {
  Loaded<std::vector<EnhancerRule>> out;
  auto j = detail::parse_json(text, out.diagnostics);
  if (!j) return out;
  detail::Reader r(out.diagnostics);
  std::vector<EnhancerRule> rules;
  if (r.object(*j, "", {"rules"})) {
    if (const auto* list = r.field(*j, "", "rules", true)) {
      if (!list->is_array()) {
        r.error("rules: expected an array");
      } else {
        for (std::size_t i = 0; i < list->size(); ++i) {
          const std::string path = detail::Reader::at("rules", i);
          const auto& x = (*list)[i];
          if (!r.object(x, path, {"keyword", "explain", "suggest"})) continue;
          EnhancerRule rule;
          if (auto k = r.str(x, path, "keyword", true)) {
            if (k->empty()) r.error(path + ".keyword: must not be empty");
            rule.keyword = *k;
          }
          rule.explain = r.str(x, path, "explain", false);
          rule.suggest = r.str(x, path, "suggest", false);
          rules.push_back(std::move(rule));
        }
      }
    }
  }
  if (!r.failed()) out.value = std::move(rules);
  return out;
}

Loaded<std::vector<EnhancerRule>> load_rules(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    Loaded<std::vector<EnhancerRule>> out;
    out.io_error = true;
    out.diagnostics.push_back({Diagnostic::Severity::Error, 0, 0, "cannot read " + path});
    return out;
  }
  return parse_rules(*text);
}

const std::vector<EnhancerRule>& default_rules() {
  static const std::vector<EnhancerRule> rules = [] {
    auto loaded = parse_rules(default_rules_source());
    if (!loaded.ok())
      throw std::logic_error("bundled feedback rules are invalid: " + join_messages(loaded.diagnostics));
    return *loaded.value;
  }();
  return rules;
}

}  // namespace mapforge
