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
#include <vector>

#include <json.hpp>

#include "mapforge/search.hpp"
#include "support.hpp"

namespace mapforge::testing {

// tests/fixtures/feedback/rows.json: one mapper per enhancer rule row.
struct FeedbackRow {
  std::string app;
  std::filesystem::path mapper;
  std::string kind;
  std::string system_prefix;
  std::optional<std::string> explain;
  std::optional<std::string> suggest;
};

inline std::vector<FeedbackRow> feedback_rows() {
  const auto dir = fixture_dir() / "feedback";
  const auto doc = nlohmann::json::parse(slurp(dir / "rows.json"), nullptr, true, true);
  auto opt = [](const nlohmann::json& j) -> std::optional<std::string> {
    if (j.is_null()) return std::nullopt;
    return j.get<std::string>();
  };
  std::vector<FeedbackRow> rows;
  for (const auto& r : doc.at("rows"))
    rows.push_back({r.at("app").get<std::string>(), dir / r.at("mapper").get<std::string>(),
                    r.at("kind").get<std::string>(), r.at("system").get<std::string>(),
                    opt(r.at("explain")), opt(r.at("suggest"))});
  return rows;
}

inline FeedbackReport evaluate_row(const FeedbackRow& row, FeedbackLevel level) {
  const Evaluator ev(corpus_app(row.app), corpus_machine(), corpus_costs(), default_rules(),
                     level);
  return ev.evaluate(slurp(row.mapper));
}

// Rendered text at each level: system, +explain, +suggest.
inline std::vector<std::string> rendered_levels(const FeedbackRow& row) {
  std::vector<std::string> out;
  for (auto level : {FeedbackLevel::System, FeedbackLevel::SystemExplain,
                     FeedbackLevel::SystemExplainSuggest})
    out.push_back(render(evaluate_row(row, level)));
  return out;
}

inline bool is_prefix(const std::string& a, const std::string& b) {
  return b.compare(0, a.size(), a) == 0;
}

}  // namespace mapforge::testing
