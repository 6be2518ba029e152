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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "mapforge/ast.hpp"
#include "mapforge/machine.hpp"

namespace mapforge::detail {

using nlohmann::json;

// Walks a JSON document, recording schema violations with field paths.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void error(const std::string& msg) {
    diags_.push_back({Diagnostic::Severity::Error, 0, 0, msg});
  }
  bool failed() const { return !diags_.empty(); }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string at(const std::string& path, std::size_t i) {
    return fmt::format("{}[{}]", path, i);
  }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      error(fmt::format("{}: expected an object", path.empty() ? "<root>" : path));
      return false;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items())
      if (!ok.count(k)) error(fmt::format("{}: unknown field", join(path, k)));
    return true;
  }

  const json* field(const json& j, const std::string& path, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) error(fmt::format("missing required field: {}", join(path, key)));
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> str(const json& j, const std::string& path, const char* key,
                                 bool required) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      error(fmt::format("{}: expected a string", join(path, key)));
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::int64_t> positive_int(const json& j, const std::string& path, const char* key,
                                           bool required, bool allow_zero = false) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    return positive_int_value(*v, join(path, key), allow_zero);
  }

  std::optional<std::int64_t> positive_int_value(const json& v, const std::string& path,
                                                 bool allow_zero = false) {
    if (!v.is_number_integer()) {
      error(fmt::format("{}: expected an integer", path));
      return std::nullopt;
    }
    const auto x = v.get<std::int64_t>();
    if (x < 0 || (x == 0 && !allow_zero)) {
      error(fmt::format("{}: must be {}", path, allow_zero ? "non-negative" : "positive"));
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> positive_number(const json& j, const std::string& path, const char* key,
                                        bool required, bool allow_zero = false) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      error(fmt::format("{}: expected a number", join(path, key)));
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!(x > 0) && !(allow_zero && x == 0)) {
      error(fmt::format("{}: must be {}", join(path, key), allow_zero ? "non-negative" : "positive"));
      return std::nullopt;
    }
    return x;
  }

  std::optional<bool> boolean(const json& j, const std::string& path, const char* key) {
    const json* v = field(j, path, key, false);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      error(fmt::format("{}: expected true or false", join(path, key)));
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<Extents> int_list(const json& v, const std::string& path, bool positive,
                                  bool allow_empty) {
    if (!v.is_array()) {
      error(fmt::format("{}: expected an array of integers", path));
      return std::nullopt;
    }
    if (v.empty() && !allow_empty) {
      error(fmt::format("{}: must not be empty", path));
      return std::nullopt;
    }
    Extents out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        error(fmt::format("{}: expected an integer", at(path, i)));
        return std::nullopt;
      }
      const auto x = v[i].get<std::int64_t>();
      if (positive && x <= 0) {
        error(fmt::format("{}: must be positive", at(path, i)));
        return std::nullopt;
      }
      out.push_back(x);
    }
    return out;
  }

  std::optional<ProcKind> proc(const json& j, const std::string& path, const char* key) {
    auto s = str(j, path, key, true);
    if (!s) return std::nullopt;
    auto k = parse_proc_kind(*s);
    if (!k) error(fmt::format("{}: unknown processor kind {}", join(path, key), *s));
    return k;
  }

 private:
  std::vector<Diagnostic>& diags_;
};

inline std::optional<json> parse_json(std::string_view text, std::vector<Diagnostic>& diags) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    diags.push_back({Diagnostic::Severity::Error, 0, 0, fmt::format("invalid JSON: {}", e.what())});
    return std::nullopt;
  }
}

}  // namespace mapforge::detail
