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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapforge/app.hpp"
#include "mapforge/ast.hpp"

namespace mapforge::testing {

inline std::filesystem::path corpus_dir() { return MAPFORGE_CORPUS_DIR; }
inline std::filesystem::path fixture_dir() { return MAPFORGE_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sorted so test output is stable.
inline std::vector<std::filesystem::path> files_in(const std::filesystem::path& dir,
                                                   const std::string& ext) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Every mapper shipped with the project.
inline std::vector<std::filesystem::path> corpus_mappers() {
  std::vector<std::filesystem::path> out;
  for (const char* sub : {"strategies", "generated", "builtins"})
    for (auto& p : files_in(corpus_dir() / sub, ".dsl")) out.push_back(p);
  out.push_back(corpus_dir() / "fig3a.dsl");
  return out;
}

template <typename T>
T must(Loaded<T> loaded, const std::string& what) {
  if (!loaded.ok()) {
    std::string msg = "cannot load " + what;
    for (const auto& d : loaded.diagnostics) msg += "\n  " + d.message;
    throw std::runtime_error(msg);
  }
  return std::move(*loaded.value);
}

inline ApplicationDescriptor corpus_app(const std::string& name) {
  return must(load_app((corpus_dir() / "apps" / (name + ".app")).string()), name);
}
inline std::string expert_source(const std::string& app) {
  return slurp(corpus_dir() / "apps" / (app + ".expert.dsl"));
}
inline MachineModel corpus_machine() {
  return must(load_machine((corpus_dir() / "machines" / "p100-cluster.machine").string()),
              "machine");
}
inline CostParams corpus_costs() {
  return must(load_costs((corpus_dir() / "costs" / "default.costs").string()), "costs");
}
inline const std::vector<std::string>& app_names() {
  static const std::vector<std::string> names = {"cannon", "circuit", "cosma",   "johnson",
                                                 "pennant", "pumma",  "solomonik", "stencil",
                                                 "summa",  "toy16",  "toy256",  "toy4096"};
  return names;
}

// splitmix64; small and reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(next() % n); }
  bool coin() { return next() & 1; }

 private:
  std::uint64_t state_;
};

}  // namespace mapforge::testing
