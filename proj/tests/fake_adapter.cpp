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
// Scripted external optimizer for the adapter tests. Reads one request per
// line and answers according to the mode given as argv[1]:
//   walk     vector enumerating the space in request order
//   blocks   replaces the layout block with "Layout * * * AOS F_order;"
//   garbage  a line that is not JSON
//   quit     exits after reading the first request
#include <iostream>
#include <string>

#include <json.hpp>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "walk";
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line);
    if (req.at("protocol") != "mapforge-adapter/1") {
      std::cout << R"({"error": "bad protocol"})" << std::endl;
      continue;
    }
    if (mode == "quit") return 0;
    if (mode == "garbage") {
      std::cout << "not json" << std::endl;
      continue;
    }
    if (mode == "blocks") {
      std::cout << R"({"blocks": {"layout_decision": "Layout * * * AOS F_order;"}})" << std::endl;
      continue;
    }
    std::size_t index = req.at("iteration").get<std::size_t>();
    nlohmann::json v = nlohmann::json::array();
    const auto& dims = req.at("domains");
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
      const std::size_t n = dims[k].at("options").size();
      digits[k] = index % n;
      index /= n;
    }
    for (auto d : digits) v.push_back(d);
    std::cout << nlohmann::json{{"vector", v}}.dump() << std::endl;
  }
  return 0;
}
