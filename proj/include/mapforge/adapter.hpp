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

#include <memory>
#include <string>
#include <vector>

#include "mapforge/search.hpp"

namespace mapforge {

inline constexpr const char* kAdapterProtocol = "mapforge-adapter/1";

// One request line out, one response line back. Throws ProposalError on
// transport failure.
class AdapterTransport {
 public:
  virtual ~AdapterTransport() = default;
  virtual std::string exchange(const std::string& request) = 0;
};

// Runs `command` under /bin/sh once and keeps talking to it over its
// stdin/stdout for the whole trajectory.
std::unique_ptr<AdapterTransport> subprocess_transport(const std::string& command);
// POSTs each request to an http:// URL; the response body is the reply.
std::unique_ptr<AdapterTransport> http_transport(const std::string& url);

// Request and response documents of the wire protocol.
std::string adapter_request(const Evaluator& ev, const std::vector<IterationRecord>& history,
                            const Blocks& base);
// Throws ProposalError for malformed or out-of-domain responses.
Candidate adapter_response(const Evaluator& ev, const std::string& line, const Blocks& base);

std::unique_ptr<Strategy> make_external(const Evaluator& ev,
                                        std::unique_ptr<AdapterTransport> transport);

}  // namespace mapforge
