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
#include "mapforge/adapter.hpp"

#include <csignal>
#include <cerrno>
#include <cstring>

#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

namespace mapforge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class Subprocess : public AdapterTransport {
 public:
  explicit Subprocess(std::string command) : command_(std::move(command)) {}
  ~Subprocess() override { stop(); }

  std::string exchange(const std::string& request) override {
    if (pid_ < 0) start();
    std::string line = request + "\n";
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
      const ssize_t n = ::write(to_child_, p, left);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) fail("adapter process closed its input");
      p += n;
      left -= static_cast<std::size_t>(n);
    }
    std::string reply;
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return reply;
      }
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) fail("adapter process exited without replying");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    stop();
    throw ProposalError(fmt::format("adapter error: {} ({})", why, command_));
  }

  void start() {
    std::signal(SIGPIPE, SIG_IGN);
    int in[2], out[2];
    if (::pipe(in) != 0) throw ProposalError("adapter error: pipe failed");
    if (::pipe(out) != 0) {
      ::close(in[0]);
      ::close(in[1]);
      throw ProposalError("adapter error: pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) throw ProposalError(std::string("adapter error: fork failed: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::dup2(in[0], STDIN_FILENO);
      ::dup2(out[1], STDOUT_FILENO);
      ::close(in[0]);
      ::close(in[1]);
      ::close(out[0]);
      ::close(out[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in[0]);
    ::close(out[1]);
    to_child_ = in[1];
    from_child_ = out[0];
  }

  void stop() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
    buffer_.clear();
  }

  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

class Http : public AdapterTransport {
 public:
  explicit Http(const std::string& url) : url_(url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) {
      bad_ = "only http:// adapter URLs are supported: " + url;
      return;
    }
    const auto slash = url.find('/', scheme.size());
    base_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
  }

  std::string exchange(const std::string& request) override {
    if (!bad_.empty()) throw ProposalError("adapter error: " + bad_);
    httplib::Client client(base_);
    client.set_connection_timeout(5);
    client.set_read_timeout(120);
    auto res = client.Post(path_, request + "\n", "application/json");
    if (!res) throw ProposalError(fmt::format("adapter error: {} ({})", httplib::to_string(res.error()), url_));
    if (res->status != 200)
      throw ProposalError(fmt::format("adapter error: HTTP status {} ({})", res->status, url_));
    std::string body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    return body;
  }

 private:
  std::string url_, base_, path_, bad_;
};

class External : public Strategy {
 public:
  External(const Evaluator& ev, std::unique_ptr<AdapterTransport> t)
      : ev_(ev), transport_(std::move(t)),
        default_blocks_(ev.candidate(DecisionVector(ev.dims().size(), 0)).blocks) {}
  std::string name() const override { return "external"; }

  Candidate propose(const std::vector<IterationRecord>& history) override {
    const IterationRecord* best = nullptr;
    for (const auto& r : history)
      if (r.score && (!best || *r.score > *best->score)) best = &r;
    const Blocks& base = best ? best->candidate.blocks : default_blocks_;
    const std::string reply = transport_->exchange(adapter_request(ev_, history, base));
    return adapter_response(ev_, reply, base);
  }

 private:
  const Evaluator& ev_;
  std::unique_ptr<AdapterTransport> transport_;
  Blocks default_blocks_;
};

ordered_json vector_json(const std::optional<DecisionVector>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::unique_ptr<AdapterTransport> subprocess_transport(const std::string& command) {
  return std::make_unique<Subprocess>(command);
}

std::unique_ptr<AdapterTransport> http_transport(const std::string& url) {
  return std::make_unique<Http>(url);
}

std::string adapter_request(const Evaluator& ev, const std::vector<IterationRecord>& history,
                            const Blocks& base) {
  ordered_json req;
  req["protocol"] = kAdapterProtocol;
  req["app"] = ev.app().name;
  req["iteration"] = history.size();
  ordered_json dims = ordered_json::array();
  for (const auto& d : ev.dims()) dims.push_back({{"id", d.id}, {"options", d.options}});
  req["domains"] = dims;
  ordered_json hist = ordered_json::array();
  const IterationRecord* best = nullptr;
  for (const auto& r : history) {
    ordered_json h;
    h["iteration"] = r.iteration;
    h["candidate"] = {{"vector", vector_json(r.candidate.vector)}, {"mapper", r.candidate.source()}};
    h["feedback"] = r.rendered;
    h["score"] = r.score ? ordered_json(*r.score) : ordered_json(nullptr);
    hist.push_back(std::move(h));
    if (r.score && (!best || *r.score > *best->score)) best = &r;
  }
  req["history"] = hist;
  if (best) {
    req["best_so_far"] = {{"iteration", best->iteration},
                          {"vector", vector_json(best->candidate.vector)},
                          {"score", *best->score}};
  } else {
    req["best_so_far"] = nullptr;
  }
  ordered_json blocks = ordered_json::object();
  for (const char* name : kBlockNames) {
    auto it = base.find(name);
    blocks[name] = it == base.end() ? "" : it->second;
  }
  req["blocks"] = blocks;
  return req.dump();
}

Candidate adapter_response(const Evaluator& ev, const std::string& line, const Blocks& base) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProposalError(fmt::format("adapter error: malformed response: {}", e.what()));
  }
  if (!j.is_object()) throw ProposalError("adapter error: response must be a JSON object");
  if (auto it = j.find("error"); it != j.end() && it->is_string())
    throw ProposalError("adapter error: " + it->get<std::string>());
  const bool has_vector = j.contains("vector"), has_blocks = j.contains("blocks");
  if (has_vector == has_blocks)
    throw ProposalError("adapter error: response needs exactly one of \"vector\" or \"blocks\"");
  if (has_vector) {
    const json& v = j["vector"];
    if (!v.is_array()) throw ProposalError("adapter error: \"vector\" must be an array of integers");
    DecisionVector out;
    for (const auto& x : v) {
      if (!x.is_number_unsigned()) throw ProposalError("adapter error: \"vector\" must be an array of integers");
      out.push_back(x.get<std::size_t>());
    }
    return ev.candidate(out);
  }
  const json& b = j["blocks"];
  if (!b.is_object()) throw ProposalError("adapter error: \"blocks\" must be an object");
  Candidate c;
  c.blocks = base;
  for (const auto& [name, text] : b.items()) {
    if (std::find_if(std::begin(kBlockNames), std::end(kBlockNames),
                     [&](const char* n) { return name == n; }) == std::end(kBlockNames))
      throw ProposalError("adapter error: unknown block " + name);
    if (!text.is_string()) throw ProposalError("adapter error: block " + name + " must be a string");
    c.blocks[name] = text.get<std::string>();
  }
  return c;
}

std::unique_ptr<Strategy> make_external(const Evaluator& ev,
                                        std::unique_ptr<AdapterTransport> transport) {
  return std::make_unique<External>(ev, std::move(transport));
}

}  // namespace mapforge
