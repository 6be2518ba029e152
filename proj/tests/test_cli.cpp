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

#include <cstdlib>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "mapforge/cli.hpp"
#include "search_oracle.hpp"
#include "support.hpp"

using namespace mapforge;
using namespace mapforge::testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mapforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string app(const std::string& name) { return (corpus_dir() / "apps" / (name + ".app")).string(); }
std::string expert(const std::string& name) {
  return (corpus_dir() / "apps" / (name + ".expert.dsl")).string();
}
std::string cli_fixture(const std::string& name) { return (fixture_dir() / "cli" / name).string(); }

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("mapforge-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> column(const std::string& csv, std::size_t index) {
  std::vector<std::string> out;
  auto rows = split_lines(csv);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(rows[r]);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (rows[r].back() == ',') cells.push_back("");
    out.push_back(index < cells.size() ? cells[index] : "");
  }
  return out;
}

}  // namespace

TEST_CASE("check") {
  auto ok = cli({"check", (corpus_dir() / "strategies" / "01.dsl").string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find(": ok") != std::string::npos);

  auto bad = cli({"check", (fixture_dir() / "dsl" / "fig3a_colon.dsl").string()});
  CHECK(bad.code == kExitUser);
  CHECK(bad.err.find("Syntax error, unexpected :") != std::string::npos);

  CHECK(cli({"check", "/nonexistent/mapper.dsl"}).code == kExitIo);
  CHECK(cli({"check"}).code == kExitUser);
}

TEST_CASE("simulate") {
  SUBCASE("expert stencil") {
    auto r = cli({"simulate", "--app", app("stencil"), "--mapper", expert("stencil")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("\nthroughput=") != std::string::npos);
    CHECK(r.out.find("status=ok") != std::string::npos);
    CHECK(r.out.find("Performance Metric: Execution time is ") != std::string::npos);
    CHECK(r.out.find("Suggestion:") == std::string::npos);
  }
  SUBCASE("golden output at the full level") {
    auto r = cli({"simulate", "--app", app("stencil"), "--mapper", expert("stencil"),
                  "--feedback-level", "system+explain+suggest"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == slurp(cli_fixture("simulate_stencil.golden")));
    CHECK(r.out.find("\nSuggestion: Move more tasks to GPU to reduce execution time.\n") !=
          std::string::npos);
  }
  SUBCASE("out of memory") {
    auto r = cli({"simulate", "--app", app("stencil"), "--mapper", expert("stencil"), "--machine",
                  cli_fixture("tiny-fb.machine")});
    CHECK(r.code == kExitSimulation);
    CHECK(r.out.rfind("Execution Error: Out of memory: region points_in of task stencil", 0) == 0);
    CHECK(r.out.find("status=execution_error") != std::string::npos);
  }
  SUBCASE("compile errors") {
    auto r = cli({"simulate", "--app", app("stencil"), "--mapper",
                  (fixture_dir() / "feedback" / "row1_colon.dsl").string()});
    CHECK(r.code == kExitUser);
    CHECK(r.out.rfind("Compile Error: Syntax error, unexpected :", 0) == 0);
  }
  SUBCASE("bad inputs") {
    CHECK(cli({"simulate", "--app", "/nonexistent.app", "--mapper", expert("stencil")}).code ==
          kExitIo);
    CHECK(cli({"simulate", "--app", cli_fixture("broken.app"), "--mapper", expert("stencil")})
              .code == kExitUser);
    CHECK(cli({"simulate", "--app", app("stencil"), "--mapper", expert("stencil"), "--level",
               "loud"})
              .code == kExitUser);
    CHECK(cli({"simulate", "--app", app("stencil")}).code == kExitUser);
  }
  SUBCASE("identical runs print identical bytes") {
    for (const auto& name : app_names()) {
      const std::vector<std::string> args = {"simulate", "--app", app(name), "--mapper",
                                             expert(name)};
      CHECK(cli(args).out == cli(args).out);
    }
  }
}

TEST_CASE("space") {
  auto r = cli({"space", "--app", app("stencil")});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "274877906944\n2^38\n");
  CHECK(split_lines(cli({"space", "--app", cli_fixture("one-task.app")}).out)[0] == "2");
  CHECK(cli({"space", "--app", cli_fixture("broken.app")}).code == kExitUser);
  // A product that is not a power of two prints no exponent.
  auto circuit = cli({"space", "--app", app("circuit")});
  CHECK(split_lines(circuit.out).size() == 1);
  CHECK(circuit.out == fmt::format("{}\n", 27ull * (1ull << 30)));
}

TEST_CASE("emit and domains") {
  auto d = cli({"domains", "--app", app("toy16")});
  CHECK(d.code == kExitOk);
  CHECK(split_lines(d.out).size() == 3);
  auto e = cli({"emit", "--app", app("toy16"), "--vector", "1,0,3"});
  CHECK(e.code == kExitOk);
  CHECK(e.out.find("Task * CPU;") != std::string::npos);
  CHECK(cli({"emit", "--app", app("toy16"), "--vector", "1,0"}).code == kExitUser);
}

TEST_CASE("optimize") {
  TempDir tmp;
  SUBCASE("rows per seed and iteration") {
    auto r = cli({"optimize", "--app", app("toy4096"), "--iters", "10", "--seeds", "5"});
    CHECK(r.code == kExitOk);
    CHECK(split_lines(r.out).size() == 51);
    CHECK(r.err.rfind("best score ", 0) == 0);
  }
  SUBCASE("exhaustive finds the brute-force optimum") {
    auto r = cli({"optimize", "--app", app("toy256"), "--strategy", "exhaustive", "--iters", "256",
                  "--seeds", "1", "--out", tmp / "ex.csv"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    const auto best = column(slurp(tmp / "ex.csv"), 3).back();
    const auto oracle = brute_force(corpus_app("toy256"), corpus_machine(), corpus_costs());
    CHECK(best == fmt::format("{:.9g}", oracle.best));
  }
  SUBCASE("normalizing by an optimal expert ends at 1") {
    const auto oracle = brute_force(corpus_app("toy16"), corpus_machine(), corpus_costs());
    auto sim = cli({"simulate", "--app", app("toy16"), "--mapper", expert("toy16")});
    REQUIRE(sim.out.find(fmt::format("\nthroughput={:.9g}\n", oracle.best)) != std::string::npos);
    auto r = cli({"optimize", "--app", app("toy16"), "--strategy", "exhaustive", "--iters", "16",
                  "--seeds", "1", "--baseline", expert("toy16"), "--svg", tmp / "curve.svg"});
    CHECK(r.code == kExitOk);
    CHECK(column(r.out, 4).back() == "1");
    CHECK(slurp(tmp / "curve.svg").rfind("<svg", 0) == 0);
  }
  SUBCASE("unknown strategy") {
    auto r = cli({"optimize", "--app", app("toy16"), "--strategy", "annealing"});
    CHECK(r.code == kExitUser);
    CHECK(r.err.find("unknown strategy 'annealing'") != std::string::npos);
  }
  SUBCASE("bad counts") {
    CHECK(cli({"optimize", "--app", app("toy16"), "--iters", "0"}).code == kExitUser);
    CHECK(cli({"optimize", "--app", app("toy16"), "--seeds", "-1"}).code == kExitUser);
  }
  SUBCASE("an unreachable adapter is not fatal") {
    auto r = cli({"optimize", "--app", app("toy16"), "--strategy", "external", "--iters", "3",
                  "--seeds", "2", "--adapter-url", "http://127.0.0.1:1/propose"});
    CHECK(r.code == kExitOk);
    for (const auto& kind : column(r.out, 5)) CHECK(kind == "CompileError");
    CHECK(column(r.out, 5).size() == 6);
  }
  SUBCASE("external needs an endpoint") {
    ::unsetenv("MAPFORGE_ADAPTER");
    CHECK(cli({"optimize", "--app", app("toy16"), "--strategy", "external"}).code == kExitUser);
  }
  SUBCASE("the endpoint may come from the environment") {
    ::setenv("MAPFORGE_ADAPTER", (std::string(FAKE_ADAPTER) + " walk").c_str(), 1);
    auto r = cli({"optimize", "--app", app("toy16"), "--strategy", "external", "--iters", "16",
                  "--seeds", "1"});
    ::unsetenv("MAPFORGE_ADAPTER");
    CHECK(r.code == kExitOk);
    for (const auto& kind : column(r.out, 5)) CHECK(kind == "PerformanceMetric");
  }
  SUBCASE("seeded runs are byte-identical, with or without parallel seeds") {
    const std::vector<std::string> base = {"optimize", "--app", app("circuit"), "--strategy",
                                           "hillclimb", "--iters", "8", "--seeds", "4"};
    auto with = [&](std::vector<std::string> extra) {
      auto args = base;
      args.insert(args.end(), extra.begin(), extra.end());
      return args;
    };
    CHECK(cli(with({"--out", tmp / "a.csv", "--trace", tmp / "a.jsonl"})).code == kExitOk);
    CHECK(cli(with({"--out", tmp / "b.csv", "--trace", tmp / "b.jsonl", "--jobs", "3"})).code ==
          kExitOk);
    CHECK(slurp(tmp / "a.csv") == slurp(tmp / "b.csv"));
    CHECK(slurp(tmp / "a.jsonl") == slurp(tmp / "b.jsonl"));
    CHECK(split_lines(slurp(tmp / "a.jsonl")).size() == 32);
  }
  SUBCASE("feedback levels differ only by enhancement lines") {
    std::vector<std::vector<std::string>> feedback;
    for (const char* level : {"system", "system+explain", "system+explain+suggest"}) {
      const std::string trace = tmp / (std::string(level) + ".jsonl");
      CHECK(cli({"optimize", "--app", app("circuit"), "--iters", "10", "--seeds", "2", "--level",
                 level, "--trace", trace, "--out", tmp / "x.csv"})
                .code == kExitOk);
      std::vector<std::string> texts;
      for (const auto& line : split_lines(slurp(trace)))
        texts.push_back(nlohmann::json::parse(line)["feedback"].get<std::string>());
      feedback.push_back(texts);
    }
    REQUIRE(feedback[0].size() == 20);
    for (std::size_t k = 0; k < feedback[0].size(); ++k) {
      CHECK(strip_enhancements(feedback[1][k]) == feedback[0][k]);
      CHECK(strip_enhancements(feedback[2][k]) == feedback[0][k]);
    }
  }
  SUBCASE("unwritable outputs") {
    CHECK(cli({"optimize", "--app", app("toy16"), "--iters", "1", "--seeds", "1", "--out",
               "/nonexistent/dir/out.csv"})
              .code == kExitIo);
  }
}

TEST_CASE("help and usage") {
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitUser);
  CHECK(cli({"frobnicate"}).code == kExitUser);
}
