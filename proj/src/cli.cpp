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
#include "mapforge/cli.hpp"

#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mapforge/adapter.hpp"
#include "mapforge/dsl.hpp"
#include "mapforge/eval.hpp"
#include "mapforge/search.hpp"
#include "mapforge/simulator.hpp"

namespace mapforge {
namespace {

// Early exit with a code; the message has already been printed.
struct Exit {
  int code;
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out(out), err(err) {}

  template <typename T>
  T take(Loaded<T> loaded, const std::string& path) {
    if (loaded.io_error) {
      err << fmt::format("{}: cannot read file\n", path);
      throw Exit{kExitIo};
    }
    for (const auto& d : loaded.diagnostics) err << format_diagnostic(d, path) << "\n";
    if (!loaded.ok()) throw Exit{kExitUser};
    return std::move(*loaded.value);
  }

  ApplicationDescriptor app(const std::string& path) { return take(load_app(path), path); }

  MachineModel machine(const std::string& path) {
    if (path.empty()) return take(parse_machine(default_machine_source()), "<builtin machine>");
    return take(load_machine(path), path);
  }

  CostParams costs(const std::string& path) {
    if (path.empty()) return CostParams{};
    return take(load_costs(path), path);
  }

  std::vector<EnhancerRule> rules(const std::string& path) {
    if (path.empty()) return default_rules();
    return take(load_rules(path), path);
  }

  FeedbackLevel level(const std::string& text) {
    auto level = parse_level(text);
    if (!level) {
      err << fmt::format("unknown feedback level '{}' (expected system, system+explain or "
                         "system+explain+suggest)\n",
                         text);
      throw Exit{kExitUser};
    }
    return *level;
  }

  std::string read(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
      err << fmt::format("{}: cannot read file\n", path);
      throw Exit{kExitIo};
    }
    return *text;
  }

  void write(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
      err << fmt::format("{}: cannot write file\n", path);
      throw Exit{kExitIo};
    }
  }

  std::ostream& out;
  std::ostream& err;
};

std::string num(double v) { return fmt::format("{:.9g}", v); }

int cmd_check(Context& cx, const std::vector<std::string>& paths) {
  int worst = kExitOk;
  for (const auto& path : paths) {
    auto text = read_file(path);
    if (!text) {
      cx.err << fmt::format("{}: cannot read file\n", path);
      worst = kExitIo;
      continue;
    }
    ParseResult parsed = parse(*text);
    std::vector<Diagnostic> diags = parsed.diagnostics;
    if (parsed.ok()) {
      auto more = validate(*parsed.program, &builtin_library());
      diags.insert(diags.end(), more.begin(), more.end());
    }
    bool failed = !parsed.ok();
    for (const auto& d : diags) {
      cx.err << format_diagnostic(d, path) << "\n";
      if (d.severity == Diagnostic::Severity::Error) failed = true;
    }
    if (failed) {
      worst = std::max(worst, static_cast<int>(kExitUser));
    } else {
      cx.out << fmt::format("{}: ok\n", path);
    }
  }
  return worst;
}

struct SimulateArgs {
  std::string app, mapper, machine, costs, rules;
  std::string level = "system";
};

void print_feedback(Context& cx, const FeedbackReport& report) {
  cx.out << "feedback.kind=" << to_string(report.kind) << "\n";
  cx.out << "feedback.system=" << report.system_message << "\n";
  if (report.explain) cx.out << "feedback.explain=" << *report.explain << "\n";
  if (report.suggest) cx.out << "feedback.suggest=" << *report.suggest << "\n";
}

int cmd_simulate(Context& cx, const SimulateArgs& a) {
  const ApplicationDescriptor app = cx.app(a.app);
  const MachineModel machine = cx.machine(a.machine);
  const CostParams costs = cx.costs(a.costs);
  const auto rules = cx.rules(a.rules);
  const FeedbackLevel level = cx.level(a.level);
  const std::string source = cx.read(a.mapper);

  auto compile_error = [&](const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) cx.err << format_diagnostic(d, a.mapper) << "\n";
    const FeedbackReport report = enhance(classify(diags), rules, level);
    cx.out << render(report) << "\n\nstatus=compile_error\n";
    print_feedback(cx, report);
    return kExitUser;
  };

  ParseResult parsed = parse(source);
  if (!parsed.ok()) return compile_error(parsed.diagnostics);
  if (auto diags = validate(*parsed.program, &builtin_library()); !diags.empty())
    return compile_error(diags);
  Resolved resolved = resolve(*parsed.program, app, machine);
  if (!resolved.ok()) return compile_error(resolved.diagnostics);

  const SimOutcome outcome = simulate(app, *resolved.table, machine, costs);
  if (const auto* error = std::get_if<SimError>(&outcome)) {
    const FeedbackReport report = enhance(classify(*error), rules, level);
    cx.out << render(report) << "\n\nstatus=execution_error\n";
    print_feedback(cx, report);
    return kExitSimulation;
  }
  const SimResult& r = std::get<SimResult>(outcome);
  const FeedbackReport report = enhance(classify(r, app), rules, level);

  const bool flops = app.metric == Metric::Flops;
  cx.out << fmt::format("app {} on machine {}, {} iterations\n", app.name, machine.name,
                        app.iterations);
  cx.out << fmt::format("  wall time            {:.6g} s\n", r.wall_time);
  if (flops) {
    cx.out << fmt::format("  throughput           {:.6g} GFLOPS\n", r.throughput / 1e9);
  } else {
    cx.out << fmt::format("  throughput           {:.6g} iterations/s\n", r.throughput);
  }
  cx.out << fmt::format("  compute/iteration    {:.6g} s\n", r.compute_time);
  cx.out << fmt::format("  comm/iteration       {:.6g} s\n", r.comm_time);
  cx.out << fmt::format("  inter-node bytes     {:.6g} per iteration\n", r.inter_node_bytes);
  for (const auto& [task, t] : r.task_compute)
    cx.out << fmt::format("  task {:<15} {:.6g} s\n", task, t);
  for (const auto& [key, bytes] : r.peak_memory)
    cx.out << fmt::format("  peak {} node {}  {} bytes\n", to_string(key.second), key.first, bytes);
  cx.out << render(report) << "\n\n";

  cx.out << "status=ok\n";
  cx.out << "wall_time=" << num(r.wall_time) << "\n";
  cx.out << "throughput=" << num(r.throughput) << "\n";
  cx.out << "compute_time=" << num(r.compute_time) << "\n";
  cx.out << "comm_time=" << num(r.comm_time) << "\n";
  cx.out << "inter_node_bytes=" << num(r.inter_node_bytes) << "\n";
  for (const auto& [task, t] : r.task_compute) cx.out << "task_compute." << task << "=" << num(t) << "\n";
  for (const auto& [key, bytes] : r.peak_memory)
    cx.out << fmt::format("peak_memory.{}.{}={}\n", key.first, to_string(key.second), bytes);
  print_feedback(cx, report);
  return kExitOk;
}

struct OptimizeArgs {
  std::string app, machine, costs, rules;
  std::string strategy = "random";
  std::string level = "system+explain+suggest";
  int iters = 10;
  int seeds = 5;
  std::uint64_t first_seed = 1;
  int jobs = 1;
  std::string out, baseline, svg, trace, adapter_url, adapter_cmd;
};

int cmd_optimize(Context& cx, const OptimizeArgs& a) {
  static const std::vector<std::string> kStrategies = {"random", "hillclimb", "exhaustive",
                                                       "external"};
  if (std::find(kStrategies.begin(), kStrategies.end(), a.strategy) == kStrategies.end()) {
    cx.err << fmt::format(
        "unknown strategy '{}' (expected random, hillclimb, exhaustive or external)\n", a.strategy);
    return kExitUser;
  }
  std::string url = a.adapter_url, cmd = a.adapter_cmd;
  if (a.strategy == "external" && url.empty() && cmd.empty()) {
    if (const char* env = std::getenv("MAPFORGE_ADAPTER"); env && *env) {
      const std::string endpoint = env;
      (endpoint.rfind("http://", 0) == 0 ? url : cmd) = endpoint;
    } else {
      cx.err << "external strategy needs --adapter-url, --adapter-cmd or MAPFORGE_ADAPTER\n";
      return kExitUser;
    }
  }

  const Evaluator ev(cx.app(a.app), cx.machine(a.machine), cx.costs(a.costs), cx.rules(a.rules),
                     cx.level(a.level));

  std::optional<double> baseline;
  if (!a.baseline.empty()) {
    const FeedbackReport report = ev.evaluate(cx.read(a.baseline));
    if (!report.score || *report.score <= 0) {
      cx.err << fmt::format("{}: baseline mapper did not produce a score:\n{}\n", a.baseline,
                            render(report));
      return kExitUser;
    }
    baseline = report.score;
  }

  std::vector<Trajectory> runs(static_cast<std::size_t>(a.seeds));
  std::vector<std::exception_ptr> failures(runs.size());
  auto one = [&](std::size_t k) {
    try {
      const std::uint64_t seed = a.first_seed + k;
      std::unique_ptr<Strategy> s;
      if (a.strategy == "random") {
        s = make_random(ev, seed);
      } else if (a.strategy == "hillclimb") {
        s = make_hillclimb(ev, seed);
      } else if (a.strategy == "exhaustive") {
        s = make_exhaustive(ev);
      } else {
        s = make_external(ev, url.empty() ? subprocess_transport(cmd) : http_transport(url));
      }
      runs[k] = run(ev, *s, a.iters, seed);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(a.jobs), runs.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < runs.size(); ++k) one(k);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t k = j; k < runs.size(); k += jobs) one(k);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  const std::string csv = trajectory_csv(runs, baseline);
  if (a.out.empty()) {
    cx.out << csv;
  } else {
    cx.write(a.out, csv);
  }
  if (!a.trace.empty()) cx.write(a.trace, trajectory_trace(runs));
  if (!a.svg.empty()) cx.write(a.svg, trajectory_svg(runs, baseline));

  const Trajectory* best_run = nullptr;
  for (const auto& t : runs)
    if (t.best() && (!best_run || *t.best()->score > *best_run->best()->score)) best_run = &t;
  if (!best_run) {
    cx.err << "no candidate ran successfully\n";
  } else if (baseline) {
    const Aggregate agg = aggregate(runs, *baseline);
    cx.err << fmt::format("best score {:.6g} ({:.4f}x baseline) at seed {}, iteration {}\n",
                          agg.best_score, agg.best_normalized, agg.best_seed, agg.best_iteration);
  } else {
    cx.err << fmt::format("best score {:.6g} at seed {}, iteration {}\n", *best_run->best()->score,
                          best_run->seed, best_run->best()->iteration);
  }
  return kExitOk;
}

int cmd_space(Context& cx, const std::string& app_path) {
  const ApplicationDescriptor app = cx.app(app_path);
  const boost::multiprecision::cpp_int n = search_space_size(app);
  cx.out << n << "\n";
  if (n > 0 && (n & (n - 1)) == 0) cx.out << "2^" << boost::multiprecision::msb(n) << "\n";
  return kExitOk;
}

int cmd_emit(Context& cx, const std::string& app_path, const std::vector<std::size_t>& vector) {
  const ApplicationDescriptor app = cx.app(app_path);
  try {
    check_vector(vector, domains(app));
  } catch (const std::invalid_argument& e) {
    cx.err << e.what() << "\n";
    return kExitUser;
  }
  cx.out << join_blocks(emit_blocks(from_vector(vector, app), app));
  return kExitOk;
}

int cmd_domains(Context& cx, const std::string& app_path) {
  const ApplicationDescriptor app = cx.app(app_path);
  for (const auto& d : domains(app)) cx.out << d.id << " " << fmt::format("{}", fmt::join(d.options, "|")) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Mapping DSL toolkit: check, simulate and search task mappers."};
  cli.name("mapforge");
  cli.require_subcommand(1);

  std::vector<std::string> check_paths;
  auto* check = cli.add_subcommand("check", "Parse and validate mapper files");
  check->add_option("mapper", check_paths, "Mapper source files")->required();

  SimulateArgs sim;
  auto* simulate_cmd = cli.add_subcommand("simulate", "Run one mapper through the cost model");
  simulate_cmd->add_option("--app", sim.app, "Application descriptor")->required();
  simulate_cmd->add_option("--mapper", sim.mapper, "Mapper source")->required();
  simulate_cmd->add_option("--machine", sim.machine, "Machine model (default: bundled cluster)");
  simulate_cmd->add_option("--costs", sim.costs, "Cost parameters (default: built-in)");
  simulate_cmd->add_option("--rules", sim.rules, "Feedback enhancer rules");
  simulate_cmd->add_option("--feedback-level,--level", sim.level, "Feedback level")
      ->capture_default_str();

  OptimizeArgs opt;
  auto* optimize = cli.add_subcommand("optimize", "Search the mapping space");
  optimize->add_option("--app", opt.app, "Application descriptor")->required();
  optimize->add_option("--machine", opt.machine, "Machine model (default: bundled cluster)");
  optimize->add_option("--costs", opt.costs, "Cost parameters (default: built-in)");
  optimize->add_option("--rules", opt.rules, "Feedback enhancer rules");
  optimize->add_option("--strategy", opt.strategy, "random, hillclimb, exhaustive or external")
      ->capture_default_str();
  optimize->add_option("--iters", opt.iters, "Iterations per seed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--seeds", opt.seeds, "Number of seeded runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--seed", opt.first_seed, "First seed")->capture_default_str();
  optimize->add_option("--level,--feedback-level", opt.level, "Feedback level")
      ->capture_default_str();
  optimize->add_option("--out", opt.out, "Trajectory CSV (default: stdout)");
  optimize->add_option("--baseline", opt.baseline, "Mapper whose score normalizes the results");
  optimize->add_option("--svg", opt.svg, "Line chart of mean best score per iteration");
  optimize->add_option("--trace", opt.trace, "JSON lines with every candidate and its feedback");
  optimize->add_option("--jobs", opt.jobs, "Seeds evaluated in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--adapter-url", opt.adapter_url, "External optimizer over HTTP");
  optimize->add_option("--adapter-cmd", opt.adapter_cmd, "External optimizer subprocess");

  std::string space_app;
  auto* space = cli.add_subcommand("space", "Size of the mapping space of an application");
  space->add_option("--app", space_app, "Application descriptor")->required();

  std::string domains_app;
  auto* domains_cmd = cli.add_subcommand("domains", "List the decision dimensions");
  domains_cmd->add_option("--app", domains_app, "Application descriptor")->required();

  std::string emit_app;
  std::vector<std::size_t> emit_vector;
  auto* emit_cmd = cli.add_subcommand("emit", "Print the mapper of a decision vector");
  emit_cmd->add_option("--app", emit_app, "Application descriptor")->required();
  emit_cmd->add_option("--vector", emit_vector, "Comma-separated option indices")
      ->required()
      ->delimiter(',');

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  Context cx(out, err);
  try {
    if (*check) return cmd_check(cx, check_paths);
    if (*simulate_cmd) return cmd_simulate(cx, sim);
    if (*optimize) return cmd_optimize(cx, opt);
    if (*space) return cmd_space(cx, space_app);
    if (*domains_cmd) return cmd_domains(cx, domains_app);
    if (*emit_cmd) return cmd_emit(cx, emit_app, emit_vector);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUser;
}

}  // namespace mapforge
