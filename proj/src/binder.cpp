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
#include "mapforge/binder.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "mapforge/dsl.hpp"

namespace mapforge {

const TaskDecision* MappingDecisionTable::find(std::string_view task) const {
  for (const auto& t : tasks)
    if (t.task == task) return &t;
  return nullptr;
}

MemKind local_memory(ProcKind kind) {
  switch (kind) {
    case ProcKind::GPU: return MemKind::FBMEM;
    case ProcKind::CPU: return MemKind::SYSMEM;
    case ProcKind::OMP: return MemKind::SOCKMEM;
  }
  return MemKind::SYSMEM;
}

namespace {

// Each returns -1 for no match, otherwise the number of exact slots.
int match_task(const std::string& pattern, const std::string& task) {
  if (pattern == kWildcard) return 0;
  return pattern == task ? 1 : -1;
}

int match_region(const RegionPattern& p, const std::string& region, std::size_t index) {
  switch (p.kind) {
    case RegionPattern::Kind::Wildcard: return 0;
    case RegionPattern::Kind::Name: return p.name == region ? 1 : -1;
    case RegionPattern::Kind::Index: return p.index == static_cast<std::int64_t>(index) ? 1 : -1;
  }
  return -1;
}

int match_proc(const std::optional<ProcKind>& p, ProcKind proc) {
  if (!p) return 0;
  return *p == proc ? 1 : -1;
}

int combine(std::initializer_list<int> scores) {
  int total = 0;
  for (int s : scores) {
    if (s < 0) return -1;
    total += s;
  }
  return total;
}

// Returns the winning statement: highest score, later statements win ties.
template <typename Stmt, typename Score>
const Stmt* best_match(const MapperProgram& program, Score&& score) {
  const Stmt* best = nullptr;
  int best_score = -1;
  for (const auto& stmt : program.statements) {
    const auto* s = std::get_if<Stmt>(&stmt);
    if (!s) continue;
    const int sc = score(*s);
    if (sc >= 0 && sc >= best_score) {
      best = s;
      best_score = sc;
    }
  }
  return best;
}

LayoutChoice layout_of(const LayoutStmt& s) {
  LayoutChoice c;
  for (const auto& k : s.constraints) {
    switch (k.kind) {
      case LayoutConstraint::Kind::SOA: c.aos = false; break;
      case LayoutConstraint::Kind::AOS: c.aos = true; break;
      case LayoutConstraint::Kind::COrder: c.f_order = false; break;
      case LayoutConstraint::Kind::FOrder: c.f_order = true; break;
      case LayoutConstraint::Kind::NoAlign:
        c.align_op.reset();
        c.align_bytes = 0;
        break;
      case LayoutConstraint::Kind::Align:
        c.align_op = k.op;
        c.align_bytes = k.bytes;
        break;
    }
  }
  return c;
}

bool names_task(const std::vector<std::string>& tasks, const std::string& task) {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

}  // namespace

Resolved resolve(const MapperProgram& program, const ApplicationDescriptor& app,
                 const MachineModel& machine) {
  Resolved out;
  MappingDecisionTable table;
  auto error = [&](SourcePos pos, std::string msg) {
    out.diagnostics.push_back({Diagnostic::Severity::Error, pos.line, pos.column, std::move(msg)});
  };

  for (const auto& stmt : program.statements)
    if (std::holds_alternative<AssignStmt>(stmt) || std::holds_alternative<FuncDef>(stmt))
      table.code.statements.push_back(stmt);

  for (const auto& t : app.tasks) {
    TaskDecision d;
    d.task = t.name;
    const auto* ts = best_match<TaskStmt>(program, [&](const TaskStmt& s) {
      return match_task(s.task, t.name);
    });
    if (!ts) {
      error({}, fmt::format("no Task statement matches task {}", t.name));
      continue;
    }
    bool chosen = false;
    for (ProcKind k : ts->procs) {
      if (machine.count(k) > 0 && t.variant(k)) {
        d.proc = k;
        chosen = true;
        break;
      }
    }
    if (!chosen) {
      error(ts->pos, fmt::format("no viable processor for task {}", t.name));
      continue;
    }

    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const std::string& region = t.args[i].region;
      RegionDecision rd;
      rd.region = region;
      const auto* rs = best_match<RegionStmt>(program, [&](const RegionStmt& s) {
        return combine({match_task(s.task, t.name), match_region(s.region, region, i),
                        match_proc(s.proc, d.proc)});
      });
      if (!rs) {
        error({}, fmt::format("no Region statement matches region {} (argument {}) of task {} on {}",
                              region, i, t.name, to_string(d.proc)));
      } else {
        rd.memories = rs->memories;
      }
      const auto* ls = best_match<LayoutStmt>(program, [&](const LayoutStmt& s) {
        return combine({match_task(s.task, t.name), match_region(s.region, region, i),
                        match_proc(s.proc, d.proc)});
      });
      if (ls) rd.layout = layout_of(*ls);
      for (const auto& stmt : program.statements) {
        const auto* cs = std::get_if<CollectStmt>(&stmt);
        if (cs && combine({match_task(cs->task, t.name), match_region(cs->region, region, i)}) >= 0)
          rd.collect = true;
      }
      d.args.push_back(std::move(rd));
    }

    for (const auto& stmt : program.statements) {
      if (const auto* s = std::get_if<IndexTaskMapStmt>(&stmt); s && names_task(s->tasks, t.name))
        d.index_map = s->func;
      if (const auto* s = std::get_if<SingleTaskMapStmt>(&stmt); s && names_task(s->tasks, t.name))
        d.single_map = s->func;
      if (const auto* s = std::get_if<InstanceLimitStmt>(&stmt); s && s->task == t.name)
        d.instance_limit = s->limit;
    }
    table.tasks.push_back(std::move(d));
  }

  if (out.diagnostics.empty()) out.table = std::move(table);
  return out;
}

// ---------------------------------------------------------------------------
// Decision vectors

namespace {

const char* const kLayoutOptions[] = {"SOA C_order", "SOA F_order", "AOS C_order", "AOS F_order"};
const char* const kMemOptions[] = {"local", "zero-copy"};

std::vector<ProcKind> proc_options(const TaskDesc& t) {
  std::vector<ProcKind> out;
  for (ProcKind k : kAllProcKinds)
    if (t.variant(k)) out.push_back(k);
  return out;
}

}  // namespace

std::vector<Dimension> domains(const ApplicationDescriptor& app) {
  std::vector<Dimension> dims;
  for (const auto& t : app.tasks) {
    Dimension d{"task:" + t.name, {}};
    for (ProcKind k : proc_options(t)) d.options.emplace_back(to_string(k));
    dims.push_back(std::move(d));
  }
  for (const auto& t : app.tasks)
    for (std::size_t i = 0; i < t.args.size(); ++i)
      dims.push_back({fmt::format("region:{}:{}", t.name, i), {kMemOptions[0], kMemOptions[1]}});
  for (const auto& t : app.tasks)
    for (std::size_t i = 0; i < t.args.size(); ++i)
      dims.push_back({fmt::format("layout:{}:{}", t.name, i),
                      {std::begin(kLayoutOptions), std::end(kLayoutOptions)}});
  for (const auto& t : app.tasks)
    if (t.is_index_launch() && !t.index_maps.empty())
      dims.push_back({"indexmap:" + t.name, t.index_maps});
  return dims;
}

boost::multiprecision::cpp_int search_space_size(const ApplicationDescriptor& app) {
  boost::multiprecision::cpp_int n = 1;
  for (const auto& d : domains(app)) n *= d.options.size();
  return n;
}

void check_vector(const DecisionVector& v, const std::vector<Dimension>& dims) {
  if (v.size() != dims.size())
    throw std::invalid_argument(
        fmt::format("decision vector has {} entries, expected {}", v.size(), dims.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= dims[i].options.size())
      throw std::invalid_argument(fmt::format("option {} out of range for dimension {} ({} options)",
                                              v[i], dims[i].id, dims[i].options.size()));
}

DecisionVector decision_vector(const MappingDecisionTable& table, const ApplicationDescriptor& app) {
  DecisionVector v;
  auto task_of = [&](const TaskDesc& t) -> const TaskDecision& {
    const TaskDecision* d = table.find(t.name);
    if (!d) throw std::invalid_argument("table has no decision for task " + t.name);
    return *d;
  };
  for (const auto& t : app.tasks) {
    auto opts = proc_options(t);
    auto it = std::find(opts.begin(), opts.end(), task_of(t).proc);
    if (it == opts.end())
      throw std::invalid_argument(fmt::format("task {} has no {} variant", t.name,
                                              to_string(task_of(t).proc)));
    v.push_back(static_cast<std::size_t>(it - opts.begin()));
  }
  for (const auto& t : app.tasks)
    for (const auto& a : task_of(t).args)
      v.push_back(a.memories == std::vector<MemKind>{MemKind::ZCMEM} ? 1 : 0);
  for (const auto& t : app.tasks)
    for (const auto& a : task_of(t).args)
      v.push_back((a.layout.aos ? 2 : 0) + (a.layout.f_order ? 1 : 0));
  for (const auto& t : app.tasks) {
    if (!t.is_index_launch() || t.index_maps.empty()) continue;
    const auto& d = task_of(t);
    std::size_t idx = 0;
    if (d.index_map) {
      auto it = std::find(t.index_maps.begin(), t.index_maps.end(), *d.index_map);
      if (it != t.index_maps.end()) idx = static_cast<std::size_t>(it - t.index_maps.begin());
    }
    v.push_back(idx);
  }
  return v;
}

MappingDecisionTable from_vector(const DecisionVector& v, const ApplicationDescriptor& app) {
  check_vector(v, domains(app));
  MappingDecisionTable table;
  std::size_t pos = 0;
  for (const auto& t : app.tasks) {
    TaskDecision d;
    d.task = t.name;
    d.proc = proc_options(t)[v[pos++]];
    for (const auto& a : t.args) d.args.push_back({a.region, {}, {}, false});
    table.tasks.push_back(std::move(d));
  }
  for (auto& d : table.tasks)
    for (auto& a : d.args)
      a.memories = {v[pos++] == 1 ? MemKind::ZCMEM : local_memory(d.proc)};
  for (auto& d : table.tasks)
    for (auto& a : d.args) {
      const std::size_t o = v[pos++];
      a.layout.aos = o >= 2;
      a.layout.f_order = o % 2 == 1;
    }
  for (std::size_t i = 0; i < app.tasks.size(); ++i) {
    const auto& t = app.tasks[i];
    if (t.is_index_launch() && !t.index_maps.empty()) table.tasks[i].index_map = t.index_maps[v[pos++]];
  }
  return table;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

template <typename T>
T most_common(const std::vector<T>& xs) {
  T best = xs.front();
  std::size_t best_n = 0;
  for (const auto& x : xs) {
    const auto n = static_cast<std::size_t>(std::count(xs.begin(), xs.end(), x));
    if (n > best_n) {
      best = x;
      best_n = n;
    }
  }
  return best;
}

std::string mem_list(const std::vector<MemKind>& ms) {
  std::string out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += ",";
    out += to_string(ms[i]);
  }
  return out;
}

// Region name, or its position when the name is not unique within the task.
std::string region_slot(const TaskDesc* t, const TaskDecision& d, std::size_t i) {
  const std::string& name = d.args[i].region;
  std::size_t same = 0;
  for (const auto& a : d.args) same += a.region == name;
  (void)t;
  return same > 1 ? std::to_string(i) : name;
}

}  // namespace

std::map<std::string, std::string> emit_blocks(const MappingDecisionTable& table,
                                               const ApplicationDescriptor& app) {
  std::map<std::string, std::string> blocks;
  for (const char* name : kBlockNames) blocks[name] = "";
  blocks["functions"] = print(table.code);
  if (table.tasks.empty()) return blocks;

  std::vector<ProcKind> procs;
  for (const auto& d : table.tasks) procs.push_back(d.proc);
  const ProcKind default_proc = most_common(procs);
  std::string& task_block = blocks["task_decision"];
  task_block += fmt::format("Task * {};\n", to_string(default_proc));
  for (const auto& d : table.tasks)
    if (d.proc != default_proc) task_block += fmt::format("Task {} {};\n", d.task, to_string(d.proc));

  std::string& region_block = blocks["region_decision"];
  for (ProcKind k : kAllProcKinds) {
    std::vector<std::vector<MemKind>> lists;
    for (const auto& d : table.tasks)
      if (d.proc == k)
        for (const auto& a : d.args) lists.push_back(a.memories);
    if (lists.empty()) continue;
    const auto def = most_common(lists);
    region_block += fmt::format("Region * * {} {};\n", to_string(k), mem_list(def));
    for (const auto& d : table.tasks) {
      if (d.proc != k) continue;
      for (std::size_t i = 0; i < d.args.size(); ++i)
        if (d.args[i].memories != def)
          region_block += fmt::format("Region {} {} {} {};\n", d.task,
                                      region_slot(app.find_task(d.task), d, i), to_string(k),
                                      mem_list(d.args[i].memories));
    }
  }

  std::vector<LayoutChoice> layouts;
  for (const auto& d : table.tasks)
    for (const auto& a : d.args) layouts.push_back(a.layout);
  std::string& layout_block = blocks["layout_decision"];
  const LayoutChoice def_layout = layouts.empty() ? LayoutChoice{} : most_common(layouts);
  layout_block += fmt::format("Layout * * * {};\n", def_layout.to_string());
  for (const auto& d : table.tasks)
    for (std::size_t i = 0; i < d.args.size(); ++i)
      if (d.args[i].layout != def_layout)
        layout_block += fmt::format("Layout {} {} {} {};\n", d.task,
                                    region_slot(app.find_task(d.task), d, i), to_string(d.proc),
                                    d.args[i].layout.to_string());

  for (const auto& d : table.tasks) {
    if (d.instance_limit)
      blocks["instance_limit_decision"] += fmt::format("InstanceLimit {} {};\n", d.task, *d.instance_limit);
    if (d.index_map)
      blocks["index_task_map_decision"] += fmt::format("IndexTaskMap {} {};\n", d.task, *d.index_map);
    if (d.single_map)
      blocks["single_task_map_decision"] += fmt::format("SingleTaskMap {} {};\n", d.task, *d.single_map);
    for (std::size_t i = 0; i < d.args.size(); ++i)
      if (d.args[i].collect)
        blocks["collect_decision"] += fmt::format(
            "GarbageCollect {} {};\n", d.task, region_slot(app.find_task(d.task), d, i));
  }
  return blocks;
}

std::string join_blocks(const std::map<std::string, std::string>& blocks) {
  std::string out;
  for (const char* name : kBlockNames) {
    auto it = blocks.find(name);
    if (it == blocks.end() || it->second.empty()) continue;
    out += it->second;
    if (out.back() != '\n') out += '\n';
  }
  return out;
}

MapperProgram emit(const MappingDecisionTable& table, const ApplicationDescriptor& app) {
  ParseResult r = parse(join_blocks(emit_blocks(table, app)));
  if (!r.ok()) throw std::logic_error("emitted mapper does not parse: " + join_messages(r.diagnostics));
  return std::move(*r.program);
}

}  // namespace mapforge
