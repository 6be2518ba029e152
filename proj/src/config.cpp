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
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "json_reader.hpp"
#include "mapforge/app.hpp"

namespace mapforge {

using nlohmann::json;

std::string LayoutChoice::to_string() const {
  std::string out = fmt::format("{} {}", aos ? "AOS" : "SOA", f_order ? "F_order" : "C_order");
  if (align_op) out += fmt::format(" Align{}{}", mapforge::to_string(*align_op), align_bytes);
  return out;
}

bool LayoutRequirement::satisfied_by(const LayoutChoice& c) const {
  if (aos && *aos != c.aos) return false;
  if (f_order && *f_order != c.f_order) return false;
  if (min_align > 0) {
    if (!c.align_op || *c.align_op == AlignOp::Le) return false;
    if (c.align_bytes < min_align) return false;
  }
  return true;
}

std::int64_t TaskDesc::points() const {
  std::int64_t n = 1;
  for (auto e : launch) n *= e;
  return n;
}

const VariantDesc* TaskDesc::variant(ProcKind k) const {
  for (const auto& v : variants)
    if (v.proc == k) return &v;
  return nullptr;
}

const TaskDesc* ApplicationDescriptor::find_task(std::string_view n) const {
  for (const auto& t : tasks)
    if (t.name == n) return &t;
  return nullptr;
}

const RegionDesc* ApplicationDescriptor::find_region(std::string_view n) const {
  for (const auto& r : regions)
    if (r.name == n) return &r;
  return nullptr;
}

std::size_t ApplicationDescriptor::region_args() const {
  std::size_t n = 0;
  for (const auto& t : tasks) n += t.args.size();
  return n;
}

double ApplicationDescriptor::flops_per_iteration() const {
  double f = 0;
  for (const auto& t : tasks) f += t.flops_per_point * static_cast<double>(t.points());
  return f;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

namespace {

using detail::Reader;
using detail::parse_json;

LayoutRequirement read_requirement(Reader& r, const json& j, const std::string& path) {
  LayoutRequirement req;
  if (!r.object(j, path, {"soa", "order", "align"})) return req;
  if (auto s = r.str(j, path, "soa", false)) {
    if (*s == "SOA" || *s == "AOS") req.aos = *s == "AOS";
    else r.error(fmt::format("{}: expected SOA or AOS", Reader::join(path, "soa")));
  }
  if (auto s = r.str(j, path, "order", false)) {
    if (*s == "C_order" || *s == "F_order") req.f_order = *s == "F_order";
    else r.error(fmt::format("{}: expected C_order or F_order", Reader::join(path, "order")));
  }
  if (auto a = r.positive_int(j, path, "align", false)) req.min_align = *a;
  return req;
}

void check_app(Reader& r, const ApplicationDescriptor& app) {
  std::set<std::string> region_names, task_names;
  for (const auto& reg : app.regions)
    if (!region_names.insert(reg.name).second)
      r.error(fmt::format("regions: duplicate region {}", reg.name));
  for (std::size_t i = 0; i < app.tasks.size(); ++i) {
    const auto& t = app.tasks[i];
    const std::string path = Reader::at("tasks", i);
    if (task_names.count(t.name)) r.error(fmt::format("{}: duplicate task {}", path, t.name));
    std::set<ProcKind> seen;
    for (const auto& v : t.variants)
      if (!seen.insert(v.proc).second)
        r.error(fmt::format("{}.variants: duplicate variant {}", path, to_string(v.proc)));
    for (std::size_t a = 0; a < t.args.size(); ++a)
      if (!region_names.count(t.args[a].region))
        r.error(fmt::format("{}.args[{}].region: unknown region {}", path, a, t.args[a].region));
    if (t.parent && !task_names.count(*t.parent))
      r.error(fmt::format("{}.parent: {} is not an earlier task", path, *t.parent));
    task_names.insert(t.name);
  }
  for (std::size_t i = 0; i < app.exchanges.size(); ++i) {
    const auto& x = app.exchanges[i];
    const std::string path = Reader::at("exchanges", i);
    const TaskDesc* t = app.find_task(x.task);
    if (!t) {
      r.error(fmt::format("{}.task: unknown task {}", path, x.task));
      continue;
    }
    if (x.arg >= t->args.size())
      r.error(fmt::format("{}.arg: task {} has {} arguments", path, x.task, t->args.size()));
    if (!t->is_index_launch()) r.error(fmt::format("{}.task: {} is not index-launched", path, x.task));
    for (const auto& o : x.offsets)
      if (o.size() != t->launch.size())
        r.error(fmt::format("{}.offsets: offset rank {} does not match launch rank {}", path,
                            o.size(), t->launch.size()));
    if (x.all_to_all_axis && *x.all_to_all_axis >= t->launch.size())
      r.error(fmt::format("{}.all_to_all_axis: out of range", path));
    if (x.offsets.empty() == !x.all_to_all_axis)
      r.error(fmt::format("{}: give exactly one of offsets or all_to_all_axis", path));
  }
}

}  // namespace

Loaded<ApplicationDescriptor> parse_app(std::string_view text) {
  Loaded<ApplicationDescriptor> out;
  auto doc = parse_json(text, out.diagnostics);
  if (!doc) return out;
  Reader r(out.diagnostics);
  const json& j = *doc;
  if (!r.object(j, "", {"name", "metric", "iterations", "regions", "tasks", "exchanges"}))
    return out;

  ApplicationDescriptor app;
  if (auto s = r.str(j, "", "name", true)) app.name = *s;
  if (auto s = r.str(j, "", "metric", false)) {
    if (*s == "time") app.metric = Metric::Time;
    else if (*s == "flops") app.metric = Metric::Flops;
    else r.error("metric: expected time or flops");
  }
  if (auto n = r.positive_int(j, "", "iterations", false)) app.iterations = *n;

  if (const json* regs = r.field(j, "", "regions", true)) {
    if (!regs->is_array()) r.error("regions: expected an array");
    else
      for (std::size_t i = 0; i < regs->size(); ++i) {
        const json& x = (*regs)[i];
        const std::string path = Reader::at("regions", i);
        if (!r.object(x, path, {"name", "element_size", "extent", "footprint", "order", "align"}))
          continue;
        RegionDesc reg;
        if (auto s = r.str(x, path, "name", true)) reg.name = *s;
        if (auto n = r.positive_int(x, path, "element_size", true)) reg.element_size = *n;
        if (const json* e = r.field(x, path, "extent", true))
          if (auto ext = r.int_list(*e, Reader::join(path, "extent"), true, false)) reg.extent = *ext;
        std::int64_t fp = reg.element_size;
        for (auto e : reg.extent) fp *= e;
        reg.footprint = fp;
        if (auto n = r.positive_int(x, path, "footprint", false)) reg.footprint = *n;
        if (auto s = r.str(x, path, "order", false)) {
          if (*s == "C_order" || *s == "F_order") reg.f_order_native = *s == "F_order";
          else r.error(fmt::format("{}.order: expected C_order or F_order", path));
        }
        if (auto n = r.positive_int(x, path, "align", false)) reg.preferred_align = *n;
        app.regions.push_back(std::move(reg));
      }
  }

  if (const json* tasks = r.field(j, "", "tasks", true)) {
    if (!tasks->is_array() || tasks->empty()) r.error("tasks: expected a nonempty array");
    else
      for (std::size_t i = 0; i < tasks->size(); ++i) {
        const json& x = (*tasks)[i];
        const std::string path = Reader::at("tasks", i);
        if (!r.object(x, path, {"name", "variants", "flops_per_point", "launch", "args",
                                "index_maps", "parent", "collective", "blas"}))
          continue;
        TaskDesc t;
        if (auto s = r.str(x, path, "name", true)) t.name = *s;
        if (const json* vs = r.field(x, path, "variants", true)) {
          const std::string vpath = Reader::join(path, "variants");
          if (!vs->is_array() || vs->empty()) r.error(fmt::format("{}: expected a nonempty array", vpath));
          else
            for (std::size_t v = 0; v < vs->size(); ++v) {
              const std::string p = Reader::at(vpath, v);
              if (!r.object((*vs)[v], p, {"proc", "layout"})) continue;
              VariantDesc vd;
              if (auto k = r.proc((*vs)[v], p, "proc")) vd.proc = *k;
              if (const json* l = r.field((*vs)[v], p, "layout", false))
                vd.layout = read_requirement(r, *l, Reader::join(p, "layout"));
              t.variants.push_back(vd);
            }
        }
        if (auto f = r.positive_number(x, path, "flops_per_point", true, true)) t.flops_per_point = *f;
        if (const json* l = r.field(x, path, "launch", false))
          if (auto ext = r.int_list(*l, Reader::join(path, "launch"), true, true)) t.launch = *ext;
        if (const json* as = r.field(x, path, "args", false)) {
          const std::string apath = Reader::join(path, "args");
          if (!as->is_array()) r.error(fmt::format("{}: expected an array", apath));
          else
            for (std::size_t a = 0; a < as->size(); ++a) {
              const std::string p = Reader::at(apath, a);
              if (!r.object((*as)[a], p, {"region", "bytes_per_point"})) continue;
              ArgDesc ad;
              if (auto s = r.str((*as)[a], p, "region", true)) ad.region = *s;
              if (auto b = r.positive_number((*as)[a], p, "bytes_per_point", true, true))
                ad.bytes_per_point = *b;
              t.args.push_back(ad);
            }
        }
        if (const json* ms = r.field(x, path, "index_maps", false)) {
          if (!ms->is_array()) r.error(fmt::format("{}.index_maps: expected an array", path));
          else
            for (std::size_t m = 0; m < ms->size(); ++m) {
              if ((*ms)[m].is_string()) t.index_maps.push_back((*ms)[m].get<std::string>());
              else r.error(fmt::format("{}.index_maps[{}]: expected a string", path, m));
            }
        }
        t.parent = r.str(x, path, "parent", false);
        if (auto b = r.boolean(x, path, "collective")) t.collective = *b;
        if (auto b = r.boolean(x, path, "blas")) t.blas = *b;
        app.tasks.push_back(std::move(t));
      }
  }

  if (const json* xs = r.field(j, "", "exchanges", false)) {
    if (!xs->is_array()) r.error("exchanges: expected an array");
    else
      for (std::size_t i = 0; i < xs->size(); ++i) {
        const json& x = (*xs)[i];
        const std::string path = Reader::at("exchanges", i);
        if (!r.object(x, path, {"task", "arg", "offsets", "wrap", "all_to_all_axis", "bytes"}))
          continue;
        ExchangeDesc e;
        if (auto s = r.str(x, path, "task", true)) e.task = *s;
        if (auto a = r.positive_int(x, path, "arg", true, true)) e.arg = static_cast<std::size_t>(*a);
        if (const json* os = r.field(x, path, "offsets", false)) {
          if (!os->is_array()) r.error(fmt::format("{}.offsets: expected an array", path));
          else
            for (std::size_t o = 0; o < os->size(); ++o)
              if (auto off = r.int_list((*os)[o], Reader::at(Reader::join(path, "offsets"), o), false, false))
                e.offsets.push_back(*off);
        }
        if (auto b = r.boolean(x, path, "wrap")) e.wrap = *b;
        if (auto a = r.positive_int(x, path, "all_to_all_axis", false, true))
          e.all_to_all_axis = static_cast<std::size_t>(*a);
        e.bytes = r.positive_number(x, path, "bytes", false);
        app.exchanges.push_back(std::move(e));
      }
  }

  if (!r.failed()) check_app(r, app);
  if (!r.failed()) out.value = std::move(app);
  return out;
}

Loaded<MachineModel> parse_machine(std::string_view text) {
  Loaded<MachineModel> out;
  auto doc = parse_json(text, out.diagnostics);
  if (!doc) return out;
  Reader r(out.diagnostics);
  const json& j = *doc;
  if (!r.object(j, "", {"name", "nodes", "processors", "memories", "bandwidth"})) return out;

  MachineModel m;
  if (auto s = r.str(j, "", "name", true)) m.name = *s;
  if (auto n = r.positive_int(j, "", "nodes", true)) m.nodes = *n;
  if (const json* ps = r.field(j, "", "processors", true); ps && r.object(*ps, "processors", {"GPU", "CPU", "OMP"})) {
    for (const auto& [key, p] : ps->items()) {
      const std::string path = Reader::join("processors", key);
      if (!r.object(p, path, {"per_node", "rate", "launch_overhead"})) continue;
      const ProcKind k = *parse_proc_kind(key);
      auto n = r.positive_int(p, path, "per_node", true, true);
      if (n) m.procs_per_node[k] = *n;
      const bool present = n && *n > 0;
      if (auto x = r.positive_number(p, path, "rate", present)) m.compute_rate[k] = *x;
      if (auto x = r.positive_number(p, path, "launch_overhead", present, true))
        m.launch_overhead[k] = *x;
    }
  }
  if (const json* ms = r.field(j, "", "memories", true);
      ms && r.object(*ms, "memories", {"SYSMEM", "FBMEM", "ZCMEM", "RDMEM", "SOCKMEM"})) {
    for (const auto& [key, v] : ms->items())
      if (auto n = r.positive_int_value(v, Reader::join("memories", key), true))
        m.capacity[*parse_mem_kind(key)] = *n;
  }
  if (const json* bs = r.field(j, "", "bandwidth", true)) {
    if (!bs->is_array()) r.error("bandwidth: expected an array");
    else
      for (std::size_t i = 0; i < bs->size(); ++i) {
        const json& b = (*bs)[i];
        const std::string path = Reader::at("bandwidth", i);
        if (!r.object(b, path, {"a", "b", "same_node", "bytes_per_second"})) continue;
        BandwidthEntry e;
        auto mem = [&](const char* key) -> std::optional<MemKind> {
          auto s = r.str(b, path, key, true);
          if (!s || *s == "*") return std::nullopt;
          auto k = parse_mem_kind(*s);
          if (!k) r.error(fmt::format("{}.{}: unknown memory kind {}", path, key, *s));
          return k;
        };
        e.a = mem("a");
        e.b = mem("b");
        auto same = r.boolean(b, path, "same_node");
        if (!same) r.field(b, path, "same_node", true);
        e.same_node = same.value_or(true);
        if (auto x = r.positive_number(b, path, "bytes_per_second", true)) e.bytes_per_second = *x;
        m.bandwidth.push_back(e);
      }
  }
  if (!r.failed()) out.value = std::move(m);
  return out;
}

Loaded<CostParams> parse_costs(std::string_view text) {
  Loaded<CostParams> out;
  auto doc = parse_json(text, out.diagnostics);
  if (!doc) return out;
  Reader r(out.diagnostics);
  const json& j = *doc;
  if (!r.object(j, "", {"aos_gpu", "zcmem_gpu", "misalignment", "order_mismatch"})) return out;
  CostParams c;
  auto factor = [&](const char* key, double& dst) {
    if (auto x = r.positive_number(j, "", key, false)) {
      if (*x < 1.0) r.error(fmt::format("{}: must be at least 1", key));
      else dst = *x;
    }
  };
  factor("aos_gpu", c.aos_gpu);
  factor("zcmem_gpu", c.zcmem_gpu);
  factor("misalignment", c.misalignment);
  factor("order_mismatch", c.order_mismatch);
  if (!r.failed()) out.value = c;
  return out;
}

namespace {

template <typename T, typename F>
Loaded<T> load_with(const std::string& path, F&& parse_fn) {
  auto text = read_file(path);
  if (!text) {
    Loaded<T> out;
    out.io_error = true;
    out.diagnostics.push_back({Diagnostic::Severity::Error, 0, 0, fmt::format("cannot read {}", path)});
    return out;
  }
  return parse_fn(*text);
}

}  // namespace

Loaded<ApplicationDescriptor> load_app(const std::string& path) {
  return load_with<ApplicationDescriptor>(path, parse_app);
}
Loaded<MachineModel> load_machine(const std::string& path) {
  return load_with<MachineModel>(path, parse_machine);
}
Loaded<CostParams> load_costs(const std::string& path) {
  return load_with<CostParams>(path, parse_costs);
}

}  // namespace mapforge
