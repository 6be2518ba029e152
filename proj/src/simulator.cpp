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
#include "mapforge/simulator.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "mapforge/eval.hpp"

namespace mapforge {

std::string SimError::message() const {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, OutOfMemory>) {
          return fmt::format(
              "Out of memory: region {} of task {} needs {} bytes of {} on node {} "
              "(capacity {} bytes, {} in use)",
              e.region, e.task, e.requested, to_string(e.mem), e.node, e.capacity, e.in_use);
        } else if constexpr (std::is_same_v<T, LayoutMismatch>) {
          return e.blas ? "DGEMM parameter number 8 had an illegal value"
                        : "Assertion failed: stride does not match expected value.";
        } else {
          return e.text;
        }
      },
      detail);
}

bool addressable(ProcKind proc, MemKind mem) {
  if (mem == MemKind::ZCMEM) return true;
  if (proc == ProcKind::GPU) return mem == MemKind::FBMEM;
  return mem != MemKind::FBMEM;
}

namespace {

struct Failure {
  SimError error;
};

[[noreturn]] void fail_mapping(std::string text) { throw Failure{{MappingError{std::move(text)}}}; }

Extents point_at(const Extents& launch, std::int64_t linear) {
  Extents p(launch.size());
  for (std::size_t k = launch.size(); k-- > 0;) {
    p[k] = linear % launch[k];
    linear /= launch[k];
  }
  return p;
}

std::int64_t linear_of(const Extents& launch, const Extents& p) {
  std::int64_t l = 0;
  for (std::size_t k = 0; k < launch.size(); ++k) l = l * launch[k] + p[k];
  return l;
}

// Launch points of a task; a single task is one point of a 1-point space.
Extents launch_of(const TaskDesc& t) { return t.is_index_launch() ? t.launch : Extents{1}; }

struct Placement {
  std::map<std::int64_t, std::int64_t> share;  // node -> bytes
  std::map<std::int64_t, MemKind> mem;         // node -> memory holding the instance
};

// Link identity: (node a, endpoint a, node b, endpoint b). Endpoint -1 is the
// node's network interface, -2 its memory copy engine.
using Link = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

class Simulation {
 public:
  Simulation(const ApplicationDescriptor& app, const MappingDecisionTable& table,
             const MachineModel& machine, const CostParams& costs)
      : app_(app), table_(table), machine_(machine), costs_(costs),
        library_(builtin_library(), machine), code_(table.code, machine, &library_) {}

  SimResult run() {
    for (std::size_t ti = 0; ti < app_.tasks.size(); ++ti) {
      const TaskDesc& t = app_.tasks[ti];
      const TaskDecision* d = table_.find(t.name);
      if (!d) fail_mapping("no mapping decision for task " + t.name);
      if (d->args.size() != t.args.size())
        fail_mapping(fmt::format("mapping for task {} has {} region arguments, expected {}",
                                 t.name, d->args.size(), t.args.size()));
      decisions_.push_back(d);
      check_layout(t, *d);
      map_points(ti);
      place(ti);
      collect(ti);
    }
    SimResult r;
    compute(r);
    communicate(r);
    r.peak_memory = peak_;
    const double per_iteration = r.compute_time + r.comm_time;
    r.wall_time = static_cast<double>(app_.iterations) * per_iteration;
    if (!(r.wall_time > 0)) fail_mapping("simulated run took no time");
    r.throughput = app_.metric == Metric::Flops
                       ? app_.flops_per_iteration() * static_cast<double>(app_.iterations) / r.wall_time
                       : static_cast<double>(app_.iterations) / r.wall_time;
    for (std::size_t ti = 0; ti < app_.tasks.size(); ++ti) {
      auto& per_proc = r.points[app_.tasks[ti].name];
      for (const auto& p : assign_[ti]) ++per_proc[p];
    }
    return r;
  }

 private:
  void check_layout(const TaskDesc& t, const TaskDecision& d) {
    if (machine_.count(d.proc) == 0) fail_mapping("no processors of kind " + std::string(to_string(d.proc)));
    const VariantDesc* v = t.variant(d.proc);
    if (!v) fail_mapping(fmt::format("task {} has no {} variant", t.name, to_string(d.proc)));
    for (std::size_t i = 0; i < t.args.size(); ++i)
      if (!v->layout.satisfied_by(d.args[i].layout))
        throw Failure{{LayoutMismatch{t.name, t.args[i].region, t.blas}}};
  }

  TaskPtr parent_handle(const TaskDesc& t, const Extents& ipoint) const {
    if (!t.parent) return nullptr;
    for (std::size_t pi = 0; pi < handles_.size(); ++pi) {
      if (app_.tasks[pi].name != *t.parent) continue;
      const Extents launch = launch_of(app_.tasks[pi]);
      bool inside = launch.size() == ipoint.size();
      for (std::size_t k = 0; inside && k < launch.size(); ++k) inside = ipoint[k] < launch[k];
      return handles_[pi][inside ? static_cast<std::size_t>(linear_of(launch, ipoint)) : 0];
    }
    return nullptr;
  }

  void map_points(std::size_t ti) {
    const TaskDesc& t = app_.tasks[ti];
    const TaskDecision& d = *decisions_[ti];
    const Extents launch = launch_of(t);
    const std::int64_t n = t.is_index_launch() ? t.points() : 1;
    const std::optional<std::string>& fn = t.is_index_launch() ? d.index_map : d.single_map;

    const FuncDef* f = nullptr;
    const Scope* scope = nullptr;
    if (fn) {
      std::tie(f, scope) = code_.find_function(*fn);
      if (!f)
        fail_mapping(fmt::format("{}'s function undefined",
                                 t.is_index_launch() ? "IndexTaskMap" : "SingleTaskMap"));
    }

    const std::int64_t per_node = machine_.count(d.proc);
    const std::int64_t total = per_node * machine_.nodes;
    std::vector<ProcIndex> assign;
    std::vector<TaskPtr> handles;
    for (std::int64_t k = 0; k < n; ++k) {
      auto h = std::make_shared<TaskHandle>();
      h->task_name = t.name;
      h->ipoint = point_at(launch, k);
      h->ispace = launch;
      h->parent = parent_handle(t, h->ipoint);
      h->proc_kind = d.proc;
      ProcIndex where;
      if (f) {
        ProcValue v;
        try {
          v = eval_mapping(*f, h, *scope);
        } catch (const EvalError& e) {
          fail_mapping(e.what());
        } catch (const SpaceError& e) {
          fail_mapping(e.what());
        }
        if (v.kind != d.proc)
          fail_mapping(fmt::format("function {} mapped task {} to a {} processor, but the task runs on {}",
                                   *fn, t.name, to_string(v.kind), to_string(d.proc)));
        where = v.index;
      } else if (t.is_index_launch()) {
        const std::int64_t flat = k * total / n;
        where = ProcIndex{flat / per_node, flat % per_node};
      }
      h->processor = where;
      assign.push_back(where);
      handles.push_back(std::move(h));
    }

    if (t.collective && d.instance_limit) {
      std::map<ProcIndex, std::int64_t> load;
      for (const auto& p : assign) ++load[p];
      for (const auto& [p, c] : load)
        if (c > *d.instance_limit) fail_mapping("Assertion 'event.exists()' failed");
    }
    assign_.push_back(std::move(assign));
    handles_.push_back(std::move(handles));
  }

  void place(std::size_t ti) {
    const TaskDesc& t = app_.tasks[ti];
    const TaskDecision& d = *decisions_[ti];
    std::map<std::int64_t, std::int64_t> on_node;
    for (const auto& p : assign_[ti]) ++on_node[p.node];
    const auto n = static_cast<std::int64_t>(assign_[ti].size());

    std::vector<Placement> placed;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const RegionDesc* region = app_.find_region(t.args[i].region);
      std::vector<MemKind> candidates;
      for (MemKind m : d.args[i].memories)
        if (addressable(d.proc, m) && machine_.mem_capacity(m) > 0) candidates.push_back(m);
      if (candidates.empty()) {
        std::string list;
        for (MemKind m : d.args[i].memories) list += (list.empty() ? "" : ",") + std::string(to_string(m));
        fail_mapping(fmt::format("no memory in [{}] for region {} of task {} is available to {}",
                                 list, region->name, t.name, to_string(d.proc)));
      }
      Placement pl;
      for (const auto& [node, count] : on_node) {
        const std::int64_t share = (region->footprint * count + n - 1) / n;
        pl.share[node] = share;
        bool done = false;
        for (MemKind m : candidates) {
          const auto key = std::make_tuple(region->name, node, m);
          const std::int64_t have = instances_.count(key) ? instances_[key] : 0;
          const std::int64_t grow = std::max<std::int64_t>(0, share - have);
          std::int64_t& used = usage_[{node, m}];
          if (used + grow > machine_.mem_capacity(m)) continue;
          used += grow;
          instances_[key] = have + grow;
          peak_[{node, m}] = std::max(peak_[{node, m}], used);
          pl.mem[node] = m;
          done = true;
          break;
        }
        if (!done) {
          const MemKind m = candidates.front();
          throw Failure{{OutOfMemory{t.name, region->name, node, m, share, machine_.mem_capacity(m),
                                     usage_[{node, m}]}}};
        }
      }
      placed.push_back(std::move(pl));
    }
    placements_.push_back(std::move(placed));
  }

  // Frees collected instances nobody later in the iteration reuses.
  void collect(std::size_t ti) {
    const TaskDesc& t = app_.tasks[ti];
    const TaskDecision& d = *decisions_[ti];
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (!d.args[i].collect) continue;
      const std::string& region = t.args[i].region;
      bool reused = false;
      for (std::size_t later = ti + 1; later < app_.tasks.size() && !reused; ++later)
        for (const auto& a : app_.tasks[later].args) reused = reused || a.region == region;
      if (reused) continue;
      for (const auto& [node, m] : placements_[ti][i].mem) {
        auto it = instances_.find(std::make_tuple(region, node, m));
        if (it == instances_.end()) continue;
        usage_[{node, m}] -= it->second;
        instances_.erase(it);
      }
    }
  }

  double penalty(std::size_t ti, std::int64_t node) const {
    const TaskDesc& t = app_.tasks[ti];
    const TaskDecision& d = *decisions_[ti];
    double weighted = 0, weight = 0;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const LayoutChoice& l = d.args[i].layout;
      const RegionDesc* region = app_.find_region(t.args[i].region);
      double p = 1;
      if (d.proc == ProcKind::GPU && l.aos) p *= costs_.aos_gpu;
      auto m = placements_[ti][i].mem.find(node);
      if (d.proc == ProcKind::GPU && m != placements_[ti][i].mem.end() && m->second == MemKind::ZCMEM)
        p *= costs_.zcmem_gpu;
      if (l.f_order != region->f_order_native) p *= costs_.order_mismatch;
      if (region->preferred_align > 0) {
        const bool aligned = l.align_op && *l.align_op != AlignOp::Le &&
                             l.align_bytes % region->preferred_align == 0;
        if (!aligned) p *= costs_.misalignment;
      }
      const double w = std::max(t.args[i].bytes_per_point, 1e-9);
      weighted += w * p;
      weight += w;
    }
    return weight > 0 ? weighted / weight : 1.0;
  }

  void compute(SimResult& r) {
    std::map<std::pair<ProcKind, ProcIndex>, double> busy;
    for (std::size_t ti = 0; ti < app_.tasks.size(); ++ti) {
      const TaskDesc& t = app_.tasks[ti];
      const TaskDecision& d = *decisions_[ti];
      std::map<ProcIndex, std::int64_t> load;
      for (const auto& p : assign_[ti]) ++load[p];
      const double rate = rate_of(d.proc);
      const double overhead = overhead_of(d.proc);
      double slowest = 0;
      for (const auto& [p, count] : load) {
        const std::int64_t waves =
            d.instance_limit ? (count + *d.instance_limit - 1) / *d.instance_limit : 1;
        const double seconds = static_cast<double>(waves) * overhead +
                               static_cast<double>(count) * t.flops_per_point / rate * penalty(ti, p.node);
        busy[{d.proc, p}] += seconds;
        slowest = std::max(slowest, seconds);
      }
      r.task_compute[t.name] = slowest;
    }
    for (const auto& [p, s] : busy) r.compute_time = std::max(r.compute_time, s);
  }

  double rate_of(ProcKind k) const {
    auto it = machine_.compute_rate.find(k);
    if (it == machine_.compute_rate.end() || !(it->second > 0))
      fail_mapping(fmt::format("machine {} has no compute rate for {}", machine_.name, to_string(k)));
    return it->second;
  }

  double overhead_of(ProcKind k) const {
    auto it = machine_.launch_overhead.find(k);
    return it == machine_.launch_overhead.end() ? 0.0 : it->second;
  }

  double bandwidth(MemKind a, MemKind b, bool same_node) const {
    try {
      return machine_.bandwidth_between(a, b, same_node);
    } catch (const SpaceError& e) {
      fail_mapping(e.what());
    }
  }

  void transfer(SimResult& r, std::map<Link, double>& links, ProcIndex src, MemKind src_mem,
                ProcIndex dst, MemKind dst_mem, double bytes) {
    if (src == dst && src_mem == dst_mem) return;
    const bool same_node = src.node == dst.node;
    Link link;
    if (!same_node) {
      link = {std::min(src.node, dst.node), -1, std::max(src.node, dst.node), -1};
      r.inter_node_bytes += bytes;
    } else if (src == dst) {
      link = {src.node, -2, src.node, -2};
    } else {
      link = {src.node, std::min(src.local, dst.local), src.node, std::max(src.local, dst.local)};
    }
    links[link] += bytes / bandwidth(src_mem, dst_mem, same_node);
  }

  void communicate(SimResult& r) {
    std::map<Link, double> links;
    for (const auto& x : app_.exchanges) {
      std::size_t ti = 0;
      while (app_.tasks[ti].name != x.task) ++ti;
      const TaskDesc& t = app_.tasks[ti];
      const Extents launch = launch_of(t);
      const double bytes = x.bytes ? *x.bytes : t.args[x.arg].bytes_per_point;
      const auto& mem = placements_[ti][x.arg].mem;
      const auto n = static_cast<std::int64_t>(assign_[ti].size());
      for (std::int64_t k = 0; k < n; ++k) {
        const Extents p = point_at(launch, k);
        std::vector<Extents> sources;
        if (x.all_to_all_axis) {
          const std::size_t axis = *x.all_to_all_axis;
          for (std::int64_t v = 0; v < launch[axis]; ++v) {
            Extents q = p;
            q[axis] = v;
            if (q != p) sources.push_back(std::move(q));
          }
        } else {
          for (const auto& off : x.offsets) {
            Extents q = p;
            bool inside = true;
            for (std::size_t a = 0; a < q.size(); ++a) {
              q[a] += off[a];
              if (q[a] < 0 || q[a] >= launch[a]) {
                if (!x.wrap) inside = false;
                q[a] = ((q[a] % launch[a]) + launch[a]) % launch[a];
              }
            }
            if (inside && q != p) sources.push_back(std::move(q));
          }
        }
        const ProcIndex dst = assign_[ti][static_cast<std::size_t>(k)];
        for (const auto& q : sources) {
          const ProcIndex src = assign_[ti][static_cast<std::size_t>(linear_of(launch, q))];
          if (src == dst) continue;
          transfer(r, links, src, mem.at(src.node), dst, mem.at(dst.node), bytes);
        }
      }
    }

    // Consecutive users of a region see each other's data, wrapping into the
    // next iteration.
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> users;
    for (std::size_t ti = 0; ti < app_.tasks.size(); ++ti)
      for (std::size_t i = 0; i < app_.tasks[ti].args.size(); ++i)
        users[app_.tasks[ti].args[i].region].emplace_back(ti, i);
    for (const auto& [region, list] : users) {
      if (list.size() < 2) continue;
      for (std::size_t u = 0; u < list.size(); ++u) {
        const auto [pt, pa] = list[u];
        const auto [ct, ca] = list[(u + 1) % list.size()];
        const Placement& prod = placements_[pt][pa];
        const Placement& cons = placements_[ct][ca];
        for (const auto& [node, share] : cons.share) {
          const MemKind cm = cons.mem.at(node);
          auto it = prod.mem.find(node);
          if (it != prod.mem.end()) {
            if (it->second != cm)
              transfer(r, links, {node, 0}, it->second, {node, 0}, cm, static_cast<double>(share));
          } else {
            const auto& [pnode, pm] = *prod.mem.begin();
            transfer(r, links, {pnode, 0}, pm, {node, 0}, cm, static_cast<double>(share));
          }
        }
      }
    }
    for (const auto& [l, s] : links) r.comm_time = std::max(r.comm_time, s);
  }

  const ApplicationDescriptor& app_;
  const MappingDecisionTable& table_;
  const MachineModel& machine_;
  const CostParams& costs_;
  Scope library_;
  Scope code_;

  std::vector<const TaskDecision*> decisions_;
  std::vector<std::vector<ProcIndex>> assign_;
  std::vector<std::vector<TaskPtr>> handles_;
  std::vector<std::vector<Placement>> placements_;
  std::map<std::tuple<std::string, std::int64_t, MemKind>, std::int64_t> instances_;
  std::map<std::pair<std::int64_t, MemKind>, std::int64_t> usage_;
  std::map<std::pair<std::int64_t, MemKind>, std::int64_t> peak_;
};

}  // namespace

SimOutcome simulate(const ApplicationDescriptor& app, const MappingDecisionTable& table,
                    const MachineModel& machine, const CostParams& costs) {
  try {
    return Simulation(app, table, machine, costs).run();
  } catch (const Failure& f) {
    return f.error;
  }
}

}  // namespace mapforge
