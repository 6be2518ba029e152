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

// Materialized processor spaces: every index tuple stored next to the base
// processor it denotes, transformed by rewriting the table forward.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mapforge/machine.hpp"

namespace mapforge::testing {

struct Table {
  Extents dims;
  std::map<Extents, ProcIndex> at;
};

inline Table base_table(std::int64_t nodes, std::int64_t per_node) {
  Table t{{nodes, per_node}, {}};
  for (std::int64_t n = 0; n < nodes; ++n)
    for (std::int64_t l = 0; l < per_node; ++l) t.at[{n, l}] = ProcIndex{n, l};
  return t;
}

// nullopt when the step is not applicable to these dims.
inline std::optional<Table> apply_step(const Table& t, const TransformStep& step) {
  Table out;
  if (auto* s = std::get_if<SplitStep>(&step)) {
    const auto d = static_cast<std::size_t>(s->dim);
    if (d >= t.dims.size() || s->factor < 1 || t.dims[d] % s->factor) return std::nullopt;
    out.dims = t.dims;
    out.dims[d] = s->factor;
    out.dims.insert(out.dims.begin() + d + 1, t.dims[d] / s->factor);
    for (const auto& [idx, p] : t.at) {
      Extents n = idx;
      n[d] = idx[d] % s->factor;
      n.insert(n.begin() + d + 1, idx[d] / s->factor);
      out.at[n] = p;
    }
  } else if (auto* s = std::get_if<MergeStep>(&step)) {
    const auto p = static_cast<std::size_t>(s->p), q = static_cast<std::size_t>(s->q);
    if (p >= q || q >= t.dims.size()) return std::nullopt;
    out.dims = t.dims;
    out.dims[p] = t.dims[p] * t.dims[q];
    out.dims.erase(out.dims.begin() + q);
    for (const auto& [idx, proc] : t.at) {
      Extents n = idx;
      n[p] = idx[p] + idx[q] * t.dims[p];
      n.erase(n.begin() + q);
      out.at[n] = proc;
    }
  } else if (auto* s = std::get_if<SwapStep>(&step)) {
    const auto p = static_cast<std::size_t>(s->p), q = static_cast<std::size_t>(s->q);
    if (p >= t.dims.size() || q >= t.dims.size()) return std::nullopt;
    out.dims = t.dims;
    std::swap(out.dims[p], out.dims[q]);
    for (const auto& [idx, proc] : t.at) {
      Extents n = idx;
      std::swap(n[p], n[q]);
      out.at[n] = proc;
    }
  } else {
    const auto& sl = std::get<SliceStep>(step);
    const auto d = static_cast<std::size_t>(sl.dim);
    if (d >= t.dims.size() || sl.low < 0 || sl.low > sl.high || sl.high >= t.dims[d])
      return std::nullopt;
    out.dims = t.dims;
    out.dims[d] = sl.high - sl.low + 1;
    for (const auto& [idx, proc] : t.at) {
      if (idx[d] < sl.low || idx[d] > sl.high) continue;
      Extents n = idx;
      n[d] -= sl.low;
      out.at[n] = proc;
    }
  }
  return out;
}

// Every step applicable to a space of these dims.
inline std::vector<TransformStep> all_steps(const Extents& dims) {
  std::vector<TransformStep> out;
  const auto r = static_cast<int>(dims.size());
  for (int d = 0; d < r; ++d) {
    for (std::int64_t f = 1; f <= dims[d]; ++f)
      if (dims[d] % f == 0) out.push_back(SplitStep{d, f});
    for (std::int64_t lo = 0; lo < dims[d]; ++lo)
      for (std::int64_t hi = lo; hi < dims[d]; ++hi) out.push_back(SliceStep{d, lo, hi});
  }
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) {
      if (p < q) out.push_back(MergeStep{p, q});
      if (p != q) out.push_back(SwapStep{p, q});
    }
  return out;
}

inline std::string describe(const TransformStep& step) {
  if (auto* s = std::get_if<SplitStep>(&step)) return fmt::format("split({}, {})", s->dim, s->factor);
  if (auto* s = std::get_if<MergeStep>(&step)) return fmt::format("merge({}, {})", s->p, s->q);
  if (auto* s = std::get_if<SwapStep>(&step)) return fmt::format("swap({}, {})", s->p, s->q);
  const auto& sl = std::get<SliceStep>(step);
  return fmt::format("slice({}, {}, {})", sl.dim, sl.low, sl.high);
}

// Checks one transformed space against its table; returns "" or a complaint.
inline std::string compare(const ProcessorSpace& space, const Table& t, std::int64_t nodes,
                           std::int64_t per_node) {
  if (space.dims() != t.dims)
    return fmt::format("dims {} vs {}", format_tuple(space.dims()), format_tuple(t.dims));
  if (space.volume() != static_cast<std::int64_t>(t.at.size())) return "volume";
  std::map<ProcIndex, Extents> inverse;
  for (const auto& [idx, p] : t.at) {
    if (space.lookup(idx) != p) return "lookup " + format_tuple(idx);
    inverse[p] = idx;
  }
  for (std::int64_t n = 0; n < nodes; ++n)
    for (std::int64_t l = 0; l < per_node; ++l) {
      auto it = inverse.find(ProcIndex{n, l});
      auto got = space.locate(ProcIndex{n, l});
      if (it == inverse.end() ? got.has_value() : got != it->second)
        return fmt::format("locate ({}, {})", n, l);
    }
  return "";
}

struct AlgebraReport {
  std::size_t chains = 0;
  std::vector<std::string> failures;
};

// Every chain of up to `depth` steps over base spaces with the given extents.
inline AlgebraReport check_algebra(const Extents& extents, int depth) {
  AlgebraReport report;
  auto walk = [&](auto&& self, const ProcessorSpace& space, const Table& t, std::int64_t nodes,
                  std::int64_t per_node, const std::string& path, int left) -> void {
    ++report.chains;
    if (auto why = compare(space, t, nodes, per_node); !why.empty())
      report.failures.push_back(path + ": " + why);
    if (left == 0) return;
    for (const auto& step : all_steps(t.dims)) {
      auto next = apply_step(t, step);
      if (!next) continue;
      ProcessorSpace s2 = space.apply(step);
      self(self, s2, *next, nodes, per_node, path + "." + describe(step), left - 1);
    }
  };
  for (auto n : extents)
    for (auto l : extents)
      walk(walk, ProcessorSpace::base(ProcKind::GPU, n, l), base_table(n, l), n, l,
           fmt::format("base({}, {})", n, l), depth);
  return report;
}

}  // namespace mapforge::testing
