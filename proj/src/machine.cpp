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
#include "mapforge/machine.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace mapforge {

std::string format_tuple(const Extents& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(t[i]);
  }
  return out + ")";
}

std::int64_t MachineModel::count(ProcKind kind) const {
  auto it = procs_per_node.find(kind);
  return it == procs_per_node.end() ? 0 : it->second;
}

std::int64_t MachineModel::mem_capacity(MemKind kind) const {
  auto it = capacity.find(kind);
  return it == capacity.end() ? 0 : it->second;
}

double MachineModel::bandwidth_between(MemKind a, MemKind b, bool same_node) const {
  auto matches = [](const std::optional<MemKind>& pat, MemKind k) { return !pat || *pat == k; };
  for (const auto& e : bandwidth) {
    if (e.same_node != same_node) continue;
    if ((matches(e.a, a) && matches(e.b, b)) || (matches(e.a, b) && matches(e.b, a)))
      return e.bytes_per_second;
  }
  throw SpaceError(fmt::format("no bandwidth entry for {} <-> {} ({})", to_string(a),
                               to_string(b), same_node ? "same node" : "cross node"));
}

ProcessorSpace ProcessorSpace::machine(const MachineModel& model, ProcKind kind) {
  const std::int64_t n = model.count(kind);
  if (n < 1 || model.nodes < 1)
    throw SpaceError(fmt::format("no processors of kind {}", to_string(kind)));
  return base(kind, model.nodes, n);
}

ProcessorSpace ProcessorSpace::base(ProcKind kind, std::int64_t nodes, std::int64_t per_node) {
  if (nodes < 1 || per_node < 1)
    throw SpaceError(fmt::format("no processors of kind {}", to_string(kind)));
  ProcessorSpace s;
  s.kind_ = kind;
  s.history_.push_back({nodes, per_node});
  return s;
}

std::int64_t ProcessorSpace::volume() const {
  std::int64_t v = 1;
  for (auto d : dims()) v *= d;
  return v;
}

ProcessorSpace ProcessorSpace::push(TransformStep step, Extents dims) const {
  ProcessorSpace s = *this;
  s.chain_.push_back(step);
  s.history_.push_back(std::move(dims));
  return s;
}

int ProcessorSpace::check_dim(std::int64_t dim, std::string_view op) const {
  if (dim < 0 || dim >= static_cast<std::int64_t>(rank()))
    throw SpaceError(fmt::format("{} dimension {} out of range for space of size {}", op, dim,
                                 format_tuple(dims())));
  return static_cast<int>(dim);
}

ProcessorSpace ProcessorSpace::split(std::int64_t dim, std::int64_t factor) const {
  const int i = check_dim(dim, "split");
  const std::int64_t extent = dims()[i];
  if (factor < 1 || extent % factor != 0)
    throw SpaceError(fmt::format("split factor does not divide extent: factor {}, extent {}",
                                 factor, extent));
  Extents d = dims();
  d[i] = factor;
  d.insert(d.begin() + i + 1, extent / factor);
  return push(SplitStep{i, factor}, std::move(d));
}

ProcessorSpace ProcessorSpace::merge(std::int64_t p, std::int64_t q) const {
  if (p >= q) throw SpaceError(fmt::format("merge requires p < q, got p = {}, q = {}", p, q));
  const int ip = check_dim(p, "merge");
  const int iq = check_dim(q, "merge");
  Extents d = dims();
  d[ip] *= d[iq];
  d.erase(d.begin() + iq);
  return push(MergeStep{ip, iq}, std::move(d));
}

ProcessorSpace ProcessorSpace::swap(std::int64_t p, std::int64_t q) const {
  const int ip = check_dim(p, "swap");
  const int iq = check_dim(q, "swap");
  Extents d = dims();
  std::swap(d[ip], d[iq]);
  return push(SwapStep{ip, iq}, std::move(d));
}

ProcessorSpace ProcessorSpace::slice(std::int64_t dim, std::int64_t low, std::int64_t high) const {
  const int i = check_dim(dim, "slice");
  if (low < 0 || low > high || high >= dims()[i])
    throw SpaceError(fmt::format("slice bounds out of range: [{}, {}] on extent {}", low, high,
                                 dims()[i]));
  Extents d = dims();
  d[i] = high - low + 1;
  return push(SliceStep{i, low, high}, std::move(d));
}

ProcessorSpace ProcessorSpace::decompose(std::int64_t dim, const Extents& shape) const {
  const int i = check_dim(dim, "decompose");
  if (shape.empty()) throw SpaceError("decompose requires a nonempty shape");
  for (auto s : shape)
    if (s < 1) throw SpaceError(fmt::format("decompose shape {} has a non-positive extent",
                                            format_tuple(shape)));
  std::int64_t extent = dims()[i];
  Extents primes;
  for (std::int64_t f = 2; f * f <= extent; ++f)
    while (extent % f == 0) {
      primes.push_back(f);
      extent /= f;
    }
  if (extent > 1) primes.push_back(extent);
  std::sort(primes.rbegin(), primes.rend());

  Extents parts(shape.size(), 1);
  for (auto f : primes) {
    // shape[j] / parts[j] compared by cross-multiplication.
    std::size_t best = 0;
    for (std::size_t j = 1; j < shape.size(); ++j)
      if (shape[j] * parts[best] > shape[best] * parts[j]) best = j;
    parts[best] *= f;
  }

  ProcessorSpace s = *this;
  for (std::size_t j = 0; j + 1 < parts.size(); ++j) s = s.split(i + j, parts[j]);
  return s;
}

ProcessorSpace ProcessorSpace::apply(const TransformStep& step) const {
  return std::visit(
      [&](const auto& st) -> ProcessorSpace {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, SplitStep>) return split(st.dim, st.factor);
        if constexpr (std::is_same_v<T, MergeStep>) return merge(st.p, st.q);
        if constexpr (std::is_same_v<T, SwapStep>) return swap(st.p, st.q);
        if constexpr (std::is_same_v<T, SliceStep>) return slice(st.dim, st.low, st.high);
      },
      step);
}

ProcIndex ProcessorSpace::lookup(const Extents& index) const {
  const Extents& d = dims();
  bool ok = index.size() == d.size();
  for (std::size_t t = 0; ok && t < d.size(); ++t) ok = index[t] >= 0 && index[t] < d[t];
  if (!ok)
    throw SpaceError(fmt::format("Slice processor index out of bound: index {} on space of size {}",
                                 format_tuple(index), format_tuple(d)));

  Extents a = index;
  for (std::size_t k = chain_.size(); k-- > 0;) {
    const Extents& prev = history_[k];
    Extents b;
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, SplitStep>) {
            b = a;
            b[st.dim] = a[st.dim] + a[st.dim + 1] * st.factor;
            b.erase(b.begin() + st.dim + 1);
          } else if constexpr (std::is_same_v<T, MergeStep>) {
            b.assign(a.begin(), a.end());
            b.insert(b.begin() + st.q, a[st.p] / prev[st.p]);
            b[st.p] = a[st.p] % prev[st.p];
          } else if constexpr (std::is_same_v<T, SwapStep>) {
            b = a;
            std::swap(b[st.p], b[st.q]);
          } else {
            b = a;
            b[st.dim] += st.low;
          }
        },
        chain_[k]);
    a = std::move(b);
  }
  return {a[0], a[1]};
}

std::optional<Extents> ProcessorSpace::locate(ProcIndex p) const {
  const Extents& base_dims = history_.front();
  if (p.node < 0 || p.node >= base_dims[0] || p.local < 0 || p.local >= base_dims[1])
    return std::nullopt;
  Extents b{p.node, p.local};
  for (std::size_t k = 0; k < chain_.size(); ++k) {
    const Extents& prev = history_[k];
    bool dropped = false;
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, SplitStep>) {
            const std::int64_t v = b[st.dim];
            b[st.dim] = v % st.factor;
            b.insert(b.begin() + st.dim + 1, v / st.factor);
          } else if constexpr (std::is_same_v<T, MergeStep>) {
            b[st.p] += b[st.q] * prev[st.p];
            b.erase(b.begin() + st.q);
          } else if constexpr (std::is_same_v<T, SwapStep>) {
            std::swap(b[st.p], b[st.q]);
          } else {
            if (b[st.dim] < st.low || b[st.dim] > st.high) dropped = true;
            b[st.dim] -= st.low;
          }
        },
        chain_[k]);
    if (dropped) return std::nullopt;
  }
  return b;
}

}  // namespace mapforge
