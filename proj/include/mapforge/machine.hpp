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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mapforge/ast.hpp"

namespace mapforge {

using Extents = std::vector<std::int64_t>;

// "(2, 4, 8)"
std::string format_tuple(const Extents& t);

struct ProcIndex {
  std::int64_t node = 0;
  std::int64_t local = 0;  // index within the node, within the kind
  bool operator==(const ProcIndex&) const = default;
  auto operator<=>(const ProcIndex&) const = default;
};

struct BandwidthEntry {
  std::optional<MemKind> a;  // nullopt matches any memory
  std::optional<MemKind> b;
  bool same_node = true;
  double bytes_per_second = 0;
  bool operator==(const BandwidthEntry&) const = default;
};

struct MachineModel {
  std::string name;
  std::int64_t nodes = 1;
  std::map<ProcKind, std::int64_t> procs_per_node;
  std::map<MemKind, std::int64_t> capacity;  // bytes per node
  std::vector<BandwidthEntry> bandwidth;     // first match wins
  std::map<ProcKind, double> launch_overhead;
  std::map<ProcKind, double> compute_rate;  // flop/s per processor

  std::int64_t count(ProcKind kind) const;
  std::int64_t mem_capacity(MemKind kind) const;
  // Symmetric in (a, b). Throws SpaceError when no entry matches.
  double bandwidth_between(MemKind a, MemKind b, bool same_node) const;
  bool operator==(const MachineModel&) const = default;
};

struct SpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SplitStep {
  int dim = 0;
  std::int64_t factor = 1;
  bool operator==(const SplitStep&) const = default;
};
struct MergeStep {
  int p = 0;
  int q = 1;
  bool operator==(const MergeStep&) const = default;
};
struct SwapStep {
  int p = 0;
  int q = 1;
  bool operator==(const SwapStep&) const = default;
};
struct SliceStep {
  int dim = 0;
  std::int64_t low = 0;
  std::int64_t high = 0;
  bool operator==(const SliceStep&) const = default;
};
using TransformStep = std::variant<SplitStep, MergeStep, SwapStep, SliceStep>;

// An n-d view of one processor kind. The chain is kept symbolically; lookup
// walks it backwards to the base (nodes, per-node count) grid.
class ProcessorSpace {
 public:
  // Throws SpaceError("no processors of kind ...") for an absent kind.
  static ProcessorSpace machine(const MachineModel& model, ProcKind kind);
  static ProcessorSpace base(ProcKind kind, std::int64_t nodes, std::int64_t per_node);

  ProcKind kind() const { return kind_; }
  const Extents& dims() const { return history_.back(); }
  std::size_t rank() const { return dims().size(); }
  std::int64_t volume() const;
  const std::vector<TransformStep>& chain() const { return chain_; }

  ProcessorSpace split(std::int64_t dim, std::int64_t factor) const;
  ProcessorSpace merge(std::int64_t p, std::int64_t q) const;
  ProcessorSpace swap(std::int64_t p, std::int64_t q) const;
  ProcessorSpace slice(std::int64_t dim, std::int64_t low, std::int64_t high) const;
  // Replaces `dim` with shape.size() dims whose product is dims[dim]. Prime
  // factors of the extent, largest first, go to the target dim that is
  // furthest below its requested extent. Realized as a split chain.
  ProcessorSpace decompose(std::int64_t dim, const Extents& shape) const;
  ProcessorSpace apply(const TransformStep& step) const;

  // Index in this space -> base (node, local).
  ProcIndex lookup(const Extents& index) const;
  // Base (node, local) -> index in this space; nullopt if sliced away.
  std::optional<Extents> locate(ProcIndex p) const;

  bool operator==(const ProcessorSpace&) const = default;

 private:
  ProcessorSpace() = default;
  ProcessorSpace push(TransformStep step, Extents dims) const;
  int check_dim(std::int64_t dim, std::string_view op) const;

  ProcKind kind_ = ProcKind::GPU;
  std::vector<TransformStep> chain_;
  std::vector<Extents> history_;  // history_[k] = dims before chain_[k]
};

}  // namespace mapforge
