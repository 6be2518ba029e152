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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapforge/ast.hpp"
#include "mapforge/machine.hpp"

namespace mapforge {

struct LayoutChoice {
  bool aos = false;
  bool f_order = false;
  std::optional<AlignOp> align_op;
  std::int64_t align_bytes = 0;  // meaningful when align_op is set

  std::string to_string() const;  // "SOA C_order", "AOS F_order Align==64"
  bool operator==(const LayoutChoice&) const = default;
};

// What a task variant's kernel insists on. Unset fields accept anything.
struct LayoutRequirement {
  std::optional<bool> aos;
  std::optional<bool> f_order;
  std::int64_t min_align = 0;

  bool satisfied_by(const LayoutChoice& c) const;
  bool operator==(const LayoutRequirement&) const = default;
};

struct VariantDesc {
  ProcKind proc = ProcKind::CPU;
  LayoutRequirement layout;
  bool operator==(const VariantDesc&) const = default;
};

struct RegionDesc {
  std::string name;
  std::int64_t element_size = 8;
  Extents extent;
  std::int64_t footprint = 0;  // bytes; element_size * prod(extent) unless given
  bool f_order_native = false;  // natural traversal order of the kernels
  std::int64_t preferred_align = 0;
  bool operator==(const RegionDesc&) const = default;
};

struct ArgDesc {
  std::string region;
  double bytes_per_point = 0;
  bool operator==(const ArgDesc&) const = default;
};

struct TaskDesc {
  std::string name;
  std::vector<VariantDesc> variants;
  double flops_per_point = 0;
  Extents launch;  // empty: single task
  std::vector<ArgDesc> args;
  std::vector<std::string> index_maps;  // candidate functions for search
  std::optional<std::string> parent;
  bool collective = false;
  bool blas = false;

  bool is_index_launch() const { return !launch.empty(); }
  std::int64_t points() const;
  const VariantDesc* variant(ProcKind k) const;
  bool operator==(const TaskDesc&) const = default;
};

// Neighbor exchange (offsets) or all-to-all along one launch axis.
struct ExchangeDesc {
  std::string task;
  std::size_t arg = 0;
  std::vector<Extents> offsets;
  bool wrap = false;
  std::optional<std::size_t> all_to_all_axis;
  std::optional<double> bytes;  // per message; defaults to the arg's bytes_per_point
  bool operator==(const ExchangeDesc&) const = default;
};

enum class Metric { Time, Flops };

struct ApplicationDescriptor {
  std::string name;
  Metric metric = Metric::Time;
  std::int64_t iterations = 1;
  std::vector<RegionDesc> regions;
  std::vector<TaskDesc> tasks;
  std::vector<ExchangeDesc> exchanges;

  const TaskDesc* find_task(std::string_view name) const;
  const RegionDesc* find_region(std::string_view name) const;
  std::size_t region_args() const;
  double flops_per_iteration() const;
  bool operator==(const ApplicationDescriptor&) const = default;
};

// Penalty factors of the cost model; rates and bandwidths live on the machine.
struct CostParams {
  double aos_gpu = 4.0;
  double zcmem_gpu = 4.0;
  double misalignment = 1.5;
  double order_mismatch = 2.0;
  bool operator==(const CostParams&) const = default;
};

template <typename T>
struct Loaded {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;
  bool io_error = false;
  bool ok() const { return value.has_value(); }
};

// JSON with `//` and `/* */` comments. Unknown fields, missing required
// fields and non-positive sizes are reported with their field path.
Loaded<ApplicationDescriptor> parse_app(std::string_view text);
Loaded<MachineModel> parse_machine(std::string_view text);
Loaded<CostParams> parse_costs(std::string_view text);
Loaded<ApplicationDescriptor> load_app(const std::string& path);
Loaded<MachineModel> load_machine(const std::string& path);
Loaded<CostParams> load_costs(const std::string& path);

// The bundled two-node machine, compiled in.
std::string_view default_machine_source();

// Whole file, or nullopt if it cannot be read.
std::optional<std::string> read_file(const std::string& path);

}  // namespace mapforge
