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

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mapforge/app.hpp"
#include "mapforge/binder.hpp"
#include "mapforge/machine.hpp"

namespace mapforge {

struct SimResult {
  double wall_time = 0;    // seconds for all iterations
  double throughput = 0;   // flops/s for flops apps, iterations/s otherwise
  double compute_time = 0;  // per iteration, slowest processor
  double comm_time = 0;     // per iteration, busiest link
  std::map<std::string, double> task_compute;  // per iteration, slowest processor
  std::map<std::pair<std::int64_t, MemKind>, std::int64_t> peak_memory;  // (node, mem) -> bytes
  double inter_node_bytes = 0;  // per iteration
  std::map<std::string, std::map<ProcIndex, std::int64_t>> points;  // launch points per processor
};

struct OutOfMemory {
  std::string task;
  std::string region;
  std::int64_t node = 0;
  MemKind mem = MemKind::SYSMEM;
  std::int64_t requested = 0;
  std::int64_t capacity = 0;
  std::int64_t in_use = 0;
};

struct LayoutMismatch {
  std::string task;
  std::string region;
  bool blas = false;  // reported the way a BLAS call rejects its leading dimension
};

struct MappingError {
  std::string text;
};

struct SimError {
  std::variant<OutOfMemory, LayoutMismatch, MappingError> detail;
  std::string message() const;
};

using SimOutcome = std::variant<SimResult, SimError>;

// Bulk-synchronous cost model of one run. Pure and deterministic.
SimOutcome simulate(const ApplicationDescriptor& app, const MappingDecisionTable& table,
                    const MachineModel& machine, const CostParams& costs);

// Memories a processor kind can address directly, in no particular order.
bool addressable(ProcKind proc, MemKind mem);

}  // namespace mapforge
