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
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mapforge/app.hpp"
#include "mapforge/ast.hpp"
#include "mapforge/machine.hpp"

namespace mapforge {

struct RegionDecision {
  std::string region;
  std::vector<MemKind> memories;  // preference order
  LayoutChoice layout;
  bool collect = false;
  bool operator==(const RegionDecision&) const = default;
};

struct TaskDecision {
  std::string task;
  ProcKind proc = ProcKind::CPU;
  std::vector<RegionDecision> args;  // parallel to TaskDesc::args
  std::optional<std::string> index_map;
  std::optional<std::string> single_map;
  std::optional<std::int64_t> instance_limit;
  bool operator==(const TaskDecision&) const = default;
};

struct MappingDecisionTable {
  std::vector<TaskDecision> tasks;  // application order
  // Top-level bindings and function definitions the mapping functions need.
  MapperProgram code;

  const TaskDecision* find(std::string_view task) const;
  bool operator==(const MappingDecisionTable&) const = default;
};

struct Resolved {
  std::optional<MappingDecisionTable> table;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return table.has_value(); }
};

// Most specific matching statement wins (exact name beats `*` per slot, more
// exact slots beat fewer); ties go to the later statement.
Resolved resolve(const MapperProgram& program, const ApplicationDescriptor& app,
                 const MachineModel& machine);

// The processor's own memory: GPU framebuffer, CPU system, OMP socket.
MemKind local_memory(ProcKind kind);

struct Dimension {
  std::string id;  // task:<t>, region:<t>:<i>, layout:<t>:<i>, indexmap:<t>
  std::vector<std::string> options;
  bool operator==(const Dimension&) const = default;
};

using DecisionVector = std::vector<std::size_t>;  // option index per dimension

std::vector<Dimension> domains(const ApplicationDescriptor& app);
boost::multiprecision::cpp_int search_space_size(const ApplicationDescriptor& app);

// Encodes a table; memory lists other than [ZCMEM] encode as "local".
DecisionVector decision_vector(const MappingDecisionTable& table,
                               const ApplicationDescriptor& app);
MappingDecisionTable from_vector(const DecisionVector& v, const ApplicationDescriptor& app);
// Throws std::invalid_argument naming the offending dimension.
void check_vector(const DecisionVector& v, const std::vector<Dimension>& dims);

// Code blocks of a generated mapper, in emission order.
inline constexpr const char* kBlockNames[] = {
    "functions",           "task_decision",          "region_decision",
    "layout_decision",     "instance_limit_decision", "index_task_map_decision",
    "single_task_map_decision", "collect_decision"};

std::map<std::string, std::string> emit_blocks(const MappingDecisionTable& table,
                                               const ApplicationDescriptor& app);
std::string join_blocks(const std::map<std::string, std::string>& blocks);
// resolve(emit(t)) == t for tables resolved against the same app and machine.
MapperProgram emit(const MappingDecisionTable& table, const ApplicationDescriptor& app);

}  // namespace mapforge
