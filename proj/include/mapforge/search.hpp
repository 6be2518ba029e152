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
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapforge/app.hpp"
#include "mapforge/binder.hpp"
#include "mapforge/feedback.hpp"
#include "mapforge/machine.hpp"

namespace mapforge {

using Blocks = std::map<std::string, std::string>;

struct Candidate {
  std::optional<DecisionVector> vector;  // absent for free-form block edits
  Blocks blocks;                         // named code blocks, see kBlockNames
  std::string source() const { return join_blocks(blocks); }
};

// Raised by strategies that cannot produce a candidate; the loop records it
// as a compile error and carries on.
struct ProposalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mapper text -> feedback: parse, validate, resolve, simulate, classify, enhance.
class Evaluator {
 public:
  Evaluator(ApplicationDescriptor app, MachineModel machine, CostParams costs,
            std::vector<EnhancerRule> rules, FeedbackLevel level);

  FeedbackReport evaluate(const std::string& source) const;
  FeedbackReport evaluate(const Candidate& c) const { return evaluate(c.source()); }
  // Throws ProposalError when the vector does not fit the domains.
  Candidate candidate(const DecisionVector& v) const;

  const ApplicationDescriptor& app() const { return app_; }
  const MachineModel& machine() const { return machine_; }
  const std::vector<Dimension>& dims() const { return dims_; }
  FeedbackLevel level() const { return level_; }
  FeedbackReport finish(FeedbackReport r) const { return enhance(std::move(r), rules_, level_); }

 private:
  ApplicationDescriptor app_;
  MachineModel machine_;
  CostParams costs_;
  std::vector<EnhancerRule> rules_;
  FeedbackLevel level_;
  std::vector<Dimension> dims_;
};

struct IterationRecord {
  int iteration = 0;
  Candidate candidate;
  FeedbackReport feedback;
  std::optional<double> score;        // absent for failures
  std::optional<double> best_so_far;  // absent until the first success
  std::string rendered;               // render(feedback)
};

struct Trajectory {
  std::string strategy;
  std::uint64_t seed = 0;
  std::string app;
  std::string machine;
  std::vector<IterationRecord> records;

  // Earliest record holding the best score, if any succeeded.
  const IterationRecord* best() const;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // Next candidate given every record so far. May throw ProposalError.
  virtual Candidate propose(const std::vector<IterationRecord>& history) = 0;
};

// Seeded generator whose draws do not depend on the standard library's
// distribution implementations.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n);
  DecisionVector vector(const std::vector<Dimension>& dims);

 private:
  std::mt19937_64 engine_;
};

std::unique_ptr<Strategy> make_random(const Evaluator& ev, std::uint64_t seed);
// Restarts after `stall_limit` consecutive non-improving neighbors; 0 means
// after the whole single-dimension neighborhood has been tried.
std::unique_ptr<Strategy> make_hillclimb(const Evaluator& ev, std::uint64_t seed,
                                         std::size_t stall_limit = 0);
// Lexicographic order, first dimension most significant; wraps around.
std::unique_ptr<Strategy> make_exhaustive(const Evaluator& ev);

// Exactly `budget` iterations. best_so_far only moves on a strictly greater score.
Trajectory run(const Evaluator& ev, Strategy& strategy, int budget, std::uint64_t seed);

// Mixed-radix decoding of an enumeration index.
DecisionVector nth_vector(const std::vector<Dimension>& dims, std::uint64_t index);

struct AggregateRow {
  int iteration = 0;
  double mean_normalized = 0;  // failures before the first success count as 0
};

struct Aggregate {
  std::vector<AggregateRow> rows;
  double best_score = 0;
  double best_normalized = 0;
  std::uint64_t best_seed = 0;
  int best_iteration = -1;  // -1 when nothing succeeded
};

// Throws std::invalid_argument for a non-positive baseline.
Aggregate aggregate(const std::vector<Trajectory>& runs, double baseline);

// seed,iteration,score,best_so_far,normalized,feedback_kind
std::string trajectory_csv(const std::vector<Trajectory>& runs, std::optional<double> baseline);
// One JSON object per iteration, including the rendered feedback.
std::string trajectory_trace(const std::vector<Trajectory>& runs);
// Line chart of mean best_so_far (normalized when a baseline is given).
std::string trajectory_svg(const std::vector<Trajectory>& runs, std::optional<double> baseline);

}  // namespace mapforge
