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
#include "mapforge/search.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "mapforge/dsl.hpp"
#include "mapforge/eval.hpp"
#include "mapforge/simulator.hpp"

namespace mapforge {

Evaluator::Evaluator(ApplicationDescriptor app, MachineModel machine, CostParams costs,
                     std::vector<EnhancerRule> rules, FeedbackLevel level)
    : app_(std::move(app)), machine_(std::move(machine)), costs_(costs), rules_(std::move(rules)),
      level_(level), dims_(domains(app_)) {}

FeedbackReport Evaluator::evaluate(const std::string& source) const {
  ParseResult parsed = parse(source);
  if (!parsed.ok()) return finish(classify(parsed.diagnostics));
  auto diags = validate(*parsed.program, &builtin_library());
  if (!diags.empty()) return finish(classify(diags));
  Resolved resolved = resolve(*parsed.program, app_, machine_);
  if (!resolved.ok()) return finish(classify(resolved.diagnostics));
  SimOutcome outcome = simulate(app_, *resolved.table, machine_, costs_);
  if (const auto* err = std::get_if<SimError>(&outcome)) return finish(classify(*err));
  return finish(classify(std::get<SimResult>(outcome), app_));
}

Candidate Evaluator::candidate(const DecisionVector& v) const {
  try {
    check_vector(v, dims_);
  } catch (const std::invalid_argument& e) {
    throw ProposalError(e.what());
  }
  return Candidate{v, emit_blocks(from_vector(v, app_), app_)};
}

const IterationRecord* Trajectory::best() const {
  const IterationRecord* best = nullptr;
  for (const auto& r : records)
    if (r.score && (!best || *r.score > *best->score)) best = &r;
  return best;
}

std::size_t Random::below(std::size_t n) {
  if (n <= 1) return 0;
  // Rejection sampling keeps the draw uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

DecisionVector Random::vector(const std::vector<Dimension>& dims) {
  DecisionVector v;
  for (const auto& d : dims) v.push_back(below(d.options.size()));
  return v;
}

DecisionVector nth_vector(const std::vector<Dimension>& dims, std::uint64_t index) {
  DecisionVector v(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    const std::uint64_t n = dims[k].options.size();
    v[k] = static_cast<std::size_t>(index % n);
    index /= n;
  }
  return v;
}

namespace {

class RandomStrategy : public Strategy {
 public:
  RandomStrategy(const Evaluator& ev, std::uint64_t seed) : ev_(ev), rng_(seed) {}
  std::string name() const override { return "random"; }
  Candidate propose(const std::vector<IterationRecord>&) override {
    return ev_.candidate(rng_.vector(ev_.dims()));
  }

 private:
  const Evaluator& ev_;
  Random rng_;
};

// First-improvement local search over single-dimension moves. Neighbors of
// the incumbent are tried in a shuffled order; once `stall_limit` of them fail
// in a row the search restarts from a random vector.
class HillClimb : public Strategy {
 public:
  HillClimb(const Evaluator& ev, std::uint64_t seed, std::size_t stall_limit)
      : ev_(ev), rng_(seed), stall_limit_(stall_limit) {
    if (stall_limit_ == 0)
      for (const auto& d : ev_.dims()) stall_limit_ += d.options.size() - 1;
    stall_limit_ = std::max<std::size_t>(stall_limit_, 1);
  }
  std::string name() const override { return "hillclimb"; }

  Candidate propose(const std::vector<IterationRecord>& history) override {
    if (!history.empty() && pending_) {
      const auto& last = history.back();
      if (last.score && (!score_ || *last.score > *score_)) {
        incumbent_ = last.candidate.vector;
        score_ = last.score;
        stall_ = 0;
        shuffle_neighbors();
      } else {
        ++stall_;
      }
    }
    pending_ = true;
    if (!incumbent_ || stall_ >= stall_limit_ || stall_ >= neighbors_.size()) {
      incumbent_.reset();
      score_.reset();
      stall_ = 0;
      return ev_.candidate(rng_.vector(ev_.dims()));
    }
    DecisionVector v = *incumbent_;
    const auto [k, option] = neighbors_[stall_];
    v[k] = option;
    return ev_.candidate(v);
  }

 private:
  void shuffle_neighbors() {
    neighbors_.clear();
    const auto& dims = ev_.dims();
    for (std::size_t k = 0; k < dims.size(); ++k)
      for (std::size_t o = 0; o < dims[k].options.size(); ++o)
        if (o != (*incumbent_)[k]) neighbors_.emplace_back(k, o);
    for (std::size_t i = neighbors_.size(); i > 1; --i)
      std::swap(neighbors_[i - 1], neighbors_[rng_.below(i)]);
  }

  const Evaluator& ev_;
  Random rng_;
  std::size_t stall_limit_;
  std::optional<DecisionVector> incumbent_;
  std::optional<double> score_;
  std::vector<std::pair<std::size_t, std::size_t>> neighbors_;
  std::size_t stall_ = 0;
  bool pending_ = false;
};

class Exhaustive : public Strategy {
 public:
  explicit Exhaustive(const Evaluator& ev) : ev_(ev) {}
  std::string name() const override { return "exhaustive"; }
  Candidate propose(const std::vector<IterationRecord>& history) override {
    boost::multiprecision::cpp_int size = 1;
    for (const auto& d : ev_.dims()) size *= d.options.size();
    const boost::multiprecision::cpp_int k = history.size() % size;
    return ev_.candidate(nth_vector(ev_.dims(), k.convert_to<std::uint64_t>()));
  }

 private:
  const Evaluator& ev_;
};

}  // namespace

std::unique_ptr<Strategy> make_random(const Evaluator& ev, std::uint64_t seed) {
  return std::make_unique<RandomStrategy>(ev, seed);
}

std::unique_ptr<Strategy> make_hillclimb(const Evaluator& ev, std::uint64_t seed,
                                         std::size_t stall_limit) {
  return std::make_unique<HillClimb>(ev, seed, stall_limit);
}

std::unique_ptr<Strategy> make_exhaustive(const Evaluator& ev) {
  return std::make_unique<Exhaustive>(ev);
}

Trajectory run(const Evaluator& ev, Strategy& strategy, int budget, std::uint64_t seed) {
  Trajectory t;
  t.strategy = strategy.name();
  t.seed = seed;
  t.app = ev.app().name;
  t.machine = ev.machine().name;
  std::optional<double> best;
  for (int k = 0; k < budget; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    try {
      rec.candidate = strategy.propose(t.records);
      rec.feedback = ev.evaluate(rec.candidate);
    } catch (const ProposalError& e) {
      rec.feedback = ev.finish(FeedbackReport{FeedbackKind::CompileError, e.what(), {}, {}, {}});
    }
    rec.score = rec.feedback.score;
    if (rec.score && (!best || *rec.score > *best)) best = rec.score;
    rec.best_so_far = best;
    rec.rendered = render(rec.feedback);
    t.records.push_back(std::move(rec));
  }
  return t;
}

Aggregate aggregate(const std::vector<Trajectory>& runs, double baseline) {
  if (!(baseline > 0)) throw std::invalid_argument("baseline score must be positive");
  if (runs.empty()) throw std::invalid_argument("no trajectories to aggregate");
  Aggregate out;
  std::size_t longest = 0;
  for (const auto& t : runs) longest = std::max(longest, t.records.size());
  for (std::size_t k = 0; k < longest; ++k) {
    double sum = 0;
    for (const auto& t : runs) {
      if (t.records.empty()) continue;
      const auto& r = t.records[std::min(k, t.records.size() - 1)];
      sum += r.best_so_far ? *r.best_so_far / baseline : 0.0;
    }
    out.rows.push_back({static_cast<int>(k), sum / static_cast<double>(runs.size())});
  }
  for (const auto& t : runs) {
    const IterationRecord* b = t.best();
    if (b && (out.best_iteration < 0 || *b->score > out.best_score)) {
      out.best_score = *b->score;
      out.best_seed = t.seed;
      out.best_iteration = b->iteration;
    }
  }
  out.best_normalized = out.best_score / baseline;
  return out;
}

namespace {

std::string number(std::optional<double> x) { return x ? fmt::format("{:.9g}", *x) : ""; }

std::string kind_id(FeedbackKind k) {
  switch (k) {
    case FeedbackKind::CompileError: return "CompileError";
    case FeedbackKind::ExecutionError: return "ExecutionError";
    case FeedbackKind::PerformanceMetric: return "PerformanceMetric";
  }
  return "";
}

}  // namespace

std::string trajectory_csv(const std::vector<Trajectory>& runs, std::optional<double> baseline) {
  std::string out = "seed,iteration,score,best_so_far,normalized,feedback_kind\n";
  for (const auto& t : runs)
    for (const auto& r : t.records) {
      std::optional<double> norm;
      if (baseline && r.best_so_far) norm = *r.best_so_far / *baseline;
      out += fmt::format("{},{},{},{},{},{}\n", t.seed, r.iteration, number(r.score),
                         number(r.best_so_far), number(norm), kind_id(r.feedback.kind));
    }
  return out;
}

std::string trajectory_trace(const std::vector<Trajectory>& runs) {
  std::string out;
  for (const auto& t : runs)
    for (const auto& r : t.records) {
      nlohmann::ordered_json j;
      j["strategy"] = t.strategy;
      j["seed"] = t.seed;
      j["iteration"] = r.iteration;
      if (r.candidate.vector) j["vector"] = *r.candidate.vector;
      else j["vector"] = nullptr;
      j["mapper"] = r.candidate.source();
      j["feedback_kind"] = kind_id(r.feedback.kind);
      j["feedback"] = r.rendered;
      if (r.score) j["score"] = *r.score;
      else j["score"] = nullptr;
      out += j.dump() + "\n";
    }
  return out;
}

std::string trajectory_svg(const std::vector<Trajectory>& runs, std::optional<double> baseline) {
  std::vector<double> ys;
  if (baseline && !runs.empty()) {
    for (const auto& row : aggregate(runs, *baseline).rows) ys.push_back(row.mean_normalized);
  } else if (!runs.empty()) {
    std::size_t longest = 0;
    for (const auto& t : runs) longest = std::max(longest, t.records.size());
    for (std::size_t k = 0; k < longest; ++k) {
      double sum = 0;
      for (const auto& t : runs)
        if (!t.records.empty()) {
          const auto& r = t.records[std::min(k, t.records.size() - 1)];
          sum += r.best_so_far.value_or(0.0);
        }
      ys.push_back(sum / static_cast<double>(runs.size()));
    }
  }
  const double width = 640, height = 400, left = 70, right = 20, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  double ymax = 0;
  for (double y : ys) ymax = std::max(ymax, y);
  if (ymax <= 0) ymax = 1;
  ymax *= 1.1;
  auto px = [&](std::size_t k) {
    return left + (ys.size() > 1 ? plot_w * static_cast<double>(k) / static_cast<double>(ys.size() - 1) : 0.0);
  };
  auto py = [&](double y) { return top + plot_h * (1 - y / ymax); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left,
                     top + plot_h, left + plot_w);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                     top + plot_h);
  for (int tick = 0; tick <= 4; ++tick) {
    const double y = ymax * tick / 4;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
        left - 6, py(y) + 4, y);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n",
      left + plot_w / 2, height - 12);
  svg += fmt::format(
      "<text x=\"14\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 14 {:.1f})\">{}</text>\n",
      top + plot_h / 2, top + plot_h / 2,
      baseline ? "mean normalized best" : "mean best score");
  if (!ys.empty()) {
    std::string points;
    for (std::size_t k = 0; k < ys.size(); ++k)
      points += fmt::format("{}{:.2f},{:.2f}", k ? " " : "", px(k), py(ys[k]));
    svg += fmt::format("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
                       points);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
        left + plot_w, height - 30, ys.size());
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mapforge
