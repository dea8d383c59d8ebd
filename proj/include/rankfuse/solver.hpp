#pragma once

// Branch and bound over the candidate binaries. Node relaxations come from
// the bounded simplex; every node also evaluates its relaxed weights as a
// real ranking, which yields a feasible incumbent and keeps the tree small
// whenever the supervision is coherent.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rankfuse/ilp.hpp"
#include "rankfuse/ranking.hpp"
#include "rankfuse/simplex.hpp"

namespace rankfuse {

enum class Branching { MostFractional };
enum class NodeOrder { BestBound };

struct SolverConfig {
  long node_limit = 100000;
  double time_budget_s = 60.0;
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  Branching branching = Branching::MostFractional;
  NodeOrder node_order = NodeOrder::BestBound;
  std::ostream* trace = nullptr;  // one line per explored node when set
};

/// The continuous relaxation: binaries become [0,1] reals.
inline LpProblem lp_relaxation(const IlpModel& model) {
  LpProblem p;
  p.objective = model.objective;
  p.lower = model.lower;
  p.upper = model.upper;
  p.rows = model.rows;
  return p;
}

namespace detail {

struct BnbNode {
  double key = 0.0;  // parent's bound; a valid lower bound for this node
  long id = 0;
  int depth = 0;
  std::vector<std::pair<int, int>> fixings;  // (x position, 0/1)
};

struct BnbNodeWorse {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.id > b.id;  // ties: older node first, down-branch before up
  }
};

inline long ceil_bound(double bound, double int_tol) {
  return static_cast<long>(std::ceil(bound - int_tol));
}

}  // namespace detail

namespace detail {

// The incumbent weights usually come from an LP vertex, which sits exactly
// on a tie: some candidate's fused value equals the worst supervised one.
// Re-center the weights inside the optimal region by maximizing the smallest
// slack of the rows that must stay inactive; the objective is unchanged and
// ties survive only when the data forces them.
inline WeightVector widen_weight_margin(const IlpModel& model,
                                        const WeightVector& alpha,
                                        long objective_count) {
  const PersonalDissimilarityMatrix& matrix = model.matrix;
  const SupervisionInstance& inst = model.instance;
  const int j_count = model.num_alpha;

  const std::vector<double> fused_values = fuse(matrix, alpha);
  double worst_s = -std::numeric_limits<double>::infinity();
  for (int s : inst.s_rows()) worst_s = std::max(worst_s, fused_values[s]);
  std::vector<int> zero_rows;
  for (int v : inst.candidate_rows()) {
    if (!(fused_values[v] < worst_s)) zero_rows.push_back(v);
  }
  if (zero_rows.empty()) return alpha;

  LpProblem margin;
  const int vars = j_count + 1;  // weights plus the slack variable
  margin.objective.assign(vars, 0.0);
  margin.objective[j_count] = -1.0;
  margin.lower.assign(vars, 0.0);
  margin.upper.assign(vars, std::numeric_limits<double>::infinity());
  margin.upper[j_count] = model.big_m + 1.0;
  for (int s : inst.s_rows()) {
    for (int v : zero_rows) {
      LinearRow row;
      row.coeffs.assign(vars, 0.0);
      for (int j = 0; j < j_count; ++j) {
        row.coeffs[j] = matrix.entry(s, j) - matrix.entry(v, j);
      }
      row.coeffs[j_count] = 1.0;
      row.rel = Relation::LessEqual;
      row.rhs = 0.0;
      margin.rows.push_back(std::move(row));
    }
  }
  LinearRow norm;
  norm.coeffs.assign(vars, 0.0);
  for (int j = 0; j < j_count; ++j) norm.coeffs[j] = 1.0;
  norm.rel = Relation::Equal;
  norm.rhs = 1.0;
  margin.rows.push_back(std::move(norm));

  const LpSolution lp = lp_solve(margin);
  if (lp.status != LpSolution::Status::Optimal || lp.values[j_count] <= 0.0) {
    return alpha;
  }
  const WeightVector centered = WeightVector::normalized(
      std::vector<double>(lp.values.begin(), lp.values.begin() + j_count));
  if (objective_at(matrix, inst, centered) != objective_count) {
    return alpha;
  }
  return centered;
}

}  // namespace detail

inline IlpSolution branch_and_bound(const IlpModel& model,
                                    const SolverConfig& cfg) {
  if (cfg.node_limit <= 0 || cfg.time_budget_s <= 0.0) {
    throw std::invalid_argument("solver limits must be positive");
  }
  const auto started = std::chrono::steady_clock::now();
  const auto out_of_time = [&] {
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    return elapsed.count() > cfg.time_budget_s;
  };

  const PersonalDissimilarityMatrix& matrix = model.matrix;
  const SupervisionInstance& inst = model.instance;
  const int j_count = model.num_alpha;
  const int c_count = model.num_binary();

  // Corner weights give an immediate feasible incumbent; the best single
  // representation is a natural starting point.
  WeightVector incumbent_alpha = WeightVector::basis(j_count, 0);
  long incumbent = objective_at(matrix, inst, incumbent_alpha);
  for (int j = 1; j < j_count; ++j) {
    const WeightVector corner = WeightVector::basis(j_count, j);
    const long t = objective_at(matrix, inst, corner);
    if (t < incumbent) {
      incumbent = t;
      incumbent_alpha = corner;
    }
  }

  LpProblem relax = lp_relaxation(model);
  const std::vector<double> relax_lower = relax.lower;
  const std::vector<double> relax_upper = relax.upper;

  std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>,
                      detail::BnbNodeWorse>
      frontier;
  frontier.push(detail::BnbNode{});
  long next_id = 1;
  long nodes_explored = 0;
  bool hit_limit = false;

  while (!frontier.empty()) {
    if (nodes_explored >= cfg.node_limit || out_of_time()) {
      // If even the best outstanding bound cannot beat the incumbent the
      // tree is effectively exhausted.
      if (detail::ceil_bound(frontier.top().key, cfg.int_tol) < incumbent) {
        hit_limit = true;
      }
      break;
    }
    const detail::BnbNode node = frontier.top();
    frontier.pop();
    // The root is always explored; later nodes drop out once their bound
    // cannot beat the incumbent.
    if (node.id != 0 &&
        detail::ceil_bound(node.key, cfg.int_tol) >= incumbent) {
      continue;
    }

    relax.lower = relax_lower;
    relax.upper = relax_upper;
    for (const auto& [pos, value] : node.fixings) {
      relax.lower[model.x_offset() + pos] = value;
      relax.upper[model.x_offset() + pos] = value;
    }
    const LpSolution lp = lp_solve(relax);
    ++nodes_explored;

    if (lp.status == LpSolution::Status::Unbounded) {
      throw std::logic_error("relaxation of a bounded model came back unbounded");
    }
    if (lp.status == LpSolution::Status::Infeasible) {
      if (cfg.trace != nullptr) {
        *cfg.trace << "node " << node.id << " depth " << node.depth
                   << " bound inf incumbent " << incumbent << '\n';
      }
      continue;
    }

    const double bound = std::max(node.key, lp.objective);
    const WeightVector alpha = WeightVector::normalized(
        std::vector<double>(lp.values.begin(), lp.values.begin() + j_count));
    const long rounded = objective_at(matrix, inst, alpha);
    if (rounded < incumbent) {
      incumbent = rounded;
      incumbent_alpha = alpha;
    }
    if (cfg.trace != nullptr) {
      *cfg.trace << "node " << node.id << " depth " << node.depth << " bound "
                 << bound << " incumbent " << incumbent << '\n';
    }
    if (detail::ceil_bound(bound, cfg.int_tol) >= incumbent) continue;

    // Most fractional variable: the relaxed value closest to one half;
    // ties keep the lowest candidate position.
    int branch_pos = -1;
    for (int p = 0; p < c_count; ++p) {
      const double v = lp.values[model.x_offset() + p];
      const double dist = std::min(v - std::floor(v), std::ceil(v) - v);
      if (dist <= cfg.int_tol) continue;
      if (branch_pos < 0 ||
          std::abs(v - 0.5) <
              std::abs(lp.values[model.x_offset() + branch_pos] - 0.5)) {
        branch_pos = p;
      }
    }
    if (branch_pos < 0) continue;  // integral relaxation, nothing to split

    detail::BnbNode down;
    down.key = bound;
    down.id = next_id++;
    down.depth = node.depth + 1;
    down.fixings = node.fixings;
    down.fixings.emplace_back(branch_pos, 0);
    detail::BnbNode up = down;
    up.id = next_id++;
    up.fixings.back().second = 1;
    frontier.push(std::move(down));
    frontier.push(std::move(up));
  }

  incumbent_alpha =
      detail::widen_weight_margin(model, incumbent_alpha, incumbent);
  IlpSolution sol{incumbent_alpha, {}, 0, IlpSolution::Status::Optimal, 0};
  sol.objective_value = incumbent;
  sol.nodes_explored = nodes_explored;
  sol.status = hit_limit ? IlpSolution::Status::IterationLimit
                         : IlpSolution::Status::Optimal;

  // Materialize the binaries from the winning weights under the tie
  // convention: a candidate that exactly ties the farthest supervised value
  // keeps its binary at zero.
  const std::vector<double> fused_values = fuse(matrix, sol.alpha);
  double worst_s = -std::numeric_limits<double>::infinity();
  for (int s : inst.s_rows()) worst_s = std::max(worst_s, fused_values[s]);
  sol.x.assign(c_count, 0);
  long ones = 0;
  for (int p = 0; p < c_count; ++p) {
    if (fused_values[inst.candidate_rows()[p]] < worst_s) {
      sol.x[p] = 1;
      ++ones;
    }
  }
  if (ones != sol.objective_value) {
    throw std::logic_error("incumbent bookkeeping out of sync");
  }
  return sol;
}

/// Solve entry point used by the rest of the library.
inline IlpSolution solve(const IlpModel& model, const SolverConfig& cfg = {}) {
  return branch_and_bound(model, cfg);
}

}  // namespace rankfuse
