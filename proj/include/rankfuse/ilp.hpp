#pragma once

// The mixed 0/1 program that learns simplex weights pushing the supervised
// rows to the top of the nomination list. Variables are the J weights
// followed by one binary per candidate; a candidate's binary is 1 exactly
// when it may outrank some supervised row. Minimizing the number of ones
// minimizes the worst supervised rank.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/linear.hpp"
#include "rankfuse/ranking.hpp"

namespace rankfuse {

struct IlpModel {
  int num_alpha = 0;
  double big_m = 0.0;
  std::vector<double> objective;   // over [alpha, x]
  std::vector<LinearRow> rows;     // |S|*|C| big-M rows then normalization
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer_vars;  // true on the x block

  // The data the model was built from; the solver's rounding heuristic
  // evaluates candidate weight vectors against it.
  PersonalDissimilarityMatrix matrix;
  SupervisionInstance instance;

  int num_binary() const {
    return static_cast<int>(instance.candidate_rows().size());
  }
  int num_vars() const { return num_alpha + num_binary(); }
  int x_offset() const { return num_alpha; }
};

struct IlpSolution {
  enum class Status { Optimal, Infeasible, IterationLimit };

  WeightVector alpha;
  std::vector<std::uint8_t> x;  // over candidate rows, ascending
  long objective_value = 0;
  Status status = Status::Infeasible;
  long nodes_explored = 0;
};

inline const char* to_string(IlpSolution::Status s) {
  switch (s) {
    case IlpSolution::Status::Optimal:
      return "optimal";
    case IlpSolution::Status::Infeasible:
      return "infeasible";
    case IlpSolution::Status::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

/// Assembles the weight-learning program for a nonnegative matrix and a
/// supervision split. One row per (supervised, candidate) pair plus the
/// weight normalization row.
inline IlpModel build_model(const PersonalDissimilarityMatrix& matrix,
                            const SupervisionInstance& inst) {
  if (matrix.num_items() != inst.num_rows()) {
    throw std::invalid_argument("supervision does not match matrix rows");
  }
  if (inst.candidate_rows().empty()) {
    throw std::invalid_argument("no candidates to rank against");
  }
  for (int i = 0; i < matrix.num_items(); ++i) {
    for (int j = 0; j < matrix.num_representations(); ++j) {
      if (matrix.entry(i, j) < 0.0) {
        throw std::invalid_argument(
            "model requires a nonnegative (ingested) matrix");
      }
    }
  }

  IlpModel model;
  model.num_alpha = matrix.num_representations();
  model.big_m = matrix.max_entry();
  model.matrix = matrix;
  model.instance = inst;

  const int j_count = model.num_alpha;
  const int c_count = static_cast<int>(inst.candidate_rows().size());
  const int vars = j_count + c_count;

  model.rows.reserve(inst.s_rows().size() * c_count + 1);
  for (int s : inst.s_rows()) {
    for (int p = 0; p < c_count; ++p) {
      const int v = inst.candidate_rows()[p];
      LinearRow row;
      row.coeffs.assign(vars, 0.0);
      for (int j = 0; j < j_count; ++j) {
        row.coeffs[j] = matrix.entry(s, j) - matrix.entry(v, j);
      }
      row.coeffs[j_count + p] = -model.big_m;
      row.rel = Relation::LessEqual;
      row.rhs = 0.0;
      model.rows.push_back(std::move(row));
    }
  }
  LinearRow norm;
  norm.coeffs.assign(vars, 0.0);
  for (int j = 0; j < j_count; ++j) norm.coeffs[j] = 1.0;
  norm.rel = Relation::Equal;
  norm.rhs = 1.0;
  model.rows.push_back(std::move(norm));

  model.objective.assign(vars, 0.0);
  model.lower.assign(vars, 0.0);
  model.upper.assign(vars, 0.0);
  model.integer_vars.assign(vars, false);
  for (int j = 0; j < j_count; ++j) {
    model.upper[j] = std::numeric_limits<double>::infinity();
  }
  for (int p = 0; p < c_count; ++p) {
    model.objective[j_count + p] = 1.0;
    model.upper[j_count + p] = 1.0;
    model.integer_vars[j_count + p] = true;
  }
  return model;
}

/// Checks a solution against every model row, the variable bounds, and the
/// binary/objective bookkeeping.
inline bool solution_feasible(const IlpModel& model, const IlpSolution& sol,
                              double tol = 1e-6) {
  if (sol.alpha.size() != model.num_alpha ||
      static_cast<int>(sol.x.size()) != model.num_binary()) {
    return false;
  }
  long ones = 0;
  for (std::uint8_t b : sol.x) {
    if (b > 1) return false;
    ones += b;
  }
  if (ones != sol.objective_value) return false;

  std::vector<double> z(model.num_vars(), 0.0);
  for (int j = 0; j < model.num_alpha; ++j) z[j] = sol.alpha[j];
  for (int p = 0; p < model.num_binary(); ++p) {
    z[model.x_offset() + p] = sol.x[p];
  }
  for (int v = 0; v < model.num_vars(); ++v) {
    if (z[v] < model.lower[v] - tol || z[v] > model.upper[v] + tol) {
      return false;
    }
  }
  for (const LinearRow& row : model.rows) {
    double act = 0.0;
    for (int v = 0; v < model.num_vars(); ++v) act += row.coeffs[v] * z[v];
    switch (row.rel) {
      case Relation::LessEqual:
        if (act > row.rhs + tol) return false;
        break;
      case Relation::GreaterEqual:
        if (act < row.rhs - tol) return false;
        break;
      case Relation::Equal:
        if (std::abs(act - row.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

/// The nomination list induced by a solved model's weights.
inline NominationList solution_to_ranker(
    const PersonalDissimilarityMatrix& matrix, const IlpSolution& sol) {
  if (sol.status == IlpSolution::Status::Infeasible) {
    throw std::invalid_argument("no weights available for an infeasible solve");
  }
  return ranker_for_weights(matrix, sol.alpha);
}

namespace detail {

inline std::string lp_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string lp_var_name(const IlpModel& model, int var) {
  if (var < model.num_alpha) return "a" + std::to_string(var + 1);
  return "x" + std::to_string(
                   model.instance.candidate_rows()[var - model.num_alpha]);
}

inline void lp_append_terms(const IlpModel& model, const LinearRow& row,
                            std::string& out) {
  bool first = true;
  for (int v = 0; v < model.num_vars(); ++v) {
    const double c = row.coeffs[v];
    if (c == 0.0) continue;
    if (first) {
      out += c < 0.0 ? "- " : "";
      first = false;
    } else {
      out += c < 0.0 ? " - " : " + ";
    }
    const double mag = std::abs(c);
    if (mag != 1.0) {
      out += lp_number(mag);
      out += ' ';
    }
    out += lp_var_name(model, v);
  }
  if (first) out += "0";
}

}  // namespace detail

/// Renders the model in LP text format (a CPLEX-LP subset: Minimize,
/// Subject To, Bounds, Binaries, End) so external solvers can cross-check
/// it. Deterministic: rows and terms appear in model order, numbers use 17
/// significant digits.
inline std::string to_lp_text(const IlpModel& model) {
  std::string out;
  out += "Minimize\n obj: ";
  {
    LinearRow obj;
    obj.coeffs = model.objective;
    detail::lp_append_terms(model, obj, out);
  }
  out += "\nSubject To\n";
  const int big_m_rows = static_cast<int>(model.rows.size()) - 1;
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    const LinearRow& row = model.rows[r];
    out += ' ';
    out += r < big_m_rows ? "c" + std::to_string(r + 1) : std::string("norm");
    out += ": ";
    detail::lp_append_terms(model, row, out);
    switch (row.rel) {
      case Relation::LessEqual:
        out += " <= ";
        break;
      case Relation::GreaterEqual:
        out += " >= ";
        break;
      case Relation::Equal:
        out += " = ";
        break;
    }
    out += detail::lp_number(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    out += ' ';
    if (std::isfinite(model.upper[v])) {
      out += detail::lp_number(model.lower[v]) + " <= " +
             detail::lp_var_name(model, v) + " <= " +
             detail::lp_number(model.upper[v]);
    } else {
      out += detail::lp_var_name(model, v) + " >= " +
             detail::lp_number(model.lower[v]);
    }
    out += '\n';
  }
  out += "Binaries\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    if (model.integer_vars[v]) {
      out += ' ';
      out += detail::lp_var_name(model, v);
      out += '\n';
    }
  }
  out += "End\n";
  return out;
}

}  // namespace rankfuse
