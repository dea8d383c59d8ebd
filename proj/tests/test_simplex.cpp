#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <vector>

#include "rankfuse/random.hpp"
#include "rankfuse/simplex.hpp"

using rankfuse::LinearRow;
using rankfuse::LpProblem;
using rankfuse::LpSolution;
using rankfuse::Relation;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem one_var(double lo, double hi) {
  LpProblem p;
  p.objective = {1.0};
  p.lower = {lo};
  p.upper = {hi};
  return p;
}

double activity(const LinearRow& row, const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += row.coeffs[j] * x[j];
  return acc;
}

bool is_feasible(const LpProblem& p, const std::vector<double>& x,
                 double tol = 1e-7) {
  for (int j = 0; j < p.num_vars(); ++j) {
    if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
  }
  for (const LinearRow& row : p.rows) {
    const double act = activity(row, x);
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

}  // namespace

TEST_CASE("one-dimensional program pins the binding bound", "[simplex]") {
  LpProblem p = one_var(-kInf, kInf);
  p.rows.push_back({{1.0}, Relation::GreaterEqual, 3.0});
  p.rows.push_back({{1.0}, Relation::LessEqual, 10.0});
  const LpSolution sol = rankfuse::lp_solve(p);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.values[0] == Catch::Approx(3.0));
  CHECK(sol.objective == Catch::Approx(3.0));

  p.objective = {-1.0};
  const LpSolution other = rankfuse::lp_solve(p);
  REQUIRE(other.status == LpSolution::Status::Optimal);
  CHECK(other.values[0] == Catch::Approx(10.0));
}

TEST_CASE("degenerate objective returns a simplex vertex", "[simplex]") {
  LpProblem p;
  p.objective = {0.0, 0.0, 0.0};
  p.lower = {0.0, 0.0, 0.0};
  p.upper = {kInf, kInf, kInf};
  p.rows.push_back({{1.0, 1.0, 1.0}, Relation::Equal, 1.0});
  const LpSolution sol = rankfuse::lp_solve(p);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(0.0));
  CHECK(is_feasible(p, sol.values));
}

TEST_CASE("infeasible and unbounded programs are classified", "[simplex]") {
  LpProblem bad = one_var(-kInf, kInf);
  bad.rows.push_back({{1.0}, Relation::GreaterEqual, 3.0});
  bad.rows.push_back({{1.0}, Relation::LessEqual, 2.0});
  CHECK(rankfuse::lp_solve(bad).status == LpSolution::Status::Infeasible);

  LpProblem open = one_var(0.0, kInf);
  open.objective = {-1.0};
  open.rows.push_back({{1.0}, Relation::GreaterEqual, 0.0});
  CHECK(rankfuse::lp_solve(open).status == LpSolution::Status::Unbounded);
}

TEST_CASE("upper bounds participate in the optimum", "[simplex]") {
  LpProblem p;
  p.objective = {-1.0, -2.0};
  p.lower = {0.0, 0.0};
  p.upper = {1.0, 1.0};
  p.rows.push_back({{1.0, 1.0}, Relation::LessEqual, 1.5});
  const LpSolution sol = rankfuse::lp_solve(p);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(-2.5));
  CHECK(sol.values[1] == Catch::Approx(1.0));
  CHECK(sol.values[0] == Catch::Approx(0.5));
}

TEST_CASE("equality rows combine with inequalities", "[simplex]") {
  LpProblem p;
  p.objective = {1.0, 3.0, 0.0};
  p.lower = {0.0, 0.0, 0.0};
  p.upper = {kInf, kInf, 2.0};
  p.rows.push_back({{1.0, 1.0, 1.0}, Relation::Equal, 4.0});
  p.rows.push_back({{1.0, -1.0, 0.0}, Relation::LessEqual, 1.0});
  p.rows.push_back({{0.0, 1.0, -1.0}, Relation::GreaterEqual, -1.0});
  const LpSolution sol = rankfuse::lp_solve(p);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(is_feasible(p, sol.values));
  // Hand-checked optimum 11/3 at x = (5/3, 2/3, 5/3): substituting the
  // equality gives cost 4 + 2*x1 - x2 with x1 >= max(x2 - 1, (3 - x2)/2),
  // minimized where the two lower envelopes meet at x2 = 5/3.
  CHECK(sol.objective == Catch::Approx(11.0 / 3.0));
}

TEST_CASE("random feasible programs solve to feasible optima", "[simplex]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    rankfuse::SeededRng rng(seed);
    const int vars = 2 + static_cast<int>(rng.next_below(4));
    const int rows = 1 + static_cast<int>(rng.next_below(5));
    LpProblem p;
    p.objective.resize(vars);
    for (double& c : p.objective) c = rng.next_double() * 2.0 - 1.0;
    p.lower.assign(vars, 0.0);
    p.upper.assign(vars, 1.0);

    // Build rows that a known box point satisfies, so the program is
    // feasible and the point bounds the optimum from above.
    std::vector<double> witness(vars);
    for (double& w : witness) w = rng.next_double();
    for (int r = 0; r < rows; ++r) {
      LinearRow row;
      row.coeffs.resize(vars);
      for (double& c : row.coeffs) c = rng.next_double() * 2.0 - 1.0;
      row.rel = Relation::LessEqual;
      row.rhs = activity(row, witness) + rng.next_double() * 0.1;
      p.rows.push_back(std::move(row));
    }

    const LpSolution sol = rankfuse::lp_solve(p);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(is_feasible(p, sol.values));
    double witness_cost = 0.0;
    for (int j = 0; j < vars; ++j) witness_cost += p.objective[j] * witness[j];
    CHECK(sol.objective <= witness_cost + 1e-7);
  }
}
