#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "rankfuse/oracle.hpp"
#include "rankfuse/ranking.hpp"
#include "support/instances.hpp"

using rankfuse::PersonalDissimilarityMatrix;
using rankfuse::SupervisionInstance;
using rankfuse::WeightVector;

TEST_CASE("breakpoint oracle finds the blended optimum", "[oracle]") {
  const auto rc = testsupport::blended_optimum_case();
  CHECK(rankfuse::breakpoint_oracle_j2(rc.matrix, rc.instance) == 0);
  // Each corner alone leaves one candidate ahead of the supervised row.
  CHECK(rankfuse::objective_at(rc.matrix, rc.instance,
                               WeightVector::basis(2, 0)) == 1);
  CHECK(rankfuse::objective_at(rc.matrix, rc.instance,
                               WeightVector::basis(2, 1)) == 1);
}

TEST_CASE("breakpoint oracle handles a single crossing", "[oracle]") {
  // Fused values cross exactly once, at one half.
  const auto matrix =
      PersonalDissimilarityMatrix::ingest({{0.0, 1.0}, {1.0, 0.0}});
  const auto inst = SupervisionInstance::make(2, {0});
  CHECK(rankfuse::breakpoint_oracle_j2(matrix, inst) == 0);
}

TEST_CASE("identical columns make the objective weight-free", "[oracle]") {
  const auto matrix = PersonalDissimilarityMatrix::ingest(
      {{0.5, 0.5}, {0.2, 0.2}, {0.8, 0.8}, {0.1, 0.1}});
  const auto inst = SupervisionInstance::make(4, {0});
  const long column_objective = rankfuse::candidates_beating_supervision(
      matrix.column(0), inst);
  CHECK(rankfuse::breakpoint_oracle_j2(matrix, inst) == column_objective);
  CHECK(column_objective == 2);
}

TEST_CASE("single candidate yields a binary objective", "[oracle]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rc = testsupport::random_case(seed, 6, 2, 5);
    const long oracle = rankfuse::breakpoint_oracle_j2(rc.matrix, rc.instance);
    CHECK((oracle == 0 || oracle == 1));
    for (double a : {0.0, 0.5, 1.0}) {
      CHECK(oracle <= rankfuse::objective_at(rc.matrix, rc.instance,
                                             WeightVector({a, 1.0 - a})));
    }
  }
}

TEST_CASE("grid oracle with one column is the column objective", "[oracle]") {
  const auto matrix =
      PersonalDissimilarityMatrix::ingest({{0.5}, {0.2}, {0.8}});
  const auto inst = SupervisionInstance::make(3, {0});
  CHECK(rankfuse::grid_oracle(matrix, inst, 10) ==
        rankfuse::candidates_beating_supervision(matrix.column(0), inst));
}

TEST_CASE("grid oracle at resolution two probes corners and midpoint",
          "[oracle]") {
  const auto rc = testsupport::blended_optimum_case();
  long direct = -1;
  for (double a : {0.0, 0.5, 1.0}) {
    const long obj = rankfuse::objective_at(rc.matrix, rc.instance,
                                            WeightVector({a, 1.0 - a}));
    if (direct < 0 || obj < direct) direct = obj;
  }
  CHECK(rankfuse::grid_oracle(rc.matrix, rc.instance, 2) == direct);
  CHECK_THROWS_AS(rankfuse::grid_oracle(rc.matrix, rc.instance, 1),
                  std::invalid_argument);
}

TEST_CASE("finer grids never report a worse minimum", "[oracle]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rc = testsupport::random_case(seed, 14, 3, 3);
    const long coarse = rankfuse::grid_oracle(rc.matrix, rc.instance, 10);
    const long fine = rankfuse::grid_oracle(rc.matrix, rc.instance, 50);
    CHECK(fine <= coarse);
  }
}

TEST_CASE("grid upper-bounds the exact optimum for two columns", "[oracle]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rc = testsupport::random_case(seed, 16, 2, 4);
    CHECK(rankfuse::breakpoint_oracle_j2(rc.matrix, rc.instance) <=
          rankfuse::grid_oracle(rc.matrix, rc.instance, 25));
  }
}

TEST_CASE("dropping a candidate cannot raise the optimum", "[oracle]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rc = testsupport::random_case(seed, 12, 2, 3);
    const long base = rankfuse::breakpoint_oracle_j2(rc.matrix, rc.instance);

    const int removed = rc.instance.candidate_rows().front();
    std::vector<std::vector<double>> raw;
    std::vector<int> s_rows;
    for (int i = 0; i < rc.matrix.num_items(); ++i) {
      if (i == removed) continue;
      raw.push_back({rc.matrix.entry(i, 0), rc.matrix.entry(i, 1)});
      if (rc.instance.is_supervised(i)) {
        s_rows.push_back(static_cast<int>(raw.size()) - 1);
      }
    }
    const auto reduced = PersonalDissimilarityMatrix::ingest(raw);
    const auto inst =
        SupervisionInstance::make(rc.matrix.num_items() - 1, s_rows);
    CHECK(rankfuse::breakpoint_oracle_j2(reduced, inst) <= base);
  }
}
