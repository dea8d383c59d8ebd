#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/oracle.hpp"
#include "rankfuse/ranking.hpp"
#include "support/instances.hpp"

using rankfuse::NominationList;
using rankfuse::PersonalDissimilarityMatrix;
using rankfuse::SupervisionInstance;
using rankfuse::WeightVector;

TEST_CASE("ingest keeps a nonnegative matrix unchanged", "[core]") {
  const auto m = PersonalDissimilarityMatrix::ingest({{0.2, 0.9}, {0.4, 0.1}});
  CHECK(m.num_items() == 2);
  CHECK(m.num_representations() == 2);
  CHECK(m.entry(0, 0) == 0.2);
  CHECK(m.entry(1, 1) == 0.1);
  CHECK(m.column_shift() == std::vector<double>{0.0, 0.0});
  CHECK(m.max_entry() == 0.9);
}

TEST_CASE("ingest shifts negative columns to zero minimum", "[core]") {
  const auto m = PersonalDissimilarityMatrix::ingest({{-1.0, 0.5}, {0.0, 0.5}});
  CHECK(m.entry(0, 0) == 0.0);
  CHECK(m.entry(1, 0) == 1.0);
  CHECK(m.entry(0, 1) == 0.5);
  CHECK(m.column_shift() == std::vector<double>{1.0, 0.0});
}

TEST_CASE("ingest rejects bad input with a location", "[core]") {
  CHECK_THROWS_WITH(
      PersonalDissimilarityMatrix::ingest({{0.1}, {std::nan("")}}),
      Catch::Matchers::ContainsSubstring("row 1") &&
          Catch::Matchers::ContainsSubstring("column 0"));
  CHECK_THROWS_AS(PersonalDissimilarityMatrix::ingest({}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PersonalDissimilarityMatrix::ingest({{1.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PersonalDissimilarityMatrix::ingest({{1.0, 2.0}, {1.0}}),
                  std::invalid_argument);
}

TEST_CASE("ingest shift does not move the optimal objective", "[core]") {
  // Raw entries partly negative; a per-column constant cannot change any
  // weighted ordering, so the exact two-column solver must agree.
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    rankfuse::SeededRng rng(seed);
    auto raw = testsupport::random_raw(rng, 12, 2);
    for (auto& row : raw) {
      row[0] -= 0.7;  // forces a shift on column 0
    }
    auto shifted = raw;
    for (auto& row : shifted) {
      row[0] += 2.5;
      row[1] += 0.3;
    }
    const auto inst =
        SupervisionInstance::make(12, testsupport::random_subset(rng, 12, 3));
    const auto a = PersonalDissimilarityMatrix::ingest(raw);
    const auto b = PersonalDissimilarityMatrix::ingest(shifted);
    CHECK(rankfuse::breakpoint_oracle_j2(a, inst) ==
          rankfuse::breakpoint_oracle_j2(b, inst));
  }
}

TEST_CASE("supervision instance validates its split", "[core]") {
  const auto inst = SupervisionInstance::make(5, {1, 3});
  CHECK(inst.s_rows() == std::vector<int>{1, 3});
  CHECK(inst.candidate_rows() == std::vector<int>{0, 2, 4});
  CHECK(inst.is_supervised(3));
  CHECK_FALSE(inst.is_supervised(2));

  CHECK_THROWS_AS(SupervisionInstance::make(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(SupervisionInstance::make(5, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(SupervisionInstance::make(5, {5}), std::invalid_argument);
  CHECK_THROWS_AS(SupervisionInstance::make(3, {0, 1, 2}),
                  std::invalid_argument);
}

TEST_CASE("weight vector enforces the simplex", "[core]") {
  CHECK_NOTHROW(WeightVector({0.5, 0.5}));
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(std::vector<double>{}), std::invalid_argument);

  const auto w = WeightVector::normalized({3.0, 1.0, -1e-12});
  CHECK(w[0] == Catch::Approx(0.75));
  CHECK(w[2] == 0.0);
  double sum = 0.0;
  for (int j = 0; j < w.size(); ++j) sum += w[j];
  CHECK(std::abs(sum - 1.0) <= WeightVector::kSumTolerance);

  CHECK(WeightVector::basis(3, 1)[1] == 1.0);
  CHECK(WeightVector::uniform(4)[2] == Catch::Approx(0.25));
}

TEST_CASE("nomination list validates order and tie convention", "[core]") {
  CHECK_NOTHROW(NominationList({2, 0, 1}, {0.1, 0.5, 0.5}));
  // Equal fused values must be listed by ascending row.
  CHECK_THROWS_AS(NominationList({2, 1, 0}, {0.1, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NominationList({0, 1}, {0.5, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(NominationList({0, 0}, {0.1, 0.1}), std::invalid_argument);

  const NominationList list({2, 0, 1}, {0.1, 0.5, 0.5});
  CHECK(list.rank_of(2) == 1);
  CHECK(list.rank_of(0) == 2);
  CHECK(list.row_at_rank(3) == 1);
  CHECK(list.contains(1));
  CHECK_FALSE(list.contains(7));
  CHECK_THROWS_AS(list.rank_of(7), std::out_of_range);
}

TEST_CASE("restrict to candidates compresses ranks in order", "[core]") {
  // Full list: row0 rank1, row1 rank2, row2 rank3, row3 rank4 with
  // S = {row0, row2}.
  const auto list = rankfuse::natural_ranker(std::vector<double>{1, 2, 3, 4});
  const auto inst = SupervisionInstance::make(4, {0, 2});
  const auto restricted = rankfuse::restrict_to_candidates(list, inst);
  CHECK(restricted.size() == 2);
  CHECK(restricted.rank_of(1) == 1);
  CHECK(restricted.rank_of(3) == 2);
  CHECK_FALSE(restricted.contains(0));
}

TEST_CASE("restriction preserves candidate order on random data", "[core]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    rankfuse::SeededRng rng(seed);
    const int rows = 8 + static_cast<int>(rng.next_below(20));
    std::vector<double> values(rows);
    for (double& v : values) v = rng.next_double();
    const int s_size = 1 + static_cast<int>(rng.next_below(rows - 1));
    const auto inst = SupervisionInstance::make(
        rows, testsupport::random_subset(rng, rows, s_size));

    const auto full = rankfuse::natural_ranker(values);
    const auto restricted = rankfuse::restrict_to_candidates(full, inst);

    // Independent route: rank the candidate values directly.
    std::vector<double> cand_values;
    for (int r : inst.candidate_rows()) cand_values.push_back(values[r]);
    const auto direct = rankfuse::natural_ranker(cand_values);
    REQUIRE(restricted.size() == direct.size());
    for (int p = 0; p < direct.size(); ++p) {
      const int row = inst.candidate_rows()[direct.rows_by_rank()[p]];
      CHECK(restricted.rows_by_rank()[p] == row);
    }
  }
}
