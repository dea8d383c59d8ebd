#pragma once

// Baselines, paired statistical comparison, and the Monte Carlo simulation
// harness that scores the learned weights against the single-representation
// rankers on generated graphs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/ilp.hpp"
#include "rankfuse/oracle.hpp"
#include "rankfuse/random.hpp"
#include "rankfuse/ranking.hpp"
#include "rankfuse/solver.hpp"
#include "rankfuse/spectral.hpp"

namespace rankfuse {

enum class TieBreak { Index, Seeded };

struct SingletonResult {
  int column = 0;
  int worst_rank = 0;        // worst supervised rank under the chosen column
  long objective_count = 0;  // candidates strictly beating the worst of S
  NominationList list;
};

/// The best single representation: the column minimizing the worst
/// supervised rank. Ties pick the lowest column index by default, or a
/// seeded-random member of the argmin set.
inline SingletonResult singleton_baseline(
    const PersonalDissimilarityMatrix& matrix, const SupervisionInstance& inst,
    TieBreak tie_break = TieBreak::Index, SeededRng* rng = nullptr) {
  if (matrix.num_items() != inst.num_rows()) {
    throw std::invalid_argument("supervision does not match matrix rows");
  }
  std::vector<int> argmin;
  int best_rank = 0;
  for (int j = 0; j < matrix.num_representations(); ++j) {
    const NominationList list = natural_ranker(matrix.column(j));
    const int worst = worst_supervised_rank(list, inst);
    if (argmin.empty() || worst < best_rank) {
      argmin.assign(1, j);
      best_rank = worst;
    } else if (worst == best_rank) {
      argmin.push_back(j);
    }
  }
  int chosen = argmin.front();
  if (tie_break == TieBreak::Seeded && argmin.size() > 1) {
    if (rng == nullptr) {
      throw std::invalid_argument("seeded tie-break needs a generator");
    }
    chosen = argmin[static_cast<std::size_t>(rng->next_below(argmin.size()))];
  }
  const std::vector<double> column = matrix.column(chosen);
  SingletonResult out{chosen, best_rank,
                      candidates_beating_supervision(column, inst),
                      natural_ranker(column)};
  return out;
}

struct WilcoxonResult {
  double w_statistic = 0.0;  // sum of ranks of positive differences
  double p_one_sided = 1.0;  // P(W >= observed) under the symmetric null
  int n_used = 0;            // differences remaining after dropping zeros
};

/// One-sided signed-rank test. Zero differences are dropped; absolute
/// differences get average ranks on ties. Exact by full sign enumeration up
/// to n = 20, then a normal approximation with tie-corrected variance and a
/// continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(
    const std::vector<double>& differences) {
  std::vector<double> d;
  d.reserve(differences.size());
  for (double v : differences) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite difference");
    }
    if (v != 0.0) d.push_back(v);
  }
  if (d.empty()) {
    throw std::invalid_argument("no nonzero differences");
  }
  const int n = static_cast<int>(d.size());
  if (n < 5) {
    throw std::invalid_argument("need at least 5 nonzero differences, got " +
                                std::to_string(n));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(d[a]) < std::abs(d[b]);
  });
  std::vector<double> rank(n, 0.0);
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n &&
           std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) {
      ++j;
    }
    const double avg = 0.5 * (i + j) + 1.0;  // average of 1-based positions
    for (int k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }

  WilcoxonResult out;
  out.n_used = n;
  for (int i = 0; i < n; ++i) {
    if (d[i] > 0.0) out.w_statistic += rank[i];
  }

  if (n <= 20) {
    // Gray-code walk over all sign assignments.
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t hits = 0;
    double w = 0.0;
    std::uint64_t mask = 0;
    const double threshold = out.w_statistic - 1e-12;
    if (w >= threshold) ++hits;
    for (std::uint64_t g = 1; g < total; ++g) {
      const int bit = std::countr_zero(g);
      mask ^= std::uint64_t{1} << bit;
      w += (mask >> bit & 1) ? rank[bit] : -rank[bit];
      if (w >= threshold) ++hits;
    }
    out.p_one_sided = static_cast<double>(hits) / static_cast<double>(total);
  } else {
    double rank_sum = 0.0;
    double rank_sq = 0.0;
    for (double r : rank) {
      rank_sum += r;
      rank_sq += r * r;
    }
    const double mean = rank_sum / 2.0;
    const double sd = std::sqrt(rank_sq / 4.0);
    const double z = (out.w_statistic - mean - 0.5) / sd;
    out.p_one_sided = 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  return out;
}

/// Paired comparison of two metric series (higher is better): differences,
/// the signed-rank test, and a plain-language direction statement.
struct ComparisonReport {
  std::vector<std::string> ids;
  std::vector<double> first;
  std::vector<double> second;
  std::vector<double> differences;  // first - second
  int n_zero_dropped = 0;
  WilcoxonResult wilcoxon;
  double mean_difference = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal-approximation interval on the mean
  std::string direction;
};

inline ComparisonReport compare_paired(std::vector<std::string> ids,
                                       std::vector<double> first,
                                       std::vector<double> second) {
  if (ids.size() != first.size() || first.size() != second.size()) {
    throw std::invalid_argument("paired series lengths differ");
  }
  if (first.empty()) {
    throw std::invalid_argument("empty comparison input");
  }
  ComparisonReport rep;
  rep.ids = std::move(ids);
  rep.first = std::move(first);
  rep.second = std::move(second);
  rep.differences.resize(rep.first.size());
  for (std::size_t i = 0; i < rep.first.size(); ++i) {
    rep.differences[i] = rep.first[i] - rep.second[i];
    if (rep.differences[i] == 0.0) ++rep.n_zero_dropped;
  }
  rep.wilcoxon = wilcoxon_signed_rank(rep.differences);

  double sum = 0.0;
  for (double v : rep.differences) sum += v;
  rep.mean_difference = sum / static_cast<double>(rep.differences.size());
  if (rep.differences.size() > 1) {
    double ss = 0.0;
    for (double v : rep.differences) {
      ss += (v - rep.mean_difference) * (v - rep.mean_difference);
    }
    const double sd =
        std::sqrt(ss / static_cast<double>(rep.differences.size() - 1));
    rep.ci_halfwidth =
        1.96 * sd / std::sqrt(static_cast<double>(rep.differences.size()));
  }
  rep.direction =
      std::string("positive differences favor the first input; observed mean "
                  "difference ") +
      (rep.mean_difference > 0.0
           ? "favors the first input"
           : (rep.mean_difference < 0.0 ? "favors the second input"
                                        : "favors neither input")) +
      "; one-sided p tests H0: the second input is as good as or better than "
      "the first";
  return rep;
}

enum class SimulationMode { NoiselessP, NoisyAbar };
enum class Scheme { Ilp, Ase, Lse };

inline const char* to_string(SimulationMode m) {
  return m == SimulationMode::NoiselessP ? "NoiselessP" : "NoisyAbar";
}
inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Ilp:
      return "ILP";
    case Scheme::Ase:
      return "ASE";
    case Scheme::Lse:
      return "LSE";
  }
  return "unknown";
}

inline std::vector<double> default_alpha_grid() {
  std::vector<double> grid(11);
  for (int i = 0; i <= 10; ++i) grid[i] = i / 10.0;
  return grid;
}

struct ExperimentConfig {
  int n = 51;
  int k = 1000;
  std::vector<double> alpha_truth_grid = default_alpha_grid();
  int s_size = 5;
  int star_size = 6;
  int monte_carlo_reps = 100;
  std::uint64_t seed = 1;
  int m_embed = 2;
  SimulationMode mode = SimulationMode::NoiselessP;
  SolverConfig solver;
  bool candidate_restricted_rr = true;

  void validate() const {
    if (n < 3) throw std::invalid_argument("n must be at least 3");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (alpha_truth_grid.empty()) {
      throw std::invalid_argument("alpha_truth_grid is empty");
    }
    for (double a : alpha_truth_grid) {
      if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("alpha_truth_grid values must lie in [0,1]");
      }
    }
    if (s_size < 1 || s_size >= star_size || star_size > n - 1) {
      throw std::invalid_argument(
          "need 1 <= s_size < star_size <= n-1, got s_size=" +
          std::to_string(s_size) + " star_size=" + std::to_string(star_size));
    }
    if (monte_carlo_reps < 1) {
      throw std::invalid_argument("monte_carlo_reps must be positive");
    }
    if (m_embed < 1 || m_embed > n) {
      throw std::invalid_argument("m_embed out of range");
    }
  }
};

struct SimulationCell {
  double alpha_truth = 0.0;
  Scheme scheme = Scheme::Ilp;
  double mean_rr = 0.0;
  double ci_halfwidth = 0.0;
  int reps_used = 0;
  int limit_hits = 0;
};

struct ReplicateRecord {
  int replicate = 0;
  double alpha_truth = 0.0;
  Scheme scheme = Scheme::Ilp;
  double reciprocal_rank = 0.0;
  int worst_s_rank = 0;
  long objective_count = 0;
  bool limit_hit = false;
};

struct SimulationResult {
  std::vector<SimulationCell> table;     // grid-major, schemes ILP/ASE/LSE
  std::vector<ReplicateRecord> records;  // every replicate, including limited
};

/// One Monte Carlo experiment. Per replicate: sample latents, form the
/// probability matrix, embed it (and optionally an averaged adjacency), then
/// for every truth-mixing value define the supervised set from the
/// probability-matrix embedding and score all three schemes on the held-out
/// nearest items with common random numbers. Replicates whose weight solve
/// hits a limit are flagged and excluded from the means of every scheme at
/// that grid point.
inline SimulationResult run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  SimulationResult result;
  const int rows = cfg.n - 1;
  constexpr Scheme kSchemes[] = {Scheme::Ilp, Scheme::Ase, Scheme::Lse};

  for (int rep = 0; rep < cfg.monte_carlo_reps; ++rep) {
    const LatentPositions latents =
        sample_latents(cfg.n, derive_seed(cfg.seed, 2 * rep));
    const ProbabilityMatrix pm = probability_matrix(latents);
    const Embedding ase_truth = ase(pm.p, pm.n, cfg.m_embed);
    const Embedding lse_truth = lse(pm.p, pm.n, cfg.m_embed);
    const PersonalDissimilarityMatrix truth =
        personal_dissimilarity({ase_truth, lse_truth}, 0);

    PersonalDissimilarityMatrix observed = truth;
    if (cfg.mode == SimulationMode::NoisyAbar) {
      const AveragedAdjacency abar =
          sample_average_adjacency(pm, cfg.k, derive_seed(cfg.seed, 2 * rep + 1));
      const Embedding ase_noisy = ase(abar.a, abar.n, cfg.m_embed);
      const Embedding lse_noisy = lse(abar.a, abar.n, cfg.m_embed);
      observed = personal_dissimilarity({ase_noisy, lse_noisy}, 0);
    }

    for (double alpha_truth : cfg.alpha_truth_grid) {
      const WeightVector mix(
          std::vector<double>{alpha_truth, 1.0 - alpha_truth});
      const NominationList truth_order = ranker_for_weights(truth, mix);

      std::vector<int> s_rows(truth_order.rows_by_rank().begin(),
                              truth_order.rows_by_rank().begin() + cfg.s_size);
      std::vector<int> held_out(
          truth_order.rows_by_rank().begin() + cfg.s_size,
          truth_order.rows_by_rank().begin() + cfg.star_size);
      const SupervisionInstance inst = SupervisionInstance::make(rows, s_rows);

      const IlpModel model = build_model(observed, inst);
      const IlpSolution ilp = solve(model, cfg.solver);
      const bool limited = ilp.status == IlpSolution::Status::IterationLimit;

      const NominationList scheme_lists[] = {
          solution_to_ranker(observed, ilp),
          natural_ranker(observed.column(0)),
          natural_ranker(observed.column(1))};
      const long scheme_counts[] = {
          ilp.objective_value,
          candidates_beating_supervision(observed.column(0), inst),
          candidates_beating_supervision(observed.column(1), inst)};

      for (int sc = 0; sc < 3; ++sc) {
        const NominationList& list = scheme_lists[sc];
        const double rr =
            cfg.candidate_restricted_rr
                ? mean_reciprocal_rank(restrict_to_candidates(list, inst),
                                       held_out)
                : mean_reciprocal_rank(list, held_out);
        result.records.push_back(ReplicateRecord{
            rep, alpha_truth, kSchemes[sc], rr,
            worst_supervised_rank(list, inst), scheme_counts[sc], limited});
      }
    }
  }

  // Aggregate grid-major with the scheme order above.
  for (double alpha_truth : cfg.alpha_truth_grid) {
    for (Scheme scheme : kSchemes) {
      SimulationCell cell;
      cell.alpha_truth = alpha_truth;
      cell.scheme = scheme;
      std::vector<double> values;
      for (const ReplicateRecord& rec : result.records) {
        if (rec.alpha_truth != alpha_truth || rec.scheme != scheme) continue;
        if (rec.limit_hit) {
          ++cell.limit_hits;
          continue;
        }
        values.push_back(rec.reciprocal_rank);
      }
      cell.reps_used = static_cast<int>(values.size());
      if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        cell.mean_rr = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) {
            ss += (v - cell.mean_rr) * (v - cell.mean_rr);
          }
          const double sd =
              std::sqrt(ss / static_cast<double>(values.size() - 1));
          cell.ci_halfwidth =
              1.96 * sd / std::sqrt(static_cast<double>(values.size()));
        }
      }
      result.table.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace rankfuse
