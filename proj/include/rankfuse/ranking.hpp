#pragma once

// Rankers induced by dissimilarities, weighted fusion of representations,
// and Mean Reciprocal Rank.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rankfuse/core.hpp"

namespace rankfuse {

/// Ranks items by ascending dissimilarity; the closest item gets rank 1.
/// Equal values are ordered by ascending row index.
inline NominationList natural_ranker(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("cannot rank an empty value vector");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite value in ranking input");
    }
  }
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  std::vector<double> fused(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) fused[p] = values[order[p]];
  return NominationList(std::move(order), std::move(fused));
}

/// Combined dissimilarity: component i is the alpha-weighted sum of row i.
inline std::vector<double> fuse(const PersonalDissimilarityMatrix& matrix,
                                const WeightVector& alpha) {
  if (alpha.size() != matrix.num_representations()) {
    throw std::invalid_argument("weight dimension does not match matrix");
  }
  std::vector<double> out(matrix.num_items(), 0.0);
  for (int i = 0; i < matrix.num_items(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < matrix.num_representations(); ++j) {
      acc += alpha[j] * matrix.entry(i, j);
    }
    out[i] = acc;
  }
  return out;
}

inline NominationList ranker_for_weights(
    const PersonalDissimilarityMatrix& matrix, const WeightVector& alpha) {
  return natural_ranker(fuse(matrix, alpha));
}

/// MRR(h, N') = (1/|N'|) sum over N' of 1/rank. Works on full or
/// candidate-restricted lists; the subset must be ranked by the list.
inline double mean_reciprocal_rank(const NominationList& list,
                                   const std::vector<int>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("MRR subset is empty");
  }
  double acc = 0.0;
  for (int row : subset) acc += 1.0 / list.rank_of(row);
  return acc / static_cast<double>(subset.size());
}

/// Ranker preference: a is preferred to b on the subset iff its MRR is
/// strictly larger.
inline bool prefers(const NominationList& a, const NominationList& b,
                    const std::vector<int>& subset) {
  return mean_reciprocal_rank(a, subset) > mean_reciprocal_rank(b, subset);
}

/// Worst (largest) full-list rank over the supervised rows.
inline int worst_supervised_rank(const NominationList& list,
                                 const SupervisionInstance& inst) {
  int worst = 0;
  for (int s : inst.s_rows()) worst = std::max(worst, list.rank_of(s));
  return worst;
}

/// Number of candidates strictly closer than the farthest supervised item.
/// A candidate that exactly ties the farthest supervised value does not
/// count; that matches the `<=` in the program's big-M rows, where ties
/// resolve in favor of S.
inline long candidates_beating_supervision(std::span<const double> fused,
                                           const SupervisionInstance& inst) {
  if (static_cast<int>(fused.size()) != inst.num_rows()) {
    throw std::invalid_argument("fused vector does not cover all rows");
  }
  double worst_s = -std::numeric_limits<double>::infinity();
  for (int s : inst.s_rows()) worst_s = std::max(worst_s, fused[s]);
  long count = 0;
  for (int v : inst.candidate_rows()) {
    if (fused[v] < worst_s) ++count;
  }
  return count;
}

/// The min-max-rank objective evaluated at a concrete weight vector.
inline long objective_at(const PersonalDissimilarityMatrix& matrix,
                         const SupervisionInstance& inst,
                         const WeightVector& alpha) {
  const std::vector<double> fused_values = fuse(matrix, alpha);
  return candidates_beating_supervision(fused_values, inst);
}

}  // namespace rankfuse
