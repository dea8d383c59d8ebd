#pragma once

// Independent solvers used to check the branch-and-bound pipeline. The
// two-representation oracle is exact: with two columns the fused ordering is
// piecewise constant in the first weight, changing only where two items'
// fused values cross, so scanning the crossings and the open intervals
// between them covers every achievable ordering.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/ranking.hpp"

namespace rankfuse {

/// Exact optimal objective for J = 2 by breakpoint enumeration.
inline long breakpoint_oracle_j2(const PersonalDissimilarityMatrix& matrix,
                                 const SupervisionInstance& inst) {
  if (matrix.num_representations() != 2) {
    throw std::invalid_argument("breakpoint oracle requires two columns");
  }
  const int n = matrix.num_items();

  std::vector<double> points{0.0, 1.0};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double den = (matrix.entry(u, 0) - matrix.entry(v, 0)) -
                         (matrix.entry(u, 1) - matrix.entry(v, 1));
      if (den == 0.0) continue;  // parallel fused lines never cross
      const double a = (matrix.entry(v, 1) - matrix.entry(u, 1)) / den;
      if (a >= 0.0 && a <= 1.0) points.push_back(a);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<double> probes = points;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    probes.push_back(0.5 * (points[i] + points[i + 1]));
  }

  long best = -1;
  for (double a : probes) {
    const WeightVector alpha(std::vector<double>{a, 1.0 - a});
    const long obj = objective_at(matrix, inst, alpha);
    if (best < 0 || obj < best) best = obj;
  }
  return best;
}

/// Minimum objective over a simplex lattice with `resolution` subdivisions
/// per axis; an upper bound on the true optimum for any J.
inline long grid_oracle(const PersonalDissimilarityMatrix& matrix,
                        const SupervisionInstance& inst, int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("grid resolution must be at least 2");
  }
  const int j_count = matrix.num_representations();
  std::vector<double> alpha(j_count, 0.0);
  long best = -1;

  // Enumerate all compositions of `resolution` into j_count parts.
  std::vector<int> parts(j_count, 0);
  const auto evaluate = [&] {
    for (int j = 0; j < j_count; ++j) {
      alpha[j] = static_cast<double>(parts[j]) / resolution;
    }
    const long obj =
        objective_at(matrix, inst, WeightVector::normalized(alpha));
    if (best < 0 || obj < best) best = obj;
  };
  const auto recurse = [&](auto&& self, int level, int remaining) -> void {
    if (level == j_count - 1) {
      parts[level] = remaining;
      evaluate();
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      parts[level] = k;
      self(self, level + 1, remaining - k);
    }
  };
  recurse(recurse, 0, resolution);
  return best;
}

}  // namespace rankfuse
