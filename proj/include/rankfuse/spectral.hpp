#pragma once

// Random dot product graphs and their spectral embeddings: latent positions
// on the positive quarter disk, the induced edge-probability matrix,
// Bernoulli adjacency averages, a cyclic Jacobi eigensolver, and the
// adjacency / normalized-Laplacian embeddings with their query-personal
// distance columns.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/random.hpp"

namespace rankfuse {

class LatentPositions {
 public:
  LatentPositions(std::vector<double> coords, int n, int dim)
      : coords_(std::move(coords)), n_(n), dim_(dim) {
    if (static_cast<int>(coords_.size()) != n_ * dim_ || n_ < 2 || dim_ < 1) {
      throw std::invalid_argument("malformed latent positions");
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = i; j < n_; ++j) {
        const double p = dot(i, j);
        if (p < 0.0 || p > 1.0) {
          throw std::invalid_argument(
              "latent inner product out of [0,1] for rows " +
              std::to_string(i) + "," + std::to_string(j));
        }
      }
    }
  }

  int size() const { return n_; }
  int dim() const { return dim_; }
  std::span<const double> row(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  double dot(int i, int j) const {
    const auto a = row(i);
    const auto b = row(j);
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k) acc += a[k] * b[k];
    return acc;
  }

 private:
  std::vector<double> coords_;  // row-major n x dim
  int n_ = 0;
  int dim_ = 0;
};

struct ProbabilityMatrix {
  std::vector<double> p;  // row-major n x n, symmetric, entries in [0,1]
  int n = 0;

  double at(int i, int j) const { return p[static_cast<std::size_t>(i) * n + j]; }
};

struct AveragedAdjacency {
  std::vector<double> a;  // row-major n x n, symmetric, zero diagonal
  int n = 0;
  int k = 0;  // number of averaged graphs; entries are multiples of 1/k

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

enum class EmbeddingKind { Ase, Lse };

struct Embedding {
  std::vector<double> y;  // row-major n x dim, columns by descending |eigenvalue|
  int n = 0;
  int dim = 0;
  EmbeddingKind kind = EmbeddingKind::Ase;

  std::span<const double> row(int i) const {
    return {y.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

/// Query row fixed at (0.5, 0.5); the rest i.i.d. uniform on the quarter
/// disk {x >= 0, |x| <= 1}, by rejection from the unit square. Deterministic
/// under the seed.
inline LatentPositions sample_latents(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  std::vector<double> coords(static_cast<std::size_t>(n) * 2);
  coords[0] = 0.5;
  coords[1] = 0.5;
  SeededRng rng(seed);
  for (int i = 1; i < n; ++i) {
    double x;
    double y;
    do {
      x = rng.next_double();
      y = rng.next_double();
    } while (x * x + y * y > 1.0);
    coords[static_cast<std::size_t>(i) * 2] = x;
    coords[static_cast<std::size_t>(i) * 2 + 1] = y;
  }
  return LatentPositions(std::move(coords), n, 2);
}

inline ProbabilityMatrix probability_matrix(const LatentPositions& latents) {
  ProbabilityMatrix pm;
  pm.n = latents.size();
  pm.p.resize(static_cast<std::size_t>(pm.n) * pm.n);
  for (int i = 0; i < pm.n; ++i) {
    for (int j = i; j < pm.n; ++j) {
      const double v = latents.dot(i, j);
      pm.p[static_cast<std::size_t>(i) * pm.n + j] = v;
      pm.p[static_cast<std::size_t>(j) * pm.n + i] = v;
    }
  }
  return pm;
}

/// Mean of k independent Bernoulli graphs on the probabilities: the upper
/// triangle is sampled, mirrored, and the diagonal stays zero.
inline AveragedAdjacency sample_average_adjacency(const ProbabilityMatrix& pm,
                                                  int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("need at least one graph to average");
  AveragedAdjacency avg;
  avg.n = pm.n;
  avg.k = k;
  avg.a.assign(static_cast<std::size_t>(pm.n) * pm.n, 0.0);
  SeededRng rng(seed);
  for (int g = 0; g < k; ++g) {
    for (int i = 0; i < pm.n; ++i) {
      for (int j = i + 1; j < pm.n; ++j) {
        if (rng.next_double() < pm.at(i, j)) {
          avg.a[static_cast<std::size_t>(i) * pm.n + j] += 1.0;
        }
      }
    }
  }
  for (int i = 0; i < pm.n; ++i) {
    for (int j = i + 1; j < pm.n; ++j) {
      const double v = avg.a[static_cast<std::size_t>(i) * pm.n + j] / k;
      avg.a[static_cast<std::size_t>(i) * pm.n + j] = v;
      avg.a[static_cast<std::size_t>(j) * pm.n + i] = v;
    }
  }
  return avg;
}

struct EighResult {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row-major n x n; column k is eigenvector k
  int n = 0;

  double vec(int i, int k) const {
    return vectors[static_cast<std::size_t>(i) * n + k];
  }
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Adequate at desk scale (n up to around two thousand).
inline EighResult symmetric_eigh(std::span<const double> matrix, int n) {
  if (static_cast<int>(matrix.size()) != n * n || n < 1) {
    throw std::invalid_argument("malformed symmetric matrix");
  }
  std::vector<double> a(matrix.begin(), matrix.end());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(a[static_cast<std::size_t>(i) * n + j] -
                                a[static_cast<std::size_t>(j) * n + i]);
      if (d > 1e-12) {
        throw std::invalid_argument("matrix is not symmetric at " +
                                    std::to_string(i) + "," + std::to_string(j));
      }
    }
  }
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  double norm = 0.0;
  for (double x : a) norm += x * x;
  norm = std::sqrt(norm);
  const double stop = std::max(1e-300, 1e-14 * std::max(1.0, norm));

  const auto at = [&](std::vector<double>& mm, int i, int j) -> double& {
    return mm[static_cast<std::size_t>(i) * n + j];
  };

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        off += 2.0 * at(a, i, j) * at(a, i, j);
      }
    }
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int i = 0; i < n; ++i) {
          const double aip = at(a, i, p);
          const double aiq = at(a, i, q);
          at(a, i, p) = c * aip - s * aiq;
          at(a, i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = at(a, p, i);
          const double aqi = at(a, q, i);
          at(a, p, i) = c * api - s * aqi;
          at(a, q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = at(v, i, p);
          const double viq = at(v, i, q);
          at(v, i, p) = c * vip - s * viq;
          at(v, i, q) = s * vip + c * viq;
        }
      }
    }
  }

  EighResult out;
  out.n = n;
  out.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = at(a, i, i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (diag[x] != diag[y]) return diag[x] > diag[y];
    return x < y;
  });
  out.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i) {
      out.vectors[static_cast<std::size_t>(i) * n + k] = at(v, i, order[k]);
    }
  }
  return out;
}

namespace detail {

inline Embedding scaled_embedding(const EighResult& eig, int m_embed,
                                  double scale, EmbeddingKind kind) {
  const int n = eig.n;
  if (m_embed < 1 || m_embed > n) {
    throw std::invalid_argument("embedding dimension out of range");
  }
  // Top columns by |eigenvalue|; among equal magnitudes the positive
  // eigenvalue (already sorted first) wins.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return std::abs(eig.values[x]) > std::abs(eig.values[y]);
  });

  Embedding emb;
  emb.n = n;
  emb.dim = m_embed;
  emb.kind = kind;
  emb.y.resize(static_cast<std::size_t>(n) * m_embed);
  for (int t = 0; t < m_embed; ++t) {
    const int k = order[t];
    const double w = scale * std::sqrt(std::abs(eig.values[k]));
    for (int i = 0; i < n; ++i) {
      emb.y[static_cast<std::size_t>(i) * m_embed + t] = w * eig.vec(i, k);
    }
  }
  return emb;
}

}  // namespace detail

/// Adjacency spectral embedding: rows of U |L|^(1/2) for the top m_embed
/// eigenpairs by magnitude.
inline Embedding ase(std::span<const double> matrix, int n, int m_embed) {
  return detail::scaled_embedding(symmetric_eigh(matrix, n), m_embed, 1.0,
                                  EmbeddingKind::Ase);
}

/// Normalized-Laplacian spectral embedding, scaled by sqrt(n). Rejects any
/// vertex whose row sum is not positive, naming the vertex.
inline Embedding lse(std::span<const double> matrix, int n, int m_embed) {
  std::vector<double> row_sum(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      row_sum[i] += matrix[static_cast<std::size_t>(i) * n + j];
    }
    if (!(row_sum[i] > 0.0)) {
      throw std::invalid_argument("nonpositive row sum at vertex " +
                                  std::to_string(i));
    }
  }
  std::vector<double> lap(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lap[static_cast<std::size_t>(i) * n + j] =
          matrix[static_cast<std::size_t>(i) * n + j] /
          std::sqrt(row_sum[i] * row_sum[j]);
    }
  }
  return detail::scaled_embedding(symmetric_eigh(lap, n), m_embed,
                                  std::sqrt(static_cast<double>(n)),
                                  EmbeddingKind::Lse);
}

/// Row index of a non-query vertex inside the personal matrix.
inline int row_of_vertex(int vertex, int query) {
  return vertex < query ? vertex : vertex - 1;
}

inline int vertex_of_row(int row, int query) {
  return row < query ? row : row + 1;
}

/// One Euclidean-distance column per embedding, measured from the query
/// vertex; the query's own row is excluded.
inline PersonalDissimilarityMatrix personal_dissimilarity(
    const std::vector<Embedding>& embeddings, int query_row) {
  if (embeddings.empty()) {
    throw std::invalid_argument("no embeddings given");
  }
  const int n = embeddings.front().n;
  for (const Embedding& e : embeddings) {
    if (e.n != n) throw std::invalid_argument("embedding sizes disagree");
  }
  if (query_row < 0 || query_row >= n) {
    throw std::invalid_argument("query row out of range");
  }
  std::vector<std::vector<double>> raw(
      n - 1, std::vector<double>(embeddings.size(), 0.0));
  for (std::size_t j = 0; j < embeddings.size(); ++j) {
    const Embedding& emb = embeddings[j];
    const auto q = emb.row(query_row);
    for (int vertex = 0; vertex < n; ++vertex) {
      if (vertex == query_row) continue;
      const auto r = emb.row(vertex);
      double acc = 0.0;
      for (int k = 0; k < emb.dim; ++k) {
        const double d = r[k] - q[k];
        acc += d * d;
      }
      raw[row_of_vertex(vertex, query_row)][j] = std::sqrt(acc);
    }
  }
  return PersonalDissimilarityMatrix::ingest(raw);
}

}  // namespace rankfuse
