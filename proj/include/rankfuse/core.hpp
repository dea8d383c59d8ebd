#pragma once

// Core domain types: the query-personal dissimilarity matrix, supervision
// sets, simplex weight vectors, and nomination (ranked) lists. All types are
// immutable after construction and safe to share across threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankfuse {

/// A non-query item: dense row index plus an optional human-readable label
/// carried through from input files. The query itself is never a row; it is
/// held separately by whatever owns the matrix.
struct ItemId {
  int index = 0;
  std::string label;
};

namespace detail {

inline std::string locate(int row, int col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Dissimilarities from the query to every other item, one row per non-query
/// item and one column per representation. Ingest shifts each column by the
/// smallest amount that makes it nonnegative; `column_shift()` records the
/// applied shifts. A per-item constant shift never changes the ordering
/// induced by any simplex-weighted combination of the columns.
class PersonalDissimilarityMatrix {
 public:
  PersonalDissimilarityMatrix() = default;

  /// Validates and normalizes a raw matrix. Rejects non-finite entries
  /// (naming the offending row/column), empty input, fewer than two rows,
  /// and ragged rows.
  static PersonalDissimilarityMatrix ingest(
      const std::vector<std::vector<double>>& raw) {
    if (raw.empty() || raw[0].empty()) {
      throw std::invalid_argument("dissimilarity matrix is empty");
    }
    const int items = static_cast<int>(raw.size());
    const int reps = static_cast<int>(raw[0].size());
    if (items < 2) {
      throw std::invalid_argument(
          "dissimilarity matrix needs at least two items, got " +
          std::to_string(items));
    }
    PersonalDissimilarityMatrix m;
    m.items_ = items;
    m.reps_ = reps;
    m.entries_.resize(static_cast<std::size_t>(items) * reps);
    for (int i = 0; i < items; ++i) {
      if (static_cast<int>(raw[i].size()) != reps) {
        throw std::invalid_argument("ragged dissimilarity matrix at row " +
                                    std::to_string(i));
      }
      for (int j = 0; j < reps; ++j) {
        if (!std::isfinite(raw[i][j])) {
          throw std::invalid_argument("non-finite dissimilarity at " +
                                      detail::locate(i, j));
        }
        m.entries_[static_cast<std::size_t>(i) * reps + j] = raw[i][j];
      }
    }
    m.shifts_.assign(reps, 0.0);
    for (int j = 0; j < reps; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      for (int i = 0; i < items; ++i) lo = std::min(lo, m.entry(i, j));
      if (lo < 0.0) {
        m.shifts_[j] = -lo;
        for (int i = 0; i < items; ++i) {
          m.entries_[static_cast<std::size_t>(i) * reps + j] += m.shifts_[j];
        }
      }
    }
    return m;
  }

  int num_items() const { return items_; }
  int num_representations() const { return reps_; }

  double entry(int item, int rep) const {
    return entries_[static_cast<std::size_t>(item) * reps_ + rep];
  }

  const std::vector<double>& column_shift() const { return shifts_; }

  std::vector<double> column(int rep) const {
    std::vector<double> out(items_);
    for (int i = 0; i < items_; ++i) out[i] = entry(i, rep);
    return out;
  }

  /// Maximum entry of the (shifted, nonnegative) matrix; the big-M constant.
  double max_entry() const {
    double hi = 0.0;
    for (double v : entries_) hi = std::max(hi, v);
    return hi;
  }

 private:
  int items_ = 0;
  int reps_ = 0;
  std::vector<double> entries_;  // row-major, items_ x reps_
  std::vector<double> shifts_;
};

/// The supervision split of the matrix rows: the known-similar set S and the
/// induced candidate set C (everything else). S must be non-empty and leave
/// at least one candidate.
class SupervisionInstance {
 public:
  static SupervisionInstance make(int num_rows,
                                  const std::vector<int>& s_rows) {
    if (num_rows < 2) {
      throw std::invalid_argument("supervision needs at least two rows");
    }
    if (s_rows.empty()) {
      throw std::invalid_argument("supervised set S is empty");
    }
    SupervisionInstance inst;
    inst.num_rows_ = num_rows;
    inst.in_s_.assign(num_rows, 0);
    for (int r : s_rows) {
      if (r < 0 || r >= num_rows) {
        throw std::invalid_argument("supervised row " + std::to_string(r) +
                                    " out of range");
      }
      if (inst.in_s_[r]) {
        throw std::invalid_argument("duplicate supervised row " +
                                    std::to_string(r));
      }
      inst.in_s_[r] = 1;
    }
    for (int r = 0; r < num_rows; ++r) {
      (inst.in_s_[r] ? inst.s_rows_ : inst.candidate_rows_).push_back(r);
    }
    if (inst.candidate_rows_.empty()) {
      throw std::invalid_argument("supervised set covers every row");
    }
    return inst;
  }

  int num_rows() const { return num_rows_; }
  const std::vector<int>& s_rows() const { return s_rows_; }
  const std::vector<int>& candidate_rows() const { return candidate_rows_; }
  bool is_supervised(int row) const { return in_s_[row] != 0; }

 private:
  int num_rows_ = 0;
  std::vector<int> s_rows_;          // ascending
  std::vector<int> candidate_rows_;  // ascending
  std::vector<char> in_s_;
};

/// Convex weights over the representations: nonnegative, summing to one
/// within 1e-9.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> values)
      : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument("weight vector is empty");
    }
    double sum = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("negative weight " + std::to_string(v));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("weights sum to " + std::to_string(sum) +
                                  ", expected 1");
    }
  }

  /// Clamps tiny negative components to zero and rescales to sum one. For
  /// cleaning up LP vertices that satisfy the simplex row only to solver
  /// tolerance.
  static WeightVector normalized(std::vector<double> values) {
    double sum = 0.0;
    for (double& v : values) {
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (!(sum > 0.0)) {
      throw std::invalid_argument("weight vector has no positive mass");
    }
    for (double& v : values) v /= sum;
    // Division can leave the sum a few ulp off one; pin the largest entry.
    double resid = 1.0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      resid -= values[i];
      if (values[i] > values[top]) top = i;
    }
    values[top] += resid;
    return WeightVector(std::move(values));
  }

  static WeightVector basis(int dim, int axis) {
    std::vector<double> v(dim, 0.0);
    v.at(axis) = 1.0;
    return WeightVector(std::move(v));
  }

  static WeightVector uniform(int dim) {
    if (dim <= 0) throw std::invalid_argument("dimension must be positive");
    std::vector<double> v(dim, 1.0 / dim);
    return WeightVector::normalized(std::move(v));
  }

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

  static constexpr double kSumTolerance = 1e-9;

 private:
  std::vector<double> values_;
};

/// A total ranking of items: rank 1 is the most similar. Ties in the fused
/// values are broken by ascending row index, so lists are deterministic
/// functions of their inputs.
class NominationList {
 public:
  NominationList(std::vector<int> rows_by_rank,
                 std::vector<double> fused_by_rank)
      : rows_(std::move(rows_by_rank)), fused_(std::move(fused_by_rank)) {
    if (rows_.empty() || rows_.size() != fused_.size()) {
      throw std::invalid_argument("malformed nomination list");
    }
    rank_by_row_.reserve(rows_.size());
    for (std::size_t p = 0; p < rows_.size(); ++p) {
      if (p > 0) {
        const bool ordered =
            fused_[p - 1] < fused_[p] ||
            (fused_[p - 1] == fused_[p] && rows_[p - 1] < rows_[p]);
        if (!ordered) {
          throw std::invalid_argument("nomination list order violated at rank " +
                                      std::to_string(p + 1));
        }
      }
      rank_by_row_.emplace_back(rows_[p], static_cast<int>(p) + 1);
    }
    std::sort(rank_by_row_.begin(), rank_by_row_.end());
    for (std::size_t i = 1; i < rank_by_row_.size(); ++i) {
      if (rank_by_row_[i].first == rank_by_row_[i - 1].first) {
        throw std::invalid_argument("duplicate row in nomination list");
      }
    }
  }

  int size() const { return static_cast<int>(rows_.size()); }

  /// 1-based rank of a row; throws if the row is not ranked.
  int rank_of(int row) const {
    auto it = std::lower_bound(
        rank_by_row_.begin(), rank_by_row_.end(), row,
        [](const std::pair<int, int>& e, int r) { return e.first < r; });
    if (it == rank_by_row_.end() || it->first != row) {
      throw std::out_of_range("row " + std::to_string(row) +
                              " not in nomination list");
    }
    return it->second;
  }

  bool contains(int row) const {
    auto it = std::lower_bound(
        rank_by_row_.begin(), rank_by_row_.end(), row,
        [](const std::pair<int, int>& e, int r) { return e.first < r; });
    return it != rank_by_row_.end() && it->first == row;
  }

  int row_at_rank(int rank) const { return rows_.at(rank - 1); }
  double fused_at_rank(int rank) const { return fused_.at(rank - 1); }

  const std::vector<int>& rows_by_rank() const { return rows_; }
  const std::vector<double>& fused_by_rank() const { return fused_; }

 private:
  std::vector<int> rows_;
  std::vector<double> fused_;
  std::vector<std::pair<int, int>> rank_by_row_;  // sorted by row
};

/// Drops the supervised rows from a full list and compresses the remaining
/// ranks to 1..|C|, preserving the relative candidate order.
inline NominationList restrict_to_candidates(const NominationList& list,
                                             const SupervisionInstance& inst) {
  if (list.size() != inst.num_rows()) {
    throw std::invalid_argument("nomination list does not cover all rows");
  }
  std::vector<int> rows;
  std::vector<double> fused;
  rows.reserve(inst.candidate_rows().size());
  fused.reserve(inst.candidate_rows().size());
  for (int p = 0; p < list.size(); ++p) {
    const int row = list.rows_by_rank()[p];
    if (!inst.is_supervised(row)) {
      rows.push_back(row);
      fused.push_back(list.fused_by_rank()[p]);
    }
  }
  return NominationList(std::move(rows), std::move(fused));
}

}  // namespace rankfuse
