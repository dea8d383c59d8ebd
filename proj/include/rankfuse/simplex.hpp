#pragma once

// Dense bounded-variable simplex for small and mid-size linear programs.
// Two phases: a slack crash plus artificials on violated rows, then the real
// objective. Dantzig pricing with a Bland's-rule fallback after a streak of
// degenerate pivots, so the method terminates on every input.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankfuse/linear.hpp"

namespace rankfuse {

struct LpProblem {
  std::vector<double> objective;  // minimized
  std::vector<double> lower;      // per-variable bounds; +-inf allowed
  std::vector<double> upper;
  std::vector<LinearRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded };

  Status status = Status::Infeasible;
  std::vector<double> values;  // structural variables only
  double objective = 0.0;
  int iterations = 0;
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPrimalFeasTol = 1e-7;
constexpr int kDegenerateStreakLimit = 64;
constexpr int kReinvertCadence = 500;

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& p) : p_(p) {
    m_ = static_cast<int>(p.rows.size());
    n_ = p.num_vars();
    validate();
    build_columns();
    crash_basis();
  }

  LpSolution solve() {
    LpSolution out;
    if (num_artificials_ > 0) {
      std::vector<double> phase1(cols(), 0.0);
      for (int a = first_artificial_; a < cols(); ++a) phase1[a] = 1.0;
      const RunResult r1 = iterate(phase1);
      if (r1 == RunResult::Unbounded) {
        throw std::logic_error("phase-1 objective cannot be unbounded");
      }
      double infeas = 0.0;
      for (int a = first_artificial_; a < cols(); ++a) infeas += val_[a];
      if (infeas > kPrimalFeasTol) {
        out.status = LpSolution::Status::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      for (int a = first_artificial_; a < cols(); ++a) {
        lo_[a] = 0.0;
        hi_[a] = 0.0;
        if (status_[a] != VarStatus::Basic) {
          status_[a] = VarStatus::AtLower;
          val_[a] = 0.0;
        }
      }
    }

    std::vector<double> phase2(cols(), 0.0);
    for (int j = 0; j < n_; ++j) phase2[j] = p_.objective[j];
    const RunResult r2 = iterate(phase2);
    if (r2 == RunResult::Unbounded) {
      out.status = LpSolution::Status::Unbounded;
      out.iterations = iterations_;
      return out;
    }

    polish();
    out.status = LpSolution::Status::Optimal;
    out.values.assign(val_.begin(), val_.begin() + n_);
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += p_.objective[j] * val_[j];
    out.iterations = iterations_;
    return out;
  }

 private:
  enum class VarStatus : std::uint8_t { AtLower, AtUpper, FreeNonbasic, Basic };
  enum class RunResult { Optimal, Unbounded };

  int cols() const { return static_cast<int>(lo_.size()); }

  void validate() const {
    for (const LinearRow& row : p_.rows) {
      if (static_cast<int>(row.coeffs.size()) != n_) {
        throw std::invalid_argument("row width does not match variable count");
      }
      if (!std::isfinite(row.rhs)) {
        throw std::invalid_argument("non-finite right-hand side");
      }
    }
    if (static_cast<int>(p_.lower.size()) != n_ ||
        static_cast<int>(p_.upper.size()) != n_) {
      throw std::invalid_argument("bound arrays do not match variable count");
    }
    for (int j = 0; j < n_; ++j) {
      if (p_.lower[j] > p_.upper[j]) {
        throw std::invalid_argument("empty bound interval on variable " +
                                    std::to_string(j));
      }
    }
  }

  void build_columns() {
    // Structural columns stored dense, column-major. Slack and artificial
    // columns are unit vectors handled implicitly.
    a_.assign(static_cast<std::size_t>(n_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) {
        a_[static_cast<std::size_t>(j) * m_ + i] = p_.rows[i].coeffs[j];
      }
    }
    lo_.assign(n_ + m_, 0.0);
    hi_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p_.lower[j];
      hi_[j] = p_.upper[j];
    }
    for (int i = 0; i < m_; ++i) {
      switch (p_.rows[i].rel) {
        case Relation::LessEqual:
          lo_[n_ + i] = 0.0;
          hi_[n_ + i] = kInf;
          break;
        case Relation::GreaterEqual:
          lo_[n_ + i] = -kInf;
          hi_[n_ + i] = 0.0;
          break;
        case Relation::Equal:
          lo_[n_ + i] = 0.0;
          hi_[n_ + i] = 0.0;
          break;
      }
    }
  }

  double initial_value(int j) const {
    if (std::isfinite(lo_[j])) return lo_[j];
    if (std::isfinite(hi_[j])) return hi_[j];
    return 0.0;
  }

  VarStatus initial_status(int j) const {
    if (std::isfinite(lo_[j])) return VarStatus::AtLower;
    if (std::isfinite(hi_[j])) return VarStatus::AtUpper;
    return VarStatus::FreeNonbasic;
  }

  void crash_basis() {
    val_.assign(n_ + m_, 0.0);
    status_.assign(n_ + m_, VarStatus::AtLower);
    for (int j = 0; j < n_ + m_; ++j) {
      val_[j] = initial_value(j);
      status_[j] = initial_status(j);
    }

    std::vector<double> activity(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (val_[j] == 0.0) continue;
      const double* colj = &a_[static_cast<std::size_t>(j) * m_];
      for (int i = 0; i < m_; ++i) activity[i] += colj[i] * val_[j];
    }

    basis_.assign(m_, -1);
    first_artificial_ = n_ + m_;
    num_artificials_ = 0;
    art_row_.clear();
    art_sign_.clear();

    for (int i = 0; i < m_; ++i) {
      const int slack = n_ + i;
      const double want = p_.rows[i].rhs - activity[i];
      if (want >= lo_[slack] - kPrimalFeasTol &&
          want <= hi_[slack] + kPrimalFeasTol) {
        basis_[i] = slack;
        status_[slack] = VarStatus::Basic;
        val_[slack] = want;
      } else {
        // Slack pinned to its nearest bound; an artificial absorbs the rest.
        const double pinned = want < lo_[slack] ? lo_[slack] : hi_[slack];
        val_[slack] = pinned;
        status_[slack] =
            pinned == lo_[slack] ? VarStatus::AtLower : VarStatus::AtUpper;
        const double resid = want - pinned;
        art_row_.push_back(i);
        art_sign_.push_back(resid >= 0.0 ? 1.0 : -1.0);
        lo_.push_back(0.0);
        hi_.push_back(kInf);
        val_.push_back(std::abs(resid));
        status_.push_back(VarStatus::Basic);
        basis_[i] = n_ + m_ + num_artificials_;
        ++num_artificials_;
      }
    }

    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    // Artificial columns are +-e_i, so the crash basis inverse is diagonal.
    for (int k = 0; k < num_artificials_; ++k) {
      const int i = art_row_[k];
      binv_[static_cast<std::size_t>(i) * m_ + i] = art_sign_[k];
    }
  }

  // col index -> dense column in `out` (length m_).
  void copy_column(int j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (j < n_) {
      const double* colj = &a_[static_cast<std::size_t>(j) * m_];
      for (int i = 0; i < m_; ++i) out[i] = colj[i];
    } else if (j < n_ + m_) {
      out[j - n_] = 1.0;
    } else {
      const int k = j - n_ - m_;
      out[art_row_[k]] = art_sign_[k];
    }
  }

  double dot_column_y(int j, const std::vector<double>& y) const {
    if (j < n_) {
      const double* colj = &a_[static_cast<std::size_t>(j) * m_];
      double acc = 0.0;
      for (int i = 0; i < m_; ++i) acc += colj[i] * y[i];
      return acc;
    }
    if (j < n_ + m_) return y[j - n_];
    const int k = j - n_ - m_;
    return art_sign_[k] * y[art_row_[k]];
  }

  RunResult iterate(const std::vector<double>& cost) {
    std::vector<double> y(m_, 0.0);
    std::vector<double> w(m_, 0.0);
    int degenerate_streak = 0;
    bool bland = false;
    const long iter_cap = 20000L + 200L * (m_ + cols());
    int since_reinvert = 0;

    for (;;) {
      if (iterations_ > iter_cap) {
        throw std::runtime_error("simplex iteration cap exceeded");
      }

      // y = c_B' * Binv, skipping zero-cost basic rows.
      std::fill(y.begin(), y.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
      }

      int entering = -1;
      int direction = 0;
      double best = kReducedCostTol;
      for (int j = 0; j < cols(); ++j) {
        if (status_[j] == VarStatus::Basic) continue;
        if (lo_[j] == hi_[j]) continue;  // fixed, never enters
        const double d = cost[j] - dot_column_y(j, y);
        int dir = 0;
        double merit = 0.0;
        if (status_[j] == VarStatus::AtLower && d < -kReducedCostTol) {
          dir = 1;
          merit = -d;
        } else if (status_[j] == VarStatus::AtUpper && d > kReducedCostTol) {
          dir = -1;
          merit = d;
        } else if (status_[j] == VarStatus::FreeNonbasic &&
                   std::abs(d) > kReducedCostTol) {
          dir = d < 0.0 ? 1 : -1;
          merit = std::abs(d);
        }
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (merit > best) {
          best = merit;
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return RunResult::Optimal;

      copy_column(entering, w);
      ftran(w);

      // Ratio test: entering moves t >= 0 in `direction`; basic i changes at
      // rate -direction * w[i]. The smallest blocking basic limit competes
      // with the entering variable's own bound range.
      double t_bound = kInf;
      if (std::isfinite(lo_[entering]) && std::isfinite(hi_[entering])) {
        t_bound = hi_[entering] - lo_[entering];
      }
      double basic_limit = kInf;
      int leaving_pos = -1;
      double leaving_bound = 0.0;
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double rate = -direction * w[i];
        if (std::abs(rate) <= kPivotTol) continue;
        const int bj = basis_[i];
        double limit;
        double bound;
        if (rate < 0.0 && std::isfinite(lo_[bj])) {
          limit = (val_[bj] - lo_[bj]) / (-rate);
          bound = lo_[bj];
        } else if (rate > 0.0 && std::isfinite(hi_[bj])) {
          limit = (hi_[bj] - val_[bj]) / rate;
          bound = hi_[bj];
        } else {
          continue;
        }
        if (limit < 0.0) limit = 0.0;
        bool take;
        if (leaving_pos < 0 || limit < basic_limit - kPivotTol) {
          take = true;
        } else if (limit <= basic_limit + kPivotTol) {
          take = bland ? bj < basis_[leaving_pos] : std::abs(w[i]) > best_pivot;
        } else {
          take = false;
        }
        if (take) {
          basic_limit = std::min(limit, basic_limit);
          leaving_pos = i;
          leaving_bound = bound;
          best_pivot = std::abs(w[i]);
        }
      }

      if (leaving_pos < 0 && !std::isfinite(t_bound)) {
        return RunResult::Unbounded;
      }

      ++iterations_;
      if (leaving_pos < 0 || t_bound < basic_limit) {
        // Bound flip: entering runs to its opposite bound, basis unchanged.
        apply_step(w, direction, t_bound);
        status_[entering] = status_[entering] == VarStatus::AtLower
                                ? VarStatus::AtUpper
                                : VarStatus::AtLower;
        val_[entering] = status_[entering] == VarStatus::AtLower
                             ? lo_[entering]
                             : hi_[entering];
        if (t_bound <= kPivotTol) {
          if (++degenerate_streak >= kDegenerateStreakLimit) bland = true;
        } else {
          degenerate_streak = 0;
          bland = false;
        }
        continue;
      }

      const double t = basic_limit;
      apply_step(w, direction, t);
      const int leaving = basis_[leaving_pos];
      val_[leaving] = leaving_bound;
      status_[leaving] =
          leaving_bound == lo_[leaving] ? VarStatus::AtLower : VarStatus::AtUpper;
      val_[entering] += direction * t;
      status_[entering] = VarStatus::Basic;
      basis_[leaving_pos] = entering;
      update_binv(w, leaving_pos);

      if (t <= kPivotTol) {
        if (++degenerate_streak >= kDegenerateStreakLimit) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      if (++since_reinvert >= kReinvertCadence) {
        reinvert();
        since_reinvert = 0;
      }
    }
  }

  // Basic values move at rate -direction * w.
  void apply_step(const std::vector<double>& w, int direction, double t) {
    if (t == 0.0) return;
    for (int i = 0; i < m_; ++i) {
      val_[basis_[i]] -= direction * t * w[i];
    }
  }

  void ftran(std::vector<double>& rhs) const {
    std::vector<double> out(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double acc = 0.0;
      for (int k = 0; k < m_; ++k) acc += row[k] * rhs[k];
      out[i] = acc;
    }
    rhs.swap(out);
  }

  void update_binv(const std::vector<double>& w, int r) {
    const double pivot = w[r];
    if (std::abs(pivot) <= kPivotTol) {
      throw std::runtime_error("numerically singular simplex pivot");
    }
    double* rowr = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv = 1.0 / pivot;
    for (int k = 0; k < m_; ++k) rowr[k] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      double* rowi = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) rowi[k] -= f * rowr[k];
    }
  }

  // Rebuilds Binv from the basis by Gaussian elimination and recomputes the
  // basic values from the nonbasic ones.
  void reinvert() {
    std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
    std::vector<double> col(m_);
    for (int i = 0; i < m_; ++i) {
      copy_column(basis_[i], col);
      for (int r = 0; r < m_; ++r) b[static_cast<std::size_t>(r) * m_ + i] = col[r];
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      double best = std::abs(b[static_cast<std::size_t>(c) * m_ + c]);
      for (int r = c + 1; r < m_; ++r) {
        const double v = std::abs(b[static_cast<std::size_t>(r) * m_ + c]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best <= kPivotTol * 1e-3) {
        throw std::runtime_error("singular basis during reinversion");
      }
      if (piv != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(b[static_cast<std::size_t>(piv) * m_ + k],
                    b[static_cast<std::size_t>(c) * m_ + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * m_ + k],
                    inv[static_cast<std::size_t>(c) * m_ + k]);
        }
      }
      const double d = 1.0 / b[static_cast<std::size_t>(c) * m_ + c];
      for (int k = 0; k < m_; ++k) {
        b[static_cast<std::size_t>(c) * m_ + k] *= d;
        inv[static_cast<std::size_t>(c) * m_ + k] *= d;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = b[static_cast<std::size_t>(r) * m_ + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          b[static_cast<std::size_t>(r) * m_ + k] -=
              f * b[static_cast<std::size_t>(c) * m_ + k];
          inv[static_cast<std::size_t>(r) * m_ + k] -=
              f * inv[static_cast<std::size_t>(c) * m_ + k];
        }
      }
    }
    binv_.swap(inv);
    recompute_basic_values();
  }

  void recompute_basic_values() {
    std::vector<double> rhs(m_, 0.0);
    for (int i = 0; i < m_; ++i) rhs[i] = p_.rows[i].rhs;
    std::vector<double> col(m_);
    for (int j = 0; j < cols(); ++j) {
      if (status_[j] == VarStatus::Basic || val_[j] == 0.0) continue;
      copy_column(j, col);
      for (int i = 0; i < m_; ++i) rhs[i] -= col[i] * val_[j];
    }
    ftran(rhs);
    for (int i = 0; i < m_; ++i) val_[basis_[i]] = rhs[i];
  }

  // Final accuracy pass: if the updated inverse drifted, reinvert once.
  void polish() {
    double resid = 0.0;
    std::vector<double> activity(m_, 0.0);
    std::vector<double> col(m_);
    for (int j = 0; j < cols(); ++j) {
      if (val_[j] == 0.0) continue;
      copy_column(j, col);
      for (int i = 0; i < m_; ++i) activity[i] += col[i] * val_[j];
    }
    for (int i = 0; i < m_; ++i) {
      resid = std::max(resid,
                       std::abs(activity[i] - p_.rows[i].rhs) /
                           (1.0 + std::abs(p_.rows[i].rhs)));
    }
    if (resid > kPrimalFeasTol * 0.1) reinvert();
  }

  const LpProblem& p_;
  int m_ = 0;
  int n_ = 0;
  std::vector<double> a_;  // structural columns, column-major
  std::vector<double> lo_, hi_, val_;
  std::vector<VarStatus> status_;
  std::vector<int> basis_;
  std::vector<double> binv_;  // row-major m x m
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  int first_artificial_ = 0;
  int num_artificials_ = 0;
  int iterations_ = 0;
};

}  // namespace detail

/// Solves min c'x subject to the rows and bounds of `p`. The normalization
/// and bound structure of the nomination models always yields a bounded,
/// feasible program; generic callers also get Infeasible/Unbounded statuses.
inline LpSolution lp_solve(const LpProblem& p) {
  if (p.rows.empty()) {
    throw std::invalid_argument("linear program has no rows");
  }
  detail::SimplexSolver solver(p);
  return solver.solve();
}

}  // namespace rankfuse
