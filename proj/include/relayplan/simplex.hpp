#pragma once

// Dense two-phase simplex on the inequality form
//     maximise c.x  subject to  A.x <= b,  x >= 0.
// The tableau keeps the dictionary of basic variables; pivots use Dantzig
// pricing with (value, index) tie-breaking, falling back to Bland's rule when
// an iteration budget is half spent so termination is guaranteed. Adequate up
// to a couple of thousand columns; callers at that scale want a sparse code.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace relayplan {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpOutcome {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
};

class DenseSimplex {
 public:
  DenseSimplex(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
               const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basic_[i] = n_ + i;
      d_[i][n_] = -1.0;  // artificial column for phase 2
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  LpOutcome solve() {
    LpOutcome out;
    iterations_ = 0;
    iteration_cap_ = 2000 + 200LL * (m_ + n_);

    int worst = 0;
    for (int i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[worst][n_ + 1]) worst = i;
    if (m_ > 0 && d_[worst][n_ + 1] < -kEps) {
      // phase 2: drive the artificial variable to zero
      pivot(worst, n_);
      if (!run(2)) {
        out.status = LpStatus::IterLimit;
        return out;
      }
      if (d_[m_ + 1][n_ + 1] < -kEps) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i)
        if (basic_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (better_entry(i, j, s)) s = j;
          pivot(i, s);
        }
    }
    const bool bounded = run(1);
    if (iterations_ >= iteration_cap_) {
      out.status = LpStatus::IterLimit;
      return out;
    }
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.objective = d_[m_][n_ + 1];
    out.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) out.x[basic_[i]] = d_[i][n_ + 1];
    return out;
  }

 private:
  static constexpr double kEps = 1e-9;

  int m_, n_;
  std::vector<int> nonbasic_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> d_;
  long long iterations_ = 0;
  long long iteration_cap_ = 0;

  bool better_entry(int row, int j, int s) const {
    const auto lhs = std::make_pair(d_[row][j], nonbasic_[j]);
    const auto rhs = std::make_pair(d_[row][s], nonbasic_[s]);
    return lhs < rhs;
  }

  void pivot(int r, int s) {
    const double inv = 1.0 / d_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(d_[i][s]) <= kEps) continue;
      const double factor = d_[i][s] * inv;
      for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * factor;
      d_[i][s] = d_[r][s] * factor;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // phase 1 optimises the objective row, phase 2 the feasibility row
  bool run(int phase) {
    const int obj_row = m_ + phase - 1;
    for (;;) {
      if (++iterations_ > iteration_cap_) return true;  // caller inspects the counter
      const bool bland = iterations_ > iteration_cap_ / 2;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;  // artificial stays out in phase 1
        if (bland) {
          if (d_[obj_row][j] < -kEps && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
        } else if (s == -1 || better_entry(obj_row, j, s)) {
          s = j;
        }
      }
      if (s == -1 || d_[obj_row][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double ri = d_[i][n_ + 1] / d_[i][s];
        const double rr = d_[r][n_ + 1] / d_[r][s];
        if (std::make_pair(ri, basic_[i]) < std::make_pair(rr, basic_[r])) r = i;
      }
      if (r == -1) return false;  // unbounded direction
      pivot(r, s);
    }
  }
};

inline LpOutcome solve_lp_max(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& b, const std::vector<double>& c) {
  return DenseSimplex(a, b, c).solve();
}

}  // namespace relayplan
