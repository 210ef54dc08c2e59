#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spsched/errors.hpp"
#include "spsched/numeric.hpp"

namespace spsched {

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

enum class Rel { le, eq, ge };

/// max c.x subject to rows, x >= 0.
template <class T>
struct LinearProgram {
  struct Row {
    std::vector<T> a;
    Rel rel = Rel::le;
    T b{};
  };
  std::size_t num_vars = 0;
  std::vector<T> objective;
  std::vector<Row> rows;

  Row& add_row(Rel rel, T b) {
    rows.push_back(Row{std::vector<T>(num_vars, T(0)), rel, std::move(b)});
    return rows.back();
  }
};

template <class T>
struct SimplexSolution {
  LpStatus status = LpStatus::optimal;
  T objective{};
  std::vector<T> x;
  long pivots = 0;
};

/// Dense two-phase primal simplex. Entering variable by largest reduced cost,
/// switching to smallest-index (Bland) after a pivot budget so degenerate
/// bases cannot cycle. Deterministic throughout.
template <class T>
class DenseSimplex {
 public:
  explicit DenseSimplex(const LinearProgram<T>& lp) : lp_(lp) {}

  SimplexSolution<T> solve() {
    build_tableau();
    SimplexSolution<T> sol;
    if (!phase_one()) {
      sol.status = LpStatus::infeasible;
      sol.pivots = pivots_;
      return sol;
    }
    if (!phase_two()) {
      sol.status = LpStatus::unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = LpStatus::optimal;
    sol.x.assign(lp_.num_vars, T(0));
    for (std::size_t r = 0; r < rows_; ++r)
      if (basis_[r] < lp_.num_vars) sol.x[basis_[r]] = tab_[r][cols_];
    sol.objective = T(0);
    for (std::size_t v = 0; v < lp_.num_vars; ++v) sol.objective += lp_.objective[v] * sol.x[v];
    sol.pivots = pivots_;
    return sol;
  }

 private:
  const LinearProgram<T>& lp_;
  std::vector<std::vector<T>> tab_;  // rows_ x (cols_+1); last column is rhs
  std::vector<T> z_;                 // reduced-cost row, cols_+1 wide (last = objective value)
  std::vector<std::size_t> basis_;
  std::size_t rows_ = 0, cols_ = 0, art_begin_ = 0;
  long pivots_ = 0;

  static bool pos(const T& v) { return v > arith<T>::tol(); }
  static bool neg(const T& v) { return v < -arith<T>::tol(); }

  void build_tableau() {
    const std::size_t n = lp_.num_vars;
    std::size_t slacks = 0, artificials = 0;
    for (const auto& row : lp_.rows) {
      const bool flip = row.b < T(0);
      Rel rel = row.rel;
      if (flip && rel != Rel::eq) rel = rel == Rel::le ? Rel::ge : Rel::le;
      if (rel != Rel::eq) ++slacks;
      if (rel != Rel::le) ++artificials;
    }
    rows_ = lp_.rows.size();
    art_begin_ = n + slacks;
    cols_ = n + slacks + artificials;
    tab_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
    basis_.assign(rows_, 0);

    std::size_t next_slack = n, next_art = art_begin_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto& row = lp_.rows[r];
      const bool flip = row.b < T(0);
      for (std::size_t v = 0; v < n; ++v) tab_[r][v] = flip ? -row.a[v] : row.a[v];
      tab_[r][cols_] = flip ? -row.b : row.b;
      Rel rel = row.rel;
      if (flip && rel != Rel::eq) rel = rel == Rel::le ? Rel::ge : Rel::le;
      if (rel == Rel::le) {
        tab_[r][next_slack] = T(1);
        basis_[r] = next_slack++;
      } else if (rel == Rel::ge) {
        tab_[r][next_slack++] = T(-1);
        tab_[r][next_art] = T(1);
        basis_[r] = next_art++;
      } else {
        tab_[r][next_art] = T(1);
        basis_[r] = next_art++;
      }
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    ++pivots_;
    auto& prow = tab_[pr];
    const T inv = T(1) / prow[pc];
    for (auto& v : prow) v *= inv;
    prow[pc] = T(1);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const T f = tab_[r][pc];
      if (arith<T>::is_zero(f)) continue;
      auto& row = tab_[r];
      for (std::size_t cidx = 0; cidx <= cols_; ++cidx)
        if (!arith<T>::is_zero(prow[cidx])) row[cidx] -= f * prow[cidx];
      row[pc] = T(0);
    }
    const T fz = z_[pc];
    if (!arith<T>::is_zero(fz))
      for (std::size_t cidx = 0; cidx <= cols_; ++cidx)
        if (!arith<T>::is_zero(prow[cidx])) z_[cidx] -= fz * prow[cidx];
    z_[pc] = T(0);
    basis_[pr] = pc;
  }

  // Returns false on unbounded direction.
  bool run(std::size_t usable_cols) {
    const long bland_after = 40 * static_cast<long>(rows_ + cols_ + 8);
    const long hard_cap = 400 * static_cast<long>(rows_ + cols_ + 16);
    long iters = 0;
    for (;;) {
      const bool bland = iters > bland_after;
      std::size_t pc = cols_ + 1;
      if (bland) {
        for (std::size_t c = 0; c < usable_cols; ++c)
          if (pos(z_[c])) { pc = c; break; }
      } else {
        for (std::size_t c = 0; c < usable_cols; ++c)
          if (pos(z_[c]) && (pc > cols_ || z_[c] > z_[pc])) pc = c;
      }
      if (pc > cols_) return true;  // optimal
      std::size_t pr = rows_ + 1;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!pos(tab_[r][pc])) continue;
        if (pr > rows_) {
          pr = r;
          continue;
        }
        const T lhs = tab_[r][cols_] * tab_[pr][pc];
        const T rhs = tab_[pr][cols_] * tab_[r][pc];
        if (lhs < rhs || (lhs == rhs && basis_[r] < basis_[pr])) pr = r;
      }
      if (pr > rows_) return false;  // unbounded
      pivot(pr, pc);
      if (++iters > hard_cap) throw InvariantBreach("simplex exceeded its pivot budget");
    }
  }

  bool phase_one() {
    if (art_begin_ == cols_) return true;  // every row took a slack basis
    // minimize the artificial total: maximize -(sum of artificial rows)
    z_.assign(cols_ + 1, T(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < art_begin_) continue;
      for (std::size_t c = 0; c <= cols_; ++c) z_[c] += tab_[r][c];
    }
    for (std::size_t c = art_begin_; c < cols_; ++c) z_[c] = T(0);
    if (!run(art_begin_)) throw InvariantBreach("phase one cannot be unbounded");
    if (pos(z_[cols_])) return false;  // leftover infeasibility
    // drive surviving artificials out of the basis
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < art_begin_) continue;
      std::size_t pc = cols_ + 1;
      for (std::size_t c = 0; c < art_begin_; ++c)
        if (!arith<T>::is_zero(tab_[r][c])) { pc = c; break; }
      if (pc <= cols_) pivot(r, pc);
      // otherwise the row is redundant; its artificial stays basic at zero
    }
    return true;
  }

  bool phase_two() {
    z_.assign(cols_ + 1, T(0));
    for (std::size_t v = 0; v < lp_.num_vars; ++v) z_[v] = lp_.objective[v];
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] >= lp_.num_vars) continue;
      const T f = lp_.objective[basis_[r]];
      if (arith<T>::is_zero(f)) continue;
      for (std::size_t c = 0; c <= cols_; ++c) z_[c] -= f * tab_[r][c];
    }
    return run(art_begin_);
  }
};

template <class T>
SimplexSolution<T> solve_simplex(const LinearProgram<T>& lp) {
  return DenseSimplex<T>(lp).solve();
}

}  // namespace spsched
