#pragma once

// Dense two-phase tableau simplex with Bland's rule.
//
// Solves  max c.x  subject to  A x = b,  x >= 0.
// With Scalar = Rational every step is exact; with Scalar = double pivots
// and reduced costs are compared against a small tolerance.

#include "skcc/scalar.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace skcc {

template <typename Scalar>
struct SimplexTolerance {
  static bool positive(const Scalar& x) { return x > 0; }
  static bool nonzero(const Scalar& x) { return x != 0; }
};

template <>
struct SimplexTolerance<double> {
  static constexpr double eps = 1e-11;
  static bool positive(double x) { return x > eps; }
  static bool nonzero(double x) { return std::fabs(x) > eps; }
};

enum class LpStatus { optimal, infeasible, unbounded };

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Scalar value{};
  std::vector<Scalar> x;
  int pivots = 0;
};

template <typename Scalar>
class Simplex {
 public:
  using Row = std::vector<Scalar>;
  using Tol = SimplexTolerance<Scalar>;

  Simplex(std::vector<Row> a, Row b, Row c) : n_(c.size()), rows_(a.size()), c_(std::move(c)) {
    if (b.size() != rows_) throw std::invalid_argument("simplex: rhs size does not match constraint count");
    width_ = n_ + rows_ + 1;
    tab_.assign(rows_, Row(width_, Scalar(0)));
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (a[i].size() != n_) throw std::invalid_argument("simplex: constraint row has wrong width");
      const bool flip = b[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = flip ? Scalar(-a[i][j]) : a[i][j];
      tab_[i][n_ + i] = Scalar(1);
      tab_[i][width_ - 1] = flip ? Scalar(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
    active_.assign(rows_, true);
  }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    // Phase 1: maximize -(sum of artificials).
    Row phase1(n_ + rows_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i) phase1[n_ + i] = Scalar(-1);
    run(phase1, n_ + rows_, out.pivots);
    Scalar infeasibility(0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (active_[i] && basis_[i] >= n_) infeasibility += tab_[i][width_ - 1];
    if (Tol::positive(infeasibility)) {
      out.status = LpStatus::infeasible;
      return out;
    }
    drive_out_artificials(out.pivots);

    // Phase 2 over the original columns only.
    Row phase2(n_ + rows_, Scalar(0));
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = c_[j];
    if (!run(phase2, n_, out.pivots)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.x.assign(n_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i)
      if (active_[i] && basis_[i] < n_) out.x[basis_[i]] = tab_[i][width_ - 1];
    out.value = Scalar(0);
    for (std::size_t j = 0; j < n_; ++j)
      if (out.x[j] != 0) out.value += c_[j] * out.x[j];
    return out;
  }

 private:
  // Bland's rule iterations for objective `obj`; columns >= allowed never
  // enter. Returns false when unbounded.
  bool run(const Row& obj, std::size_t allowed, int& pivots) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (is_basic(j)) continue;
        Scalar d = obj[j];
        for (std::size_t i = 0; i < rows_; ++i)
          if (active_[i] && Tol::nonzero(tab_[i][j])) d -= obj[basis_[i]] * tab_[i][j];
        if (Tol::positive(d)) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;

      std::size_t leave = rows_;
      Scalar best_ratio{};
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!active_[i] || !Tol::positive(tab_[i][enter])) continue;
        Scalar ratio = tab_[i][width_ - 1] / tab_[i][enter];
        bool take = leave == rows_;
        if (!take) {
          const Scalar gap = best_ratio - ratio;
          if (Tol::positive(gap)) take = true;                                    // strictly smaller
          else if (!Tol::nonzero(gap)) take = basis_[i] < basis_[leave];          // tie: lowest index leaves
        }
        if (take) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void drive_out_artificials(int& pivots) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i] || basis_[i] < n_) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!is_basic(j) && Tol::nonzero(tab_[i][j])) {
          col = j;
          break;
        }
      }
      if (col == n_) {
        active_[i] = false;  // redundant constraint
        continue;
      }
      pivot(i, col);
      ++pivots;
    }
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t i = 0; i < rows_; ++i)
      if (active_[i] && basis_[i] == j) return true;
    return false;
  }

  void pivot(std::size_t r, std::size_t col) {
    Row& pr = tab_[r];
    const Scalar p = pr[col];
    for (auto& v : pr)
      if (v != 0) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || !active_[i]) continue;
      const Scalar f = tab_[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (pr[j] != 0) tab_[i][j] -= f * pr[j];
      if constexpr (!ScalarTraits<Scalar>::exact) tab_[i][col] = 0.0;
    }
    basis_[r] = col;
  }

  std::size_t n_;
  std::size_t rows_;
  std::size_t width_ = 0;
  Row c_;
  std::vector<Row> tab_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

template <typename Scalar>
LpSolution<Scalar> solve_lp(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b, std::vector<Scalar> c) {
  return Simplex<Scalar>(std::move(a), std::move(b), std::move(c)).solve();
}

}  // namespace skcc
