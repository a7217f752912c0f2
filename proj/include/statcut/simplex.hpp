#ifndef STATCUT_SIMPLEX_HPP
#define STATCUT_SIMPLEX_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace statcut {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct LpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::Infeasible;
  Vector x;
  Scalar objective = Scalar(0);
};

namespace detail {

/// Dense simplex tableau. Row 0..rows-1 are constraints, the last row is the
/// objective row holding -reduced costs; the last column is the right-hand side.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Scalar& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  Scalar& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
  Scalar& cost(Eigen::Index c) { return t_(t_.rows() - 1, c); }
  Scalar objective() const { return t_(t_.rows() - 1, t_.cols() - 1); }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  auto objective_row() { return t_.row(t_.rows() - 1); }
  auto row(Eigen::Index r) { return t_.row(r); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, c);
      if (f != Scalar(0)) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Bland's rule: lowest-index improving column, ratio-test ties broken by
  /// lowest basic index. Columns >= allowed_cols never enter.
  LpStatus optimize(Eigen::Index allowed_cols, Scalar tol) {
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < allowed_cols; ++c)
        if (cost(c) < -tol) {
          enter = c;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;

      Eigen::Index leave = -1;
      Scalar best = Scalar(0);
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const Scalar a = t_(r, enter);
        if (a <= tol) continue;
        const Scalar ratio = rhs(r) / a;
        if (leave < 0 || ratio < best - tol ||
            (ratio <= best + tol && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/**
 * \brief maximize c^T x subject to A x <= b, x >= 0.
 *
 * Two-phase dense tableau simplex with Bland's anti-cycling rule. Rows are
 * equilibrated to unit max-norm first; rows with negative b get an artificial
 * variable in phase one. Meant for small problems (tens of columns, a few
 * hundred rows).
 */
template <typename Scalar>
LpSolution<Scalar> simplex_maximize(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                                    Scalar tol = Scalar(1e-11)) {
  using Index = Eigen::Index;
  const Index m = A.rows();
  const Index n = A.cols();

  std::vector<Index> artificial_rows;
  for (Index i = 0; i < m; ++i)
    if (b(i) < Scalar(0)) artificial_rows.push_back(i);
  const Index num_art = static_cast<Index>(artificial_rows.size());
  const Index slack0 = n;
  const Index art0 = n + m;

  detail::Tableau<Scalar> tab(m, n + m + num_art);
  for (Index i = 0; i < m; ++i) {
    Scalar scale = A.row(i).cwiseAbs().maxCoeff();
    if (!(scale > Scalar(0))) scale = Scalar(1);
    const Scalar sign = b(i) < Scalar(0) ? Scalar(-1) : Scalar(1);
    for (Index j = 0; j < n; ++j) tab.at(i, j) = sign * A(i, j) / scale;
    tab.at(i, slack0 + i) = sign / scale;
    tab.rhs(i) = sign * b(i) / scale;
    tab.basis()[static_cast<std::size_t>(i)] = slack0 + i;
  }
  for (Index k = 0; k < num_art; ++k) {
    const Index i = artificial_rows[static_cast<std::size_t>(k)];
    tab.at(i, art0 + k) = Scalar(1);
    tab.basis()[static_cast<std::size_t>(i)] = art0 + k;
  }

  LpSolution<Scalar> sol;

  if (num_art > 0) {
    // phase one: maximize -sum(artificials)
    for (Index k = 0; k < num_art; ++k) tab.cost(art0 + k) = Scalar(1);
    for (Index i : artificial_rows) tab.objective_row() -= tab.row(i);
    tab.optimize(tab.cols(), tol);
    if (tab.objective() < -std::sqrt(tol)) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // drive zero-level artificials out of the basis where possible
    for (Index i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < art0) continue;
      for (Index j = 0; j < art0; ++j)
        if (std::abs(tab.at(i, j)) > tol) {
          tab.pivot(i, j);
          break;
        }
    }
    tab.objective_row().setZero();
  }

  // phase two objective row: -c, then price out the basis
  for (Index j = 0; j < n; ++j) tab.cost(j) = -c(j);
  for (Index i = 0; i < m; ++i) {
    const Index bj = tab.basis()[static_cast<std::size_t>(i)];
    if (bj < n && c(bj) != Scalar(0)) tab.objective_row() += c(bj) * tab.row(i);
  }
  const LpStatus status = tab.optimize(art0, tol);
  if (status == LpStatus::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Index bj = tab.basis()[static_cast<std::size_t>(i)];
    if (bj < n) sol.x(bj) = std::max(Scalar(0), tab.rhs(i));
  }
  sol.objective = c.dot(sol.x);
  return sol;
}

}  // namespace statcut

#endif  // STATCUT_SIMPLEX_HPP
