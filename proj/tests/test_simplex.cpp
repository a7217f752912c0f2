#include <doctest.h>

#include <Eigen/LU>
#include <random>

#include "oracles.hpp"
#include "statcut/dual.hpp"
#include "statcut/errors.hpp"
#include "statcut/simplex.hpp"

using namespace statcut;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace {

/// max c.x over Ax <= b, x >= 0 in two variables by checking every vertex.
std::optional<double> vertex_max_2d(const Mat& A, const Vec& b, const Vec& c) {
  std::vector<Eigen::RowVector2d> rows;
  std::vector<double> rhs;
  for (Index i = 0; i < A.rows(); ++i) {
    rows.push_back(A.row(i));
    rhs.push_back(b(i));
  }
  rows.push_back({-1.0, 0.0});
  rhs.push_back(0.0);
  rows.push_back({0.0, -1.0});
  rhs.push_back(0.0);
  std::optional<double> best;
  for (std::size_t p = 0; p < rows.size(); ++p)
    for (std::size_t q = p + 1; q < rows.size(); ++q) {
      Eigen::Matrix2d M;
      M << rows[p], rows[q];
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = M.inverse() * Eigen::Vector2d(rhs[p], rhs[q]);
      bool ok = true;
      for (std::size_t r = 0; r < rows.size(); ++r) ok = ok && rows[r].dot(x) <= rhs[r] + 1e-9;
      if (ok && (!best || c.dot(x) > *best)) best = c.dot(x);
    }
  return best;
}

}  // namespace

TEST_CASE("simplex textbook problem") {
  Mat A(3, 2);
  A << 1, 0, 0, 2, 3, 2;
  Vec b(3);
  b << 4, 12, 18;
  Vec c(2);
  c << 3, 5;
  const auto sol = simplex_maximize<double>(A, b, c);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(36.0));
  CHECK(sol.x(0) == doctest::Approx(2.0));
  CHECK(sol.x(1) == doctest::Approx(6.0));
}

TEST_CASE("simplex detects unbounded and infeasible problems") {
  Mat A(1, 2);
  A << 1, -1;
  Vec b(1);
  b << 1;
  Vec c(2);
  c << 1, 1;
  CHECK(simplex_maximize<double>(A, b, c).status == LpStatus::Unbounded);

  Mat B(2, 1);
  B << 1, -1;
  Vec r(2);
  r << 1, -2;
  Vec d(1);
  d << 1;
  CHECK(simplex_maximize<double>(B, r, d).status == LpStatus::Infeasible);
}

TEST_CASE("simplex phase one with negative right-hand sides") {
  Mat A(2, 2);
  A << -1, -1, 1, 0;
  Vec b(2);
  b << -2, 3;
  Vec c(2);
  c << -1, -2;
  const auto sol = simplex_maximize<double>(A, b, c);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-2.0));
}

TEST_CASE("simplex matches vertex enumeration in 2D") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 3.0);
  for (int t = 0; t < 200; ++t) {
    const Index m = 2 + t % 5;
    Mat A(m, 2);
    Vec b(m);
    for (Index i = 0; i < m; ++i) {
      A(i, 0) = u(rng);
      A(i, 1) = u(rng);
      b(i) = pos(rng);
    }
    A.row(0) << 1, 1;
    Vec c(2);
    c << u(rng), u(rng);
    const auto sol = simplex_maximize<double>(A, b, c);
    const auto ref = vertex_max_2d(A, b, c);
    REQUIRE(ref.has_value());
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(*ref).epsilon(1e-9));
  }
}

TEST_CASE("solve_master single plane") {
  MasterLP lp({Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
  lp.add_plane(5.0, Vec::Constant(1, -2.0));
  const auto s = solve_master(lp);
  CHECK(s.lambda(0) == doctest::Approx(-1.0));
  CHECK(s.z == doctest::Approx(7.0));
}

TEST_CASE("solve_master two lines") {
  MasterLP lp({Vec::Constant(1, -10.0), Vec::Constant(1, 10.0)});
  lp.add_plane(3.0, Vec::Constant(1, 1.0));
  lp.add_plane(5.0, Vec::Constant(1, -1.0));
  const auto s = solve_master(lp);
  CHECK(s.lambda(0) == doctest::Approx(1.0));
  CHECK(s.z == doctest::Approx(4.0));
}

TEST_CASE("solve_master picks the lexicographically smallest optimum") {
  MasterLP lp({Vec::Constant(2, -3.0), Vec::Constant(2, 3.0)});
  Vec g(2);
  g << 0.0, 1.0;
  lp.add_plane(1.0, g);
  g << 0.0, -1.0;
  lp.add_plane(1.0, g);
  const auto s = solve_master(lp);
  CHECK(s.z == doctest::Approx(1.0));
  CHECK(s.lambda(0) == doctest::Approx(-3.0));
  CHECK(s.lambda(1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("solve_master errors") {
  MasterLP empty({Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
  CHECK_THROWS_AS(solve_master(empty), InvalidArgument);
  MasterLP open({Vec::Constant(1, -std::numeric_limits<double>::infinity()), Vec::Constant(1, 1.0)});
  open.add_plane(0.0, Vec::Constant(1, 1.0));
  CHECK_THROWS_AS(solve_master(open), InvalidArgument);
}

TEST_CASE("solve_master matches a golden-section search on random planes") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    MasterLP lp({Vec::Constant(2, -5.0), Vec::Constant(2, 5.0)});
    for (int k = 0; k < 20; ++k) {
      Vec g(2);
      g << n01(rng), n01(rng);
      lp.add_plane(3.0 * n01(rng), g);
    }
    const auto s = solve_master(lp);
    const double ref = oracle::max_min_of_planes(lp.intercepts, lp.slopes, lp.box.lower, lp.box.upper);
    CHECK(s.z == doctest::Approx(ref).epsilon(1e-6));
    CHECK(lp.model_value(s.lambda) == doctest::Approx(s.z).epsilon(1e-9));
    CHECK(lp.box.contains(s.lambda));
  }
}
