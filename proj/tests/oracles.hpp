#ifndef STATCUT_TESTS_ORACLES_HPP
#define STATCUT_TESTS_ORACLES_HPP

// Reference computations for the tests, written against the raw data
// (unary table, edge list, plane coefficients) without the library's helpers.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"

namespace oracle {

using statcut::Index;
using Bits = std::vector<int>;

inline Bits bits_of(std::uint64_t mask, Index n) {
  Bits x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1u);
  return x;
}

template <class X>
double energy(const statcut::PairwiseEnergy& e, const X& x) {
  double total = 0.0;
  for (const statcut::Edge& edge : e.edges()) total += x[edge.i] == x[edge.j] ? 0.0 : edge.weight;
  for (Index i = e.num_vars() - 1; i >= 0; --i) total += e.unary()(i, x[i] ? 1 : 0);
  return total;
}

template <class X>
std::vector<std::uint8_t> to_labeling(const X& x) {
  return std::vector<std::uint8_t>(x.begin(), x.end());
}

/// Minimum of f over {0,1}^n, bit i of the counter is x_i.
inline double min_over_labelings(Index n, const std::function<double(const Bits&)>& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) best = std::min(best, f(bits_of(m, n)));
  return best;
}

inline double grid_size(const Bits& x) {
  double s = 0;
  for (int b : x) s += b;
  return s;
}

inline double grid_boundary(const Bits& x, Index rows, Index cols) {
  double cut = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const int v = x[static_cast<std::size_t>(r * cols + c)];
      if (c + 1 < cols && v != x[static_cast<std::size_t>(r * cols + c + 1)]) cut += 1;
      if (r + 1 < rows && v != x[static_cast<std::size_t>((r + 1) * cols + c)]) cut += 1;
    }
  return cut;
}

/// Column (h) or row (v) mean of the ones; nullopt when there are none.
inline std::optional<double> grid_mean(const Bits& x, Index rows, Index cols, bool horizontal) {
  double sum = 0;
  double count = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      if (x[static_cast<std::size_t>(r * cols + c)]) {
        sum += static_cast<double>(horizontal ? c : r);
        count += 1;
      }
  if (count == 0) return std::nullopt;
  return sum / count;
}

inline std::optional<double> grid_second_moment(const Bits& x, Index rows, Index cols, double mu, bool horizontal) {
  double sum = 0;
  double count = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      if (x[static_cast<std::size_t>(r * cols + c)]) {
        const double d = static_cast<double>(horizontal ? c : r) - mu;
        sum += d * d;
        count += 1;
      }
  if (count == 0) return std::nullopt;
  return sum / count;
}

/// Maximum of min_k (a_k + g_k . lambda) over a box by repeated grid zooming.
inline double golden_max(double lo, double hi, const std::function<double(double)>& f, int steps = 70) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int k = 0; k < steps; ++k) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    }
  }
  return std::max({fc, fd, f(lo), f(hi)});
}

/// max over the box of min_k (a_k + g_k . l), by nested golden section on concave slices.
inline double max_min_of_planes(const Eigen::VectorXd& a, const Eigen::MatrixXd& g, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi) {
  const Index m = lo.size();
  Eigen::VectorXd l(m);
  std::function<double(Index)> best = [&](Index d) -> double {
    if (d == m) return (a + g * l).minCoeff();
    return golden_max(lo(d), hi(d), [&](double v) {
      l(d) = v;
      return best(d + 1);
    });
  };
  return best(0);
}

inline statcut::PairwiseEnergy random_energy(Index n, std::mt19937_64& rng, double unary = 5.0, double pairwise = 3.0,
                                             double edge_probability = 0.5) {
  std::uniform_real_distribution<double> u(-unary, unary);
  std::uniform_real_distribution<double> w(0.0, pairwise);
  std::bernoulli_distribution keep(edge_probability);
  statcut::PairwiseEnergy::UnaryTable table(n, 2);
  for (Index i = 0; i < n; ++i) {
    table(i, 0) = u(rng);
    table(i, 1) = u(rng);
  }
  std::vector<statcut::Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (keep(rng)) edges.push_back({i, j, w(rng)});
  return statcut::PairwiseEnergy(table, edges);
}

}  // namespace oracle

#endif  // STATCUT_TESTS_ORACLES_HPP
