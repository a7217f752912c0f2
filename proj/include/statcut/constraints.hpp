#ifndef STATCUT_CONSTRAINTS_HPP
#define STATCUT_CONSTRAINTS_HPP

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statcut/energy.hpp"

namespace statcut {

enum class ConstraintKind {
  LinearSum,       ///< h(x) = sum_i w_i x_i (size, local size)
  BoundaryLength,  ///< h(x) = number of edges with x_i != x_j
  Ratio,           ///< h(x) = sum_i c_i x_i / sum_i x_i (mean, variance, covariance)
};

const char* to_string(ConstraintKind kind);

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/**
 * \brief One statistic constrained to [lower, upper].
 *
 * Inequalities are handled through a slack y in [0, upper - lower]:
 *  - LinearSum / BoundaryLength: h(x) + y = upper;
 *  - Ratio: sum_i (c_i - lower - y) x_i = 0, i.e. the ratio equals lower + y.
 * An equality constraint has lower == upper and therefore y == 0.
 */
struct Constraint {
  ConstraintKind kind = ConstraintKind::LinearSum;
  std::string name;
  Eigen::VectorXd coefficients;  ///< w_i or c_i; empty for BoundaryLength
  double lower = 0.0;
  double upper = 0.0;
  Interval multiplier_box;       ///< [M-, M+] for this constraint's multiplier

  static Constraint linear_sum(std::string name, Eigen::VectorXd weights, double lower, double upper);
  static Constraint boundary_length(double lower, double upper);
  static Constraint ratio(std::string name, Eigen::VectorXd numerator, double lower, double upper);

  double slack_range() const { return upper - lower; }

  /// Right-hand side of the equality form: upper for linear kinds, 0 for Ratio.
  double target() const { return kind == ConstraintKind::Ratio ? 0.0 : upper; }
};

/// Per-constraint multiplier bounds S = prod_i [M-_i, M+_i].
struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Index dims() const { return lower.size(); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& lambda) const;
};

/// Ordered, immutable list of constraints with their multiplier boxes.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<Constraint> constraints);

  Index size() const { return static_cast<Index>(constraints_.size()); }
  bool empty() const { return constraints_.empty(); }
  const Constraint& operator[](Index i) const { return constraints_[static_cast<std::size_t>(i)]; }
  std::span<const Constraint> constraints() const { return constraints_; }

  SearchBox box() const;
  ConstraintSet with_box(const SearchBox& box) const;

 private:
  std::vector<Constraint> constraints_;
};

/// Resolved slacks y_i, one per constraint.
using SlackResolution = Eigen::VectorXd;

/// h(x); nullopt for a Ratio constraint on a labeling without ones.
std::optional<double> statistic(const Constraint& constraint, std::span<const std::uint8_t> x,
                                const PairwiseEnergy& energy);

/// Number of edges with differing labels.
double boundary_length(const PairwiseEnergy& energy, std::span<const std::uint8_t> x);

/// y*(lambda). Linear kinds: 0 for lambda >= 0, s for lambda < 0.
/// Ratio: s for lambda > 0, 0 for lambda <= 0 (the slack multiplies -sum x_i).
double resolve_slack(const Constraint& constraint, double lambda);

/// Left-hand side of the equality form for a given slack:
/// h(x) + y for linear kinds, sum_i (c_i - lower - y) x_i for Ratio.
double effective_value(const Constraint& constraint, std::span<const std::uint8_t> x,
                       const PairwiseEnergy& energy, double slack);

struct Reparameterization {
  PairwiseEnergy energy;  ///< E_lambda
  SlackResolution slack;  ///< y*(lambda)
  double constant = 0.0;  ///< evaluate(E_lambda, x) + constant == L(x, lambda)
};

/// Folds lambda^T (H(x) + y*(lambda) - b) into the energy. Throws SearchBoxError
/// when lambda lies outside the set's box or would make a pairwise weight negative.
Reparameterization reparameterize(const ConstraintSet& set, const PairwiseEnergy& energy,
                                  const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// Box scaled to the energy: M = 10 (max_i |phi_i(1) - phi_i(0)| + mean C_ij).
/// Linear and ratio constraints get [-M, M]; boundary length gets [-min C_ij, M].
SearchBox default_search_box(const ConstraintSet& set, const PairwiseEnergy& energy);

/// Half-width M used by default_search_box.
double default_multiplier_bound(const PairwiseEnergy& energy);

// Constraint families on a rows x cols pixel grid (variables numbered row-major,
// h = column, v = row, both 0-indexed).

enum class Axis { Horizontal, Vertical };

Constraint size_constraint(Index num_vars, double lower, double upper);
Constraint mean_constraint(Axis axis, Index rows, Index cols, double lower, double upper);
/// Ratio with c_i = (coord_i - mu)^2 along one axis.
Constraint variance_constraint(Axis axis, Index rows, Index cols, double mu, double lower, double upper);
/// Ratio with c_i = (h_i - mu_h)(v_i - mu_v).
Constraint covariance_constraint(Index rows, Index cols, double mu_h, double mu_v, double lower, double upper);

/// Axis-aligned rectangle [row0, row0 + height) x [col0, col0 + width).
struct Tile {
  Index row0 = 0;
  Index col0 = 0;
  Index height = 0;
  Index width = 0;
};

/// tile_rows x tile_cols equal tiling; the last row/column of tiles absorbs the remainder.
std::vector<Tile> equal_tiling(Index rows, Index cols, Index tile_rows, Index tile_cols);

/// Size constraint restricted to one tile.
Constraint local_size_constraint(const Tile& tile, Index rows, Index cols, double lower, double upper,
                                 std::string name);

}  // namespace statcut

#endif  // STATCUT_CONSTRAINTS_HPP
