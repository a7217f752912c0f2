#include "statcut/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "statcut/errors.hpp"

namespace statcut {

namespace {

void check_bounds(const std::string& name, double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper))
    throw InvalidArgument("constraint '" + name + "' has non-finite bounds");
  if (lower > upper) throw InvalidArgument("constraint '" + name + "' has lower bound above upper bound");
}

void check_length(const Constraint& c, std::span<const std::uint8_t> x, const PairwiseEnergy& energy) {
  if (static_cast<Index>(x.size()) != energy.num_vars())
    throw DimensionError("labeling length does not match energy");
  if (c.kind != ConstraintKind::BoundaryLength && c.coefficients.size() != energy.num_vars())
    throw DimensionError("constraint '" + c.name + "' has " + std::to_string(c.coefficients.size()) +
                         " coefficients, energy has " + std::to_string(energy.num_vars()) + " variables");
}

double weighted_sum(const Eigen::VectorXd& w, std::span<const std::uint8_t> x) {
  double s = 0.0;
  for (Index i = 0; i < w.size(); ++i)
    if (x[i]) s += w(i);
  return s;
}

double count_ones(std::span<const std::uint8_t> x) {
  return static_cast<double>(std::count_if(x.begin(), x.end(), [](std::uint8_t b) { return b != 0; }));
}

double coordinate(Axis axis, Index row, Index col) {
  return static_cast<double>(axis == Axis::Horizontal ? col : row);
}

}  // namespace

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::LinearSum: return "linear_sum";
    case ConstraintKind::BoundaryLength: return "boundary_length";
    case ConstraintKind::Ratio: return "ratio";
  }
  return "unknown";
}

Constraint Constraint::linear_sum(std::string name, Eigen::VectorXd weights, double lower, double upper) {
  check_bounds(name, lower, upper);
  Constraint c;
  c.kind = ConstraintKind::LinearSum;
  c.name = std::move(name);
  c.coefficients = std::move(weights);
  c.lower = lower;
  c.upper = upper;
  return c;
}

Constraint Constraint::boundary_length(double lower, double upper) {
  check_bounds("br", lower, upper);
  Constraint c;
  c.kind = ConstraintKind::BoundaryLength;
  c.name = "br";
  c.lower = lower;
  c.upper = upper;
  return c;
}

Constraint Constraint::ratio(std::string name, Eigen::VectorXd numerator, double lower, double upper) {
  check_bounds(name, lower, upper);
  Constraint c;
  c.kind = ConstraintKind::Ratio;
  c.name = std::move(name);
  c.coefficients = std::move(numerator);
  c.lower = lower;
  c.upper = upper;
  return c;
}

bool SearchBox::contains(const Eigen::Ref<const Eigen::VectorXd>& lambda) const {
  if (lambda.size() != lower.size()) return false;
  return (lambda.array() >= lower.array()).all() && (lambda.array() <= upper.array()).all();
}

ConstraintSet::ConstraintSet(std::vector<Constraint> constraints) : constraints_(std::move(constraints)) {
  for (const Constraint& c : constraints_) {
    check_bounds(c.name, c.lower, c.upper);
    if (c.multiplier_box.lower > c.multiplier_box.upper)
      throw InvalidArgument("constraint '" + c.name + "' has an empty multiplier box");
  }
}

SearchBox ConstraintSet::box() const {
  SearchBox box;
  box.lower.resize(size());
  box.upper.resize(size());
  for (Index i = 0; i < size(); ++i) {
    box.lower(i) = (*this)[i].multiplier_box.lower;
    box.upper(i) = (*this)[i].multiplier_box.upper;
  }
  return box;
}

ConstraintSet ConstraintSet::with_box(const SearchBox& box) const {
  if (box.dims() != size() || box.upper.size() != size())
    throw DimensionError("search box dimension does not match the constraint count");
  std::vector<Constraint> out = constraints_;
  for (Index i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)].multiplier_box = {box.lower(i), box.upper(i)};
  return ConstraintSet(std::move(out));
}

double boundary_length(const PairwiseEnergy& energy, std::span<const std::uint8_t> x) {
  if (static_cast<Index>(x.size()) != energy.num_vars()) throw DimensionError("labeling length does not match energy");
  double cut = 0.0;
  for (const Edge& e : energy.edges())
    if (x[e.i] != x[e.j]) cut += 1.0;
  return cut;
}

std::optional<double> statistic(const Constraint& constraint, std::span<const std::uint8_t> x,
                                const PairwiseEnergy& energy) {
  check_length(constraint, x, energy);
  switch (constraint.kind) {
    case ConstraintKind::LinearSum:
      return weighted_sum(constraint.coefficients, x);
    case ConstraintKind::BoundaryLength:
      return boundary_length(energy, x);
    case ConstraintKind::Ratio: {
      const double ones = count_ones(x);
      if (ones == 0.0) return std::nullopt;
      return weighted_sum(constraint.coefficients, x) / ones;
    }
  }
  return std::nullopt;
}

double resolve_slack(const Constraint& constraint, double lambda) {
  const double s = constraint.slack_range();
  if (constraint.kind == ConstraintKind::Ratio) return lambda > 0.0 ? s : 0.0;
  return lambda < 0.0 ? s : 0.0;
}

double effective_value(const Constraint& constraint, std::span<const std::uint8_t> x,
                       const PairwiseEnergy& energy, double slack) {
  check_length(constraint, x, energy);
  switch (constraint.kind) {
    case ConstraintKind::LinearSum:
      return weighted_sum(constraint.coefficients, x) + slack;
    case ConstraintKind::BoundaryLength:
      return boundary_length(energy, x) + slack;
    case ConstraintKind::Ratio: {
      double s = 0.0;
      const double shift = constraint.lower + slack;
      for (Index i = 0; i < constraint.coefficients.size(); ++i)
        if (x[i]) s += constraint.coefficients(i) - shift;
      return s;
    }
  }
  return 0.0;
}

Reparameterization reparameterize(const ConstraintSet& set, const PairwiseEnergy& energy,
                                  const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  if (lambda.size() != set.size())
    throw DimensionError("multiplier has " + std::to_string(lambda.size()) + " entries, constraint set has " +
                         std::to_string(set.size()));
  const Index n = energy.num_vars();
  Reparameterization rep;
  rep.slack = SlackResolution::Zero(set.size());
  Eigen::VectorXd deltas = Eigen::VectorXd::Zero(n);
  double pairwise_shift = 0.0;

  for (Index k = 0; k < set.size(); ++k) {
    const Constraint& c = set[k];
    const double l = lambda(k);
    if (!c.multiplier_box.contains(l))
      throw SearchBoxError("multiplier " + std::to_string(l) + " of constraint '" + c.name +
                           "' lies outside its search box [" + std::to_string(c.multiplier_box.lower) + ", " +
                           std::to_string(c.multiplier_box.upper) + "]");
    if (c.kind != ConstraintKind::BoundaryLength && c.coefficients.size() != n)
      throw DimensionError("constraint '" + c.name + "' does not match the energy size");
    const double y = resolve_slack(c, l);
    rep.slack(k) = y;
    switch (c.kind) {
      case ConstraintKind::LinearSum:
        deltas += l * c.coefficients;
        rep.constant -= l * (c.upper - y);
        break;
      case ConstraintKind::BoundaryLength:
        pairwise_shift += l;
        rep.constant -= l * (c.upper - y);
        break;
      case ConstraintKind::Ratio:
        deltas += l * (c.coefficients.array() - (c.lower + y)).matrix();
        break;
    }
  }

  rep.energy = add_unary_offsets(energy, deltas);
  if (pairwise_shift != 0.0) rep.energy = scale_pairwise(rep.energy, pairwise_shift);
  return rep;
}

double default_multiplier_bound(const PairwiseEnergy& energy) {
  const auto& unary = energy.unary();
  double unary_span = 0.0;
  if (energy.num_vars() > 0) unary_span = (unary.col(1) - unary.col(0)).cwiseAbs().maxCoeff();
  double mean_weight = 0.0;
  if (!energy.edges().empty()) {
    for (const Edge& e : energy.edges()) mean_weight += e.weight;
    mean_weight /= static_cast<double>(energy.edges().size());
  }
  const double m = 10.0 * (unary_span + mean_weight);
  return m > 0.0 ? m : 1.0;
}

SearchBox default_search_box(const ConstraintSet& set, const PairwiseEnergy& energy) {
  const double m = default_multiplier_bound(energy);
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(set.size(), -m);
  box.upper = Eigen::VectorXd::Constant(set.size(), m);
  for (Index k = 0; k < set.size(); ++k) {
    if (set[k].kind != ConstraintKind::BoundaryLength) continue;
    if (energy.edges().empty())
      throw InvalidArgument("boundary length constraint on an energy without edges is vacuous");
    box.lower(k) = -energy.min_pairwise_weight();
  }
  return box;
}

Constraint size_constraint(Index num_vars, double lower, double upper) {
  return Constraint::linear_sum("sz", Eigen::VectorXd::Ones(num_vars), lower, upper);
}

Constraint mean_constraint(Axis axis, Index rows, Index cols, double lower, double upper) {
  Eigen::VectorXd c(rows * cols);
  for (Index r = 0; r < rows; ++r)
    for (Index col = 0; col < cols; ++col) c(pixel_index(r, col, cols)) = coordinate(axis, r, col);
  return Constraint::ratio(axis == Axis::Horizontal ? "mn_h" : "mn_v", std::move(c), lower, upper);
}

Constraint variance_constraint(Axis axis, Index rows, Index cols, double mu, double lower, double upper) {
  Eigen::VectorXd c(rows * cols);
  for (Index r = 0; r < rows; ++r)
    for (Index col = 0; col < cols; ++col) {
      const double d = coordinate(axis, r, col) - mu;
      c(pixel_index(r, col, cols)) = d * d;
    }
  return Constraint::ratio(axis == Axis::Horizontal ? "vr_h" : "vr_v", std::move(c), lower, upper);
}

Constraint covariance_constraint(Index rows, Index cols, double mu_h, double mu_v, double lower, double upper) {
  Eigen::VectorXd c(rows * cols);
  for (Index r = 0; r < rows; ++r)
    for (Index col = 0; col < cols; ++col)
      c(pixel_index(r, col, cols)) = (static_cast<double>(col) - mu_h) * (static_cast<double>(r) - mu_v);
  return Constraint::ratio("cv", std::move(c), lower, upper);
}

std::vector<Tile> equal_tiling(Index rows, Index cols, Index tile_rows, Index tile_cols) {
  if (tile_rows <= 0 || tile_cols <= 0 || tile_rows > rows || tile_cols > cols)
    throw InvalidArgument("tiling " + std::to_string(tile_rows) + "x" + std::to_string(tile_cols) +
                          " does not fit a " + std::to_string(rows) + "x" + std::to_string(cols) + " grid");
  std::vector<Tile> tiles;
  const Index h = rows / tile_rows;
  const Index w = cols / tile_cols;
  for (Index tr = 0; tr < tile_rows; ++tr)
    for (Index tc = 0; tc < tile_cols; ++tc) {
      Tile t;
      t.row0 = tr * h;
      t.col0 = tc * w;
      t.height = (tr + 1 == tile_rows) ? rows - t.row0 : h;
      t.width = (tc + 1 == tile_cols) ? cols - t.col0 : w;
      tiles.push_back(t);
    }
  return tiles;
}

Constraint local_size_constraint(const Tile& tile, Index rows, Index cols, double lower, double upper,
                                 std::string name) {
  if (tile.row0 < 0 || tile.col0 < 0 || tile.height <= 0 || tile.width <= 0 || tile.row0 + tile.height > rows ||
      tile.col0 + tile.width > cols)
    throw InvalidArgument("tile outside the grid");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(rows * cols);
  for (Index r = tile.row0; r < tile.row0 + tile.height; ++r)
    for (Index c = tile.col0; c < tile.col0 + tile.width; ++c) w(pixel_index(r, c, cols)) = 1.0;
  return Constraint::linear_sum(std::move(name), std::move(w), lower, upper);
}

}  // namespace statcut
