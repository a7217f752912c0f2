#ifndef STATCUT_ENERGY_HPP
#define STATCUT_ENERGY_HPP

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "statcut/grid.hpp"

namespace statcut {

/// Binary assignment x in {0,1}^n.
using Labeling = std::vector<std::uint8_t>;

/// Pairwise term C * |x_i - x_j| between variables i < j.
struct Edge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;
};

/**
 * \brief Pairwise binary energy
 *
 *   E(x) = sum_i phi_i(x_i) + sum_(i,j) C_ij |x_i - x_j|
 *
 * with C_ij >= 0, which makes E submodular. Immutable once constructed.
 */
class PairwiseEnergy {
 public:
  /// Row i holds (phi_i(0), phi_i(1)).
  using UnaryTable = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  PairwiseEnergy() = default;

  /// Validates the invariants: finite values, C_ij >= 0, i < j < n, no duplicate edge.
  PairwiseEnergy(UnaryTable unary, std::vector<Edge> edges);

  Index num_vars() const { return unary_.rows(); }
  const UnaryTable& unary() const { return unary_; }
  std::span<const Edge> edges() const { return edges_; }

  /// min_ij C_ij, or +inf for an energy without edges.
  double min_pairwise_weight() const;

 private:
  UnaryTable unary_;
  std::vector<Edge> edges_;
};

/// Sum of unaries then pairwise terms in stored order.
double evaluate(const PairwiseEnergy& energy, std::span<const std::uint8_t> labeling);

/// E'(x) = E(x) + sum_i deltas_i x_i (deltas are added to phi_i(1)).
PairwiseEnergy add_unary_offsets(const PairwiseEnergy& energy,
                                 const Eigen::Ref<const Eigen::VectorXd>& deltas);

/// E'(x) = E(x) + shift * sum_(i,j) |x_i - x_j|, i.e. every C_ij becomes C_ij + shift.
///
/// Throws SearchBoxError when shift < -min_ij C_ij, since some weight would turn
/// negative. Callers are expected to clamp their multiplier box instead.
PairwiseEnergy scale_pairwise(const PairwiseEnergy& energy, double shift);

/// 32-bin grayscale histogram with add-one smoothing.
class IntensityHistogram {
 public:
  static constexpr int kBins = 32;

  IntensityHistogram();

  /// Histogram of the pixels where mask == label.
  static IntensityHistogram from_mask(const ImageGrid& image, const MaskGrid& mask,
                                      std::uint8_t label);

  void add(double intensity);
  double probability(double intensity) const;
  double neg_log_likelihood(double intensity) const;

 private:
  static int bin_of(double intensity);

  Eigen::Array<double, kBins, 1> counts_;
  double total_ = 0.0;
};

struct SmoothnessParams {
  double lambda_s = 0.2;  ///< constant part of every C_ij
  double beta = 1.0;      ///< contrast-sensitive part
  double sigma = 0.0;     ///< intensity scale; <= 0 selects default_sigma(image) in callers
};

/// sqrt of the mean squared intensity difference over the 4-connected edges; 1 for flat images.
double default_sigma(const ImageGrid& image);

/// 4-connected grid energy:
///   phi_i(1) = -log P_fg(I_i), phi_i(0) = -log P_bg(I_i),
///   C_ij = lambda_s + beta * exp(-(I_i - I_j)^2 / (2 sigma^2)).
PairwiseEnergy build_grid_energy(const ImageGrid& image, const IntensityHistogram& fg_model,
                                 const IntensityHistogram& bg_model,
                                 const SmoothnessParams& smoothness);

/// Problem file: header "n m", n lines "phi0 phi1", m lines "i j c".
/// Numbers are written in shortest round-trip form, so read(write(E)) == E exactly.
void write_problem(std::ostream& out, const PairwiseEnergy& energy);
PairwiseEnergy read_problem(std::istream& in);

}  // namespace statcut

#endif  // STATCUT_ENERGY_HPP
