#ifndef STATCUT_CUT_SAMPLE_HPP
#define STATCUT_CUT_SAMPLE_HPP

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"

namespace statcut {

/**
 * \brief One oracle result and the dual hyperplane it defines.
 *
 * For the labeling x and slack y the Lagrangian is affine in lambda:
 *   L(x, y, lambda) = energy_value + slope . lambda,
 * with slope_i = effective_value_i(x, y_i) - target_i.
 */
struct CutSample {
  Labeling labeling;
  SlackResolution slack;
  double energy_value = 0.0;
  std::vector<std::optional<double>> statistics;  ///< h_i(x)
  Eigen::VectorXd slope;
  Eigen::VectorXd lambda;                         ///< multiplier the oracle was called at
  double lagrangian = 0.0;                        ///< L at lambda

  double plane_at(const Eigen::Ref<const Eigen::VectorXd>& at) const { return energy_value + slope.dot(at); }

  /// b* = H(x) + y in the equality form of each constraint.
  Eigen::VectorXd effective_statistics(const ConstraintSet& set) const;
};

CutSample make_cut_sample(const PairwiseEnergy& energy, const ConstraintSet& set,
                          const Eigen::Ref<const Eigen::VectorXd>& lambda, Labeling labeling,
                          SlackResolution slack);

}  // namespace statcut

#endif  // STATCUT_CUT_SAMPLE_HPP
