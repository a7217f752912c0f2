#include "statcut/cut_sample.hpp"

#include "statcut/errors.hpp"

namespace statcut {

Eigen::VectorXd CutSample::effective_statistics(const ConstraintSet& set) const {
  Eigen::VectorXd b(set.size());
  for (Index k = 0; k < set.size(); ++k) b(k) = slope(k) + set[k].target();
  return b;
}

CutSample make_cut_sample(const PairwiseEnergy& energy, const ConstraintSet& set,
                          const Eigen::Ref<const Eigen::VectorXd>& lambda, Labeling labeling,
                          SlackResolution slack) {
  if (slack.size() != set.size() || lambda.size() != set.size())
    throw DimensionError("slack / multiplier size does not match the constraint set");
  CutSample s;
  s.labeling = std::move(labeling);
  s.slack = std::move(slack);
  s.lambda = lambda;
  s.energy_value = evaluate(energy, s.labeling);
  s.statistics.reserve(static_cast<std::size_t>(set.size()));
  s.slope.resize(set.size());
  for (Index k = 0; k < set.size(); ++k) {
    s.statistics.push_back(statistic(set[k], s.labeling, energy));
    s.slope(k) = effective_value(set[k], s.labeling, energy, s.slack(k)) - set[k].target();
  }
  s.lagrangian = s.plane_at(lambda);
  return s;
}

}  // namespace statcut
