#ifndef STATCUT_DUAL_HPP
#define STATCUT_DUAL_HPP

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/cut_sample.hpp"
#include "statcut/energy.hpp"

namespace statcut {

/**
 * \brief Cutting-plane master problem
 *
 *   max z  s.t.  z <= intercept_k + slope_k . lambda  for every plane k,
 *                lambda in box.
 */
struct MasterLP {
  Eigen::VectorXd intercepts;
  Eigen::MatrixXd slopes;  ///< one row per plane
  SearchBox box;

  explicit MasterLP(SearchBox box);
  MasterLP(SearchBox box, const std::vector<CutSample>& samples);

  void add_plane(double intercept, const Eigen::Ref<const Eigen::VectorXd>& slope);
  Index num_planes() const { return intercepts.size(); }
  Index dims() const { return box.dims(); }

  /// min_k (intercept_k + slope_k . lambda).
  double model_value(const Eigen::Ref<const Eigen::VectorXd>& lambda) const;
};

struct MasterSolution {
  Eigen::VectorXd lambda;
  double z = 0.0;
};

/// Optimum of the master LP; among optimal lambda the lexicographically smallest
/// (up to 1e-10 relative in z). Throws InvalidArgument with no planes or an unbounded box.
MasterSolution solve_master(const MasterLP& lp);

enum class Termination {
  Converged,       ///< z* - L(x_{k+1}, lambda*) within tolerance
  DuplicatePlane,  ///< oracle returned a plane already in the model
  IterationCap,
};

const char* to_string(Termination t);

struct DualOptions {
  double tolerance = 1e-7;                ///< relative gap epsilon on z* - L
  std::optional<int> max_iterations;      ///< default max(10 n, 100)
  double duplicate_tolerance = 1e-9;
  std::optional<SearchBox> box;           ///< default: default_search_box
};

struct TraceRow {
  int iteration = 0;
  Eigen::VectorXd lambda;
  double master_value = 0.0;      ///< z*
  double oracle_lagrangian = 0.0; ///< L(x_{k+1}, lambda*) = D(lambda*)
  double oracle_energy = 0.0;
  std::vector<std::optional<double>> statistics;
  double seconds = 0.0;           ///< wall time since the start of the run
};

/// Outcome of a run and what its solution is certified for.
///
/// x* minimises E over all labelings whose constraint statistics, in equality
/// form, reproduce effective_statistics (b* = H(x*) + y*). Whether b* lies
/// inside the requested bounds is reported separately in `satisfied`.
struct CertificateReport {
  Termination termination = Termination::Converged;
  bool terminated = true;  ///< false when the iteration cap was hit
  int iterations = 0;      ///< master LP solves
  int oracle_calls = 0;
  Eigen::VectorXd lambda;  ///< final lambda*
  double master_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double energy = 0.0;     ///< E(x*)
  Eigen::VectorXd slack;   ///< y*
  Eigen::VectorXd effective_statistics;
  std::vector<std::optional<double>> achieved;  ///< H(x*)
  std::vector<bool> satisfied;
  std::vector<std::string> warnings;
};

struct DualResult {
  Labeling labeling;
  CertificateReport certificate;
  std::vector<TraceRow> trace;
  std::vector<CutSample> samples;  ///< every oracle result in call order
  SearchBox box;
};

using Oracle = std::function<CutSample(const Eigen::VectorXd&)>;

/// Oracle backed by the graph-cut minimiser. `set` must carry its search box.
Oracle make_cut_oracle(const PairwiseEnergy& energy, const ConstraintSet& set);

/// Accumulated cutting-plane state.
struct DualState {
  std::vector<CutSample> samples;
  SearchBox box;
  int iteration = 0;
  std::vector<TraceRow> trace;
  double tolerance = 1e-7;

  MasterLP master() const { return MasterLP(box, samples); }
};

/// True dual value D(lambda) from one oracle call. Throws SearchBoxError outside the box.
double dual_value_at(const DualState& state, const Eigen::Ref<const Eigen::VectorXd>& lambda,
                     const Oracle& oracle);

/// Maximises the Lagrangian dual by the cutting-plane method, starting at lambda = 0.
DualResult maximize_dual(const PairwiseEnergy& energy, const ConstraintSet& set, const DualOptions& opts = {});

/// One CSV row per iteration: k, lambda_*, z, oracle_L, oracle_E, h_*, seconds.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, const ConstraintSet& set);

/// Sum over constraints of dist(h, [lower, upper]) / max(1, |lower + upper| / 2);
/// an undefined statistic counts 1.
double relative_violation(const ConstraintSet& set, const std::vector<std::optional<double>>& stats);

}  // namespace statcut

#endif  // STATCUT_DUAL_HPP
