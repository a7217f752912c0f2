#ifndef STATCUT_MAXFLOW_HPP
#define STATCUT_MAXFLOW_HPP

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/cut_sample.hpp"
#include "statcut/energy.hpp"

namespace statcut {

/**
 * \brief s-t flow network solved with the Boykov-Kolmogorov augmenting-path algorithm.
 *
 * Search trees grown from both terminals are kept across augmentations and
 * repaired by adopting orphans. Single use: build, call solve() once, query the cut.
 * Nodes left in the source tree at termination form the source side of the
 * minimum cut, which is the set reachable from s in the residual graph.
 */
class FlowGraph {
 public:
  explicit FlowGraph(Index num_nodes, std::size_t arc_hint = 0);

  /// Adds capacities s->node and node->t. Only their difference is stored; the
  /// common part is routed straight to the flow value.
  void add_terminal_weights(Index node, double source_cap, double sink_cap);

  /// Adds arc i->j with capacity cap_ij and j->i with capacity cap_ji.
  void add_edge(Index i, Index j, double cap_ij, double cap_ji);

  /// Runs the algorithm and returns the max-flow value.
  double solve();

  /// True if the node ended on the source side of the minimum cut.
  bool in_source_set(Index node) const;

  double flow() const { return flow_; }
  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }

  /// Residual network and cut side in a DIMACS-like text form (debugging aid).
  void write_dimacs(std::ostream& out) const;

 private:
  static constexpr int kNone = -1;
  static constexpr int kTerminal = -2;
  static constexpr int kOrphan = -3;

  struct Node {
    int first = -1;        // first outgoing arc
    int parent = kNone;    // arc towards the parent in the search tree
    bool is_sink = false;  // tree membership, meaningful when parent != kNone
    bool queued = false;
    std::int64_t stamp = 0;
    std::int64_t dist = 0;
    double tr_cap = 0.0;   // > 0: residual s->node, < 0: residual node->t
  };
  struct Arc {
    int head = 0;
    int next = -1;
    int sister = 0;
    double r_cap = 0.0;
  };

  void set_active(int i);
  int next_active();
  void augment(int middle);
  void process_source_orphan(int i);
  void process_sink_orphan(int i);

  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::deque<int> active_;
  std::deque<int> orphans_;
  std::int64_t time_ = 0;
  double flow_ = 0.0;
  bool solved_ = false;
};

struct MinimizeResult {
  Labeling labeling;
  double value = 0.0;      ///< evaluate(energy, labeling)
  double cut_value = 0.0;  ///< max-flow value plus the constant absorbed by the reduction
};

/**
 * Exact minimiser of a submodular pairwise energy.
 *
 * Label 1 is the source side. Among several minimisers the one with the fewest
 * ones (source side = nodes reachable from s) is returned, so results are
 * deterministic.
 */
MinimizeResult minimize(const PairwiseEnergy& energy);

/// Oracle call at multiplier lambda: minimises the reparameterised energy and
/// packages the labeling with its slack, statistics and Lagrangian value.
CutSample minimize_reparameterized(const PairwiseEnergy& energy, const ConstraintSet& constraints,
                                   const Eigen::Ref<const Eigen::VectorXd>& lambda);

}  // namespace statcut

#endif  // STATCUT_MAXFLOW_HPP
