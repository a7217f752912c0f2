#include "statcut/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "statcut/errors.hpp"

namespace statcut {

FlowGraph::FlowGraph(Index num_nodes, std::size_t arc_hint) : nodes_(static_cast<std::size_t>(num_nodes)) {
  arcs_.reserve(arc_hint);
}

void FlowGraph::add_terminal_weights(Index node, double source_cap, double sink_cap) {
  if (source_cap < 0.0 || sink_cap < 0.0) throw SubmodularityError("negative terminal capacity");
  Node& n = nodes_.at(static_cast<std::size_t>(node));
  double delta = n.tr_cap;
  if (delta > 0.0)
    source_cap += delta;
  else
    sink_cap -= delta;
  flow_ += std::min(source_cap, sink_cap);
  n.tr_cap = source_cap - sink_cap;
}

void FlowGraph::add_edge(Index i, Index j, double cap_ij, double cap_ji) {
  if (cap_ij < 0.0 || cap_ji < 0.0) throw SubmodularityError("negative arc capacity");
  if (i == j) throw InvalidArgument("self loop in flow graph");
  const int a = static_cast<int>(arcs_.size());
  const int b = a + 1;
  Node& ni = nodes_.at(static_cast<std::size_t>(i));
  Node& nj = nodes_.at(static_cast<std::size_t>(j));
  arcs_.push_back({static_cast<int>(j), ni.first, b, cap_ij});
  arcs_.push_back({static_cast<int>(i), nj.first, a, cap_ji});
  ni.first = a;
  nj.first = b;
}

void FlowGraph::set_active(int i) {
  Node& n = nodes_[i];
  if (!n.queued) {
    n.queued = true;
    active_.push_back(i);
  }
}

int FlowGraph::next_active() {
  while (!active_.empty()) {
    const int i = active_.front();
    active_.pop_front();
    nodes_[i].queued = false;
    if (nodes_[i].parent != kNone) return i;
  }
  return -1;
}

double FlowGraph::solve() {
  if (solved_) throw std::logic_error("FlowGraph::solve called twice");
  solved_ = true;

  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    Node& n = nodes_[i];
    if (n.tr_cap > 0.0) {
      n.is_sink = false;
      n.parent = kTerminal;
      set_active(i);
      n.stamp = 0;
      n.dist = 1;
    } else if (n.tr_cap < 0.0) {
      n.is_sink = true;
      n.parent = kTerminal;
      set_active(i);
      n.stamp = 0;
      n.dist = 1;
    } else {
      n.parent = kNone;
    }
  }

  int current = -1;
  while (true) {
    int i = current;
    if (i < 0 || nodes_[i].parent == kNone) {
      current = -1;
      i = next_active();
      if (i < 0) break;
    }

    int middle = -1;
    Node& ni = nodes_[i];
    if (!ni.is_sink) {
      for (int a = ni.first; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].r_cap <= 0.0) continue;
        const int j = arcs_[a].head;
        Node& nj = nodes_[j];
        if (nj.parent == kNone) {
          nj.is_sink = false;
          nj.parent = arcs_[a].sister;
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
          set_active(j);
        } else if (nj.is_sink) {
          middle = a;
          break;
        } else if (nj.stamp <= ni.stamp && nj.dist > ni.dist) {
          nj.parent = arcs_[a].sister;
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
        }
      }
    } else {
      for (int a = ni.first; a >= 0; a = arcs_[a].next) {
        if (arcs_[arcs_[a].sister].r_cap <= 0.0) continue;
        const int j = arcs_[a].head;
        Node& nj = nodes_[j];
        if (nj.parent == kNone) {
          nj.is_sink = true;
          nj.parent = arcs_[a].sister;
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
          set_active(j);
        } else if (!nj.is_sink) {
          middle = arcs_[a].sister;
          break;
        } else if (nj.stamp <= ni.stamp && nj.dist > ni.dist) {
          nj.parent = arcs_[a].sister;
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
        }
      }
    }

    ++time_;

    if (middle >= 0) {
      current = i;
      augment(middle);
      while (!orphans_.empty()) {
        const int o = orphans_.front();
        orphans_.pop_front();
        if (nodes_[o].is_sink)
          process_sink_orphan(o);
        else
          process_source_orphan(o);
      }
    } else {
      current = -1;
    }
  }
  return flow_;
}

void FlowGraph::augment(int middle) {
  double bottleneck = arcs_[middle].r_cap;

  // source side: walk from the tail of the middle arc up to s
  int i = arcs_[arcs_[middle].sister].head;
  while (nodes_[i].parent != kTerminal) {
    const int a = nodes_[i].parent;
    bottleneck = std::min(bottleneck, arcs_[arcs_[a].sister].r_cap);
    i = arcs_[a].head;
  }
  bottleneck = std::min(bottleneck, nodes_[i].tr_cap);

  // sink side: walk from the head of the middle arc down to t
  i = arcs_[middle].head;
  while (nodes_[i].parent != kTerminal) {
    const int a = nodes_[i].parent;
    bottleneck = std::min(bottleneck, arcs_[a].r_cap);
    i = arcs_[a].head;
  }
  bottleneck = std::min(bottleneck, -nodes_[i].tr_cap);

  arcs_[arcs_[middle].sister].r_cap += bottleneck;
  arcs_[middle].r_cap -= bottleneck;

  auto make_orphan = [this](int node) {
    nodes_[node].parent = kOrphan;
    orphans_.push_front(node);
  };

  i = arcs_[arcs_[middle].sister].head;
  while (nodes_[i].parent != kTerminal) {
    const int a = nodes_[i].parent;
    arcs_[a].r_cap += bottleneck;
    arcs_[arcs_[a].sister].r_cap -= bottleneck;
    const int up = arcs_[a].head;
    if (arcs_[arcs_[a].sister].r_cap <= 0.0) make_orphan(i);
    i = up;
  }
  nodes_[i].tr_cap -= bottleneck;
  if (nodes_[i].tr_cap <= 0.0) make_orphan(i);

  i = arcs_[middle].head;
  while (nodes_[i].parent != kTerminal) {
    const int a = nodes_[i].parent;
    arcs_[arcs_[a].sister].r_cap += bottleneck;
    arcs_[a].r_cap -= bottleneck;
    const int down = arcs_[a].head;
    if (arcs_[a].r_cap <= 0.0) make_orphan(i);
    i = down;
  }
  nodes_[i].tr_cap += bottleneck;
  if (nodes_[i].tr_cap >= 0.0) make_orphan(i);

  flow_ += bottleneck;
}

void FlowGraph::process_source_orphan(int i) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  int best_arc = kNone;
  std::int64_t best_dist = kInf;

  for (int a0 = nodes_[i].first; a0 >= 0; a0 = arcs_[a0].next) {
    if (arcs_[arcs_[a0].sister].r_cap <= 0.0) continue;
    int j = arcs_[a0].head;
    if (nodes_[j].is_sink || nodes_[j].parent == kNone) continue;

    // distance from j to the source, or kInf if j hangs off an orphan
    std::int64_t d = 0;
    while (true) {
      if (nodes_[j].stamp == time_) {
        d += nodes_[j].dist;
        break;
      }
      const int a = nodes_[j].parent;
      ++d;
      if (a == kTerminal) {
        nodes_[j].stamp = time_;
        nodes_[j].dist = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInf;
        break;
      }
      j = arcs_[a].head;
    }

    if (d < kInf) {
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      for (j = arcs_[a0].head; nodes_[j].stamp != time_; j = arcs_[nodes_[j].parent].head) {
        nodes_[j].stamp = time_;
        nodes_[j].dist = d--;
      }
    }
  }

  nodes_[i].parent = best_arc;
  if (best_arc != kNone) {
    nodes_[i].stamp = time_;
    nodes_[i].dist = best_dist + 1;
    return;
  }

  for (int a0 = nodes_[i].first; a0 >= 0; a0 = arcs_[a0].next) {
    const int j = arcs_[a0].head;
    const int a = nodes_[j].parent;
    if (nodes_[j].is_sink || a == kNone) continue;
    if (arcs_[arcs_[a0].sister].r_cap > 0.0) set_active(j);
    if (a != kTerminal && a != kOrphan && arcs_[a].head == i) {
      nodes_[j].parent = kOrphan;
      orphans_.push_back(j);
    }
  }
}

void FlowGraph::process_sink_orphan(int i) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  int best_arc = kNone;
  std::int64_t best_dist = kInf;

  for (int a0 = nodes_[i].first; a0 >= 0; a0 = arcs_[a0].next) {
    if (arcs_[a0].r_cap <= 0.0) continue;
    int j = arcs_[a0].head;
    if (!nodes_[j].is_sink || nodes_[j].parent == kNone) continue;

    std::int64_t d = 0;
    while (true) {
      if (nodes_[j].stamp == time_) {
        d += nodes_[j].dist;
        break;
      }
      const int a = nodes_[j].parent;
      ++d;
      if (a == kTerminal) {
        nodes_[j].stamp = time_;
        nodes_[j].dist = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInf;
        break;
      }
      j = arcs_[a].head;
    }

    if (d < kInf) {
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      for (j = arcs_[a0].head; nodes_[j].stamp != time_; j = arcs_[nodes_[j].parent].head) {
        nodes_[j].stamp = time_;
        nodes_[j].dist = d--;
      }
    }
  }

  nodes_[i].parent = best_arc;
  if (best_arc != kNone) {
    nodes_[i].stamp = time_;
    nodes_[i].dist = best_dist + 1;
    return;
  }

  for (int a0 = nodes_[i].first; a0 >= 0; a0 = arcs_[a0].next) {
    const int j = arcs_[a0].head;
    const int a = nodes_[j].parent;
    if (!nodes_[j].is_sink || a == kNone) continue;
    if (arcs_[a0].r_cap > 0.0) set_active(j);
    if (a != kTerminal && a != kOrphan && arcs_[a].head == i) {
      nodes_[j].parent = kOrphan;
      orphans_.push_back(j);
    }
  }
}

bool FlowGraph::in_source_set(Index node) const {
  const Node& n = nodes_.at(static_cast<std::size_t>(node));
  return n.parent != kNone && !n.is_sink;
}

void FlowGraph::write_dimacs(std::ostream& out) const {
  const auto n = nodes_.size();
  const std::size_t s = n + 1;
  const std::size_t t = n + 2;
  out << "c residual network; nodes 1.." << n << ", source " << s << ", sink " << t << '\n';
  out << "p max " << n + 2 << ' ' << arcs_.size() << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    if (nd.tr_cap > 0.0) out << "a " << s << ' ' << i + 1 << ' ' << nd.tr_cap << '\n';
    if (nd.tr_cap < 0.0) out << "a " << i + 1 << ' ' << t << ' ' << -nd.tr_cap << '\n';
    for (int a = nd.first; a >= 0; a = arcs_[a].next)
      out << "a " << i + 1 << ' ' << arcs_[a].head + 1 << ' ' << arcs_[a].r_cap << '\n';
  }
  out << "c flow " << flow_ << '\n';
  for (std::size_t i = 0; i < n; ++i)
    out << "n " << i + 1 << ' ' << (in_source_set(static_cast<Index>(i)) ? 's' : 't') << '\n';
}

MinimizeResult minimize(const PairwiseEnergy& energy) {
  const Index n = energy.num_vars();
  FlowGraph graph(n, 2 * energy.edges().size());
  const auto& unary = energy.unary();
  double constant = 0.0;
  for (Index i = 0; i < n; ++i) {
    // label 1 = source side: cutting s->i costs phi(0), cutting i->t costs phi(1)
    const double lo = std::min(unary(i, 0), unary(i, 1));
    constant += lo;
    graph.add_terminal_weights(i, unary(i, 0) - lo, unary(i, 1) - lo);
  }
  for (const Edge& e : energy.edges()) {
    if (e.weight < 0.0) throw SubmodularityError("negative pairwise weight");
    graph.add_edge(e.i, e.j, e.weight, e.weight);
  }
  const double flow = graph.solve();

  MinimizeResult result;
  result.labeling.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) result.labeling[i] = graph.in_source_set(i) ? 1 : 0;
  result.value = evaluate(energy, result.labeling);
  result.cut_value = constant + flow;

  const double scale = 1.0 + std::abs(result.value) + std::abs(constant);
  if (std::abs(result.value - result.cut_value) > 1e-7 * scale)
    throw std::logic_error("min-cut value " + std::to_string(result.value) + " differs from max-flow " +
                           std::to_string(result.cut_value));
  return result;
}

CutSample minimize_reparameterized(const PairwiseEnergy& energy, const ConstraintSet& constraints,
                                   const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  Reparameterization rep = reparameterize(constraints, energy, lambda);
  MinimizeResult cut = minimize(rep.energy);
  return make_cut_sample(energy, constraints, lambda, std::move(cut.labeling), rep.slack);
}

}  // namespace statcut
