#include "statcut/dual.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "statcut/errors.hpp"
#include "statcut/maxflow.hpp"
#include "statcut/simplex.hpp"

namespace statcut {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool same_plane(const CutSample& a, const CutSample& b, double tol) {
  if (std::abs(a.energy_value - b.energy_value) > tol * (1.0 + std::abs(a.energy_value))) return false;
  const double scale = 1.0 + a.slope.cwiseAbs().maxCoeff();
  return (a.slope - b.slope).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

MasterLP::MasterLP(SearchBox b) : box(std::move(b)) {
  intercepts.resize(0);
  slopes.resize(0, box.dims());
}

MasterLP::MasterLP(SearchBox b, const std::vector<CutSample>& samples) : MasterLP(std::move(b)) {
  for (const CutSample& s : samples) add_plane(s.energy_value, s.slope);
}

void MasterLP::add_plane(double intercept, const Eigen::Ref<const Eigen::VectorXd>& slope) {
  if (slope.size() != dims()) throw DimensionError("plane slope dimension does not match the box");
  const Index k = num_planes();
  intercepts.conservativeResize(k + 1);
  slopes.conservativeResize(k + 1, dims());
  intercepts(k) = intercept;
  slopes.row(k) = slope.transpose();
}

double MasterLP::model_value(const Eigen::Ref<const Eigen::VectorXd>& lambda) const {
  return (intercepts + slopes * lambda).minCoeff();
}

MasterSolution solve_master(const MasterLP& lp) {
  if (lp.num_planes() == 0) throw InvalidArgument("master LP needs at least one plane; seed with an oracle call");
  const Index m = lp.dims();
  if (!lp.box.lower.allFinite() || !lp.box.upper.allFinite())
    throw InvalidArgument("master LP needs a bounded search box");
  if ((lp.box.lower.array() > lp.box.upper.array()).any()) throw InvalidArgument("empty search box");

  MasterSolution out;
  if (m == 0) {
    out.lambda.resize(0);
    out.z = lp.intercepts.minCoeff();
    return out;
  }

  // Shift to t = z - z0 >= 0 and u = lambda - lower in [0, width]; with
  // z0 = min_k plane_k(lower) every right-hand side is non-negative.
  const Eigen::VectorXd& lo = lp.box.lower;
  const Eigen::VectorXd width = lp.box.upper - lo;
  const Eigen::VectorXd at_lower = lp.intercepts + lp.slopes * lo;
  const double z0 = at_lower.minCoeff();
  const Index planes = lp.num_planes();
  const Index vars = m + 1;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(planes + m, vars);
  Eigen::VectorXd b(planes + m);
  A.col(0).head(planes).setOnes();
  A.block(0, 1, planes, m) = -lp.slopes;
  b.head(planes) = at_lower.array() - z0;
  A.block(planes, 1, m, m).setIdentity();
  b.tail(m) = width;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  c(0) = 1.0;
  const LpSolution<double> best = simplex_maximize<double>(A, b, c);
  if (best.status != LpStatus::Optimal) throw std::logic_error("master LP did not reach an optimum");
  const double t_star = best.x(0);
  Eigen::VectorXd x = best.x;
  auto lambda_of = [&](const Eigen::VectorXd& sol) {
    return Eigen::VectorXd((lo + sol.tail(m)).cwiseMax(lp.box.lower).cwiseMin(lp.box.upper));
  };
  const double z_first = lp.model_value(lambda_of(x));
  const double z_tol = 1e-10 * (1.0 + std::abs(z_first));

  // lexicographic refinement: minimise u_0, then u_1, ... keeping z optimal
  Eigen::MatrixXd Alex = A;
  Eigen::VectorXd blex = b;
  auto append_row = [&](const Eigen::VectorXd& row, double rhs) {
    const Index r = Alex.rows();
    Alex.conservativeResize(r + 1, Eigen::NoChange);
    blex.conservativeResize(r + 1);
    Alex.row(r) = row.transpose();
    blex(r) = rhs;
  };
  Eigen::VectorXd pin = Eigen::VectorXd::Zero(vars);
  pin(0) = -1.0;
  append_row(pin, -(t_star - 0.5 * z_tol));
  for (Index j = 0; j < m; ++j) {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(vars);
    obj(j + 1) = -1.0;
    const LpSolution<double> lex = simplex_maximize<double>(Alex, blex, obj);
    if (lex.status != LpStatus::Optimal) break;
    if (lp.model_value(lambda_of(lex.x)) < z_first - z_tol) break;
    x = lex.x;
    Eigen::VectorXd fix = Eigen::VectorXd::Zero(vars);
    fix(j + 1) = 1.0;
    append_row(fix, x(j + 1) + 1e-10 * (1.0 + width(j)));
  }

  out.lambda = lambda_of(x);
  out.z = lp.model_value(out.lambda);
  return out;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::DuplicatePlane: return "duplicate_plane";
    case Termination::IterationCap: return "iteration_cap";
  }
  return "unknown";
}

Oracle make_cut_oracle(const PairwiseEnergy& energy, const ConstraintSet& set) {
  return [energy, set](const Eigen::VectorXd& lambda) { return minimize_reparameterized(energy, set, lambda); };
}

double dual_value_at(const DualState& state, const Eigen::Ref<const Eigen::VectorXd>& lambda, const Oracle& oracle) {
  if (!state.box.contains(lambda)) throw SearchBoxError("multiplier outside the search box");
  return oracle(lambda).lagrangian;
}

double relative_violation(const ConstraintSet& set, const std::vector<std::optional<double>>& stats) {
  double total = 0.0;
  for (Index k = 0; k < set.size(); ++k) {
    const auto& h = stats[static_cast<std::size_t>(k)];
    if (!h) {
      total += 1.0;
      continue;
    }
    const Constraint& c = set[k];
    const double d = *h < c.lower ? c.lower - *h : (*h > c.upper ? *h - c.upper : 0.0);
    total += d / std::max(1.0, std::abs(c.lower + c.upper) / 2.0);
  }
  return total;
}

DualResult maximize_dual(const PairwiseEnergy& energy, const ConstraintSet& set, const DualOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  DualState state;
  state.box = opts.box ? *opts.box : default_search_box(set, energy);
  state.tolerance = opts.tolerance;
  if (state.box.dims() != set.size()) throw DimensionError("search box dimension does not match the constraint count");
  const ConstraintSet working = set.with_box(state.box);
  const Oracle oracle = make_cut_oracle(energy, working);
  const int cap = opts.max_iterations ? *opts.max_iterations
                                      : static_cast<int>(std::max<Index>(10 * energy.num_vars(), 100));

  const Eigen::VectorXd lambda0 = Eigen::VectorXd::Zero(set.size()).cwiseMax(state.box.lower).cwiseMin(state.box.upper);
  state.samples.push_back(oracle(lambda0));
  {
    const CutSample& s0 = state.samples.back();
    state.trace.push_back({0, lambda0, std::numeric_limits<double>::infinity(), s0.lagrangian, s0.energy_value,
                           s0.statistics, elapsed()});
  }

  Termination termination = Termination::Converged;
  Eigen::VectorXd lambda_star = lambda0;
  double z_star = state.samples.back().lagrangian;

  if (!set.empty()) {
    termination = Termination::IterationCap;
    while (state.iteration < cap) {
      ++state.iteration;
      const MasterSolution ms = solve_master(state.master());
      CutSample s = oracle(ms.lambda);
      lambda_star = ms.lambda;
      z_star = ms.z;
      state.trace.push_back(
          {state.iteration, ms.lambda, ms.z, s.lagrangian, s.energy_value, s.statistics, elapsed()});

      const bool converged = ms.z - s.lagrangian <= state.tolerance * (1.0 + std::abs(ms.z));
      const bool duplicate = !converged && std::any_of(state.samples.begin(), state.samples.end(), [&](const CutSample& o) {
                               return same_plane(o, s, opts.duplicate_tolerance);
                             });
      state.samples.push_back(std::move(s));
      if (converged) {
        termination = Termination::Converged;
        break;
      }
      if (duplicate) {
        termination = Termination::DuplicatePlane;
        break;
      }
    }
  }

  // Among samples that attain D(lambda*) pick the one closest to the requested
  // bounds; the last oracle result wins ties.
  const CutSample& last = state.samples.back();
  const double dual_value = last.lagrangian;
  const double attain_tol = 1e-9 * (1.0 + std::abs(dual_value));
  const CutSample* chosen = &last;
  double chosen_violation = relative_violation(set, last.statistics);
  for (const CutSample& s : state.samples) {
    if (&s == &last) continue;
    if (s.plane_at(lambda_star) - dual_value > attain_tol) continue;
    const double v = relative_violation(set, s.statistics);
    if (v < chosen_violation) {
      chosen = &s;
      chosen_violation = v;
    }
  }

  DualResult result;
  result.box = state.box;
  result.labeling = chosen->labeling;
  CertificateReport& cert = result.certificate;
  cert.termination = termination;
  cert.terminated = termination != Termination::IterationCap;
  cert.iterations = state.iteration;
  cert.oracle_calls = static_cast<int>(state.samples.size());
  cert.lambda = lambda_star;
  cert.master_value = z_star;
  cert.dual_value = dual_value;
  cert.gap = z_star - dual_value;
  cert.energy = chosen->energy_value;
  cert.slack = chosen->slack;
  cert.effective_statistics = chosen->effective_statistics(set);
  cert.achieved = chosen->statistics;
  for (Index k = 0; k < set.size(); ++k) {
    const auto& h = chosen->statistics[static_cast<std::size_t>(k)];
    const Constraint& c = set[k];
    const double tol = 1e-9 * (1.0 + std::abs(c.lower) + std::abs(c.upper));
    cert.satisfied.push_back(h.has_value() && *h >= c.lower - tol && *h <= c.upper + tol);

    const double lo = state.box.lower(k);
    const double hi = state.box.upper(k);
    const double edge_tol = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
    const bool truncation_edge = c.kind == ConstraintKind::BoundaryLength;
    if (std::abs(lambda_star(k) - hi) <= edge_tol || (!truncation_edge && std::abs(lambda_star(k) - lo) <= edge_tol))
      cert.warnings.push_back("multiplier of '" + c.name + "' sits on the search box boundary");
  }
  if (!cert.terminated) cert.warnings.push_back("iteration cap reached before the cutting-plane test passed");

  result.trace = std::move(state.trace);
  result.samples = std::move(state.samples);
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, const ConstraintSet& set) {
  out << "k";
  for (const Constraint& c : set.constraints()) out << ",lambda_" << c.name;
  out << ",z,oracle_L,oracle_E";
  for (const Constraint& c : set.constraints()) out << ",h_" << c.name;
  out << ",seconds\n";
  for (const TraceRow& row : trace) {
    out << row.iteration;
    for (Index k = 0; k < row.lambda.size(); ++k) out << ',' << num(row.lambda(k));
    out << ',' << num(row.master_value) << ',' << num(row.oracle_lagrangian) << ',' << num(row.oracle_energy);
    for (const auto& h : row.statistics) out << ',' << (h ? num(*h) : std::string("undefined"));
    out << ',' << num(row.seconds) << '\n';
  }
}

}  // namespace statcut
