#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "statcut/dual.hpp"
#include "statcut/errors.hpp"
#include "statcut/maxflow.hpp"
#include "statcut/reports.hpp"
#include "statcut/synthetic.hpp"

using namespace statcut;

namespace {

double lagrangian_brute(const PairwiseEnergy& e, const ConstraintSet& set, const Eigen::VectorXd& l) {
  return oracle::min_over_labelings(e.num_vars(), [&](const oracle::Bits& bits) {
    const auto x = oracle::to_labeling(bits);
    double v = oracle::energy(e, bits);
    for (Index k = 0; k < set.size(); ++k) {
      const Constraint& c = set[k];
      const double s = c.slack_range();
      const double y = c.kind == ConstraintKind::Ratio ? (l(k) > 0 ? s : 0.0) : (l(k) < 0 ? s : 0.0);
      v += l(k) * (effective_value(c, x, e, y) - c.target());
    }
    return v;
  });
}

ConstraintSet random_set(const PairwiseEnergy& e, Index rows, Index cols, std::vector<synthetic::Family> fams,
                         synthetic::Rng& rng) {
  std::vector<Constraint> cs;
  for (auto f : fams)
    for (auto& c : synthetic::random_constraints(f, e, rows, cols, rng)) cs.push_back(c);
  return ConstraintSet(cs);
}

}  // namespace

TEST_CASE("empty constraint set is one plain graph cut") {
  synthetic::Rng rng(1);
  const auto e = synthetic::random_grid_energy(4, 4, rng);
  const auto r = maximize_dual(e, ConstraintSet{});
  CHECK(r.certificate.oracle_calls == 1);
  CHECK(r.certificate.iterations == 0);
  CHECK(r.labeling == minimize(e).labeling);
  CHECK(r.certificate.termination == Termination::Converged);
}

TEST_CASE("size equality on a 3x3 grid") {
  synthetic::Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto e = synthetic::random_grid_energy(3, 3, rng);
    const ConstraintSet set({size_constraint(9, 4, 4)});
    const auto r = maximize_dual(e, set);
    const double size = oracle::grid_size(oracle::Bits(r.labeling.begin(), r.labeling.end()));
    const double class_min = oracle::min_over_labelings(9, [&](const oracle::Bits& x) {
      return oracle::grid_size(x) == size ? oracle::energy(e, x) : std::numeric_limits<double>::infinity();
    });
    CHECK(r.certificate.energy == doctest::Approx(class_min).epsilon(1e-12));
    CHECK(r.certificate.effective_statistics(0) == doctest::Approx(size));

    const double d = r.certificate.dual_value;
    double closest = std::numeric_limits<double>::infinity();
    for (const CutSample& s : r.samples)
      if (s.plane_at(r.certificate.lambda) - d <= 1e-9 * (1 + std::abs(d)))
        closest = std::min(closest, std::abs(oracle::grid_size(oracle::Bits(s.labeling.begin(), s.labeling.end())) - 4));
    CHECK(std::abs(size - 4) == closest);
  }
}

TEST_CASE("dual_value_at") {
  synthetic::Rng rng(5);
  const auto e = synthetic::random_grid_energy(3, 3, rng);
  const ConstraintSet set = random_set(e, 3, 3, {synthetic::Family::Sz, synthetic::Family::Br}, rng);
  DualState state;
  state.box = default_search_box(set, e);
  const auto boxed = set.with_box(state.box);
  const Oracle oracle = make_cut_oracle(e, boxed);

  CHECK(dual_value_at(state, Eigen::VectorXd::Zero(2), oracle) == doctest::Approx(minimize(e).value));

  state.samples.push_back(oracle(Eigen::VectorXd::Zero(2)));
  Eigen::VectorXd l(2);
  l << 1.0, 0.5;
  state.samples.push_back(oracle(l));
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd p(2);
    p << std::uniform_real_distribution<double>(state.box.lower(0), state.box.upper(0))(rng),
        std::uniform_real_distribution<double>(state.box.lower(1), state.box.upper(1))(rng);
    const double dv = dual_value_at(state, p, oracle);
    CHECK(dv <= state.master().model_value(p) + 1e-9);
    CHECK(dv == doctest::Approx(lagrangian_brute(e, set, p)).epsilon(1e-10));
  }
  Eigen::VectorXd outside(2);
  outside << 0.0, state.box.lower(1) - 1.0;
  CHECK_THROWS_AS(dual_value_at(state, outside, oracle), SearchBoxError);
}

TEST_CASE("trace is monotone and bounds every oracle value") {
  synthetic::Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto e = synthetic::random_grid_energy(3, 4, rng);
    const auto set =
        random_set(e, 3, 4, {synthetic::Family::Sz, synthetic::Family::Br, synthetic::Family::VrH}, rng);
    const auto r = maximize_dual(e, set);
    double prev = std::numeric_limits<double>::infinity();
    double best_l = -std::numeric_limits<double>::infinity();
    for (const TraceRow& row : r.trace) best_l = std::max(best_l, row.oracle_lagrangian);
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const double z = r.trace[k].master_value;
      CHECK(z <= prev + 1e-9 * (1 + std::abs(prev)));
      CHECK(best_l <= z + 1e-9 * (1 + std::abs(z)));
      prev = z;
    }
    CHECK(r.certificate.gap >= -1e-9 * (1 + std::abs(r.certificate.master_value)));
  }
}

TEST_CASE("iteration cap is reported") {
  synthetic::Rng rng(12);
  const auto e = synthetic::random_grid_energy(4, 4, rng);
  const ConstraintSet set({size_constraint(16, 7, 7), mean_constraint(Axis::Horizontal, 4, 4, 1.2, 1.2)});
  DualOptions o;
  o.max_iterations = 1;
  const auto r = maximize_dual(e, set, o);
  if (r.certificate.termination == Termination::IterationCap) {
    CHECK_FALSE(r.certificate.terminated);
    CHECK(r.certificate.iterations == 1);
    CHECK_FALSE(r.certificate.warnings.empty());
  }
  const auto full = maximize_dual(e, set);
  CHECK(full.certificate.terminated);
}

TEST_CASE("trace CSV and certificate JSON") {
  synthetic::Rng rng(3);
  const auto e = synthetic::random_grid_energy(3, 3, rng);
  const ConstraintSet set({size_constraint(9, 3, 5), Constraint::boundary_length(2, 4),
                           mean_constraint(Axis::Vertical, 3, 3, 0.5, 1.5)});
  const auto r = maximize_dual(e, set);
  std::ostringstream csv;
  write_trace_csv(csv, r.trace, set);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "k,lambda_sz,lambda_br,lambda_mn_v,z,oracle_L,oracle_E,h_sz,h_br,h_mn_v,seconds");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == static_cast<int>(r.trace.size()));

  const auto j = nlohmann::json::parse(to_json(r.certificate, set));
  CHECK(j["constraints"].size() == 3);
  CHECK(j["constraints"][1]["name"] == "br");
  CHECK(j["energy"].get<double>() == doctest::Approx(evaluate(e, r.labeling)));
}

TEST_CASE("relative_violation") {
  const ConstraintSet set({size_constraint(4, 90, 110), size_constraint(4, 0, 0)});
  CHECK(relative_violation(set, {100.0, 0.0}) == 0.0);
  CHECK(relative_violation(set, {121.0, 0.0}) == doctest::Approx(0.11));
  CHECK(relative_violation(set, {100.0, 2.0}) == doctest::Approx(2.0));
  CHECK(relative_violation(set, {std::nullopt, 0.0}) == 1.0);
}

TEST_CASE("boundary length multiplier stays inside the truncated box") {
  synthetic::Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const auto e = synthetic::random_grid_energy(3, 3, rng);
    const ConstraintSet set({Constraint::boundary_length(9, 12)});
    const auto r = maximize_dual(e, set);
    CHECK(r.certificate.lambda(0) >= -e.min_pairwise_weight());
    for (const TraceRow& row : r.trace) CHECK(row.lambda(0) >= -e.min_pairwise_weight());
  }
}
