#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "statcut/constraints.hpp"
#include "statcut/cut_sample.hpp"
#include "statcut/errors.hpp"
#include "statcut/synthetic.hpp"

using namespace statcut;

namespace {

PairwiseEnergy grid_energy(Index rows, Index cols, std::uint64_t seed) {
  synthetic::Rng rng(seed);
  return synthetic::random_grid_energy(rows, cols, rng);
}

Labeling random_labeling(Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Labeling x(static_cast<std::size_t>(n));
  for (auto& b : x) b = coin(rng) ? 1 : 0;
  return x;
}

}  // namespace

TEST_CASE("statistic hand examples") {
  const auto e3 = grid_energy(3, 3, 1);
  CHECK(*statistic(size_constraint(9, 0, 9), Labeling(9, 1), e3) == 9.0);

  const auto e2 = grid_energy(2, 2, 1);
  CHECK(*statistic(Constraint::boundary_length(0, 4), Labeling{1, 0, 0, 0}, e2) == 2.0);

  const Labeling middle{0, 1, 0, 0, 1, 0, 0, 1, 0};
  CHECK(*statistic(mean_constraint(Axis::Horizontal, 3, 3, 0, 2), middle, e3) == doctest::Approx(1.0));
  CHECK(*statistic(mean_constraint(Axis::Vertical, 3, 3, 0, 2), middle, e3) == doctest::Approx(1.0));
  CHECK(*statistic(variance_constraint(Axis::Horizontal, 3, 3, 1.0, 0, 1), middle, e3) == doctest::Approx(0.0));
  CHECK(*statistic(variance_constraint(Axis::Vertical, 3, 3, 1.0, 0, 1), middle, e3) == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(statistic(mean_constraint(Axis::Vertical, 3, 3, 0, 2), Labeling(9, 0), e3).has_value());
}

TEST_CASE("statistics match naive grid formulas") {
  std::mt19937_64 rng(4);
  const Index rows = 3;
  const Index cols = 5;
  const auto e = grid_energy(rows, cols, 2);
  for (int t = 0; t < 40; ++t) {
    const auto x = random_labeling(rows * cols, rng);
    const oracle::Bits b(x.begin(), x.end());
    CHECK(*statistic(size_constraint(15, 0, 15), x, e) == oracle::grid_size(b));
    CHECK(*statistic(Constraint::boundary_length(0, 1), x, e) == oracle::grid_boundary(b, rows, cols));
    const auto mh = oracle::grid_mean(b, rows, cols, true);
    const auto got = statistic(mean_constraint(Axis::Horizontal, rows, cols, 0, 1), x, e);
    CHECK(got.has_value() == mh.has_value());
    if (mh) {
      CHECK(*got == doctest::Approx(*mh));
      CHECK(*statistic(variance_constraint(Axis::Vertical, rows, cols, 1.3, 0, 1), x, e) ==
            doctest::Approx(*oracle::grid_second_moment(b, rows, cols, 1.3, false)));
    }
  }
}

TEST_CASE("covariance and local size") {
  const auto e = grid_energy(2, 3, 3);
  const Labeling x{1, 0, 0, 0, 0, 1};
  CHECK(*statistic(covariance_constraint(2, 3, 1.0, 0.5, -1, 1), x, e) == doctest::Approx(0.5));

  const auto tiles = equal_tiling(5, 5, 2, 2);
  REQUIRE(tiles.size() == 4);
  CHECK(tiles[0].height == 2);
  CHECK(tiles[3].height == 3);
  CHECK(tiles[3].width == 3);
  Index covered = 0;
  for (const Tile& t : tiles) covered += t.height * t.width;
  CHECK(covered == 25);
  const auto e5 = grid_energy(5, 5, 3);
  CHECK(*statistic(local_size_constraint(tiles[3], 5, 5, 0, 9, "t"), Labeling(25, 1), e5) == 9.0);
}

TEST_CASE("resolve_slack") {
  const Constraint lin = size_constraint(4, 0, 10);
  CHECK(resolve_slack(lin, 2.0) == 0.0);
  CHECK(resolve_slack(lin, -1.0) == 10.0);
  CHECK(resolve_slack(lin, 0.0) == 0.0);
  const Constraint ratio = mean_constraint(Axis::Horizontal, 2, 2, 0, 4);
  CHECK(resolve_slack(ratio, 3.0) == 4.0);
  CHECK(resolve_slack(ratio, -3.0) == 0.0);
  CHECK(resolve_slack(ratio, 0.0) == 0.0);
}

TEST_CASE("reparameterize") {
  PairwiseEnergy::UnaryTable t(3, 2);
  t << 0, 1, 0, -1, 2, 0;
  const PairwiseEnergy e(t, {{0, 1, 1.0}, {1, 2, 0.5}});

  SUBCASE("empty set is the identity") {
    const auto r = reparameterize(ConstraintSet{}, e, Eigen::VectorXd(0));
    CHECK((r.energy.unary().array() == e.unary().array()).all());
    CHECK(r.constant == 0.0);
  }
  SUBCASE("size b=5 at lambda=2") {
    const ConstraintSet set({size_constraint(3, 5, 5)});
    Eigen::VectorXd l(1);
    l << 2.0;
    const auto r = reparameterize(set, e, l);
    CHECK(r.constant == doctest::Approx(-10.0));
    CHECK(r.slack(0) == 0.0);
    for (Index i = 0; i < 3; ++i) CHECK(r.energy.unary()(i, 1) == doctest::Approx(e.unary()(i, 1) + 2.0));
    const Labeling ones{1, 1, 1};
    CHECK(evaluate(r.energy, ones) + r.constant == doctest::Approx(evaluate(e, ones) + 2.0 * (3 - 5)));
  }
  SUBCASE("boundary multiplier at -min C keeps weights non-negative") {
    const ConstraintSet set({Constraint::boundary_length(1, 1)});
    Eigen::VectorXd l(1);
    l << -0.5;
    const auto r = reparameterize(set, e, l);
    bool some_zero = false;
    for (const Edge& ed : r.energy.edges()) {
      CHECK(ed.weight >= 0.0);
      some_zero = some_zero || ed.weight == 0.0;
    }
    CHECK(some_zero);
    l << -0.5000001;
    CHECK_THROWS_AS(reparameterize(set, e, l), SearchBoxError);
  }
  SUBCASE("lambda outside the box") {
    const ConstraintSet set = ConstraintSet({size_constraint(3, 1, 2)}).with_box({Eigen::VectorXd::Constant(1, -1),
                                                                                  Eigen::VectorXd::Constant(1, 1)});
    CHECK_THROWS_AS(reparameterize(set, e, Eigen::VectorXd::Constant(1, 1.5)), SearchBoxError);
  }
  SUBCASE("matches the Lagrangian on every labeling") {
    std::mt19937_64 rng(6);
    const auto g = grid_energy(3, 3, 9);
    std::vector<Constraint> cs;
    for (auto f : {synthetic::Family::Sz, synthetic::Family::Br, synthetic::Family::MnV, synthetic::Family::VrH,
                   synthetic::Family::Cv})
      for (auto& c : synthetic::random_constraints(f, g, 3, 3, rng)) cs.push_back(c);
    const ConstraintSet set(cs);
    const SearchBox box = default_search_box(set, g);
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd l(set.size());
      for (Index k = 0; k < l.size(); ++k)
        l(k) = std::uniform_real_distribution<double>(box.lower(k), box.upper(k))(rng);
      const auto r = reparameterize(set, g, l);
      for (std::uint64_t m = 0; m < 512; m += 7) {
        const auto bits = oracle::bits_of(m, 9);
        const auto x = oracle::to_labeling(bits);
        double lag = oracle::energy(g, bits);
        for (Index k = 0; k < set.size(); ++k)
          lag += l(k) * (effective_value(set[k], x, g, r.slack(k)) - set[k].target());
        CHECK(oracle::energy(r.energy, bits) + r.constant == doctest::Approx(lag).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("effective_value of a ratio constraint") {
  const auto e = grid_energy(1, 4, 1);
  const Constraint mean = mean_constraint(Axis::Horizontal, 1, 4, 1.0, 2.0);
  const Labeling x{0, 1, 1, 1};
  CHECK(effective_value(mean, x, e, 0.0) == doctest::Approx(3.0));
  CHECK(effective_value(mean, x, e, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("default_search_box") {
  PairwiseEnergy::UnaryTable t(3, 2);
  t << 0, 1, 0, -2, 1, 0;
  const PairwiseEnergy e(t, {{0, 1, 0.3}, {1, 2, 0.9}});
  const double m = default_multiplier_bound(e);
  CHECK(m == doctest::Approx(10.0 * (2.0 + 0.6)));

  const auto sz = default_search_box(ConstraintSet({size_constraint(3, 1, 2)}), e);
  CHECK(sz.lower(0) == -m);
  CHECK(sz.upper(0) == m);

  const auto br = default_search_box(ConstraintSet({Constraint::boundary_length(0, 1)}), e);
  CHECK(br.lower(0) == -0.3);
  CHECK(br.upper(0) == m);

  const auto both = default_search_box(ConstraintSet({size_constraint(3, 1, 2), Constraint::boundary_length(0, 1)}), e);
  CHECK(both.dims() == 2);
  CHECK(both.lower(0) == -m);
  CHECK(both.lower(1) == -0.3);
  CHECK(both.upper(1) == m);

  const PairwiseEnergy lonely(t, {});
  CHECK_THROWS_AS(default_search_box(ConstraintSet({Constraint::boundary_length(0, 1)}), lonely), InvalidArgument);
  CHECK(default_multiplier_bound(PairwiseEnergy(PairwiseEnergy::UnaryTable::Zero(2, 2), {})) == 1.0);
}

TEST_CASE("invalid constraint definitions") {
  CHECK_THROWS_AS(size_constraint(3, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(size_constraint(3, 0, std::numeric_limits<double>::infinity()), InvalidArgument);
  const auto e = grid_energy(2, 2, 1);
  CHECK_THROWS_AS(statistic(size_constraint(3, 0, 1), Labeling(4, 0), e), DimensionError);
}

TEST_CASE("cut sample plane") {
  const auto e = grid_energy(2, 2, 5);
  const ConstraintSet set({size_constraint(4, 1, 3)});
  Eigen::VectorXd l(1);
  l << -1.0;
  const Labeling x{1, 1, 0, 0};
  Eigen::VectorXd y(1);
  y << 2.0;
  const auto s = make_cut_sample(e, set, l, x, y);
  CHECK(s.slope(0) == doctest::Approx(2.0 + 2.0 - 3.0));
  CHECK(s.lagrangian == doctest::Approx(evaluate(e, x) - 1.0));
  CHECK(s.effective_statistics(set)(0) == doctest::Approx(4.0));
}
