#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "statcut/energy.hpp"
#include "statcut/errors.hpp"
#include "statcut/synthetic.hpp"

using namespace statcut;

namespace {

PairwiseEnergy make(std::initializer_list<std::pair<double, double>> phi, std::vector<Edge> edges = {}) {
  PairwiseEnergy::UnaryTable t(static_cast<Index>(phi.size()), 2);
  Index i = 0;
  for (auto [a, b] : phi) {
    t(i, 0) = a;
    t(i, 1) = b;
    ++i;
  }
  return PairwiseEnergy(t, std::move(edges));
}

Labeling random_labeling(Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Labeling x(static_cast<std::size_t>(n));
  for (auto& b : x) b = coin(rng) ? 1 : 0;
  return x;
}

}  // namespace

TEST_CASE("evaluate single unary") {
  const auto e = make({{0.0, 5.0}});
  CHECK(evaluate(e, Labeling{1}) == 5.0);
  CHECK(evaluate(e, Labeling{0}) == 0.0);
}

TEST_CASE("evaluate one boundary edge") {
  const auto e = make({{0, 0}, {0, 0}}, {{0, 1, 3.0}});
  CHECK(evaluate(e, Labeling{0, 1}) == 3.0);
  CHECK(evaluate(e, Labeling{1, 1}) == 0.0);
}

TEST_CASE("evaluate matches naive re-summation on 3x3 grids") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto e = synthetic::random_grid_energy(3, 3, rng);
    const auto x = random_labeling(9, rng);
    CHECK(evaluate(e, x) == doctest::Approx(oracle::energy(e, x)).epsilon(1e-12));
  }
}

TEST_CASE("constructor rejects bad energies") {
  CHECK_THROWS_AS(make({{0, 0}, {0, 0}}, {{0, 1, -0.1}}), SubmodularityError);
  CHECK_THROWS_AS(make({{0, 0}, {0, 0}}, {{1, 0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make({{0, 0}, {0, 0}}, {{0, 2, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make({{0, 0}, {0, 0}}, {{0, 1, 1.0}, {0, 1, 2.0}}), InvalidArgument);
  CHECK_THROWS_AS(make({{0, std::numeric_limits<double>::quiet_NaN()}}), InvalidArgument);
  CHECK_THROWS_AS(evaluate(make({{0, 0}}), Labeling{0, 1}), DimensionError);
}

TEST_CASE("add_unary_offsets") {
  const auto e = make({{0.0, 5.0}});
  Eigen::VectorXd d(1);
  d << -5.0;
  CHECK(evaluate(add_unary_offsets(e, d), Labeling{1}) == 0.0);

  std::mt19937_64 rng(5);
  const auto g = synthetic::random_grid_energy(3, 4, rng);
  const auto same = add_unary_offsets(g, Eigen::VectorXd::Zero(12));
  CHECK((same.unary().array() == g.unary().array()).all());

  const Eigen::VectorXd deltas = Eigen::VectorXd::Random(12) * 3.0;
  const auto shifted = add_unary_offsets(g, deltas);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_labeling(12, rng);
    double expect = 0.0;
    for (Index i = 0; i < 12; ++i) expect += x[static_cast<std::size_t>(i)] * deltas(i);
    CHECK(oracle::energy(shifted, x) - oracle::energy(g, x) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("scale_pairwise") {
  const auto single = make({{0, 0}, {0, 0}}, {{0, 1, 3.0}});
  const auto zeroed = scale_pairwise(single, -3.0);
  CHECK(zeroed.edges()[0].weight == 0.0);
  CHECK(evaluate(zeroed, Labeling{0, 1}) == 0.0);
  CHECK_THROWS_AS(scale_pairwise(single, -3.0001), SearchBoxError);

  std::mt19937_64 rng(8);
  const auto g = synthetic::random_grid_energy(3, 3, rng);
  const auto same = scale_pairwise(g, 0.0);
  for (std::size_t k = 0; k < g.edges().size(); ++k) CHECK(same.edges()[k].weight == g.edges()[k].weight);

  const auto up = scale_pairwise(g, 1.5);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_labeling(9, rng);
    const auto bits = std::vector<int>(x.begin(), x.end());
    CHECK(oracle::energy(up, x) ==
          doctest::Approx(oracle::energy(g, x) + 1.5 * oracle::grid_boundary(bits, 3, 3)).epsilon(1e-12));
  }
}

TEST_CASE("build_grid_energy topology and weights") {
  IntensityHistogram h;
  SmoothnessParams s{0.1, 1.0, 1.0};

  ImageGrid one(1, 1);
  one << 0.5;
  const auto e1 = build_grid_energy(one, h, h, s);
  CHECK(e1.num_vars() == 1);
  CHECK(e1.edges().empty());

  ImageGrid flat = ImageGrid::Constant(2, 2, 0.3);
  const auto e4 = build_grid_energy(flat, h, h, s);
  CHECK(e4.num_vars() == 4);
  REQUIRE(e4.edges().size() == 4);
  for (const Edge& e : e4.edges()) CHECK(e.weight == doctest::Approx(1.1));

  ImageGrid img(3, 4);
  img << 0.1, 0.2, 0.9, 0.8, 0.1, 0.3, 0.7, 0.9, 0.0, 0.2, 0.8, 1.0;
  const auto g = build_grid_energy(img, h, h, s);
  CHECK(g.edges().size() == 17);
  for (const Edge& e : g.edges()) {
    const double di = img(e.i / 4, e.i % 4) - img(e.j / 4, e.j % 4);
    CHECK(e.weight == doctest::Approx(0.1 + std::exp(-di * di / 2.0)));
  }

  CHECK_THROWS_AS(build_grid_energy(ImageGrid(0, 0), h, h, s), InvalidArgument);
  CHECK_THROWS_AS(build_grid_energy(img, h, h, SmoothnessParams{0.1, 1.0, 0.0}), InvalidArgument);
}

TEST_CASE("histogram unaries prefer the matching label") {
  ImageGrid img(2, 4);
  img << 0.1, 0.1, 0.9, 0.9, 0.1, 0.1, 0.9, 0.9;
  MaskGrid mask(2, 4);
  mask << 0, 0, 1, 1, 0, 0, 1, 1;
  const auto fg = IntensityHistogram::from_mask(img, mask, 1);
  const auto bg = IntensityHistogram::from_mask(img, mask, 0);
  CHECK(fg.probability(0.9) == doctest::Approx(5.0 / 36.0));
  CHECK(fg.probability(0.1) == doctest::Approx(1.0 / 36.0));
  CHECK(fg.neg_log_likelihood(0.9) == doctest::Approx(-std::log(5.0 / 36.0)));
  const auto e = build_grid_energy(img, fg, bg, {0.2, 1.0, default_sigma(img)});
  CHECK(e.unary()(2, 1) < e.unary()(2, 0));
  CHECK(e.unary()(0, 0) < e.unary()(0, 1));
}

TEST_CASE("default_sigma") {
  CHECK(default_sigma(ImageGrid::Constant(3, 3, 0.4)) == 1.0);
  ImageGrid img(1, 3);
  img << 0.0, 1.0, 1.0;
  CHECK(default_sigma(img) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("problem file round trip is exact") {
  std::mt19937_64 rng(3);
  const auto e = synthetic::random_grid_energy(4, 3, rng);
  std::stringstream s;
  write_problem(s, e);
  const auto back = read_problem(s);
  CHECK((back.unary().array() == e.unary().array()).all());
  REQUIRE(back.edges().size() == e.edges().size());
  for (std::size_t k = 0; k < e.edges().size(); ++k) {
    CHECK(back.edges()[k].i == e.edges()[k].i);
    CHECK(back.edges()[k].j == e.edges()[k].j);
    CHECK(back.edges()[k].weight == e.edges()[k].weight);
  }
  std::stringstream bad("2 1\n0 1\n0 x\n0 1 1\n");
  CHECK_THROWS_AS(read_problem(bad), IoError);
}
