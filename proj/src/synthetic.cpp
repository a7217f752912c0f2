#include "statcut/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "statcut/errors.hpp"

namespace statcut::synthetic {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Index uniform_int(Rng& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

bool coin(Rng& rng) { return std::bernoulli_distribution(0.5)(rng); }

}  // namespace

PairwiseEnergy random_grid_energy(Index rows, Index cols, Rng& rng, double unary_range, double pairwise_max) {
  const Index n = rows * cols;
  PairwiseEnergy::UnaryTable unary(n, 2);
  for (Index i = 0; i < n; ++i) {
    unary(i, 0) = uniform(rng, -unary_range, unary_range);
    unary(i, 1) = uniform(rng, -unary_range, unary_range);
  }
  std::vector<Edge> edges;
  for (const auto& [i, j] : grid_edges(rows, cols)) edges.push_back({i, j, uniform(rng, 0.0, pairwise_max)});
  return PairwiseEnergy(std::move(unary), std::move(edges));
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Sz: return "Sz";
    case Family::Br: return "Br";
    case Family::MnH: return "Mn_h";
    case Family::MnV: return "Mn_v";
    case Family::VrH: return "Vr_h";
    case Family::VrV: return "Vr_v";
    case Family::Cv: return "Cv";
    case Family::Lsz: return "Lsz";
  }
  return "?";
}

std::vector<Constraint> random_constraints(Family family, const PairwiseEnergy& energy, Index rows, Index cols,
                                           Rng& rng) {
  const Index n = rows * cols;
  if (energy.num_vars() != n) throw DimensionError("energy does not match the grid");
  std::vector<Constraint> out;
  switch (family) {
    case Family::Sz: {
      const double a = static_cast<double>(uniform_int(rng, 1, std::max<Index>(1, n - 1)));
      const double w = coin(rng) ? 0.0 : static_cast<double>(uniform_int(rng, 1, std::max<Index>(1, n / 4)));
      out.push_back(size_constraint(n, a, std::min<double>(a + w, static_cast<double>(n))));
      break;
    }
    case Family::Br: {
      const auto m = static_cast<Index>(energy.edges().size());
      const double a = static_cast<double>(uniform_int(rng, 0, std::max<Index>(0, m / 2)));
      const double w = static_cast<double>(uniform_int(rng, 0, 3));
      out.push_back(Constraint::boundary_length(a, a + w));
      break;
    }
    case Family::MnH:
    case Family::MnV: {
      const Axis axis = family == Family::MnH ? Axis::Horizontal : Axis::Vertical;
      const double extent = static_cast<double>((axis == Axis::Horizontal ? cols : rows) - 1);
      const double a = uniform(rng, 0.0, extent);
      const double w = coin(rng) ? 0.0 : uniform(rng, 0.0, 1.0);
      out.push_back(mean_constraint(axis, rows, cols, a, std::min(a + w, extent)));
      break;
    }
    case Family::VrH:
    case Family::VrV: {
      const Axis axis = family == Family::VrH ? Axis::Horizontal : Axis::Vertical;
      const double extent = static_cast<double>((axis == Axis::Horizontal ? cols : rows) - 1);
      const double mu = uniform(rng, 0.0, extent);
      const double a = uniform(rng, 0.0, extent * extent / 4.0);
      const double w = uniform(rng, 0.0, extent / 2.0);
      out.push_back(variance_constraint(axis, rows, cols, mu, a, a + w));
      break;
    }
    case Family::Cv: {
      const double mu_h = uniform(rng, 0.0, static_cast<double>(cols - 1));
      const double mu_v = uniform(rng, 0.0, static_cast<double>(rows - 1));
      const double a = uniform(rng, -1.0, 1.0);
      const double w = uniform(rng, 0.0, 0.5);
      out.push_back(covariance_constraint(rows, cols, mu_h, mu_v, a, a + w));
      break;
    }
    case Family::Lsz: {
      const auto tiles = equal_tiling(rows, cols, std::min<Index>(2, rows), std::min<Index>(2, cols));
      int k = 0;
      for (const Tile& t : tiles) {
        const Index area = t.height * t.width;
        const double a = static_cast<double>(uniform_int(rng, 0, area));
        const double w = coin(rng) ? 0.0 : 1.0;
        out.push_back(local_size_constraint(t, rows, cols, a, std::min<double>(a + w, static_cast<double>(area)),
                                            "lsz_" + std::to_string(k++)));
      }
      break;
    }
  }
  return out;
}

Fixture make_fixture(int index, Index size, std::uint64_t seed) {
  Rng rng(seed * 7919u + static_cast<std::uint64_t>(index) * 104729u + 17u);
  Fixture f;
  f.name = "fixture_" + std::to_string(index);
  f.image.resize(size, size);
  f.gt.resize(size, size);

  const double s = static_cast<double>(size);
  const double cx = s / 2.0 + uniform(rng, -0.08, 0.08) * s;
  const double cy = s / 2.0 + uniform(rng, -0.08, 0.08) * s;
  const double ra = uniform(rng, 0.16, 0.26) * s;
  const double rb = uniform(rng, 0.12, 0.22) * s;
  const double angle = uniform(rng, 0.0, 3.14159265358979);
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);

  struct Blob {
    double x, y, r;
  };
  std::vector<Blob> clutter;
  const int num_blobs = 3 + static_cast<int>(uniform_int(rng, 0, 2));
  for (int tries = 0; static_cast<int>(clutter.size()) < num_blobs && tries < 200; ++tries) {
    const double r = uniform(rng, 0.03, 0.06) * s;
    const double x = uniform(rng, r, s - r);
    const double y = uniform(rng, r, s - r);
    if (std::hypot(x - cx, y - cy) > std::max(ra, rb) + r + 0.05 * s) clutter.push_back({x, y, r});
  }

  const double fg = 0.62;
  const double bg = 0.38;
  std::normal_distribution<double> noise(0.0, 0.16);
  for (Index r = 0; r < size; ++r)
    for (Index c = 0; c < size; ++c) {
      const double dx = static_cast<double>(c) - cx;
      const double dy = static_cast<double>(r) - cy;
      const double u = (dx * ca + dy * sa) / ra;
      const double v = (-dx * sa + dy * ca) / rb;
      const bool inside = u * u + v * v <= 1.0;
      bool blob = false;
      for (const Blob& b : clutter) blob = blob || std::hypot(static_cast<double>(c) - b.x, static_cast<double>(r) - b.y) <= b.r;
      f.gt(r, c) = inside ? 1 : 0;
      const double base = (inside || blob) ? fg : bg;
      f.image(r, c) = std::clamp(base + noise(rng), 0.0, 1.0);
    }
  return f;
}

}  // namespace statcut::synthetic
