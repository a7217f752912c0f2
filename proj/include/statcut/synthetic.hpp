#ifndef STATCUT_SYNTHETIC_HPP
#define STATCUT_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"
#include "statcut/grid.hpp"

// Seeded generators for test instances and segmentation fixtures.

namespace statcut::synthetic {

using Rng = std::mt19937_64;

/// rows x cols 4-connected grid, phi uniform in [-unary_range, unary_range],
/// C_ij uniform in [0, pairwise_max].
PairwiseEnergy random_grid_energy(Index rows, Index cols, Rng& rng, double unary_range = 5.0,
                                  double pairwise_max = 3.0);

enum class Family { Sz, Br, MnH, MnV, VrH, VrV, Cv, Lsz };

const char* to_string(Family f);

/// A constraint of the given family with random bounds that keep the problem
/// interesting on small grids (the interval overlaps the achievable range).
/// Lsz yields one constraint per tile of a 2x2 tiling.
std::vector<Constraint> random_constraints(Family family, const PairwiseEnergy& energy, Index rows, Index cols,
                                           Rng& rng);

struct Fixture {
  std::string name;
  ImageGrid image;
  MaskGrid gt;
};

/// Ellipse object on a noisy background with object-coloured clutter blobs
/// away from the object; exact ground truth. Deterministic in (index, seed).
Fixture make_fixture(int index, Index size, std::uint64_t seed);

}  // namespace statcut::synthetic

#endif  // STATCUT_SYNTHETIC_HPP
