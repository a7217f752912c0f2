#ifndef STATCUT_GRID_HPP
#define STATCUT_GRID_HPP

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace statcut {

using Index = Eigen::Index;

/// Row-major intensity grid, values in [0, 1].
using ImageGrid = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-major binary mask (0 background, 1 object).
using MaskGrid = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Variable index of pixel (row, col); variables are numbered row-major.
inline Index pixel_index(Index row, Index col, Index width) { return row * width + col; }

/// The 4-connected edge set of a rows x cols grid as (i, j) pairs with i < j.
///
/// Order: for each pixel in row-major order, its right neighbour then its lower
/// neighbour. The energy builder and the boundary-length statistic of ground
/// truth masks both use this enumeration, so their edge sets coincide.
inline std::vector<std::pair<Index, Index>> grid_edges(Index rows, Index cols) {
  std::vector<std::pair<Index, Index>> edges;
  if (rows <= 0 || cols <= 0) return edges;
  edges.reserve(static_cast<std::size_t>(2 * rows * cols));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const Index i = pixel_index(r, c, cols);
      if (c + 1 < cols) edges.emplace_back(i, i + 1);
      if (r + 1 < rows) edges.emplace_back(i, i + cols);
    }
  }
  return edges;
}

}  // namespace statcut

#endif  // STATCUT_GRID_HPP
