#ifndef STATCUT_IMAGING_HPP
#define STATCUT_IMAGING_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"
#include "statcut/grid.hpp"

namespace statcut {

/// Grayscale PGM (P2/P5, 8 or 16 bit) or PNG, detected from the file's magic bytes.
/// Intensities are normalised to [0, 1].
ImageGrid load_image(const std::filesystem::path& path);
ImageGrid read_pgm(std::istream& in);

/// Any supported image; pixels >= 0.5 become 1.
MaskGrid load_mask(const std::filesystem::path& path);

void save_mask_png(const std::filesystem::path& path, const MaskGrid& mask);  ///< 0 / 255
void save_image_png(const std::filesystem::path& path, const ImageGrid& image);
void save_mask_text(const std::filesystem::path& path, const MaskGrid& mask);  ///< rows of 0/1

Labeling mask_to_labeling(const MaskGrid& mask);
MaskGrid labeling_to_mask(const Labeling& labeling, Index rows, Index cols);

/// Statistics of a ground-truth mask with the same conventions as the constraint
/// families: 0-indexed (h = column, v = row), 4-connected boundary, population
/// variances and covariance about the mask's own mean.
struct GroundTruthStats {
  Index rows = 0;
  Index cols = 0;
  double size = 0.0;
  double boundary = 0.0;
  std::optional<double> mean_h;
  std::optional<double> mean_v;
  std::optional<double> var_h;
  std::optional<double> var_v;
  std::optional<double> covariance;
  Index tile_rows = 2;
  Index tile_cols = 2;
  std::vector<double> tile_sizes;  ///< row-major over equal_tiling(rows, cols, tile_rows, tile_cols)
};

GroundTruthStats extract_stats(const MaskGrid& mask, Index tile_rows = 2, Index tile_cols = 2);

/// [(1 - p) s, (1 + p) s], sorted so lower <= upper. p is a fraction (0.1 for 10%).
Interval relative_bounds(std::optional<double> stat, double p);

struct MetricsReport {
  double er = 0.0;    ///< % of pixels that differ from the ground truth
  double er_a = 0.0;  ///< % of constraints whose achieved value is outside its bounds
  double er_b = 0.0;  ///< mean normalised distance of achieved values to their bounds
  double runtime = 0.0;
  int iterations = 0;
  std::vector<double> deviations;  ///< per-constraint term of er_b
  bool degenerate_denominator = false;
};

/// Distance of c to [a, b] divided by (a + b) / 2, 0 inside. When a + b == 0 the
/// plain distance is returned and `degenerate` is set.
double bound_deviation(double a, double b, double c, bool* degenerate = nullptr);

MetricsReport metrics(const Labeling& pred, const Labeling& gt, const ConstraintSet& set,
                      const std::vector<std::optional<double>>& achieved);

std::string to_json(const GroundTruthStats& stats, int indent = 2);
std::string to_json(const MetricsReport& report, int indent = 2);

}  // namespace statcut

#endif  // STATCUT_IMAGING_HPP
