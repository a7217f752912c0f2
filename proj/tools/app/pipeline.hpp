#ifndef STATCUT_APP_PIPELINE_HPP
#define STATCUT_APP_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/dual.hpp"
#include "statcut/energy.hpp"
#include "statcut/imaging.hpp"

namespace statcut::app {

/// Seeds image: bright pixels (>= 0.75) are object seeds, dark ones (<= 0.25)
/// background seeds, the rest unlabeled.
struct SeedMasks {
  MaskGrid object;
  MaskGrid background;
};
SeedMasks seeds_from_image(const ImageGrid& seeds);

/// Grid energy with histograms estimated from the seed pixels.
PairwiseEnergy seeded_energy(const ImageGrid& image, const SeedMasks& seeds, SmoothnessParams smoothness);

/// Benchmark mode: histograms estimated from the ground-truth mask.
PairwiseEnergy ground_truth_energy(const ImageGrid& image, const MaskGrid& gt, SmoothnessParams smoothness);

/// Grid energy whose unaries come from a table (one "phi0 phi1" line per pixel).
PairwiseEnergy table_energy(const ImageGrid& image, const PairwiseEnergy::UnaryTable& unary,
                            SmoothnessParams smoothness);
PairwiseEnergy::UnaryTable read_unary_file(const std::filesystem::path& path);

struct SegmentRun {
  DualResult result;
  MaskGrid mask;
  double seconds = 0.0;
  std::optional<MetricsReport> metrics;  ///< when a ground truth is known
};

SegmentRun run_segmentation(const PairwiseEnergy& energy, const ConstraintSet& set, Index rows, Index cols,
                            const DualOptions& options, const MaskGrid* gt = nullptr);

/// "No", "Sz", "Sz+Vr", ...
std::string combination_name(const std::vector<std::string>& combo);

}  // namespace statcut::app

#endif  // STATCUT_APP_PIPELINE_HPP
