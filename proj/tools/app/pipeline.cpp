#include "app/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "statcut/errors.hpp"

namespace statcut::app {

namespace {

SmoothnessParams resolved(SmoothnessParams s, const ImageGrid& image) {
  if (s.sigma <= 0.0) s.sigma = default_sigma(image);
  return s;
}

}  // namespace

SeedMasks seeds_from_image(const ImageGrid& seeds) {
  SeedMasks m;
  m.object = (seeds >= 0.75).cast<std::uint8_t>();
  m.background = (seeds <= 0.25).cast<std::uint8_t>();
  return m;
}

PairwiseEnergy seeded_energy(const ImageGrid& image, const SeedMasks& seeds, SmoothnessParams smoothness) {
  if (seeds.object.rows() != image.rows() || seeds.object.cols() != image.cols())
    throw DimensionError("seed image does not match the input image");
  if ((seeds.object == 0).all() || (seeds.background == 0).all())
    throw InvalidArgument("seed image needs both object (white) and background (black) seeds");
  const auto fg = IntensityHistogram::from_mask(image, seeds.object, 1);
  const auto bg = IntensityHistogram::from_mask(image, seeds.background, 1);
  return build_grid_energy(image, fg, bg, resolved(smoothness, image));
}

PairwiseEnergy ground_truth_energy(const ImageGrid& image, const MaskGrid& gt, SmoothnessParams smoothness) {
  if (gt.rows() != image.rows() || gt.cols() != image.cols())
    throw DimensionError("ground-truth mask does not match the input image");
  const auto fg = IntensityHistogram::from_mask(image, gt, 1);
  const auto bg = IntensityHistogram::from_mask(image, gt, 0);
  return build_grid_energy(image, fg, bg, resolved(smoothness, image));
}

PairwiseEnergy table_energy(const ImageGrid& image, const PairwiseEnergy::UnaryTable& unary,
                            SmoothnessParams smoothness) {
  if (unary.rows() != image.size()) throw DimensionError("unary table does not match the image size");
  const auto flat = IntensityHistogram();
  const PairwiseEnergy smooth = build_grid_energy(image, flat, flat, resolved(smoothness, image));
  return PairwiseEnergy(unary, std::vector<Edge>(smooth.edges().begin(), smooth.edges().end()));
}

PairwiseEnergy::UnaryTable read_unary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open unary file " + path.string());
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double a = 0.0;
    double b = 0.0;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw IoError("unary file line needs two numbers: '" + line + "'");
    rows.emplace_back(a, b);
  }
  PairwiseEnergy::UnaryTable t(static_cast<Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t(static_cast<Index>(i), 0) = rows[i].first;
    t(static_cast<Index>(i), 1) = rows[i].second;
  }
  return t;
}

SegmentRun run_segmentation(const PairwiseEnergy& energy, const ConstraintSet& set, Index rows, Index cols,
                            const DualOptions& options, const MaskGrid* gt) {
  SegmentRun run;
  const auto start = std::chrono::steady_clock::now();
  run.result = maximize_dual(energy, set, options);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.mask = labeling_to_mask(run.result.labeling, rows, cols);
  if (gt) {
    MetricsReport m = metrics(run.result.labeling, mask_to_labeling(*gt), set, run.result.certificate.achieved);
    m.runtime = run.seconds;
    m.iterations = run.result.certificate.iterations;
    run.metrics = m;
  }
  return run;
}

std::string combination_name(const std::vector<std::string>& combo) {
  if (combo.empty()) return "No";
  std::string name;
  for (const std::string& f : combo) name += (name.empty() ? "" : "+") + f;
  return name;
}

}  // namespace statcut::app
