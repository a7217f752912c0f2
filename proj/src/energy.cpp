#include "statcut/energy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "statcut/errors.hpp"

namespace statcut {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw IoError(std::string("problem file truncated while reading ") + what);
  T value{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw IoError("problem file: bad " + std::string(what) + " '" + tok + "'");
  return value;
}

}  // namespace

PairwiseEnergy::PairwiseEnergy(UnaryTable unary, std::vector<Edge> edges)
    : unary_(std::move(unary)), edges_(std::move(edges)) {
  if (!unary_.allFinite()) throw InvalidArgument("unary table contains non-finite values");
  const Index n = num_vars();
  std::vector<std::pair<Index, Index>> keys;
  keys.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.j >= n || e.i >= e.j)
      throw InvalidArgument("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                            ") must satisfy 0 <= i < j < n");
    if (!std::isfinite(e.weight)) throw InvalidArgument("non-finite pairwise weight");
    if (e.weight < 0.0)
      throw SubmodularityError("negative pairwise weight " + format_double(e.weight) + " on edge (" +
                               std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    keys.emplace_back(e.i, e.j);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw InvalidArgument("duplicate edge in pairwise energy");
}

double PairwiseEnergy::min_pairwise_weight() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) m = std::min(m, e.weight);
  return m;
}

double evaluate(const PairwiseEnergy& energy, std::span<const std::uint8_t> labeling) {
  if (static_cast<Index>(labeling.size()) != energy.num_vars())
    throw DimensionError("labeling has " + std::to_string(labeling.size()) + " entries, energy has " +
                         std::to_string(energy.num_vars()) + " variables");
  const auto& unary = energy.unary();
  double total = 0.0;
  for (Index i = 0; i < energy.num_vars(); ++i) total += unary(i, labeling[i] ? 1 : 0);
  for (const Edge& e : energy.edges())
    if (labeling[e.i] != labeling[e.j]) total += e.weight;
  return total;
}

PairwiseEnergy add_unary_offsets(const PairwiseEnergy& energy,
                                 const Eigen::Ref<const Eigen::VectorXd>& deltas) {
  if (deltas.size() != energy.num_vars())
    throw DimensionError("unary offsets have " + std::to_string(deltas.size()) + " entries, energy has " +
                         std::to_string(energy.num_vars()) + " variables");
  PairwiseEnergy::UnaryTable unary = energy.unary();
  unary.col(1) += deltas;
  return PairwiseEnergy(std::move(unary), {energy.edges().begin(), energy.edges().end()});
}

PairwiseEnergy scale_pairwise(const PairwiseEnergy& energy, double shift) {
  if (energy.edges().empty()) return energy;
  const double bound = -energy.min_pairwise_weight();
  if (shift < bound)
    throw SearchBoxError("boundary multiplier " + format_double(shift) + " is below the truncation bound " +
                         format_double(bound));
  std::vector<Edge> edges(energy.edges().begin(), energy.edges().end());
  for (Edge& e : edges) e.weight += shift;
  return PairwiseEnergy(energy.unary(), std::move(edges));
}

IntensityHistogram::IntensityHistogram() { counts_.setConstant(1.0); total_ = kBins; }

IntensityHistogram IntensityHistogram::from_mask(const ImageGrid& image, const MaskGrid& mask,
                                                 std::uint8_t label) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols())
    throw DimensionError("seed mask shape does not match image");
  IntensityHistogram hist;
  for (Index r = 0; r < image.rows(); ++r)
    for (Index c = 0; c < image.cols(); ++c)
      if (mask(r, c) == label) hist.add(image(r, c));
  return hist;
}

int IntensityHistogram::bin_of(double intensity) {
  const int b = static_cast<int>(std::floor(intensity * kBins));
  return std::clamp(b, 0, kBins - 1);
}

void IntensityHistogram::add(double intensity) {
  counts_(bin_of(intensity)) += 1.0;
  total_ += 1.0;
}

double IntensityHistogram::probability(double intensity) const { return counts_(bin_of(intensity)) / total_; }

double IntensityHistogram::neg_log_likelihood(double intensity) const { return -std::log(probability(intensity)); }

double default_sigma(const ImageGrid& image) {
  const auto edges = grid_edges(image.rows(), image.cols());
  if (edges.empty()) return 1.0;
  const double* px = image.data();
  double sum = 0.0;
  for (const auto& [i, j] : edges) {
    const double d = px[i] - px[j];
    sum += d * d;
  }
  const double mean = sum / static_cast<double>(edges.size());
  return mean > 0.0 ? std::sqrt(mean) : 1.0;
}

PairwiseEnergy build_grid_energy(const ImageGrid& image, const IntensityHistogram& fg_model,
                                 const IntensityHistogram& bg_model, const SmoothnessParams& smoothness) {
  if (image.size() == 0) throw InvalidArgument("empty image");
  if (!(smoothness.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const Index n = image.size();
  const double* px = image.data();

  PairwiseEnergy::UnaryTable unary(n, 2);
  for (Index i = 0; i < n; ++i) {
    unary(i, 0) = bg_model.neg_log_likelihood(px[i]);
    unary(i, 1) = fg_model.neg_log_likelihood(px[i]);
  }

  const double inv = 1.0 / (2.0 * smoothness.sigma * smoothness.sigma);
  std::vector<Edge> edges;
  const auto pairs = grid_edges(image.rows(), image.cols());
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double d = px[i] - px[j];
    edges.push_back({i, j, smoothness.lambda_s + smoothness.beta * std::exp(-d * d * inv)});
  }
  return PairwiseEnergy(std::move(unary), std::move(edges));
}

void write_problem(std::ostream& out, const PairwiseEnergy& energy) {
  out << energy.num_vars() << ' ' << energy.edges().size() << '\n';
  for (Index i = 0; i < energy.num_vars(); ++i)
    out << format_double(energy.unary()(i, 0)) << ' ' << format_double(energy.unary()(i, 1)) << '\n';
  for (const Edge& e : energy.edges()) out << e.i << ' ' << e.j << ' ' << format_double(e.weight) << '\n';
}

PairwiseEnergy read_problem(std::istream& in) {
  const auto n = parse_token<long long>(in, "variable count");
  const auto m = parse_token<long long>(in, "edge count");
  if (n < 0 || m < 0) throw IoError("problem file: negative counts");
  PairwiseEnergy::UnaryTable unary(n, 2);
  for (Index i = 0; i < n; ++i) {
    unary(i, 0) = parse_token<double>(in, "unary phi(0)");
    unary(i, 1) = parse_token<double>(in, "unary phi(1)");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    Edge e;
    e.i = parse_token<long long>(in, "edge endpoint");
    e.j = parse_token<long long>(in, "edge endpoint");
    e.weight = parse_token<double>(in, "edge weight");
    edges.push_back(e);
  }
  return PairwiseEnergy(std::move(unary), std::move(edges));
}

}  // namespace statcut
