#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "app/pipeline.hpp"
#include "statcut/reports.hpp"
#include "statcut/synthetic.hpp"
#include "statcut/verifier.hpp"

namespace statcut::app {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << std::setprecision(17);
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

DualOptions dual_options(const RunConfig& config) {
  DualOptions o;
  o.tolerance = config.tol;
  o.max_iterations = config.max_iters;
  return o;
}

std::optional<Index> tiling_rows(const RunConfig& config) {
  for (const ConstraintRequest& r : config.constraints)
    if (r.family == "lsz") return r.tile_rows;
  return std::nullopt;
}

std::optional<Index> tiling_cols(const RunConfig& config) {
  for (const ConstraintRequest& r : config.constraints)
    if (r.family == "lsz") return r.tile_cols;
  return std::nullopt;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream s;
  s << std::setprecision(6) << '(';
  for (Index k = 0; k < v.size(); ++k) s << (k ? ", " : "") << v(k);
  s << ')';
  return s.str();
}

std::vector<synthetic::Family> verify_families(const std::vector<std::string>& names) {
  static const std::map<std::string, std::vector<synthetic::Family>> table = {
      {"sz", {synthetic::Family::Sz}},
      {"br", {synthetic::Family::Br}},
      {"mn", {synthetic::Family::MnH, synthetic::Family::MnV}},
      {"mn-h", {synthetic::Family::MnH}},
      {"mn-v", {synthetic::Family::MnV}},
      {"vr", {synthetic::Family::VrH, synthetic::Family::VrV}},
      {"vr-h", {synthetic::Family::VrH}},
      {"vr-v", {synthetic::Family::VrV}},
      {"cv", {synthetic::Family::Cv}},
      {"lsz", {synthetic::Family::Lsz}},
  };
  std::vector<synthetic::Family> out;
  for (std::string n : names) {
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return ch == '_' ? '-' : std::tolower(ch); });
    auto it = table.find(n);
    if (it == table.end()) throw ConfigError("unknown constraint family '" + n + "'");
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  if (out.empty()) throw ConfigError("verify needs at least one constraint family");
  return out;
}

struct DataItem {
  std::string name;
  ImageGrid image;
  MaskGrid gt;
};

std::vector<DataItem> load_dataset(const RunConfig& config) {
  std::vector<DataItem> items;
  if (!config.data.empty()) {
    if (!fs::is_directory(config.data)) throw IoError("dataset directory not found: " + config.data.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.data))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      const std::string ext = p.extension().string();
      const std::string stem = p.stem().string();
      if ((ext != ".png" && ext != ".pgm") || (stem.size() > 3 && stem.ends_with("_gt"))) continue;
      fs::path gt;
      for (const char* e : {".png", ".pgm"}) {
        const fs::path candidate = p.parent_path() / (stem + "_gt" + e);
        if (fs::exists(candidate)) gt = candidate;
      }
      if (gt.empty()) continue;
      DataItem item{stem, load_image(p), load_mask(gt)};
      if (item.image.rows() != item.gt.rows() || item.image.cols() != item.gt.cols())
        throw DimensionError("mask of " + stem + " does not match its image");
      items.push_back(std::move(item));
    }
  }
  for (int k = 0; k < config.synthetic; ++k) {
    synthetic::Fixture f = synthetic::make_fixture(k, config.fixture_size, config.seed);
    items.push_back({f.name, std::move(f.image), std::move(f.gt)});
  }
  return items;
}

}  // namespace

int exit_code_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const IoError*>(&e)) return kIoFailure;
  if (dynamic_cast<const SearchBoxError*>(&e)) return kInfeasibleBox;
  if (dynamic_cast<const CapExceeded*>(&e)) return kCapExceeded;
  if (dynamic_cast<const InvalidArgument*>(&e)) return kConfigError;
  if (dynamic_cast<const DimensionError*>(&e)) return kConfigError;
  if (dynamic_cast<const SubmodularityError*>(&e)) return kConfigError;
  return kConfigError;
}

int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.image.empty()) throw ConfigError("segment needs --image");
  const ImageGrid image = load_image(config.image);
  const Index rows = image.rows();
  const Index cols = image.cols();

  std::optional<MaskGrid> gt;
  std::optional<GroundTruthStats> stats;
  if (!config.gt.empty()) {
    gt = load_mask(config.gt);
    if (gt->rows() != rows || gt->cols() != cols) throw ConfigError("ground-truth mask does not match the image");
    stats = extract_stats(*gt, tiling_rows(config).value_or(2), tiling_cols(config).value_or(2));
  }
  if (config.has_relative_bounds() && !gt) throw ConfigError("relative (±p%) bounds need a ground-truth mask (--gt)");

  PairwiseEnergy energy;
  if (!config.problem.empty()) {
    std::ifstream in(config.problem);
    if (!in) throw IoError("cannot open problem file " + config.problem.string());
    energy = read_problem(in);
    if (energy.num_vars() != rows * cols) throw ConfigError("problem file does not match the image size");
  } else if (!config.unary.empty()) {
    energy = table_energy(image, read_unary_file(config.unary), config.smoothness);
  } else if (!config.seeds.empty()) {
    energy = seeded_energy(image, seeds_from_image(load_image(config.seeds)), config.smoothness);
  } else if (gt) {
    energy = ground_truth_energy(image, *gt, config.smoothness);
  } else {
    throw ConfigError("segment needs --seeds, --unary, --problem or a ground-truth mask for the appearance model");
  }

  const ConstraintSet set = build_image_constraints(config, rows, cols, stats);
  DualOptions options = dual_options(config);
  try {
    options.box = default_search_box(set, energy);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasibleBox;
  }
  if ((options.box->lower.array() > options.box->upper.array()).any()) {
    err << "error: empty multiplier search box\n";
    return kInfeasibleBox;
  }

  const SegmentRun run = run_segmentation(energy, set, rows, cols, options, gt ? &*gt : nullptr);
  const CertificateReport& cert = run.result.certificate;

  ensure_dir(config.out);
  save_mask_png(config.out / "mask.png", run.mask);
  save_mask_text(config.out / "mask.txt", run.mask);
  open_output(config.out / "certificate.json") << to_json(cert, set) << '\n';
  {
    auto trace = open_output(config.trace.value_or(config.out / "trace.csv"));
    write_trace_csv(trace, run.result.trace, set);
  }
  if (run.metrics) open_output(config.out / "metrics.json") << to_json(*run.metrics) << '\n';

  out << "pixels " << rows * cols << ", constraints " << set.size() << ", termination " << to_string(cert.termination)
      << ", iterations " << cert.iterations << ", energy " << cert.energy << ", gap " << cert.gap << '\n';
  for (Index k = 0; k < set.size(); ++k) {
    const auto& h = cert.achieved[static_cast<std::size_t>(k)];
    out << "  " << set[k].name << " = " << (h ? std::to_string(*h) : std::string("undefined")) << " in ["
        << set[k].lower << ", " << set[k].upper << "] " << (cert.satisfied[static_cast<std::size_t>(k)] ? "ok" : "violated")
        << '\n';
  }
  if (run.metrics)
    out << "ER " << run.metrics->er << "  ER_a " << run.metrics->er_a << "  ER_b " << run.metrics->er_b << '\n';
  for (const std::string& w : cert.warnings) err << "warning: " << w << '\n';
  out << "wrote " << config.out.string() << '\n';
  return cert.terminated ? kOk : kIterationCap;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto families = verify_families(config.families);
  std::optional<PairwiseEnergy> fixed;
  Index rows = config.grid_rows;
  Index cols = config.grid_cols;
  if (!config.problem.empty()) {
    std::ifstream in(config.problem);
    if (!in) throw IoError("cannot open problem file " + config.problem.string());
    fixed = read_problem(in);
    if (fixed->num_vars() != rows * cols) {
      const bool grid_free = std::all_of(families.begin(), families.end(), [](synthetic::Family f) {
        return f == synthetic::Family::Sz || f == synthetic::Family::Br;
      });
      if (!grid_free) throw ConfigError("problem size does not match --grid, which the chosen families need");
      rows = 1;
      cols = fixed->num_vars();
    }
  }
  const Index n = rows * cols;
  if (n > config.cap)
    throw CapExceeded("instance has " + std::to_string(n) + " variables, over the exhaustive cap of " +
                      std::to_string(config.cap));
  if (rows <= 0 || cols <= 0) throw ConfigError("grid must be non-empty");

  const int instances = fixed ? std::max(config.instances, 1) : config.instances;
  int failures = 0;
  for (int k = 0; k < instances; ++k) {
    synthetic::Rng rng(config.seed * 1000003u + static_cast<std::uint64_t>(k));
    const PairwiseEnergy energy = fixed ? *fixed : synthetic::random_grid_energy(rows, cols, rng);
    std::vector<Constraint> list;
    for (synthetic::Family f : families) {
      auto more = synthetic::random_constraints(f, energy, rows, cols, rng);
      list.insert(list.end(), more.begin(), more.end());
    }
    const ConstraintSet set(std::move(list));
    const DualResult r = maximize_dual(energy, set, dual_options(config));
    const auto check = verify::check_certificate(energy, set, r.labeling, r.certificate.slack, config.cap);
    const auto brute = verify::brute_constrained_min(energy, set, config.cap);
    const bool pass = check.holds && check.fixed_slack_holds;
    failures += pass ? 0 : 1;
    out << "instance " << k << ": " << (pass ? "PASS" : "FAIL") << "  E(x*)=" << r.certificate.energy
        << "  b*=" << format_vector(r.certificate.effective_statistics) << "  class_min=" << check.class_min
        << "  iterations=" << r.certificate.iterations << "  constrained_min="
        << (brute ? std::to_string(brute->value) : std::string("infeasible")) << '\n';
    if (!pass) {
      err << "instance " << k << ": labeling with energy " << check.class_min << " beats the certified "
          << check.certified_energy << '\n';
    }
  }
  out << (instances - failures) << "/" << instances << " PASS\n";
  return failures == 0 ? kOk : kVerifyFailed;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<DataItem> data = load_dataset(config);
  if (data.empty()) throw ConfigError("benchmark dataset is empty (use --data DIR with NAME and NAME_gt images, or --synthetic N)");
  const auto combos = config.combos.empty() ? parse_combos("No;Sz;Vr;Sz+Vr") : config.combos;
  const double gap = config.gap.value_or(0.1);

  ensure_dir(config.out);
  auto per_image = open_output(config.out / "bench_images.csv");
  per_image << "image,combination,er,er_a,er_b,time,iterations,termination\n";

  struct Sum {
    double er = 0, er_a = 0, er_b = 0, time = 0, iterations = 0;
    int count = 0;
  };
  std::vector<Sum> sums(combos.size());
  for (const DataItem& item : data) {
    const GroundTruthStats stats = extract_stats(item.gt);
    const PairwiseEnergy energy = ground_truth_energy(item.image, item.gt, config.smoothness);
    for (std::size_t c = 0; c < combos.size(); ++c) {
      const ConstraintSet set = combination_constraints(combos[c], stats, gap);
      const SegmentRun run =
          run_segmentation(energy, set, item.image.rows(), item.image.cols(), dual_options(config), &item.gt);
      const MetricsReport& m = *run.metrics;
      per_image << item.name << ',' << combination_name(combos[c]) << ',' << m.er << ',' << m.er_a << ',' << m.er_b
                << ',' << m.runtime << ',' << m.iterations << ',' << to_string(run.result.certificate.termination)
                << '\n';
      Sum& s = sums[c];
      s.er += m.er;
      s.er_a += m.er_a;
      s.er_b += m.er_b;
      s.time += m.runtime;
      s.iterations += m.iterations;
      ++s.count;
      if (!run.result.certificate.terminated)
        err << "warning: " << item.name << " / " << combination_name(combos[c]) << " hit the iteration cap\n";
    }
  }

  auto summary = open_output(config.out / "bench_summary.csv");
  summary << "combination,er,er_a,er_b,time,iterations,images\n";
  out << std::left << std::setw(16) << "combination" << std::setw(10) << "ER" << std::setw(10) << "ER_a"
      << std::setw(10) << "ER_b" << std::setw(10) << "time" << "iterations\n";
  for (std::size_t c = 0; c < combos.size(); ++c) {
    const Sum& s = sums[c];
    const double k = static_cast<double>(s.count);
    summary << combination_name(combos[c]) << ',' << s.er / k << ',' << s.er_a / k << ',' << s.er_b / k << ','
            << s.time / k << ',' << s.iterations / k << ',' << s.count << '\n';
    out << std::setw(16) << combination_name(combos[c]) << std::setprecision(4) << std::setw(10) << s.er / k
        << std::setw(10) << s.er_a / k << std::setw(10) << s.er_b / k << std::setw(10) << s.time / k
        << s.iterations / k << '\n';
  }
  out << "wrote " << (config.out / "bench_summary.csv").string() << '\n';
  return kOk;
}

int cmd_fixtures(const RunConfig& config, std::ostream& out, std::ostream&) {
  const int count = config.synthetic > 0 ? config.synthetic : 20;
  ensure_dir(config.out);
  for (int k = 0; k < count; ++k) {
    const synthetic::Fixture f = synthetic::make_fixture(k, config.fixture_size, config.seed);
    save_image_png(config.out / (f.name + ".png"), f.image);
    save_mask_png(config.out / (f.name + "_gt.png"), f.gt);
  }
  out << "wrote " << count << " fixtures to " << config.out.string() << '\n';
  return kOk;
}

}  // namespace statcut::app
