#include "app/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace statcut::app {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string normalize_key(std::string key) {
  key = trim(key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

double parse_double(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError("bad number '" + t + "' for " + what);
  return v;
}

long long parse_int(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError("bad integer '" + t + "' for " + what);
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// "RxC" -> (R, C)
std::pair<Index, Index> parse_dims(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  const auto x = t.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("expected RxC for " + what + ", got '" + t + "'");
  const auto r = parse_int(t.substr(0, x), what);
  const auto c = parse_int(t.substr(x + 1), what);
  if (r <= 0 || c <= 0) throw ConfigError(what + " dimensions must be positive");
  return {static_cast<Index>(r), static_cast<Index>(c)};
}

double parse_percent(std::string_view text, const std::string& what) {
  std::string t = trim(text);
  for (const std::string prefix : {"\xC2\xB1", "+-", "+/-", "+"})
    if (t.rfind(prefix, 0) == 0) {
      t = t.substr(prefix.size());
      break;
    }
  if (t.empty() || t.back() != '%') throw ConfigError("expected a percentage for " + what + ", got '" + t + "'");
  const double p = parse_double(t.substr(0, t.size() - 1), what);
  if (p < 0.0) throw ConfigError(what + " must be non-negative");
  return p / 100.0;
}

std::optional<double> require_stat(const std::optional<GroundTruthStats>& gt, const std::string& family,
                                   std::optional<double> GroundTruthStats::*field) {
  if (!gt) throw ConfigError("relative bounds for '" + family + "' need a ground-truth mask (--gt)");
  return (*gt).*field;
}

}  // namespace

BoundSpec parse_bounds(std::string_view text) {
  const std::string t = trim(text);
  BoundSpec spec;
  if (t.empty() || t == "gap" || t == "default") return spec;
  if (t.front() == '[') {
    if (t.back() != ']') throw ConfigError("unterminated bound list '" + t + "'");
    spec.mode = BoundSpec::Mode::Absolute;
    for (const std::string& pair : split(std::string_view(t).substr(1, t.size() - 2), ';')) {
      const auto ab = split(pair, ',');
      if (ab.size() != 2) throw ConfigError("expected 'a,b' in bounds '" + t + "'");
      Interval iv{parse_double(ab[0], "lower bound"), parse_double(ab[1], "upper bound")};
      if (iv.lower > iv.upper) throw ConfigError("lower bound above upper bound in '" + t + "'");
      spec.absolute.push_back(iv);
    }
    return spec;
  }
  spec.mode = BoundSpec::Mode::Relative;
  spec.relative = parse_percent(t, "relative bounds");
  return spec;
}

bool RunConfig::has_relative_bounds() const {
  return std::any_of(constraints.begin(), constraints.end(),
                     [](const ConstraintRequest& r) { return r.bounds.mode != BoundSpec::Mode::Absolute; });
}

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  Settings settings;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty() || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    settings[normalize_key(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return settings;
}

std::vector<std::vector<std::string>> parse_combos(std::string_view text) {
  std::vector<std::vector<std::string>> combos;
  for (const std::string& item : split(text, ';')) {
    if (item.empty()) continue;
    std::vector<std::string> combo;
    std::string joined = item;
    std::replace(joined.begin(), joined.end(), '+', ',');
    if (item != "No" && item != "no" && item != "none")
      for (const std::string& f : split(joined, ',')) {
        static const std::vector<std::string> known = {"Sz", "Br", "Mn", "Vr", "Cv", "Lsz"};
        if (std::find(known.begin(), known.end(), f) == known.end())
          throw ConfigError("unknown constraint family '" + f + "' in combination '" + item + "'");
        combo.push_back(f);
      }
    combos.push_back(std::move(combo));
  }
  return combos;
}

RunConfig config_from_settings(const Settings& raw) {
  Settings settings;
  for (const auto& [k, v] : raw) settings[normalize_key(k)] = v;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = settings.find(key);
    if (it == settings.end()) return std::nullopt;
    return it->second;
  };

  for (const std::string axisless : {"mn", "vr"}) {
    auto it = settings.find(axisless);
    if (it == settings.end()) continue;
    for (const std::string suffix : {"-h", "-v"}) settings.try_emplace(axisless + suffix, it->second);
    settings.erase(it);
  }

  static const std::vector<std::string> known = {
      "image", "gt", "seeds", "unary", "problem", "sz", "br", "mn-h", "mn-v", "vr-h", "vr-v", "cv", "lsz",
      "gap", "center", "lambda-s", "beta", "sigma", "tol", "max-iters", "out", "trace", "seed", "instances",
      "grid", "cap", "families", "data", "synthetic", "fixture-size", "combos", "config"};
  for (const auto& [k, v] : settings)
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown setting '" + k + "'");

  RunConfig c;
  if (auto v = get("image")) c.image = *v;
  if (auto v = get("gt")) c.gt = *v;
  if (auto v = get("seeds")) c.seeds = *v;
  if (auto v = get("unary")) c.unary = *v;
  if (auto v = get("problem")) c.problem = *v;

  for (const std::string& family : family_keys()) {
    auto v = get(family);
    if (!v) continue;
    ConstraintRequest req;
    req.family = family;
    std::string text = *v;
    if (family == "lsz") {
      const auto colon = text.find(':');
      const std::string head = trim(text.substr(0, colon));
      const bool has_dims = !head.empty() && head.find_first_of("xX") != std::string::npos && head.front() != '[';
      if (has_dims) {
        std::tie(req.tile_rows, req.tile_cols) = parse_dims(head, "lsz tiling");
        text = colon == std::string::npos ? std::string() : text.substr(colon + 1);
      }
    }
    req.bounds = parse_bounds(text);
    if (req.bounds.mode == BoundSpec::Mode::Absolute) {
      const std::size_t expected = family == "lsz" ? static_cast<std::size_t>(req.tile_rows * req.tile_cols) : 1;
      if (req.bounds.absolute.size() != expected)
        throw ConfigError("'" + family + "' needs " + std::to_string(expected) + " bound pair(s)");
    }
    c.constraints.push_back(std::move(req));
  }

  if (auto v = get("gap")) c.gap = parse_percent(*v, "gap");
  if (auto v = get("center")) {
    const auto hv = split(*v, ',');
    if (hv.size() != 2) throw ConfigError("center expects 'h,v'");
    c.center = std::make_pair(parse_double(hv[0], "center h"), parse_double(hv[1], "center v"));
  }
  if (auto v = get("lambda-s")) c.smoothness.lambda_s = parse_double(*v, "lambda-s");
  if (auto v = get("beta")) c.smoothness.beta = parse_double(*v, "beta");
  if (auto v = get("sigma")) c.smoothness.sigma = parse_double(*v, "sigma");
  if (auto v = get("tol")) c.tol = parse_double(*v, "tol");
  if (auto v = get("max-iters")) c.max_iters = static_cast<int>(parse_int(*v, "max-iters"));
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("trace")) c.trace = std::filesystem::path(*v);
  if (auto v = get("seed")) c.seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
  if (auto v = get("instances")) c.instances = static_cast<int>(parse_int(*v, "instances"));
  if (auto v = get("grid")) std::tie(c.grid_rows, c.grid_cols) = parse_dims(*v, "grid");
  if (auto v = get("cap")) c.cap = static_cast<int>(parse_int(*v, "cap"));
  if (auto v = get("families")) c.families = split(*v, ',');
  if (auto v = get("data")) c.data = *v;
  if (auto v = get("synthetic")) c.synthetic = static_cast<int>(parse_int(*v, "synthetic"));
  if (auto v = get("fixture-size")) c.fixture_size = static_cast<Index>(parse_int(*v, "fixture-size"));
  if (auto v = get("combos")) c.combos = parse_combos(*v);

  if (c.smoothness.lambda_s < 0.0 || c.smoothness.beta < 0.0) throw ConfigError("smoothness weights must be >= 0");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.max_iters && *c.max_iters <= 0) throw ConfigError("max-iters must be positive");
  if (c.instances < 0) throw ConfigError("instances must be non-negative");
  if (c.fixture_size < 4) throw ConfigError("fixture-size must be at least 4");
  for (const ConstraintRequest& r : c.constraints)
    if (r.bounds.mode == BoundSpec::Mode::DefaultGap && !c.gap)
      throw ConfigError("'" + r.family + "' has no bounds and no --gap was given");
  return c;
}

ConstraintSet build_image_constraints(const RunConfig& config, Index rows, Index cols,
                                      const std::optional<GroundTruthStats>& gt) {
  std::vector<Constraint> out;
  const Index n = rows * cols;

  for (const ConstraintRequest& req : config.constraints) {
    const std::string& f = req.family;
    const bool absolute = req.bounds.mode == BoundSpec::Mode::Absolute;
    const double p = req.bounds.mode == BoundSpec::Mode::Relative ? req.bounds.relative : config.gap.value_or(0.0);
    auto bounds_for = [&](std::optional<double> stat) {
      return absolute ? req.bounds.absolute.front() : relative_bounds(stat, p);
    };
    auto gt_stat = [&](std::optional<double> GroundTruthStats::*field) -> std::optional<double> {
      if (absolute) return std::nullopt;
      const auto s = require_stat(gt, f, field);
      if (!s) throw ConfigError("ground-truth mask is empty; '" + f + "' is undefined");
      return s;
    };
    auto centre = [&](bool horizontal) -> double {
      if (config.center) return horizontal ? config.center->first : config.center->second;
      if (!gt || !(horizontal ? gt->mean_h : gt->mean_v))
        throw ConfigError("'" + f + "' needs a centre: pass --center or a non-empty --gt");
      return horizontal ? *gt->mean_h : *gt->mean_v;
    };

    if (f == "sz") {
      if (!absolute && !gt) throw ConfigError("relative bounds for 'sz' need a ground-truth mask (--gt)");
      const Interval iv = absolute ? req.bounds.absolute.front() : relative_bounds(gt->size, p);
      out.push_back(size_constraint(n, iv.lower, iv.upper));
    } else if (f == "br") {
      if (!absolute && !gt) throw ConfigError("relative bounds for 'br' need a ground-truth mask (--gt)");
      const Interval iv = absolute ? req.bounds.absolute.front() : relative_bounds(gt->boundary, p);
      out.push_back(Constraint::boundary_length(iv.lower, iv.upper));
    } else if (f == "mn-h" || f == "mn-v") {
      const bool h = f == "mn-h";
      const Interval iv = bounds_for(gt_stat(h ? &GroundTruthStats::mean_h : &GroundTruthStats::mean_v));
      out.push_back(mean_constraint(h ? Axis::Horizontal : Axis::Vertical, rows, cols, iv.lower, iv.upper));
    } else if (f == "vr-h" || f == "vr-v") {
      const bool h = f == "vr-h";
      const Interval iv = bounds_for(gt_stat(h ? &GroundTruthStats::var_h : &GroundTruthStats::var_v));
      out.push_back(variance_constraint(h ? Axis::Horizontal : Axis::Vertical, rows, cols, centre(h), iv.lower,
                                        iv.upper));
    } else if (f == "cv") {
      const Interval iv = bounds_for(gt_stat(&GroundTruthStats::covariance));
      out.push_back(covariance_constraint(rows, cols, centre(true), centre(false), iv.lower, iv.upper));
    } else if (f == "lsz") {
      const auto tiles = equal_tiling(rows, cols, req.tile_rows, req.tile_cols);
      if (!absolute) {
        if (!gt) throw ConfigError("relative bounds for 'lsz' need a ground-truth mask (--gt)");
        if (gt->tile_rows != req.tile_rows || gt->tile_cols != req.tile_cols ||
            gt->tile_sizes.size() != tiles.size())
          throw ConfigError("ground-truth statistics were extracted with a different lsz tiling");
      }
      for (std::size_t t = 0; t < tiles.size(); ++t) {
        const Interval iv = absolute ? req.bounds.absolute[t] : relative_bounds(gt->tile_sizes[t], p);
        out.push_back(local_size_constraint(tiles[t], rows, cols, iv.lower, iv.upper, "lsz_" + std::to_string(t)));
      }
    } else {
      throw ConfigError("unknown constraint family '" + f + "'");
    }
  }
  return ConstraintSet(std::move(out));
}

ConstraintSet combination_constraints(const std::vector<std::string>& combo, const GroundTruthStats& gt, double gap) {
  RunConfig config;
  config.gap = gap;
  auto add = [&](const std::string& family) {
    ConstraintRequest r;
    r.family = family;
    r.bounds.mode = BoundSpec::Mode::Relative;
    r.bounds.relative = gap;
    r.tile_rows = gt.tile_rows;
    r.tile_cols = gt.tile_cols;
    config.constraints.push_back(r);
  };
  // canonical order regardless of how the combination was written
  for (const std::string fam : {"Sz", "Br", "Mn", "Vr", "Cv", "Lsz"}) {
    if (std::find(combo.begin(), combo.end(), fam) == combo.end()) continue;
    if (fam == "Sz") add("sz");
    if (fam == "Br") add("br");
    if (fam == "Mn") {
      add("mn-h");
      add("mn-v");
    }
    if (fam == "Vr") {
      add("vr-h");
      add("vr-v");
    }
    if (fam == "Cv") add("cv");
    if (fam == "Lsz") add("lsz");
  }
  return build_image_constraints(config, gt.rows, gt.cols, gt);
}

}  // namespace statcut::app
