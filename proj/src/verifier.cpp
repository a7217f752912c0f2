#include "statcut/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "statcut/errors.hpp"

namespace statcut::verify {

namespace {

void check_cap(const PairwiseEnergy& energy, int cap) {
  if (energy.num_vars() > cap || energy.num_vars() > 62)
    throw CapExceeded("exhaustive enumeration limited to " + std::to_string(cap) + " variables, instance has " +
                      std::to_string(energy.num_vars()));
}

std::uint64_t count_labelings(Index n) { return std::uint64_t{1} << n; }

bool in_bounds(const Constraint& c, std::optional<double> h) {
  if (!h) return false;
  const double tol = 1e-9 * (1.0 + std::abs(c.lower) + std::abs(c.upper));
  return *h >= c.lower - tol && *h <= c.upper + tol;
}

std::string round_key(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

Labeling labeling_at(std::uint64_t index, Index n) {
  Labeling x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1U);
  return x;
}

BruteResult brute_min(const PairwiseEnergy& energy, int cap) {
  check_cap(energy, cap);
  const Index n = energy.num_vars();
  BruteResult best;
  bool have = false;
  for (std::uint64_t idx = 0; idx < count_labelings(n); ++idx) {
    Labeling x = labeling_at(idx, n);
    const double e = evaluate(energy, x);
    if (!have || e < best.value) {
      best = {std::move(x), e};
      have = true;
    }
  }
  return best;
}

std::optional<BruteResult> brute_constrained_min(const PairwiseEnergy& energy, const ConstraintSet& set, int cap) {
  check_cap(energy, cap);
  const Index n = energy.num_vars();
  std::optional<BruteResult> best;
  for (std::uint64_t idx = 0; idx < count_labelings(n); ++idx) {
    Labeling x = labeling_at(idx, n);
    bool feasible = true;
    for (const Constraint& c : set.constraints())
      if (!in_bounds(c, statistic(c, x, energy))) {
        feasible = false;
        break;
      }
    if (!feasible) continue;
    const double e = evaluate(energy, x);
    if (!best || e < best->value) best = BruteResult{std::move(x), e};
  }
  return best;
}

double brute_dual(const PairwiseEnergy& energy, const ConstraintSet& set,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, int cap) {
  check_cap(energy, cap);
  if (lambda.size() != set.size()) throw DimensionError("multiplier size does not match the constraint set");
  const Index n = energy.num_vars();
  Eigen::VectorXd slack(set.size());
  for (Index k = 0; k < set.size(); ++k) slack(k) = resolve_slack(set[k], lambda(k));

  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < count_labelings(n); ++idx) {
    const Labeling x = labeling_at(idx, n);
    double l = evaluate(energy, x);
    for (Index k = 0; k < set.size(); ++k)
      l += lambda(k) * (effective_value(set[k], x, energy, slack(k)) - set[k].target());
    best = std::min(best, l);
  }
  return best;
}

CertificateCheck check_certificate(const PairwiseEnergy& energy, const ConstraintSet& set,
                                   std::span<const std::uint8_t> labeling,
                                   const Eigen::Ref<const Eigen::VectorXd>& slack, int cap) {
  check_cap(energy, cap);
  if (slack.size() != set.size()) throw DimensionError("slack size does not match the constraint set");
  const Index n = energy.num_vars();
  const Index m = set.size();

  Eigen::VectorXd target(m);
  Eigen::VectorXd tol(m);
  for (Index k = 0; k < m; ++k) {
    target(k) = effective_value(set[k], labeling, energy, slack(k));
    tol(k) = 1e-9 * (1.0 + std::abs(target(k)) + set[k].slack_range());
  }

  CertificateCheck check;
  check.certified_energy = evaluate(energy, labeling);
  check.class_min = std::numeric_limits<double>::infinity();
  double fixed_min = std::numeric_limits<double>::infinity();

  for (std::uint64_t idx = 0; idx < count_labelings(n); ++idx) {
    const Labeling x = labeling_at(idx, n);
    bool member = true;
    bool fixed_member = true;
    for (Index k = 0; k < m && member; ++k) {
      const Constraint& c = set[k];
      const double s = c.slack_range();
      if (c.kind == ConstraintKind::Ratio) {
        const double ones = static_cast<double>(std::count(x.begin(), x.end(), std::uint8_t{1}));
        if (ones == 0.0) {
          member = false;
          break;
        }
        // sum (c_i - lower) x_i - y * ones = b*  =>  y = (base - b*) / ones
        const double base = effective_value(c, x, energy, 0.0);
        const double y = (base - target(k)) / ones;
        const double ytol = tol(k) / ones;
        member = y >= -ytol && y <= s + ytol;
      } else {
        const double h = effective_value(c, x, energy, 0.0);
        member = h >= target(k) - s - tol(k) && h <= target(k) + tol(k);
      }
      if (member && fixed_member)
        fixed_member = std::abs(effective_value(c, x, energy, slack(k)) - target(k)) <= tol(k);
    }
    if (!member) continue;
    ++check.class_size;
    const double e = evaluate(energy, x);
    if (e < check.class_min) {
      check.class_min = e;
      check.counterexample = x;
    }
    if (fixed_member) fixed_min = std::min(fixed_min, e);
  }

  const double etol = 1e-9 * (1.0 + std::abs(check.certified_energy));
  check.holds = check.certified_energy <= check.class_min + etol;
  check.fixed_slack_holds = check.certified_energy <= fixed_min + etol;
  if (check.holds) check.counterexample.clear();
  return check;
}

EnumerationReport enumerate(const PairwiseEnergy& energy, const ConstraintSet& set, int cap) {
  check_cap(energy, cap);
  const Index n = energy.num_vars();
  EnumerationReport report;
  report.num_vars = n;
  report.num_labelings = count_labelings(n);
  report.global = brute_min(energy, cap);
  report.constrained = brute_constrained_min(energy, set, cap);

  std::map<std::vector<std::string>, StatisticLevel> levels;
  for (std::uint64_t idx = 0; idx < report.num_labelings; ++idx) {
    const Labeling x = labeling_at(idx, n);
    std::vector<double> stats;
    std::vector<std::string> key;
    bool defined = true;
    for (const Constraint& c : set.constraints()) {
      const auto h = statistic(c, x, energy);
      if (!h) {
        defined = false;
        break;
      }
      stats.push_back(*h);
      key.push_back(round_key(*h));
    }
    if (!defined) continue;
    const double e = evaluate(energy, x);
    auto [it, inserted] = levels.try_emplace(key);
    StatisticLevel& level = it->second;
    if (inserted || e < level.min_energy) {
      level.min_energy = e;
      level.argmin = x;
      level.statistics = stats;
    }
    ++level.count;
  }
  for (auto& [key, level] : levels) report.levels.push_back(std::move(level));
  return report;
}

std::string to_json(const EnumerationReport& report, int indent) {
  using nlohmann::json;
  auto labeling_json = [](const Labeling& x) {
    json a = json::array();
    for (auto b : x) a.push_back(static_cast<int>(b));
    return a;
  };
  json j;
  j["num_vars"] = report.num_vars;
  j["num_labelings"] = report.num_labelings;
  j["global_min"] = {{"value", report.global.value}, {"labeling", labeling_json(report.global.labeling)}};
  if (report.constrained)
    j["constrained_min"] = {{"feasible", true},
                            {"value", report.constrained->value},
                            {"labeling", labeling_json(report.constrained->labeling)}};
  else
    j["constrained_min"] = {{"feasible", false}};
  json levels = json::array();
  for (const StatisticLevel& l : report.levels)
    levels.push_back({{"statistics", l.statistics},
                      {"min_energy", l.min_energy},
                      {"argmin", labeling_json(l.argmin)},
                      {"count", l.count}});
  j["levels"] = std::move(levels);
  return j.dump(indent);
}

}  // namespace statcut::verify
