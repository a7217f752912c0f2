#ifndef STATCUT_VERIFIER_HPP
#define STATCUT_VERIFIER_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"

// Exhaustive reference solvers for tiny instances. Everything here enumerates
// all 2^n labelings in lexicographic order (x_0 most significant) and keeps the
// first strict improvement, so results are deterministic and independent of
// the graph-cut path.

namespace statcut::verify {

inline constexpr int kDefaultCap = 20;

struct BruteResult {
  Labeling labeling;
  double value = 0.0;
};

/// Labeling number `index` in lexicographic order.
Labeling labeling_at(std::uint64_t index, Index n);

BruteResult brute_min(const PairwiseEnergy& energy, int cap = kDefaultCap);

/// min E(x) subject to lower_i <= h_i(x) <= upper_i; nullopt when infeasible.
std::optional<BruteResult> brute_constrained_min(const PairwiseEnergy& energy, const ConstraintSet& set,
                                                 int cap = kDefaultCap);

/// min_x E(x) + lambda^T (H(x) + y*(lambda) - b), for any lambda (no box needed).
double brute_dual(const PairwiseEnergy& energy, const ConstraintSet& set,
                  const Eigen::Ref<const Eigen::VectorXd>& lambda, int cap = kDefaultCap);

/// Exhaustive check of the optimality certificate of (x*, y*).
struct CertificateCheck {
  bool holds = false;          ///< no labeling in the slack-free class beats x*
  bool fixed_slack_holds = false;  ///< same, restricted to H(x) + y* = b* with y* fixed
  double certified_energy = 0.0;
  double class_min = 0.0;      ///< min energy over the class (x* excluded if it is not a member)
  std::uint64_t class_size = 0;
  Labeling counterexample;     ///< lowest-energy violator when holds == false
};

/// b* is recomputed from (x*, y*). The slack-free class is every x for which some
/// y in [0, s] reproduces b* in every constraint; ratio constraints never match
/// labelings without ones. Energies are compared with tolerance 1e-9 (1 + |E|).
CertificateCheck check_certificate(const PairwiseEnergy& energy, const ConstraintSet& set,
                                   std::span<const std::uint8_t> labeling,
                                   const Eigen::Ref<const Eigen::VectorXd>& slack, int cap = kDefaultCap);

struct StatisticLevel {
  std::vector<double> statistics;
  double min_energy = 0.0;
  Labeling argmin;
  std::uint64_t count = 0;
};

struct EnumerationReport {
  Index num_vars = 0;
  std::uint64_t num_labelings = 0;
  BruteResult global;
  std::optional<BruteResult> constrained;
  std::vector<StatisticLevel> levels;  ///< sorted by statistics; ratio-undefined labelings omitted
};

EnumerationReport enumerate(const PairwiseEnergy& energy, const ConstraintSet& set, int cap = kDefaultCap);

std::string to_json(const EnumerationReport& report, int indent = 2);

}  // namespace statcut::verify

#endif  // STATCUT_VERIFIER_HPP
