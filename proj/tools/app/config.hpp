#ifndef STATCUT_APP_CONFIG_HPP
#define STATCUT_APP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statcut/constraints.hpp"
#include "statcut/energy.hpp"
#include "statcut/errors.hpp"
#include "statcut/imaging.hpp"

namespace statcut::app {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kInfeasibleBox = 3,
  kIterationCap = 4,
  kIoFailure = 5,
  kCapExceeded = 6,
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Bounds of one requested constraint: explicit intervals, a relative gap
/// around the ground-truth value, or the run's default --gap.
struct BoundSpec {
  enum class Mode { Absolute, Relative, DefaultGap };
  Mode mode = Mode::DefaultGap;
  std::vector<Interval> absolute;  ///< one per tile for lsz, otherwise one
  double relative = 0.0;           ///< fraction, 0.1 == 10%
};

/// Parses "[a,b]", "[a1,b1;a2,b2]", "±p%", "+-p%", "p%" or "" / "gap".
BoundSpec parse_bounds(std::string_view text);

/// Constraint families addressable from the command line, in canonical order.
inline const std::vector<std::string>& family_keys() {
  static const std::vector<std::string> keys = {"sz", "br", "mn-h", "mn-v", "vr-h", "vr-v", "cv", "lsz"};
  return keys;
}

struct ConstraintRequest {
  std::string family;  ///< one of family_keys()
  BoundSpec bounds;
  Index tile_rows = 2;  ///< lsz only
  Index tile_cols = 2;
};

struct RunConfig {
  std::filesystem::path image;
  std::filesystem::path gt;
  std::filesystem::path seeds;
  std::filesystem::path unary;
  std::filesystem::path problem;
  std::vector<ConstraintRequest> constraints;
  std::optional<double> gap;
  std::optional<std::pair<double, double>> center;  ///< (h, v)
  SmoothnessParams smoothness{0.2, 1.0, 0.0};
  double tol = 1e-7;
  std::optional<int> max_iters;
  std::filesystem::path out = "statcut_out";
  std::optional<std::filesystem::path> trace;
  std::uint64_t seed = 1;

  // verify
  int instances = 100;
  Index grid_rows = 4;
  Index grid_cols = 4;
  int cap = 20;
  std::vector<std::string> families{"sz"};

  // bench / fixtures
  std::filesystem::path data;
  int synthetic = 0;
  Index fixture_size = 64;
  std::vector<std::vector<std::string>> combos;

  bool has_relative_bounds() const;
};

using Settings = std::map<std::string, std::string>;

/// key=value lines; "[section]" headers and '#' comments are ignored.
Settings read_config_file(const std::filesystem::path& path);

/// Builds and validates a RunConfig. Keys use dashes (underscores are accepted).
RunConfig config_from_settings(const Settings& settings);

/// "No;Sz;Sz,Vr" -> {{}, {"Sz"}, {"Sz","Vr"}}.
std::vector<std::vector<std::string>> parse_combos(std::string_view text);

/// Constraints requested by `config` for a rows x cols image. Relative bounds
/// and unspecified centres are resolved against `gt`.
ConstraintSet build_image_constraints(const RunConfig& config, Index rows, Index cols,
                                      const std::optional<GroundTruthStats>& gt);

/// Constraints of a named combination ("Sz", "Br", "Mn", "Vr", "Cv", "Lsz") with
/// a symmetric relative gap around the ground-truth statistics.
ConstraintSet combination_constraints(const std::vector<std::string>& combo, const GroundTruthStats& gt, double gap);

}  // namespace statcut::app

#endif  // STATCUT_APP_CONFIG_HPP
