#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "app/commands.hpp"
#include "app/config.hpp"

using namespace statcut::app;

namespace {

struct FlagSpec {
  const char* key;
  const char* names;
  const char* help;
};

const std::vector<FlagSpec> kSegmentFlags = {
    {"image", "--image", "input image (PNG or PGM)"},
    {"gt", "--gt", "ground-truth mask"},
    {"seeds", "--seeds", "seed image: white = object, black = background"},
    {"unary", "--unary", "unary cost file, one 'phi0 phi1' line per pixel"},
    {"problem", "--problem", "energy problem file"},
    {"sz", "--sz", "size bounds: [a,b] or ±p%"},
    {"br", "--br", "boundary length bounds"},
    {"mn", "--mn", "mean bounds for both axes"},
    {"mn-h", "--mn-h,--mn_h", "horizontal mean bounds"},
    {"mn-v", "--mn-v,--mn_v", "vertical mean bounds"},
    {"vr", "--vr", "variance bounds for both axes"},
    {"vr-h", "--vr-h,--vr_h", "horizontal variance bounds"},
    {"vr-v", "--vr-v,--vr_v", "vertical variance bounds"},
    {"cv", "--cv", "covariance bounds"},
    {"lsz", "--lsz", "local size: RxC:[a1,b1;...] or RxC:±p%"},
    {"gap", "--gap", "default relative gap for constraints given without bounds"},
    {"center", "--center", "centre 'h,v' for variance and covariance"},
    {"lambda-s", "--lambda-s,--lambda_s", "constant pairwise weight"},
    {"beta", "--beta", "contrast-sensitive pairwise weight"},
    {"sigma", "--sigma", "intensity scale of the pairwise term"},
    {"tol", "--tol", "relative cutting-plane tolerance"},
    {"max-iters", "--max-iters,--max_iters", "iteration cap"},
    {"out", "--out", "output directory"},
    {"trace", "--trace", "trace CSV path"},
    {"seed", "--seed", "random seed"},
};

const std::vector<FlagSpec> kVerifyFlags = {
    {"instances", "--instances", "number of random instances"},
    {"grid", "--grid", "grid size RxC"},
    {"families", "--families", "comma separated: sz,br,mn,mn-h,mn-v,vr,vr-h,vr-v,cv,lsz"},
    {"cap", "--cap", "largest n enumerated exhaustively"},
    {"problem", "--problem", "energy problem file instead of random energies"},
    {"tol", "--tol", "relative cutting-plane tolerance"},
    {"max-iters", "--max-iters,--max_iters", "iteration cap"},
    {"seed", "--seed", "random seed"},
};

const std::vector<FlagSpec> kBenchFlags = {
    {"data", "--data", "directory of NAME.png / NAME_gt.png pairs"},
    {"synthetic", "--synthetic", "number of generated fixtures to add"},
    {"fixture-size", "--fixture-size,--fixture_size", "side length of generated fixtures"},
    {"combos", "--combos", "combinations, e.g. 'No;Sz;Vr;Sz+Vr'"},
    {"gap", "--gap", "relative gap around ground-truth statistics"},
    {"lambda-s", "--lambda-s,--lambda_s", "constant pairwise weight"},
    {"beta", "--beta", "contrast-sensitive pairwise weight"},
    {"sigma", "--sigma", "intensity scale of the pairwise term"},
    {"tol", "--tol", "relative cutting-plane tolerance"},
    {"max-iters", "--max-iters,--max_iters", "iteration cap"},
    {"out", "--out", "output directory"},
    {"seed", "--seed", "random seed"},
};

const std::vector<FlagSpec> kFixtureFlags = {
    {"synthetic", "--count", "number of fixtures"},
    {"fixture-size", "--size", "side length"},
    {"out", "--out", "output directory"},
    {"seed", "--seed", "random seed"},
};

struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
};

void add_flags(Command& cmd, const std::vector<FlagSpec>& flags) {
  for (const FlagSpec& f : flags) cmd.options[f.key] = cmd.app->add_option(f.names, cmd.values[f.key], f.help);
  cmd.app->add_option("--config", cmd.config_file, "key=value configuration file; flags override it");
}

RunConfig resolve(const Command& cmd) {
  Settings settings;
  if (!cmd.config_file.empty()) settings = read_config_file(cmd.config_file);
  for (const auto& [key, opt] : cmd.options)
    if (opt->count() > 0) settings[key] = cmd.values.at(key);
  return config_from_settings(settings);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statcut: binary segmentation under statistic constraints via Lagrangian duality and graph cuts"};
  app.require_subcommand(1);

  Command segment{app.add_subcommand("segment", "segment one image under constraints")};
  Command verify{app.add_subcommand("verify", "check optimality certificates exhaustively on small instances")};
  Command bench{app.add_subcommand("bench", "error metrics per constraint combination over a dataset")};
  Command fixtures{app.add_subcommand("fixtures", "write the synthetic benchmark fixtures")};
  add_flags(segment, kSegmentFlags);
  add_flags(verify, kVerifyFlags);
  add_flags(bench, kBenchFlags);
  add_flags(fixtures, kFixtureFlags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*segment.app) return cmd_segment(resolve(segment), std::cout, std::cerr);
    if (*verify.app) return cmd_verify(resolve(verify), std::cout, std::cerr);
    if (*bench.app) return cmd_bench(resolve(bench), std::cout, std::cerr);
    if (*fixtures.app) return cmd_fixtures(resolve(fixtures), std::cout, std::cerr);
  } catch (const std::exception& e) {
    return exit_code_for(e, std::cerr);
  }
  return kConfigError;
}
