#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dibgeo/report.hpp"

namespace {

struct Cli {
  dibgeo::RunConfig config;
  std::string config_path;
  double beta = 1.0;          // cluster
  std::string preset;         // generate
};

// Flags override values from --config, so overrides are applied only for
// options the user actually passed.
void add_common_options(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--config", cli.config_path, "JSON config file");
  cmd->add_option("--dataset", cli.config.dataset,
                  "preset name or CSV path");
  cmd->add_option("--s", cli.config.s, "smoothing scale");
  cmd->add_option("--bins", cli.config.bins, "grid bins per dimension");
  cmd->add_option("--beta-min", cli.config.beta_lo, "sweep start");
  cmd->add_option("--beta-max", cli.config.beta_hi, "sweep end");
  cmd->add_option("--beta-steps", cli.config.beta_steps, "sweep length");
  cmd->add_option("--restarts", cli.config.restarts, "solver restarts");
  cmd->add_option("--seed", cli.config.seed, "RNG seed");
  cmd->add_option("--out", cli.config.out_dir, "output directory");
  cmd->add_option("--max-iter", cli.config.max_iter, "solver iteration cap");
  cmd->add_option("--tol", cli.config.tol, "solver cost tolerance");
}

void apply_overrides(CLI::App* cmd, Cli& cli) {
  if (cli.config_path.empty()) return;
  const dibgeo::RunConfig defaults;
  dibgeo::RunConfig from_file = dibgeo::load_config_file(cli.config_path);
  const dibgeo::RunConfig from_flags = cli.config;
  cli.config = from_file;
  const auto passed = [&](const std::string& name) {
    return cmd->count(name) > 0;
  };
  if (passed("--dataset")) cli.config.dataset = from_flags.dataset;
  if (passed("--s")) cli.config.s = from_flags.s;
  if (passed("--bins")) cli.config.bins = from_flags.bins;
  if (passed("--beta-min")) cli.config.beta_lo = from_flags.beta_lo;
  if (passed("--beta-max")) cli.config.beta_hi = from_flags.beta_hi;
  if (passed("--beta-steps")) cli.config.beta_steps = from_flags.beta_steps;
  if (passed("--restarts")) cli.config.restarts = from_flags.restarts;
  if (passed("--seed")) cli.config.seed = from_flags.seed;
  if (passed("--out")) cli.config.out_dir = from_flags.out_dir;
  if (passed("--max-iter")) cli.config.max_iter = from_flags.max_iter;
  if (passed("--tol")) cli.config.tol = from_flags.tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric clustering with a deterministic information "
               "bottleneck, plus k-means/GMM baselines"};
  app.require_subcommand(1);
  Cli cli;

  auto* gen = app.add_subcommand("generate", "sample a preset dataset");
  gen->add_option("preset", cli.preset, "preset name")->required();
  gen->add_option("--seed", cli.config.seed, "RNG seed");
  gen->add_option("--out", cli.config.out_dir, "output directory");

  auto* dump = app.add_subcommand("smooth-dump",
                                  "write the smoothed joint table");
  add_common_options(dump, cli);

  auto* cluster = app.add_subcommand("cluster", "single solve at one beta");
  add_common_options(cluster, cli);
  cluster->add_option("--beta", cli.beta, "tradeoff parameter")->required();

  auto* sweep = app.add_subcommand(
      "sweep", "trace the information curve over beta and select n_c");
  add_common_options(sweep, cli);
  sweep->add_option("--theta-min", cli.config.theta_min,
                    "robustness threshold on the kink angle");

  auto* bounds = app.add_subcommand(
      "boundaries", "compare k-means, GMM, and DIB decision boundaries");
  add_common_options(bounds, cli);
  bounds->add_option("--s-list", cli.config.boundary_s,
                     "smoothing scales for the DIB boundaries");
  bounds->add_option("--resolution", cli.config.resolution,
                     "boundary lattice resolution");
  bounds->add_flag("--gmm-generative", cli.config.gmm_generative,
                   "use the preset's generative components instead of EM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      dibgeo::cmd_generate(cli.preset, cli.config.seed, cli.config.out_dir,
                           std::cout);
    } else if (dump->parsed()) {
      apply_overrides(dump, cli);
      dibgeo::cmd_smooth_dump(cli.config, std::cout);
    } else if (cluster->parsed()) {
      apply_overrides(cluster, cli);
      dibgeo::cmd_cluster(cli.config, cli.beta, std::cout);
    } else if (sweep->parsed()) {
      apply_overrides(sweep, cli);
      dibgeo::cmd_sweep(cli.config, std::cout);
    } else if (bounds->parsed()) {
      apply_overrides(bounds, cli);
      dibgeo::cmd_boundaries(cli.config, std::cout);
    }
  } catch (const dibgeo::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dibgeo::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
