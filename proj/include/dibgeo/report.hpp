#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dibgeo/geometry.hpp"
#include "dibgeo/model_selection.hpp"

namespace dibgeo {

// Exit-code carriers: 1 usage, 2 data, 3 non-convergence.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string dataset = "three_equal";  // preset name or CSV path
  double s = 2.0;
  int bins = 32;
  double beta_lo = 0.1;
  double beta_hi = 1e4;
  int beta_steps = 60;
  int restarts = 5;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int max_iter = 500;
  double tol = 1e-10;
  std::vector<double> boundary_s = {0.5, 2.0, 4.0};
  int resolution = 400;
  double theta_min = 0.15;  // smallest kink angle considered robust
  double max_nonconverged_frac = 0.25;
  bool gmm_generative = false;  // use generative components in `boundaries`
};

// JSON config file with the same keys as the CLI flags; unknown keys are
// rejected.
RunConfig load_config_file(const std::string& path);

// Preset name -> seeded preset sample; anything else is read as a CSV path.
PointSet resolve_dataset(const RunConfig& config);

void cmd_generate(const std::string& preset, std::uint64_t seed,
                  const std::string& out_dir, std::ostream& log);

struct SweepOutcome {
  Selection selection;
  int nonconverged = 0;
  double max_theta_multi = 0.0;  // max kink angle among n_c > 1 solutions
  bool robust = false;
};

SweepOutcome cmd_sweep(const RunConfig& config, std::ostream& log);
void cmd_cluster(const RunConfig& config, double beta, std::ostream& log);
void cmd_boundaries(const RunConfig& config, std::ostream& log);
void cmd_smooth_dump(const RunConfig& config, std::ostream& log);

}  // namespace dibgeo
