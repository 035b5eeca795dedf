#pragma once

#include <cstdint>
#include <vector>

#include "dibgeo/dib.hpp"

namespace dibgeo {

// Geometrically spaced schedule from lo to hi inclusive, ascending.
std::vector<double> geometric_schedule(double lo, double hi, int steps);

struct SweepOptions {
  int init_clusters = 0;  // 0: min(N, 16)
  int max_iter = 500;
  double tol = 1e-10;
  StepConditionals mode = StepConditionals::previous;
};

// For each beta in the ascending schedule, runs dib_solve with `restarts`
// derived seeds and keeps the best-cost record. Non-converged records are
// kept, flagged by their converged field.
std::vector<SolutionRecord> beta_sweep(const JointDistribution& joint,
                                       const std::vector<double>& schedule,
                                       int restarts, std::uint64_t seed,
                                       const SweepOptions& options = {});

struct CurveEntry {
  SolutionRecord record;
  bool on_frontier = false;  // Pareto non-dominated in (lower H, higher I)
  bool on_hull = false;      // member of the concave majorant
  // Validity range and kink angle, defined for interior hull points only
  // (NaN elsewhere). beta_min/beta_max come from the frontier chord slopes;
  // beta_emp_* record the raw sweep range that produced this solution as a
  // cross-check.
  double beta_min = 0.0, beta_max = 0.0, theta = 0.0;
  double beta_emp_min = 0.0, beta_emp_max = 0.0;
  bool has_kink = false;
};

struct InformationCurve {
  std::vector<CurveEntry> entries;  // deduplicated, sorted by entropy_T
  int trimmed_count = 0;  // frontier points dropped by the concave trim
};

// Deduplicates records by (n_c, H, I) rounded to 1e-9, flags the
// non-dominated set, sorts by H, and marks the concave majorant.
InformationCurve pareto_frontier(const std::vector<SolutionRecord>& records);

// theta = pi/2 - arctan(beta_min) - arctan(1/beta_max); exactly 0 when
// beta_min == beta_max, and tends to pi/2 as the validity range widens.
double kink_angle(double beta_min, double beta_max);

// Annotates interior concave-hull points with chord-slope beta ranges and
// kink angles.
InformationCurve kink_angles(InformationCurve curve);

struct Selection {
  int n_c = 1;
  double theta = 0.0;
  // True when the frontier had no interior point to take a kink from; n_c
  // then falls back to the highest-information solution.
  bool degenerate = false;
};

// The cluster count of the frontier solution with maximal kink angle, ties
// toward fewer clusters.
Selection select_n_clusters(const InformationCurve& curve);

}  // namespace dibgeo
