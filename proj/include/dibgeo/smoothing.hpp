#pragma once

#include <string>

#include <Eigen/Dense>

#include "dibgeo/geometry.hpp"
#include "dibgeo/grid.hpp"

namespace dibgeo {

// Discretized joint distribution p(i, x) = p(x|i) * p(i) over data index i
// and grid cell x, with uniform p(i) = 1/N. This table is the sole input to
// the clustering solver.
struct JointDistribution {
  Eigen::MatrixXd conditional;   // N x M, each row p(x|i) sums to 1
  Grid grid;
  double s = 0.0;                // smoothing scale; 0 for the delta table
  Eigen::VectorXi point_cell;    // grid cell holding each data point
  Eigen::VectorXd marginal_x;    // p(x) = (1/N) sum_i p(x|i)
  Eigen::VectorXd row_plogp;     // per-row sum of p log p (= -H(row))
  double info_ix = 0.0;          // I(i; x) of the table, in nats

  int n() const { return static_cast<int>(conditional.rows()); }
  int m() const { return static_cast<int>(conditional.cols()); }
  double p_i() const { return 1.0 / n(); }
};

// Gaussian conditional for one location, evaluated at cell centers and
// normalized: p(x) ∝ exp(-|x_cell - point|^2 / (2 s^2)). Exponents below
// -700 are flushed to exact zero before normalizing. A point so far outside
// the grid that every exponent underflows degrades to one-hot at the nearest
// cell center.
Eigen::VectorXd smoothed_row(const Eigen::VectorXd& point, const Grid& grid,
                             double s);

// Gaussian smoothing of the whole point set; requires all points inside the
// grid and s > 0 (use delta_joint for the unsmoothed table).
JointDistribution smooth_joint(const PointSet& points, double s,
                               const Grid& grid);

// One-hot conditionals: row i is the indicator of the cell containing x_i.
JointDistribution delta_joint(const PointSet& points, const Grid& grid);

// CSV dump of the conditional table: one row per data index, one column per
// flattened cell, plus a trailing row_sum column.
void dump_joint_csv(const JointDistribution& joint, const std::string& path);

}  // namespace dibgeo
