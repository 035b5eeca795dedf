#include "dibgeo/smoothing.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dibgeo/info_measures.hpp"

namespace dibgeo {

namespace {

// Underflow cutoff: exponents below this are flushed to exact zero, so rows
// can contain exact zeros and downstream KL must treat q=0, p>0 as +inf.
constexpr double kExponentCutoff = -700.0;

void finalize(JointDistribution& joint) {
  const int n = joint.n();
  joint.marginal_x = joint.conditional.colwise().sum() / n;
  joint.row_plogp.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto row = joint.conditional.row(i).array();
    joint.row_plogp[i] = (row > 0.0).select(row * row.log(), 0.0).sum();
  }
  joint.info_ix = rows_vs_marginal_info(
      Eigen::VectorXd::Constant(n, 1.0 / n), joint.conditional,
      joint.marginal_x);
}

}  // namespace

Eigen::VectorXd smoothed_row(const Eigen::VectorXd& point, const Grid& grid,
                             double s) {
  if (!(s > 0.0)) throw std::invalid_argument("smoothed_row: s must be > 0");
  const auto& centers = grid.cell_centers();
  Eigen::VectorXd expo =
      -(centers.rowwise() - point.transpose()).rowwise().squaredNorm() /
      (2.0 * s * s);
  Eigen::VectorXd row =
      (expo.array() < kExponentCutoff).select(0.0, expo.array().exp());
  const double total = row.sum();
  if (total > 0.0) return row / total;
  // Every exponent underflowed; degrade to the delta limit.
  Eigen::Index nearest;
  expo.maxCoeff(&nearest);
  row.setZero();
  row[nearest] = 1.0;
  return row;
}

JointDistribution smooth_joint(const PointSet& points, double s,
                               const Grid& grid) {
  validate_points(points);
  if (!(s > 0.0))
    throw std::invalid_argument(
        "smooth_joint: s must be > 0 (use delta_joint for s = 0)");

  JointDistribution joint{Eigen::MatrixXd(points.n(), grid.cell_count()),
                          grid, s};
  joint.point_cell.resize(points.n());
  for (int i = 0; i < points.n(); ++i) {
    const Eigen::VectorXd p = points.points.row(i).transpose();
    if (!grid.contains(p))
      throw std::invalid_argument("smooth_joint: point outside grid");
    joint.conditional.row(i) = smoothed_row(p, grid, s).transpose();
    joint.point_cell[i] = grid.cell_of(p);
  }
  finalize(joint);
  return joint;
}

JointDistribution delta_joint(const PointSet& points, const Grid& grid) {
  validate_points(points);
  JointDistribution joint{
      Eigen::MatrixXd::Zero(points.n(), grid.cell_count()), grid, 0.0};
  joint.point_cell.resize(points.n());
  for (int i = 0; i < points.n(); ++i) {
    const int cell = grid.cell_of(points.points.row(i).transpose());
    joint.point_cell[i] = cell;
    joint.conditional(i, cell) = 1.0;
  }
  finalize(joint);
  return joint;
}

void dump_joint_csv(const JointDistribution& joint, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_joint_csv: cannot open " + path);
  out << "i";
  for (int x = 0; x < joint.m(); ++x) out << ",c" << x;
  out << ",row_sum\n";
  char buf[40];
  for (int i = 0; i < joint.n(); ++i) {
    out << i;
    for (int x = 0; x < joint.m(); ++x) {
      std::snprintf(buf, sizeof buf, "%.17g", joint.conditional(i, x));
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", joint.conditional.row(i).sum());
    out << ',' << buf << "\n";
  }
  if (!out)
    throw std::runtime_error("dump_joint_csv: write failed for " + path);
}

}  // namespace dibgeo
