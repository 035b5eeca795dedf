#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dibgeo/geometry.hpp"

namespace dibgeo {

// Uniform rectangular grid used to discretize the location variable. Cells
// are flattened row-major with dimension 0 slowest, so in 2-D the flat index
// is b1 * bins(1) + b2.
class Grid {
 public:
  Grid() = default;  // empty grid; meaningful instances come from build_grid
  // edges[a] holds bins(a)+1 strictly increasing edge positions.
  explicit Grid(std::vector<Eigen::VectorXd> edges);

  int dim() const { return static_cast<int>(edges_.size()); }
  int bins(int axis) const {
    return static_cast<int>(edges_[axis].size()) - 1;
  }
  int cell_count() const { return cells_; }

  const Eigen::VectorXd& edges(int axis) const { return edges_[axis]; }
  double lo(int axis) const { return edges_[axis][0]; }
  double hi(int axis) const { return edges_[axis][bins(axis)]; }

  // Centers of all cells in flat order, cell_count() x dim().
  const Eigen::MatrixXd& cell_centers() const { return centers_; }

  int flat_index(const Eigen::VectorXi& per_axis) const;
  Eigen::VectorXi axis_indices(int flat) const;

  // Flat index of the cell containing p; points on the outer edges are
  // clamped into the boundary cells. Throws if p lies outside the grid.
  int cell_of(const Eigen::VectorXd& p) const;

  bool contains(const Eigen::VectorXd& p) const;

 private:
  std::vector<Eigen::VectorXd> edges_;
  Eigen::MatrixXd centers_;
  int cells_ = 0;
};

// Uniform grid over the data bounding box padded by 3*s on every side.
// A degenerate bounding box (all points equal along an axis) still pads to a
// 6*s span around the point.
Grid build_grid(const PointSet& points, double s, int bins_per_dim);

}  // namespace dibgeo
