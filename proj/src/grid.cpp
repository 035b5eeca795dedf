#include "dibgeo/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dibgeo {

Grid::Grid(std::vector<Eigen::VectorXd> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw std::invalid_argument("Grid: no axes");
  cells_ = 1;
  for (const auto& e : edges_) {
    if (e.size() < 2) throw std::invalid_argument("Grid: axis without cells");
    for (int j = 0; j + 1 < e.size(); ++j)
      if (!(e[j] < e[j + 1]))
        throw std::invalid_argument("Grid: edges not strictly increasing");
    cells_ *= static_cast<int>(e.size()) - 1;
  }

  centers_.resize(cells_, dim());
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(dim());
  for (int f = 0; f < cells_; ++f) {
    for (int a = 0; a < dim(); ++a)
      centers_(f, a) = 0.5 * (edges_[a][idx[a]] + edges_[a][idx[a] + 1]);
    for (int a = dim() - 1; a >= 0; --a) {
      if (++idx[a] < bins(a)) break;
      idx[a] = 0;
    }
  }
}

int Grid::flat_index(const Eigen::VectorXi& per_axis) const {
  int f = 0;
  for (int a = 0; a < dim(); ++a) {
    if (per_axis[a] < 0 || per_axis[a] >= bins(a))
      throw std::out_of_range("Grid::flat_index: axis index out of range");
    f = f * bins(a) + per_axis[a];
  }
  return f;
}

Eigen::VectorXi Grid::axis_indices(int flat) const {
  if (flat < 0 || flat >= cells_)
    throw std::out_of_range("Grid::axis_indices: out of range");
  Eigen::VectorXi idx(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = flat % bins(a);
    flat /= bins(a);
  }
  return idx;
}

int Grid::cell_of(const Eigen::VectorXd& p) const {
  if (p.size() != dim()) throw std::invalid_argument("Grid::cell_of: dim");
  Eigen::VectorXi idx(dim());
  for (int a = 0; a < dim(); ++a) {
    if (p[a] < lo(a) || p[a] > hi(a))
      throw std::out_of_range("Grid::cell_of: point outside grid");
    const auto& e = edges_[a];
    // last edge index with e[j] <= p
    int low = 0, high = bins(a);
    while (low < high) {
      const int mid = (low + high + 1) / 2;
      if (e[mid] <= p[a]) low = mid;
      else high = mid - 1;
    }
    idx[a] = std::min(low, bins(a) - 1);
  }
  return flat_index(idx);
}

bool Grid::contains(const Eigen::VectorXd& p) const {
  for (int a = 0; a < dim(); ++a)
    if (p[a] < lo(a) || p[a] > hi(a)) return false;
  return true;
}

Grid build_grid(const PointSet& points, double s, int bins_per_dim) {
  validate_points(points);
  if (!(s > 0.0)) throw std::invalid_argument("build_grid: s must be > 0");
  if (bins_per_dim < 2)
    throw std::invalid_argument("build_grid: bins_per_dim must be >= 2");

  std::vector<Eigen::VectorXd> edges;
  edges.reserve(points.dim());
  for (int a = 0; a < points.dim(); ++a) {
    const double lo = points.points.col(a).minCoeff() - 3.0 * s;
    const double hi = points.points.col(a).maxCoeff() + 3.0 * s;
    edges.push_back(Eigen::VectorXd::LinSpaced(bins_per_dim + 1, lo, hi));
  }
  return Grid(std::move(edges));
}

}  // namespace dibgeo
