#include "dibgeo/info_measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dibgeo/dib.hpp"
#include "dibgeo/smoothing.hpp"

namespace dibgeo {

DiscreteDistribution::DiscreteDistribution(Eigen::VectorXd values)
    : p(std::move(values)) {
  if (p.size() == 0)
    throw std::invalid_argument("DiscreteDistribution: empty");
  if ((p.array() < 0.0).any())
    throw std::invalid_argument("DiscreteDistribution: negative entry");
  if (std::abs(p.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteDistribution: sum != 1");
}

double entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) h -= p[k] * std::log(p[k]);
  return h;
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("kl_divergence: length mismatch");
  double d = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[k] * std::log(p[k] / q[k]);
  }
  return d;
}

double mutual_information(const Eigen::MatrixXd& joint) {
  const Eigen::VectorXd pr = joint.rowwise().sum();
  const Eigen::VectorXd pc = joint.colwise().sum();
  double mi = 0.0;
  for (int i = 0; i < joint.rows(); ++i)
    for (int j = 0; j < joint.cols(); ++j) {
      const double pij = joint(i, j);
      if (pij > 0.0) mi += pij * std::log(pij / (pr[i] * pc[j]));
    }
  return mi;
}

double rows_vs_marginal_info(const Eigen::VectorXd& mass,
                             const Eigen::MatrixXd& cond,
                             const Eigen::VectorXd& marginal_x) {
  double info = 0.0;
  for (int c = 0; c < cond.rows(); ++c) {
    if (mass[c] <= 0.0) continue;
    double g = 0.0;
    for (int x = 0; x < cond.cols(); ++x) {
      const double q = cond(c, x);
      if (q > 0.0) g += q * std::log(q / marginal_x[x]);
    }
    info += mass[c] * g;
  }
  return info;
}

double fractional_spatial_info(const HardClustering& clustering,
                               const JointDistribution& joint) {
  if (clustering.n() != joint.n())
    throw std::invalid_argument("fractional_spatial_info: N mismatch");
  if (!(joint.info_ix > 0.0))
    throw std::domain_error("fractional_spatial_info: no spatial information");
  const double info_cx = rows_vs_marginal_info(
      clustering.mass, clustering.conditional, joint.marginal_x);
  return info_cx / joint.info_ix;
}

}  // namespace dibgeo
