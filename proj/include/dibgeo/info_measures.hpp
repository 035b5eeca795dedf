#pragma once

#include <Eigen/Dense>

namespace dibgeo {

// Probability vector with validated invariants (entries >= 0, sum within
// 1e-12 of 1). The low-level functions below accept raw vectors and trust
// the caller; this wrapper is for boundaries where inputs are untrusted.
struct DiscreteDistribution {
  Eigen::VectorXd p;
  explicit DiscreteDistribution(Eigen::VectorXd values);
};

// All quantities are exact sums over tables, in nats.

// -sum p log p with 0 log 0 = 0.
double entropy(const Eigen::VectorXd& p);
inline double entropy(const DiscreteDistribution& p) { return entropy(p.p); }

// sum_{p>0} p log(p/q); +infinity when some cell has p>0, q=0.
// Throws std::invalid_argument on length mismatch.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
inline double kl_divergence(const DiscreteDistribution& p,
                            const DiscreteDistribution& q) {
  return kl_divergence(p.p, q.p);
}

// Mutual information of a joint table (entries >= 0, total = 1).
double mutual_information(const Eigen::MatrixXd& joint);

// sum_c mass(c) * sum_x cond(c,x) * log(cond(c,x) / marginal_x(x)).
// This is I(C;X) for the joint mass(c)*cond(c,x) whose x-marginal is
// marginal_x; cond(c,x) > 0 must imply marginal_x(x) > 0.
double rows_vs_marginal_info(const Eigen::VectorXd& mass,
                             const Eigen::MatrixXd& cond,
                             const Eigen::VectorXd& marginal_x);

struct HardClustering;
struct JointDistribution;

// Fraction of spatial information retained by a clustering,
// I(c;x) / I(i;x); bounded by 1 via the data-processing inequality.
// Throws std::domain_error when I(i;x) = 0.
double fractional_spatial_info(const HardClustering& clustering,
                               const JointDistribution& joint);

}  // namespace dibgeo
