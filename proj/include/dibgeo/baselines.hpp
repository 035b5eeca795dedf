#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dibgeo/dib.hpp"
#include "dibgeo/geometry.hpp"

namespace dibgeo {

struct KMeansResult {
  Eigen::MatrixXd centroids;    // k x d
  std::vector<int> assignment;  // size N
  double inertia = 0.0;         // sum of squared distances to own centroid
  int iterations = 0;
  // Diagnostic: largest per-iteration rise of the inertia (0 when Lloyd
  // descended monotonically, as it must).
  double max_inertia_increase = 0.0;
};

// Lloyd iterations with k-means++ seeding; best inertia over restarts.
// An emptied cluster is reseeded at the point farthest from its centroid.
KMeansResult kmeans(const PointSet& points, int k, std::uint64_t seed,
                    int restarts);

struct GmmResult {
  std::vector<GaussianComponent> components;
  Eigen::MatrixXd responsibilities;  // N x k, rows sum to 1
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool ridge_applied = false;  // singular covariance was regularized
  // Diagnostic: largest per-iteration drop of the log-likelihood (0 when EM
  // ascended monotonically, as it must).
  double max_loglik_decrease = 0.0;
};

// Full-covariance EM from a k-means init; stops when the log-likelihood
// change drops below tol. Best log-likelihood over restarts.
GmmResult gmm_em(const PointSet& points, int k, std::uint64_t seed,
                 int restarts, int max_iter = 200, double tol = 1e-8);

// log w - T with T the Mahalanobis-plus-log-det score; the hard
// maximum-likelihood classification is the argmax over components.
double gmm_hard_score(const Eigen::VectorXd& point,
                      const GaussianComponent& component);

// KL[N(point, s^2 I) || component], closed form.
double gaussian_smoothing_kl(const Eigen::VectorXd& point, double s,
                             const GaussianComponent& component);

// log w - beta * KL[N(point, s^2 I) || component]: the score a bottleneck
// classifier assigns a fresh test point smoothed at scale s. As s -> 0 the
// induced boundary matches the hard GMM boundary when beta = 1 or the
// weights are equal.
double dib_point_score(const Eigen::VectorXd& point, double s,
                       const GaussianComponent& component, double weight,
                       double beta);

struct Region {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

Region bounding_region(const PointSet& points, double pad);

using Polyline = std::vector<Eigen::Vector2d>;

// Labels an entire batch of 2-D points (rows).
using BatchClassifier =
    std::function<std::vector<int>(const Eigen::MatrixXd&)>;

BatchClassifier pointwise_classifier(std::function<int(double, double)> f);

// Classifiers for the three algorithm families.
BatchClassifier kmeans_classifier(const KMeansResult& km);
BatchClassifier gmm_classifier(const std::vector<GaussianComponent>& comps);
// Extends a trained hard clustering to unseen points: smooth the point at
// the table's scale, then apply the assignment rule
// argmax_c log q(c) - beta KL.
BatchClassifier dib_cluster_classifier(const JointDistribution& joint,
                                       const HardClustering& clustering,
                                       double beta);

// Evaluates the classifier on a resolution x resolution lattice of cell
// centers over the region and extracts the label-change contour as
// polylines (marching-squares style). A uniformly labeled region yields an
// empty set.
std::vector<Polyline> decision_boundary(const BatchClassifier& classify,
                                        const Region& region, int resolution);

// max over vertices of a of the distance to the nearest vertex of b
double directed_boundary_deviation(const std::vector<Polyline>& a,
                                   const std::vector<Polyline>& b);
double boundary_hausdorff(const std::vector<Polyline>& a,
                          const std::vector<Polyline>& b);

// Two-component layout of the closed-form analysis: component 1 at the
// origin with covariance diag(sigma1^2, sigma2^2), component 2 at (L, 0)
// with isotropic variance sigma^2, test points smoothed at scale s.
struct TwoGaussianSetup {
  double sigma1 = 1.0, sigma2 = 1.0, sigma = 1.0, L = 4.0, s = 1e-3;
};

struct BoundaryRootPair {
  double dib_root = 0.0;  // x1-axis crossing of the small-s DIB boundary
  double gmm_root = 0.0;  // same for the GMM boundary at rescaled weights
};

// The DIB boundary at tradeoff beta with weights (w1, w2) must coincide
// with the GMM boundary at weights (w1^(1/beta), w2^(1/beta)) normalized;
// both x1-axis roots are located by bisection.
BoundaryRootPair weight_rescaling_check(double w1, double w2, double beta,
                                        const TwoGaussianSetup& setup = {});

}  // namespace dibgeo
