#include "dibgeo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "dibgeo/rng.hpp"
#include "dibgeo/smoothing.hpp"

namespace dibgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int nearest_row(const Eigen::MatrixXd& rows, const Eigen::VectorXd& p,
                double* dist_sq = nullptr) {
  int best = 0;
  double best_d = kInf;
  for (int k = 0; k < rows.rows(); ++k) {
    const double d = (rows.row(k).transpose() - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (dist_sq) *dist_sq = best_d;
  return best;
}

KMeansResult kmeans_single(const PointSet& points, int k, Rng& rng) {
  const int n = points.n(), d = points.dim();
  const auto& x = points.points;

  // k-means++ seeding
  Eigen::MatrixXd centroids(k, d);
  centroids.row(0) = x.row(static_cast<int>(rng.below(n)));
  Eigen::VectorXd min_d(n);
  for (int c = 1; c < k; ++c) {
    for (int i = 0; i < n; ++i) {
      double best = kInf;
      for (int j = 0; j < c; ++j)
        best = std::min(best,
                        (x.row(i) - centroids.row(j)).squaredNorm());
      min_d[i] = best;
    }
    const double total = min_d.sum();
    int pick;
    if (total > 0.0) {
      double u = rng.uniform01() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        u -= min_d[i];
        if (u < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.below(n));
    }
    centroids.row(c) = x.row(pick);
  }

  KMeansResult res;
  res.assignment.assign(n, -1);
  std::vector<int> counts(k);
  double prev_inertia = kInf;
  for (int iter = 0; iter < 1000; ++iter) {
    bool moved = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = 0.0;
      const int c = nearest_row(centroids, x.row(i).transpose(), &d);
      if (c != res.assignment[i]) moved = true;
      res.assignment[i] = c;
      inertia += d;
    }
    res.max_inertia_increase =
        std::max(res.max_inertia_increase, inertia - prev_inertia);
    prev_inertia = inertia;

    std::fill(counts.begin(), counts.end(), 0);
    for (int c : res.assignment) ++counts[c];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // reseed the emptied centroid at the point farthest from its own one
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const double dd =
            (x.row(i) - centroids.row(res.assignment[i])).squaredNorm();
        if (dd > far_d) {
          far_d = dd;
          far_i = i;
        }
      }
      --counts[res.assignment[far_i]];
      res.assignment[far_i] = c;
      counts[c] = 1;
      centroids.row(c) = x.row(far_i);
      moved = true;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    for (int i = 0; i < n; ++i) sums.row(res.assignment[i]) += x.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) = sums.row(c) / counts[c];

    res.iterations = iter + 1;
    if (!moved) break;
  }

  res.centroids = centroids;
  res.inertia = 0.0;
  for (int i = 0; i < n; ++i)
    res.inertia += (x.row(i) - centroids.row(res.assignment[i])).squaredNorm();
  return res;
}

}  // namespace

KMeansResult kmeans(const PointSet& points, int k, std::uint64_t seed,
                    int restarts) {
  validate_points(points);
  if (k < 1 || k > points.n())
    throw std::invalid_argument("kmeans: k out of [1, N]");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts >= 1");

  KMeansResult best;
  best.inertia = kInf;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, r));
    KMeansResult res = kmeans_single(points, k, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

namespace {

double average_axis_variance(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return (x.rowwise() - mean).squaredNorm() / (x.rows() * x.cols());
}

// log density of N(mean, cov) at the rows of x, via Cholesky
Eigen::VectorXd gaussian_log_density(const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& mean,
                                     const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const int d = static_cast<int>(mean.size());
  double log_det = 0.0;
  for (int a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a));
  Eigen::VectorXd out(x.rows());
  for (int i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd delta = x.row(i).transpose() - mean;
    const double quad = delta.dot(llt.solve(delta));
    out[i] = -0.5 * (d * std::log(2.0 * M_PI) + log_det + quad);
  }
  return out;
}

struct GmmState {
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  Eigen::VectorXd weights;
};

GmmResult gmm_em_single(const PointSet& points, int k, std::uint64_t seed,
                        int max_iter, double tol) {
  const int n = points.n(), d = points.dim();
  const auto& x = points.points;
  const double ridge = 1e-6 * average_axis_variance(x);
  bool ridge_applied = false;

  auto ensure_pd = [&](Eigen::MatrixXd& cov) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() == Eigen::Success && llt.matrixL()(0, 0) > 0.0 &&
          llt.matrixL()(d - 1, d - 1) > 0.0)
        return llt;
      cov += ridge * Eigen::MatrixXd::Identity(d, d);
      ridge_applied = true;
    }
    throw std::runtime_error("gmm_em: covariance cannot be regularized");
  };

  // init from a single k-means run
  const KMeansResult km = kmeans(points, k, seed, 1);
  GmmState st;
  st.weights.resize(k);
  for (int c = 0; c < k; ++c) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (km.assignment[i] == c) members.push_back(i);
    Eigen::VectorXd mu = km.centroids.row(c).transpose();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int i : members) {
      const Eigen::VectorXd delta = x.row(i).transpose() - mu;
      cov += delta * delta.transpose();
    }
    if (!members.empty()) cov /= static_cast<double>(members.size());
    st.means.push_back(mu);
    st.covs.push_back(cov);
    st.weights[c] = static_cast<double>(members.size()) / n;
  }

  GmmResult res;
  Eigen::MatrixXd log_resp(n, k);
  double prev_ll = -kInf;
  for (int iter = 0; iter < max_iter; ++iter) {
    // E step in the log domain
    for (int c = 0; c < k; ++c) {
      auto llt = ensure_pd(st.covs[c]);
      const double log_w =
          st.weights[c] > 0.0 ? std::log(st.weights[c]) : -kInf;
      log_resp.col(c) =
          gaussian_log_density(x, st.means[c], llt).array() + log_w;
    }
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      const double top = log_resp.row(i).maxCoeff();
      const double lse =
          top + std::log((log_resp.row(i).array() - top).exp().sum());
      log_resp.row(i).array() -= lse;
      ll += lse;
    }
    res.responsibilities = log_resp.array().exp();
    res.log_likelihood = ll;
    res.iterations = iter + 1;
    if (std::isfinite(prev_ll))
      res.max_loglik_decrease =
          std::max(res.max_loglik_decrease, prev_ll - ll);
    if (std::abs(ll - prev_ll) < tol) {
      res.converged = true;
      break;
    }
    prev_ll = ll;

    // M step
    for (int c = 0; c < k; ++c) {
      const double nk = res.responsibilities.col(c).sum();
      if (nk < 1e-12) {
        st.weights[c] = 1e-12;  // collapsed component; keep its parameters
        continue;
      }
      st.weights[c] = nk / n;
      st.means[c] = (res.responsibilities.col(c).transpose() * x).transpose() /
                    nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd delta = x.row(i).transpose() - st.means[c];
        cov += res.responsibilities(i, c) * (delta * delta.transpose());
      }
      st.covs[c] = cov / nk;
    }
  }

  for (int c = 0; c < k; ++c) {
    ensure_pd(st.covs[c]);
    res.components.emplace_back(st.means[c], st.covs[c],
                                std::max(st.weights[c], 1e-300));
  }
  res.ridge_applied = ridge_applied;
  return res;
}

}  // namespace

GmmResult gmm_em(const PointSet& points, int k, std::uint64_t seed,
                 int restarts, int max_iter, double tol) {
  validate_points(points);
  if (k < 1 || k > points.n())
    throw std::invalid_argument("gmm_em: k out of [1, N]");
  if (points.n() <= k * points.dim())
    throw std::invalid_argument("gmm_em: need N > d per component");
  if (restarts < 1) throw std::invalid_argument("gmm_em: restarts >= 1");

  GmmResult best;
  best.log_likelihood = -kInf;
  for (int r = 0; r < restarts; ++r) {
    GmmResult res =
        gmm_em_single(points, k, mix_seed(seed, 7000 + r), max_iter, tol);
    if (res.log_likelihood > best.log_likelihood) best = std::move(res);
  }
  return best;
}

double gmm_hard_score(const Eigen::VectorXd& point,
                      const GaussianComponent& component) {
  Eigen::LLT<Eigen::MatrixXd> llt(component.covariance);
  const int d = component.dim();
  double log_det = 0.0;
  for (int a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a));
  const Eigen::VectorXd delta = point - component.mean;
  const double t = 0.5 * delta.dot(llt.solve(delta)) + 0.5 * log_det;
  return std::log(component.weight) - t;
}

double gaussian_smoothing_kl(const Eigen::VectorXd& point, double s,
                             const GaussianComponent& component) {
  if (!(s > 0.0))
    throw std::invalid_argument("gaussian_smoothing_kl: s must be > 0");
  Eigen::LLT<Eigen::MatrixXd> llt(component.covariance);
  const int d = component.dim();
  double log_det = 0.0;
  for (int a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a));
  const double trace_term =
      llt.solve(Eigen::MatrixXd::Identity(d, d)).trace();
  const Eigen::VectorXd delta = component.mean - point;
  const double quad = delta.dot(llt.solve(delta));
  return 0.5 * (s * s * trace_term + quad - d + log_det -
                2.0 * d * std::log(s));
}

double dib_point_score(const Eigen::VectorXd& point, double s,
                       const GaussianComponent& component, double weight,
                       double beta) {
  return std::log(weight) - beta * gaussian_smoothing_kl(point, s, component);
}

Region bounding_region(const PointSet& points, double pad) {
  return Region{points.points.col(0).minCoeff() - pad,
                points.points.col(0).maxCoeff() + pad,
                points.points.col(1).minCoeff() - pad,
                points.points.col(1).maxCoeff() + pad};
}

BatchClassifier pointwise_classifier(std::function<int(double, double)> f) {
  return [f = std::move(f)](const Eigen::MatrixXd& pts) {
    std::vector<int> out(pts.rows());
    for (int i = 0; i < pts.rows(); ++i) out[i] = f(pts(i, 0), pts(i, 1));
    return out;
  };
}

BatchClassifier kmeans_classifier(const KMeansResult& km) {
  return [centroids = km.centroids](const Eigen::MatrixXd& pts) {
    std::vector<int> out(pts.rows());
    for (int i = 0; i < pts.rows(); ++i)
      out[i] = nearest_row(centroids, pts.row(i).transpose());
    return out;
  };
}

BatchClassifier gmm_classifier(const std::vector<GaussianComponent>& comps) {
  return [comps](const Eigen::MatrixXd& pts) {
    std::vector<int> out(pts.rows());
    for (int i = 0; i < pts.rows(); ++i) {
      int best = 0;
      double best_score = -kInf;
      for (size_t c = 0; c < comps.size(); ++c) {
        const double score =
            gmm_hard_score(pts.row(i).transpose(), comps[c]);
        if (score > best_score) {
          best_score = score;
          best = static_cast<int>(c);
        }
      }
      out[i] = best;
    }
    return out;
  };
}

BatchClassifier dib_cluster_classifier(const JointDistribution& joint,
                                       const HardClustering& clustering,
                                       double beta) {
  return [grid = joint.grid, s = joint.s, clustering,
          beta](const Eigen::MatrixXd& pts) {
    Eigen::MatrixXd rows(pts.rows(), grid.cell_count());
    for (int i = 0; i < pts.rows(); ++i)
      rows.row(i) = smoothed_row(pts.row(i).transpose(), grid, s).transpose();
    return dib_classify_rows(rows, clustering, beta);
  };
}

namespace {

// Crossing points and block centers land on half-integer lattice
// coordinates; integer keys (doubled indices) keep the chaining exact.
struct LatticePoint {
  int kx, ky;
  bool operator<(const LatticePoint& o) const {
    return kx != o.kx ? kx < o.kx : ky < o.ky;
  }
  bool operator==(const LatticePoint& o) const {
    return kx == o.kx && ky == o.ky;
  }
};

}  // namespace

std::vector<Polyline> decision_boundary(const BatchClassifier& classify,
                                        const Region& region,
                                        int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("decision_boundary: resolution >= 2");
  const int r = resolution;
  const double dx = region.width() / r, dy = region.height() / r;

  std::vector<int> labels(static_cast<size_t>(r) * r);
  Eigen::MatrixXd row_pts(r, 2);
  for (int iy = 0; iy < r; ++iy) {
    for (int ix = 0; ix < r; ++ix) {
      row_pts(ix, 0) = region.x_min + (ix + 0.5) * dx;
      row_pts(ix, 1) = region.y_min + (iy + 0.5) * dy;
    }
    const auto out = classify(row_pts);
    std::copy(out.begin(), out.end(), labels.begin() + size_t(iy) * r);
  }
  const auto label = [&](int ix, int iy) { return labels[size_t(iy) * r + ix]; };

  // segments between half-integer lattice points
  std::vector<std::pair<LatticePoint, LatticePoint>> segments;
  for (int iy = 0; iy + 1 < r; ++iy)
    for (int ix = 0; ix + 1 < r; ++ix) {
      std::vector<LatticePoint> cross;
      if (label(ix, iy) != label(ix + 1, iy))
        cross.push_back({2 * (ix + 1), 2 * iy + 1});  // bottom edge
      if (label(ix, iy + 1) != label(ix + 1, iy + 1))
        cross.push_back({2 * (ix + 1), 2 * (iy + 1) + 1});  // top edge
      if (label(ix, iy) != label(ix, iy + 1))
        cross.push_back({2 * ix + 1, 2 * (iy + 1)});  // left edge
      if (label(ix + 1, iy) != label(ix + 1, iy + 1))
        cross.push_back({2 * (ix + 1) + 1, 2 * (iy + 1)});  // right edge
      if (cross.size() == 2) {
        segments.emplace_back(cross[0], cross[1]);
      } else if (cross.size() > 2) {
        // junction or saddle: star through the block center
        const LatticePoint center{2 * (ix + 1), 2 * (iy + 1)};
        for (const auto& c : cross) segments.emplace_back(c, center);
      }
    }

  // chain segments into polylines
  std::map<LatticePoint, std::vector<int>> incident;
  for (size_t si = 0; si < segments.size(); ++si) {
    incident[segments[si].first].push_back(static_cast<int>(si));
    incident[segments[si].second].push_back(static_cast<int>(si));
  }
  std::vector<bool> used(segments.size(), false);
  const auto to_xy = [&](const LatticePoint& p) {
    return Eigen::Vector2d(region.x_min + 0.5 * p.kx * dx,
                           region.y_min + 0.5 * p.ky * dy);
  };

  std::vector<Polyline> polylines;
  auto walk = [&](int seg, LatticePoint from) {
    Polyline line{to_xy(from)};
    LatticePoint at = from;
    int cur = seg;
    while (true) {
      used[cur] = true;
      at = segments[cur].first == at ? segments[cur].second
                                     : segments[cur].first;
      line.push_back(to_xy(at));
      const auto& next = incident[at];
      int chosen = -1;
      if (next.size() == 2)
        for (int cand : next)
          if (!used[cand]) chosen = cand;
      if (chosen < 0) break;
      cur = chosen;
    }
    polylines.push_back(std::move(line));
  };

  // open chains first (endpoints have degree != 2), then leftover loops
  for (const auto& [pt, segs] : incident)
    if (segs.size() != 2)
      for (int si : segs)
        if (!used[si]) walk(si, pt);
  for (size_t si = 0; si < segments.size(); ++si)
    if (!used[si]) walk(static_cast<int>(si), segments[si].first);
  return polylines;
}

double directed_boundary_deviation(const std::vector<Polyline>& a,
                                   const std::vector<Polyline>& b) {
  double worst = 0.0;
  for (const auto& pa : a)
    for (const auto& va : pa) {
      double best = kInf;
      for (const auto& pb : b)
        for (const auto& vb : pb) best = std::min(best, (va - vb).norm());
      worst = std::max(worst, best);
    }
  return worst;
}

double boundary_hausdorff(const std::vector<Polyline>& a,
                          const std::vector<Polyline>& b) {
  return std::max(directed_boundary_deviation(a, b),
                  directed_boundary_deviation(b, a));
}

namespace {

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi) {
  double f_lo = f(lo), f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw std::runtime_error("bisect_root: no sign change in bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BoundaryRootPair weight_rescaling_check(double w1, double w2, double beta,
                                        const TwoGaussianSetup& setup) {
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw std::invalid_argument("weight_rescaling_check: weights > 0");
  if (!(beta >= 1.0))
    throw std::invalid_argument("weight_rescaling_check: beta >= 1");

  Eigen::Matrix2d cov1 = Eigen::Vector2d(setup.sigma1 * setup.sigma1,
                                         setup.sigma2 * setup.sigma2)
                             .asDiagonal();
  Eigen::Matrix2d cov2 =
      setup.sigma * setup.sigma * Eigen::Matrix2d::Identity();
  const GaussianComponent c1(Eigen::Vector2d(0, 0), cov1, w1);
  const GaussianComponent c2(Eigen::Vector2d(setup.L, 0), cov2, w2);

  const auto dib_diff = [&](double x) {
    const Eigen::Vector2d p(x, 0.0);
    return dib_point_score(p, setup.s, c1, w1, beta) -
           dib_point_score(p, setup.s, c2, w2, beta);
  };

  // rescaled weights (w^(1/beta), normalized)
  const double r1 = std::pow(w1, 1.0 / beta);
  const double r2 = std::pow(w2, 1.0 / beta);
  const GaussianComponent g1(c1.mean, c1.covariance, r1 / (r1 + r2));
  const GaussianComponent g2(c2.mean, c2.covariance, r2 / (r1 + r2));
  const auto gmm_diff = [&](double x) {
    const Eigen::Vector2d p(x, 0.0);
    return gmm_hard_score(p, g1) - gmm_hard_score(p, g2);
  };

  const double lo = -20.0 * setup.L, hi = 21.0 * setup.L;
  return BoundaryRootPair{bisect_root(dib_diff, lo, hi),
                          bisect_root(gmm_diff, lo, hi)};
}

}  // namespace dibgeo
