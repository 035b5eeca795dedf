#include "dibgeo/dib.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "dibgeo/info_measures.hpp"
#include "dibgeo/rng.hpp"

namespace dibgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<double> g_max_cost_increase{0.0};

void note_transition(double delta, double& local_max) {
  if (delta > local_max) local_max = delta;
  double seen = g_max_cost_increase.load(std::memory_order_relaxed);
  while (delta > seen && !g_max_cost_increase.compare_exchange_weak(
                             seen, delta, std::memory_order_relaxed)) {
  }
}

// Cross terms for KL(p_i || q_c) against every cluster at once:
//   KL(i, c) = row_plogp[i] - cross(i, c), +inf where zero_mass(i, c) > 0.
// log(0) cells are masked out of `cross`, which is exact because the same
// cells must carry zero p_i mass for the divergence to be finite; the mass
// that lands on them is accumulated separately in `zero_mass`.
struct KlCross {
  Eigen::MatrixXd cross;      // N x C
  Eigen::MatrixXd zero_mass;  // N x C, p_i mass on q_c's zero cells
};

KlCross kl_cross_terms(const Eigen::MatrixXd& p_rows,
                       const Eigen::MatrixXd& q_rows) {
  const auto q = q_rows.array();
  Eigen::MatrixXd log_q_safe = (q > 0.0).select(q.log(), 0.0);
  Eigen::MatrixXd zero_mask = (q <= 0.0).cast<double>();
  return {p_rows * log_q_safe.transpose(), p_rows * zero_mask.transpose()};
}

}  // namespace

void reset_cost_monitor() { g_max_cost_increase.store(0.0); }
double cost_monitor_max_increase() { return g_max_cost_increase.load(); }

HardClustering make_clustering(const JointDistribution& joint,
                               const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != joint.n())
    throw std::invalid_argument("make_clustering: assignment size != N");

  std::map<int, int> relabel;  // ascending old label -> compact label
  for (int a : assignment) {
    if (a < 0) throw std::invalid_argument("make_clustering: negative label");
    relabel.emplace(a, 0);
  }
  int next = 0;
  for (auto& [old_label, compact] : relabel) compact = next++;

  HardClustering out;
  out.assignment.resize(assignment.size());
  out.cluster_size.assign(next, 0);
  for (size_t i = 0; i < assignment.size(); ++i) {
    const int c = relabel.at(assignment[i]);
    out.assignment[i] = c;
    ++out.cluster_size[c];
  }

  const int n = joint.n();
  out.mass.resize(next);
  for (int c = 0; c < next; ++c)
    out.mass[c] = static_cast<double>(out.cluster_size[c]) / n;

  out.conditional = Eigen::MatrixXd::Zero(next, joint.m());
  for (int i = 0; i < n; ++i)
    out.conditional.row(out.assignment[i]) += joint.conditional.row(i);
  for (int c = 0; c < next; ++c) out.conditional.row(c) /= out.cluster_size[c];
  return out;
}

std::string assignment_digest(const std::vector<int>& assignment) {
  // canonical form: relabel by order of first occurrence
  std::vector<int> canon(assignment.size());
  std::map<int, int> seen;
  for (size_t i = 0; i < assignment.size(); ++i) {
    auto [it, inserted] =
        seen.emplace(assignment[i], static_cast<int>(seen.size()));
    canon[i] = it->second;
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (int v : canon)
    for (int b = 0; b < 4; ++b) {
      h ^= static_cast<std::uint64_t>((v >> (8 * b)) & 0xff);
      h *= 0x100000001b3ULL;
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Argmax assignment for one set of cluster statistics; returns labels in
// terms of the current cluster indices, with fresh labels >= C for forced
// singletons.
std::vector<int> assign_points(const JointDistribution& joint, double beta,
                               const Eigen::VectorXd& mass,
                               const Eigen::MatrixXd& conditional,
                               const HardClustering& current) {
  const int n = joint.n();
  const int n_c = static_cast<int>(mass.size());
  const KlCross kl = kl_cross_terms(joint.conditional, conditional);
  const Eigen::VectorXd log_mass =
      (mass.array() > 0.0).select(mass.array().log(), -kInf);

  std::vector<int> labels(n);
  int next_fresh = n_c;
  for (int i = 0; i < n; ++i) {
    int best = -1;
    double best_score = -kInf;
    for (int c = 0; c < n_c; ++c) {
      if (mass[c] <= 0.0 || kl.zero_mass(i, c) != 0.0) continue;
      // constant -beta * row_plogp[i] dropped: it does not affect the argmax
      const double score = log_mass[c] + beta * kl.cross(i, c);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    if (best >= 0) {
      labels[i] = best;
      continue;
    }
    // Every divergence is infinite: fall back to the lowest-index cluster
    // holding another point in the same grid cell, else open a singleton.
    int fallback = -1;
    for (int j = 0; j < n; ++j)
      if (j != i && joint.point_cell[j] == joint.point_cell[i] &&
          (fallback < 0 || current.assignment[j] < fallback))
        fallback = current.assignment[j];
    labels[i] = fallback >= 0 ? fallback : next_fresh++;
  }
  return labels;
}

}  // namespace

HardClustering dib_step(const JointDistribution& joint, double beta,
                        const HardClustering& current, StepConditionals mode) {
  if (current.n() != joint.n())
    throw std::invalid_argument("dib_step: clustering size != N");

  std::vector<int> labels =
      assign_points(joint, beta, current.mass, current.conditional, current);
  if (mode == StepConditionals::refreshed) {
    // Re-derive conditionals from the tentative assignment, keep the
    // previous priors, and assign once more.
    HardClustering tentative = make_clustering(joint, labels);
    // map previous-step masses onto the surviving (compacted) clusters
    Eigen::VectorXd carried(tentative.n_clusters());
    {
      std::map<int, int> relabel;
      for (int a : labels) relabel.emplace(a, 0);
      int next = 0;
      for (auto& [old_label, compact] : relabel) compact = next++;
      for (auto& [old_label, compact] : relabel)
        carried[compact] = old_label < current.n_clusters()
                               ? current.mass[old_label]
                               : 1.0 / joint.n();
    }
    labels = assign_points(joint, beta, carried, tentative.conditional,
                           tentative);
  }
  return make_clustering(joint, labels);
}

std::vector<int> dib_classify_rows(const Eigen::MatrixXd& rows,
                                   const HardClustering& clustering,
                                   double beta) {
  if (rows.cols() != clustering.conditional.cols())
    throw std::invalid_argument("dib_classify_rows: cell count mismatch");
  const KlCross kl = kl_cross_terms(rows, clustering.conditional);
  const Eigen::VectorXd log_mass = clustering.mass.array().log();
  std::vector<int> labels(rows.rows(), -1);
  for (int i = 0; i < rows.rows(); ++i) {
    double best_score = -kInf;
    for (int c = 0; c < clustering.n_clusters(); ++c) {
      if (kl.zero_mass(i, c) != 0.0) continue;
      const double score = log_mass[c] + beta * kl.cross(i, c);
      if (score > best_score) {
        best_score = score;
        labels[i] = c;
      }
    }
  }
  return labels;
}

double clustering_entropy(const HardClustering& clustering) {
  return entropy(clustering.mass);
}

double clustering_info_x(const JointDistribution& joint,
                         const HardClustering& clustering) {
  return rows_vs_marginal_info(clustering.mass, clustering.conditional,
                               joint.marginal_x);
}

double dib_cost(const JointDistribution& joint,
                const HardClustering& clustering, double beta) {
  return clustering_entropy(clustering) -
         beta * clustering_info_x(joint, clustering);
}

HardClustering merge_pass(const JointDistribution& joint, double beta,
                          const HardClustering& current) {
  const int n_c = current.n_clusters();
  if (n_c < 2) return current;

  const auto& px = joint.marginal_x;
  // per-cluster information contribution g_c = sum_x q(x|c) log(q(x|c)/p(x))
  Eigen::VectorXd g(n_c);
  for (int c = 0; c < n_c; ++c) {
    double acc = 0.0;
    for (int x = 0; x < joint.m(); ++x) {
      const double q = current.conditional(c, x);
      if (q > 0.0) acc += q * std::log(q / px[x]);
    }
    g[c] = acc;
  }

  int best_a = -1, best_b = -1;
  double best_delta = 0.0;  // only strict reductions qualify
  Eigen::VectorXd merged(joint.m());
  for (int a = 0; a < n_c; ++a)
    for (int b = a + 1; b < n_c; ++b) {
      const double ma = current.mass[a], mb = current.mass[b];
      const double m = ma + mb;
      merged = (current.cluster_size[a] * current.conditional.row(a) +
                current.cluster_size[b] * current.conditional.row(b))
                   .transpose() /
               (current.cluster_size[a] + current.cluster_size[b]);
      double gm = 0.0;
      for (int x = 0; x < joint.m(); ++x)
        if (merged[x] > 0.0) gm += merged[x] * std::log(merged[x] / px[x]);
      const double delta_h =
          -m * std::log(m) + ma * std::log(ma) + mb * std::log(mb);
      const double delta_i = m * gm - ma * g[a] - mb * g[b];
      const double delta = delta_h - beta * delta_i;
      if (delta < best_delta) {
        best_delta = delta;
        best_a = a;
        best_b = b;
      }
    }

  if (best_a < 0) return current;
  std::vector<int> labels = current.assignment;
  for (int& l : labels)
    if (l == best_b) l = best_a;
  return make_clustering(joint, labels);
}

SolutionRecord dib_solve(const JointDistribution& joint, double beta,
                         int init_clusters, std::uint64_t seed, int max_iter,
                         double tol, StepConditionals mode) {
  const int n = joint.n();
  if (init_clusters < 1 || init_clusters > n)
    throw std::invalid_argument("dib_solve: init_clusters out of [1, N]");

  Rng rng(seed);
  std::vector<int> init(n);
  for (int i = 0; i < n; ++i)
    init[i] = static_cast<int>(rng.below(init_clusters));

  HardClustering clustering = make_clustering(joint, init);
  double cost = dib_cost(joint, clustering, beta);

  SolutionRecord rec;
  rec.beta = beta;
  rec.s = joint.s;
  double max_increase = 0.0;
  int iter = 0;
  bool local_converged = false;

  while (true) {
    local_converged = false;
    while (iter < max_iter) {
      HardClustering next = dib_step(joint, beta, clustering, mode);
      ++iter;
      const double next_cost = dib_cost(joint, next, beta);
      note_transition(next_cost - cost, max_increase);
      const bool moved = next.assignment != clustering.assignment;
      const double change = std::abs(next_cost - cost);
      clustering = std::move(next);
      cost = next_cost;
      if (!moved || change < tol) {
        local_converged = true;
        break;
      }
    }
    if (!local_converged) break;  // iteration budget exhausted

    HardClustering merged = merge_pass(joint, beta, clustering);
    if (merged.n_clusters() == clustering.n_clusters()) break;
    const double merged_cost = dib_cost(joint, merged, beta);
    note_transition(merged_cost - cost, max_increase);
    clustering = std::move(merged);
    cost = merged_cost;
    if (iter >= max_iter) {
      local_converged = false;  // merge applied but no budget to re-iterate
      break;
    }
  }

  rec.n_c = clustering.n_clusters();
  rec.entropy_T = clustering_entropy(clustering);
  rec.info_TX = clustering_info_x(joint, clustering);
  rec.cost_L = rec.entropy_T - beta * rec.info_TX;
  rec.assignment_digest = assignment_digest(clustering.assignment);
  rec.converged = local_converged;
  rec.iterations = iter;
  rec.assignment = clustering.assignment;
  rec.max_step_increase = std::max(0.0, max_increase);
  return rec;
}

SoftEncoder ib_step(const JointDistribution& joint, double beta,
                    const Eigen::MatrixXd& current_soft) {
  const int n = joint.n();
  if (current_soft.rows() != n)
    throw std::invalid_argument("ib_step: encoder rows != N");
  const int t_count = static_cast<int>(current_soft.cols());

  // marginals of the current encoder (uniform p(i) = 1/N)
  Eigen::VectorXd mass = current_soft.colwise().sum() / n;
  Eigen::MatrixXd conditional = Eigen::MatrixXd::Zero(t_count, joint.m());
  for (int t = 0; t < t_count; ++t)
    if (mass[t] > 0.0)
      conditional.row(t) = (current_soft.col(t).transpose() *
                            joint.conditional) /
                           (n * mass[t]);

  const KlCross kl = kl_cross_terms(joint.conditional, conditional);

  SoftEncoder out;
  out.encoder.resize(n, t_count);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd logit(t_count);
    for (int t = 0; t < t_count; ++t) {
      if (mass[t] <= 0.0 || kl.zero_mass(i, t) != 0.0) {
        logit[t] = -kInf;
        continue;
      }
      const double div = joint.row_plogp[i] - kl.cross(i, t);
      logit[t] = std::log(mass[t]) - beta * div;
    }
    const double top = logit.maxCoeff();
    if (!std::isfinite(top)) {
      // unreachable for a valid encoder; spread uniformly over live clusters
      Eigen::VectorXd live = (mass.array() > 0.0).cast<double>();
      out.encoder.row(i) = live.transpose() / live.sum();
      continue;
    }
    Eigen::VectorXd w = (logit.array() - top).exp();
    for (int t = 0; t < t_count; ++t)
      if (!std::isfinite(logit[t])) w[t] = 0.0;
    out.encoder.row(i) = w.transpose() / w.sum();
  }

  out.mass = out.encoder.colwise().sum() / n;
  out.conditional = Eigen::MatrixXd::Zero(t_count, joint.m());
  for (int t = 0; t < t_count; ++t)
    if (out.mass[t] > 0.0)
      out.conditional.row(t) =
          (out.encoder.col(t).transpose() * joint.conditional) /
          (n * out.mass[t]);
  return out;
}

}  // namespace dibgeo
