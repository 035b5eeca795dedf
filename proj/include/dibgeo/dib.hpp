#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dibgeo/smoothing.hpp"

namespace dibgeo {

// Deterministic assignment i -> c with the distributions it induces.
struct HardClustering {
  std::vector<int> assignment;    // size N, labels contiguous 0..C-1
  std::vector<int> cluster_size;  // size C, all > 0
  Eigen::VectorXd mass;           // q(c) = cluster_size[c] / N
  Eigen::MatrixXd conditional;    // C x M; q(x|c) = mean of member rows

  int n() const { return static_cast<int>(assignment.size()); }
  int n_clusters() const { return static_cast<int>(cluster_size.size()); }
};

// Recomputes masses and conditionals from an assignment. Labels are
// compacted to 0..C-1 in ascending order of the incoming labels, dropping
// empty clusters.
HardClustering make_clustering(const JointDistribution& joint,
                               const std::vector<int>& assignment);

// Hex digest of the assignment partition, invariant under label permutation.
std::string assignment_digest(const std::vector<int>& assignment);

// Which conditionals the assignment argmax sees. The update equations index
// the cluster prior at the previous step but the divergence at the current
// one, which is circular; `previous` (the default) evaluates both at the
// previous step, `refreshed` re-derives the conditionals once mid-step for
// comparison.
enum class StepConditionals { previous, refreshed };

// One fixed-point update: every i moves to
//   argmax_c log q(c) - beta * KL(p(x|i) || q(x|c)),
// ties broken toward the lowest cluster index, then all cluster statistics
// are recomputed. A point whose every candidate score is -inf (possible
// with delta tables) joins the lowest-index cluster holding a point in its
// grid cell, else becomes a singleton.
HardClustering dib_step(const JointDistribution& joint, double beta,
                        const HardClustering& current,
                        StepConditionals mode = StepConditionals::previous);

// Evaluates all pairwise merges; applies the one with the largest strict
// reduction of L = H(T) - beta * I(T;x), or returns the input unchanged.
HardClustering merge_pass(const JointDistribution& joint, double beta,
                          const HardClustering& current);

double clustering_entropy(const HardClustering& clustering);
double clustering_info_x(const JointDistribution& joint,
                         const HardClustering& clustering);
// L = H(T) - beta * I(T;x)
double dib_cost(const JointDistribution& joint,
                const HardClustering& clustering, double beta);

// One converged solve.
struct SolutionRecord {
  double beta = 0.0;
  double s = 0.0;
  int n_c = 0;
  double entropy_T = 0.0;   // nats
  double info_TX = 0.0;     // I(c;x), nats
  double cost_L = 0.0;      // entropy_T - beta * info_TX
  std::string assignment_digest;
  bool converged = false;
  int iterations = 0;
  std::vector<int> assignment;
  // Diagnostic: largest single-transition rise of L observed during the
  // solve (0 when the descent was monotone). Exact descent is guaranteed up
  // to roundoff, so anything beyond ~1e-9 indicates a bug.
  double max_step_increase = 0.0;
};

// Seeded random init into init_clusters groups, then alternating dib_step
// phases and merge passes until a full cycle changes nothing.
SolutionRecord dib_solve(const JointDistribution& joint, double beta,
                         int init_clusters, std::uint64_t seed,
                         int max_iter = 500, double tol = 1e-10,
                         StepConditionals mode = StepConditionals::previous);

// Process-wide high-water mark of per-transition cost increases, fed by
// every dib_solve; test suites reset it, run, and assert it stays ~0.
void reset_cost_monitor();
double cost_monitor_max_increase();

// argmax_c log q(c) - beta * KL(row || q(x|c)) for each row, with the same
// -inf exclusion and lowest-index tie rule as dib_step; -1 for rows where
// every cluster is excluded. Rows must be distributions over the same cell
// set as the clustering's conditionals.
std::vector<int> dib_classify_rows(const Eigen::MatrixXd& rows,
                                   const HardClustering& clustering,
                                   double beta);

// Soft encoder state for the non-deterministic (soft) bottleneck update.
struct SoftEncoder {
  Eigen::MatrixXd encoder;      // N x T, rows sum to 1
  Eigen::VectorXd mass;         // q(t)
  Eigen::MatrixXd conditional;  // T x M, q(x|t)
};

// One soft update: q(t|i) ∝ q(t) exp(-beta KL(p(x|i) || q(x|t))) with the
// marginals on the right evaluated from current_soft; the returned mass and
// conditional are re-derived from the new encoder.
SoftEncoder ib_step(const JointDistribution& joint, double beta,
                    const Eigen::MatrixXd& current_soft);

}  // namespace dibgeo
