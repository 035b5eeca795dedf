#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dibgeo {

// One Gaussian component of a generative mixture.
struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // symmetric positive-definite
  double weight = 1.0;

  GaussianComponent(Eigen::VectorXd mean_in, Eigen::MatrixXd covariance_in,
                    double weight_in);

  int dim() const { return static_cast<int>(mean.size()); }
};

struct MixtureSpec {
  std::vector<GaussianComponent> components;

  explicit MixtureSpec(std::vector<GaussianComponent> components_in);

  int dim() const { return components.front().dim(); }
  // Component weights normalized to sum 1.
  Eigen::VectorXd normalized_weights() const;
};

// N observed points in d dimensions, optionally with generative labels.
struct PointSet {
  Eigen::MatrixXd points;           // N x d
  std::vector<int> labels;          // empty or size N

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !labels.empty(); }
};

// Throws std::invalid_argument when the invariants (N >= 1, finite
// coordinates, label size/range) are violated.
void validate_points(const PointSet& ps);

// Draws n points; the component of each point is sampled with probability
// proportional to its weight. Identical (spec, n, seed) gives identical
// output.
PointSet sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed);

enum class Preset {
  three_equal,
  three_unequal,
  five_multiscale,
  single_blob,
  symmetric_plus_skew,
};

const std::vector<std::string>& preset_names();
Preset preset_from_name(const std::string& name);  // throws on unknown name

// The generative mixture behind a preset. The literature behind these
// benchmark layouts does not pin generative parameters, so the values here
// are this project's documented choices (see README).
MixtureSpec preset_spec(Preset preset);
int preset_sample_count(Preset preset);

PointSet preset_dataset(Preset preset, std::uint64_t seed);
PointSet preset_dataset(const std::string& name, std::uint64_t seed);

// CSV I/O: header "x1,x2[,label]", one point per row. Round-trips
// coordinates exactly (17 significant digits).
void save_points(const PointSet& ps, const std::string& path);
PointSet load_points(const std::string& path);

}  // namespace dibgeo
