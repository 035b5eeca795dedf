#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dibgeo/geometry.hpp"

using namespace dibgeo;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

bool bits_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("single component forces label zero") {
  MixtureSpec spec({GaussianComponent(Eigen::Vector2d(0, 0),
                                      Eigen::Matrix2d::Identity(), 1.0)});
  const PointSet ps = sample_mixture(spec, 4, 123);
  CHECK(ps.n() == 4);
  REQUIRE(ps.has_labels());
  for (int l : ps.labels) CHECK(l == 0);
}

TEST_CASE("component counts respect the weights") {
  MixtureSpec spec({GaussianComponent(Eigen::Vector2d(0, 0),
                                      Eigen::Matrix2d::Identity(), 0.5),
                    GaussianComponent(Eigen::Vector2d(10, 0),
                                      Eigen::Matrix2d::Identity(), 0.5)});
  const PointSet ps = sample_mixture(spec, 1000, 42);
  int count0 = 0;
  for (int l : ps.labels) count0 += l == 0;
  // 4 sigma binomial bound around the expectation
  CHECK(std::abs(count0 - 500.0) <= 4.0 * std::sqrt(1000 * 0.25));
}

TEST_CASE("sampling is deterministic per seed") {
  const MixtureSpec spec = preset_spec(Preset::three_equal);
  const PointSet a = sample_mixture(spec, 50, 7);
  const PointSet b = sample_mixture(spec, 50, 7);
  CHECK(bits_equal(a.points, b.points));
  CHECK(a.labels == b.labels);
  const PointSet c = sample_mixture(spec, 50, 8);
  CHECK(!bits_equal(a.points, c.points));
}

TEST_CASE("empirical mean converges to the component mean") {
  MixtureSpec spec({GaussianComponent(Eigen::Vector2d(3, -2),
                                      Eigen::Matrix2d::Identity(), 1.0)});
  const int n = 10000;
  const PointSet ps = sample_mixture(spec, n, 1);
  const Eigen::RowVectorXd mean = ps.points.colwise().mean();
  const double bound = 5.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean[0] - 3.0) < bound);
  CHECK(std::abs(mean[1] + 2.0) < bound);
}

TEST_CASE("invalid covariance is rejected at construction") {
  Eigen::Matrix2d not_pd;
  not_pd << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(
      GaussianComponent(Eigen::Vector2d(0, 0), not_pd, 1.0),
      std::invalid_argument);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(GaussianComponent(Eigen::Vector2d(0, 0), asym, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      GaussianComponent(Eigen::Vector2d(0, 0), Eigen::Matrix2d::Identity(),
                        0.0),
      std::invalid_argument);
}

TEST_CASE("three_equal preset geometry") {
  const MixtureSpec spec = preset_spec(Preset::three_equal);
  REQUIRE(spec.components.size() == 3);
  const Eigen::VectorXd w = spec.normalized_weights();
  for (int k = 0; k < 3; ++k) CHECK(w[k] == doctest::Approx(1.0 / 3));
  // pairwise equidistant means
  const double d01 =
      (spec.components[0].mean - spec.components[1].mean).norm();
  const double d02 =
      (spec.components[0].mean - spec.components[2].mean).norm();
  const double d12 =
      (spec.components[1].mean - spec.components[2].mean).norm();
  CHECK(d01 == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(d02 == doctest::Approx(d01).epsilon(1e-12));
  CHECK(d12 == doctest::Approx(d01).epsilon(1e-12));
  CHECK(preset_dataset(Preset::three_equal, 3).n() == 150);
}

TEST_CASE("single_blob and symmetric_plus_skew presets") {
  CHECK(preset_spec(Preset::single_blob).components.size() == 1);
  CHECK(preset_dataset(Preset::single_blob, 5).n() == 100);

  const MixtureSpec sps = preset_spec(Preset::symmetric_plus_skew);
  REQUIRE(sps.components.size() == 2);
  CHECK(preset_dataset(Preset::symmetric_plus_skew, 5).n() == 1000);
  const Eigen::VectorXd w = sps.normalized_weights();
  CHECK(w[0] == doctest::Approx(0.5));
  // first isotropic, second with eigenvalues (4, 1)
  CHECK(bits_equal(sps.components[0].covariance, Eigen::Matrix2d::Identity()));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
      sps.components[1].covariance);
  CHECK(es.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("preset determinism and unknown names") {
  const PointSet a = preset_dataset("three_unequal", 11);
  const PointSet b = preset_dataset("three_unequal", 11);
  CHECK(bits_equal(a.points, b.points));
  CHECK(a.n() == 150);
  CHECK(preset_dataset("five_multiscale", 1).n() == 250);
  CHECK_THROWS_AS(preset_dataset("seven_blobs", 1), std::invalid_argument);
}

TEST_CASE("csv round trip preserves coordinates") {
  PointSet ps;
  ps.points.resize(3, 2);
  ps.points << 1.0 / 3.0, -2.123456789012345e-7, M_PI, 1e300, -4.5, 0.0;
  ps.labels = {0, 2, 1};
  const std::string path = temp_path("dibgeo_roundtrip.csv");
  save_points(ps, path);
  const PointSet loaded = load_points(path);
  CHECK(bits_equal(loaded.points, ps.points));
  CHECK(loaded.labels == ps.labels);
  std::filesystem::remove(path);
}

TEST_CASE("csv parser reports the offending line") {
  const std::string path = temp_path("dibgeo_bad.csv");
  {
    std::ofstream out(path);
    out << "x1,x2\n1.0,2.0\n3.0,oops\n";
  }
  try {
    load_points(path);
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv parser rejects inconsistent dimension and empty files") {
  const std::string path = temp_path("dibgeo_dim.csv");
  {
    std::ofstream out(path);
    out << "x1,x2\n1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(load_points(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "";
  }
  try {
    load_points(path);
    FAIL("expected empty-file error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("no points") != std::string::npos);
  }
  std::filesystem::remove(path);
}
