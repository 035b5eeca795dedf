#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dibgeo/geometry.hpp"
#include "dibgeo/info_measures.hpp"
#include "dibgeo/model_selection.hpp"
#include "dibgeo/smoothing.hpp"

using namespace dibgeo;

namespace {

SolutionRecord rec(double h, double i, int n_c, double beta = 1.0) {
  SolutionRecord r;
  r.entropy_T = h;
  r.info_TX = i;
  r.n_c = n_c;
  r.beta = beta;
  r.cost_L = h - beta * i;
  r.converged = true;
  return r;
}

JointDistribution preset_joint(Preset preset, int n, double s, int bins,
                               std::uint64_t seed) {
  PointSet ps = sample_mixture(preset_spec(preset), n, seed);
  const Grid grid = build_grid(ps, s, bins);
  return smooth_joint(ps, s, grid);
}

}  // namespace

TEST_CASE("geometric schedule endpoints and monotonicity") {
  const auto sched = geometric_schedule(0.1, 1e4, 60);
  CHECK(sched.size() == 60);
  CHECK(sched.front() == doctest::Approx(0.1));
  CHECK(sched.back() == 1e4);
  for (size_t k = 1; k < sched.size(); ++k) CHECK(sched[k] > sched[k - 1]);
  CHECK(geometric_schedule(2.0, 2.0, 1) == std::vector<double>{2.0});
}

TEST_CASE("beta_sweep with a single tiny beta returns one singleton record") {
  const JointDistribution joint =
      preset_joint(Preset::single_blob, 30, 2.0, 16, 5);
  const auto records = beta_sweep(joint, {1e-9}, 3, 1);
  REQUIRE(records.size() == 1);
  CHECK(records[0].n_c == 1);
  CHECK(records[0].beta == 1e-9);
}

TEST_CASE("pareto frontier keeps non-dominated records") {
  {
    const auto curve = pareto_frontier({rec(0.5, 0.3, 2)});
    CHECK(curve.entries.size() == 1);
    CHECK(curve.entries[0].on_frontier);
  }
  {
    const auto curve =
        pareto_frontier({rec(0.0, 0.0, 1), rec(1.0, 0.5, 2)});
    CHECK(curve.entries.size() == 2);
    CHECK(curve.entries[0].on_frontier);
    CHECK(curve.entries[1].on_frontier);
  }
  {
    const auto curve =
        pareto_frontier({rec(1.0, 0.4, 2), rec(1.0, 0.5, 2)});
    REQUIRE(curve.entries.size() == 2);
    CHECK(!curve.entries[0].on_frontier);  // dominated: same H, lower I
    CHECK(curve.entries[1].on_frontier);
  }
}

TEST_CASE("pareto frontier deduplicates by rounded key and tracks beta range") {
  auto a = rec(0.7, 0.4, 2, 1.0);
  auto b = rec(0.7 + 1e-13, 0.4 - 1e-13, 2, 4.0);  // same rounded key
  const auto curve = pareto_frontier({a, b});
  REQUIRE(curve.entries.size() == 1);
  CHECK(curve.entries[0].beta_emp_min == 1.0);
  CHECK(curve.entries[0].beta_emp_max == 4.0);
}

TEST_CASE("kink angle formula") {
  CHECK(kink_angle(2.0, 2.0) == 0.0);
  CHECK(kink_angle(0.37, 0.37) == 0.0);
  CHECK(kink_angle(0.5, 2.0) ==
        doctest::Approx(M_PI / 2 - 2.0 * std::atan(0.5)).epsilon(1e-14));
  // slopes widen -> theta approaches pi/2
  CHECK(kink_angle(1e-12, 1e12) ==
        doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(kink_angle(1.0, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("kink annotation uses chord slopes") {
  // concave curve: slopes 2, 1, 0.5 -> beta 0.5, 1, 2 along the chords
  const auto curve = kink_angles(pareto_frontier(
      {rec(0, 0, 1), rec(1, 2.0, 2), rec(2, 3.0, 3), rec(3, 3.5, 4)}));
  REQUIRE(curve.entries.size() == 4);
  CHECK(!curve.entries[0].has_kink);
  CHECK(!curve.entries[3].has_kink);
  CHECK(curve.entries[1].beta_min == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(curve.entries[1].beta_max == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(curve.entries[2].beta_min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(curve.entries[2].beta_max == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(curve.entries[1].theta ==
        doctest::Approx(kink_angle(0.5, 1.0)).epsilon(1e-14));
  // beta ordering along the concave frontier
  for (const auto& e : curve.entries)
    if (e.has_kink) CHECK(e.beta_min <= e.beta_max + 1e-12);
}

TEST_CASE("non-concave frontier points are trimmed before kinks") {
  // middle point lies below the chord between its neighbors
  const auto curve = kink_angles(pareto_frontier(
      {rec(0, 0, 1), rec(1, 0.2, 2), rec(2, 2.0, 3)}));
  REQUIRE(curve.entries.size() == 3);
  CHECK(curve.entries[1].on_frontier);
  CHECK(!curve.entries[1].on_hull);
  CHECK(curve.trimmed_count == 1);
  CHECK(!curve.entries[1].has_kink);
}

TEST_CASE("theta is invariant under common rescaling of H and I") {
  const std::vector<SolutionRecord> base = {
      rec(0, 0, 1), rec(0.8, 1.7, 2), rec(1.7, 2.6, 3), rec(2.9, 3.1, 5)};
  std::vector<SolutionRecord> scaled = base;
  const double kappa = 3.7;
  for (auto& r : scaled) {
    r.entropy_T *= kappa;
    r.info_TX *= kappa;
  }
  const auto curve_a = kink_angles(pareto_frontier(base));
  const auto curve_b = kink_angles(pareto_frontier(scaled));
  REQUIRE(curve_a.entries.size() == curve_b.entries.size());
  for (size_t k = 0; k < curve_a.entries.size(); ++k) {
    if (!curve_a.entries[k].has_kink) continue;
    CHECK(curve_b.entries[k].has_kink);
    CHECK(curve_b.entries[k].theta ==
          doctest::Approx(curve_a.entries[k].theta).epsilon(1e-12));
  }
}

TEST_CASE("selection takes the largest kink, ties to fewer clusters") {
  {
    // big kink at the 3-cluster point
    const auto curve = kink_angles(pareto_frontier(
        {rec(0, 0, 1), rec(1, 0.5, 2), rec(1.2, 1.7, 3), rec(3, 1.9, 4)}));
    const Selection sel = select_n_clusters(curve);
    CHECK(!sel.degenerate);
    CHECK(sel.n_c == 3);
    CHECK(sel.theta > 0.5);
  }
  {
    // exact theta tie resolved toward the smaller cluster count
    InformationCurve curve;
    for (int n_c : {5, 2, 7}) {
      CurveEntry e;
      e.record = rec(n_c * 0.1, n_c * 0.1, n_c);
      e.has_kink = true;
      e.theta = 0.4;
      curve.entries.push_back(e);
    }
    CHECK(select_n_clusters(curve).n_c == 2);
  }
}

TEST_CASE("selection degenerates gracefully on tiny frontiers") {
  const auto curve =
      kink_angles(pareto_frontier({rec(0, 0, 1), rec(1, 1, 4)}));
  const Selection sel = select_n_clusters(curve);
  CHECK(sel.degenerate);
  CHECK(sel.n_c == 4);  // highest-information solution
}

TEST_CASE("sweep reproducibility and plateau content on a small fixture") {
  const JointDistribution joint =
      preset_joint(Preset::three_equal, 60, 2.0, 24, 9);
  const auto schedule = geometric_schedule(0.5, 300.0, 18);
  const auto records = beta_sweep(joint, schedule, 3, 4);
  const auto again = beta_sweep(joint, schedule, 3, 4);
  REQUIRE(records.size() == again.size());
  for (size_t k = 0; k < records.size(); ++k) {
    CHECK(records[k].cost_L == again[k].cost_L);
    CHECK(records[k].assignment == again[k].assignment);
  }
  bool has_three = false;
  for (const auto& r : records) has_three |= r.n_c == 3;
  CHECK(has_three);

  const auto curve = kink_angles(pareto_frontier(records));
  const Selection sel = select_n_clusters(curve);
  CHECK(sel.n_c == 3);
}

TEST_CASE("a lone blob never shows high-fraction fine structure") {
  const JointDistribution joint =
      preset_joint(Preset::single_blob, 60, 4.0, 24, 13);
  const auto records =
      beta_sweep(joint, geometric_schedule(0.5, 300.0, 15), 3, 2);
  for (const auto& r : records) {
    const double fraction = r.info_TX / joint.info_ix;
    if (r.n_c > 3) CHECK(fraction <= 0.99);
  }
}
