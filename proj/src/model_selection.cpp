#include "dibgeo/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "dibgeo/rng.hpp"

namespace dibgeo {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::vector<double> geometric_schedule(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw std::invalid_argument("geometric_schedule: need 0 < lo <= hi");
  if (steps < 1) throw std::invalid_argument("geometric_schedule: steps >= 1");
  std::vector<double> out(steps);
  if (steps == 1) {
    out[0] = lo;
    return out;
  }
  const double ratio = std::log(hi / lo) / (steps - 1);
  for (int k = 0; k < steps; ++k) out[k] = lo * std::exp(ratio * k);
  out.back() = hi;
  return out;
}

std::vector<SolutionRecord> beta_sweep(const JointDistribution& joint,
                                       const std::vector<double>& schedule,
                                       int restarts, std::uint64_t seed,
                                       const SweepOptions& options) {
  if (schedule.empty())
    throw std::invalid_argument("beta_sweep: empty schedule");
  if (!std::is_sorted(schedule.begin(), schedule.end()))
    throw std::invalid_argument("beta_sweep: schedule must ascend");
  if (restarts < 1) throw std::invalid_argument("beta_sweep: restarts >= 1");

  const int init = options.init_clusters > 0
                       ? options.init_clusters
                       : std::min(joint.n(), 16);

  std::vector<SolutionRecord> kept;
  kept.reserve(schedule.size());
  for (size_t bi = 0; bi < schedule.size(); ++bi) {
    SolutionRecord best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
      const std::uint64_t sub =
          mix_seed(seed, bi * static_cast<std::uint64_t>(restarts) + r);
      SolutionRecord rec =
          dib_solve(joint, schedule[bi], init, sub, options.max_iter,
                    options.tol, options.mode);
      if (!have || rec.cost_L < best.cost_L) {
        best = std::move(rec);
        have = true;
      }
    }
    kept.push_back(std::move(best));
  }
  return kept;
}

InformationCurve pareto_frontier(const std::vector<SolutionRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("pareto_frontier: no records");

  auto key = [](const SolutionRecord& r) {
    return std::tuple<int, long long, long long>(
        r.n_c, std::llround(r.entropy_T * 1e9), std::llround(r.info_TX * 1e9));
  };

  std::map<std::tuple<int, long long, long long>, CurveEntry> groups;
  for (const auto& rec : records) {
    auto [it, inserted] = groups.try_emplace(key(rec));
    CurveEntry& e = it->second;
    if (inserted) {
      e.record = rec;
      e.beta_emp_min = e.beta_emp_max = rec.beta;
      e.beta_min = e.beta_max = e.theta = kNaN;
    } else {
      e.beta_emp_min = std::min(e.beta_emp_min, rec.beta);
      e.beta_emp_max = std::max(e.beta_emp_max, rec.beta);
    }
  }

  InformationCurve curve;
  curve.entries.reserve(groups.size());
  for (auto& [k, e] : groups) curve.entries.push_back(std::move(e));
  std::sort(curve.entries.begin(), curve.entries.end(),
            [](const CurveEntry& a, const CurveEntry& b) {
              if (a.record.entropy_T != b.record.entropy_T)
                return a.record.entropy_T < b.record.entropy_T;
              return a.record.info_TX < b.record.info_TX;
            });

  // non-dominated in (lower H, higher I)
  for (auto& e : curve.entries) {
    bool dominated = false;
    for (const auto& f : curve.entries) {
      if (&f == &e) continue;
      const bool no_worse = f.record.entropy_T <= e.record.entropy_T &&
                            f.record.info_TX >= e.record.info_TX;
      const bool better = f.record.entropy_T < e.record.entropy_T ||
                          f.record.info_TX > e.record.info_TX;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    e.on_frontier = !dominated;
  }

  // concave majorant of the frontier (monotone-chain upper hull)
  std::vector<int> frontier;
  for (size_t k = 0; k < curve.entries.size(); ++k)
    if (curve.entries[k].on_frontier) frontier.push_back(static_cast<int>(k));
  std::vector<int> hull;
  for (int idx : frontier) {
    const auto h = [&](int j) { return curve.entries[j].record.entropy_T; };
    const auto v = [&](int j) { return curve.entries[j].record.info_TX; };
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      const double cross = (h(b) - h(a)) * (v(idx) - v(a)) -
                           (v(b) - v(a)) * (h(idx) - h(a));
      if (cross >= 0.0) hull.pop_back();  // b below the a-idx chord
      else break;
    }
    hull.push_back(idx);
  }
  for (int idx : hull) curve.entries[idx].on_hull = true;
  curve.trimmed_count =
      static_cast<int>(frontier.size()) - static_cast<int>(hull.size());
  return curve;
}

double kink_angle(double beta_min, double beta_max) {
  if (beta_min == beta_max) return 0.0;  // arctan b + arctan 1/b = pi/2
  const double right = beta_max == kInf ? 0.0 : std::atan(1.0 / beta_max);
  return M_PI / 2.0 - std::atan(beta_min) - right;
}

InformationCurve kink_angles(InformationCurve curve) {
  std::vector<int> hull;
  for (size_t k = 0; k < curve.entries.size(); ++k)
    if (curve.entries[k].on_hull) hull.push_back(static_cast<int>(k));

  for (size_t j = 0; j + 1 < hull.size(); ++j) {
    if (j == 0) continue;  // endpoints keep theta undefined
    CurveEntry& e = curve.entries[hull[j]];
    const auto& prev = curve.entries[hull[j - 1]].record;
    const auto& next = curve.entries[hull[j + 1]].record;
    const auto& here = e.record;
    const double dh_l = here.entropy_T - prev.entropy_T;
    const double di_l = here.info_TX - prev.info_TX;
    const double dh_r = next.entropy_T - here.entropy_T;
    const double di_r = next.info_TX - here.info_TX;
    e.beta_min = di_l > 0.0 ? dh_l / di_l : kInf;
    e.beta_max = di_r > 0.0 ? dh_r / di_r : kInf;
    e.theta = kink_angle(e.beta_min, e.beta_max);
    e.has_kink = true;
  }
  return curve;
}

Selection select_n_clusters(const InformationCurve& curve) {
  Selection sel;
  const CurveEntry* best = nullptr;
  for (const auto& e : curve.entries) {
    if (!e.has_kink) continue;
    if (!best || e.theta > best->theta ||
        (e.theta == best->theta && e.record.n_c < best->record.n_c))
      best = &e;
  }
  if (best) {
    sel.n_c = best->record.n_c;
    sel.theta = best->theta;
    return sel;
  }
  // No interior frontier point: fall back to the most informative solution.
  sel.degenerate = true;
  const CurveEntry* top = nullptr;
  for (const auto& e : curve.entries)
    if (e.on_frontier && (!top || e.record.info_TX > top->record.info_TX))
      top = &e;
  if (top) sel.n_c = top->record.n_c;
  sel.theta = kNaN;
  return sel;
}

}  // namespace dibgeo
