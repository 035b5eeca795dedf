#include "dibgeo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "dibgeo/baselines.hpp"
#include "dibgeo/rng.hpp"
#include "dibgeo/serialize.hpp"
#include "dibgeo/smoothing.hpp"
#include "dibgeo/svg.hpp"

namespace fs = std::filesystem;

namespace dibgeo {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

std::string out_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["dataset"] = c.dataset;
  j["s"] = c.s;
  j["bins"] = c.bins;
  j["beta_min"] = c.beta_lo;
  j["beta_max"] = c.beta_hi;
  j["beta_steps"] = c.beta_steps;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  return j;
}

bool is_preset_name(const std::string& name) {
  const auto& names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("config parse error in " + path + ": " + e.what());
  }
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "dataset") c.dataset = value.get<std::string>();
    else if (key == "s") c.s = value.get<double>();
    else if (key == "bins") c.bins = value.get<int>();
    else if (key == "beta_min") c.beta_lo = value.get<double>();
    else if (key == "beta_max") c.beta_hi = value.get<double>();
    else if (key == "beta_steps") c.beta_steps = value.get<int>();
    else if (key == "restarts") c.restarts = value.get<int>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "out") c.out_dir = value.get<std::string>();
    else if (key == "max_iter") c.max_iter = value.get<int>();
    else if (key == "tol") c.tol = value.get<double>();
    else if (key == "boundary_s")
      c.boundary_s = value.get<std::vector<double>>();
    else if (key == "resolution") c.resolution = value.get<int>();
    else if (key == "theta_min") c.theta_min = value.get<double>();
    else if (key == "max_nonconverged_frac")
      c.max_nonconverged_frac = value.get<double>();
    else if (key == "gmm_generative") c.gmm_generative = value.get<bool>();
    else throw UsageError("unknown config key '" + key + "' in " + path);
  }
  return c;
}

PointSet resolve_dataset(const RunConfig& config) {
  if (is_preset_name(config.dataset))
    return preset_dataset(config.dataset, config.seed);
  if (fs::exists(config.dataset)) {
    try {
      return load_points(config.dataset);
    } catch (const std::exception& e) {
      throw DataError(e.what());
    }
  }
  std::string msg = "dataset '" + config.dataset +
                    "' is neither a preset nor an existing file; presets:";
  for (const auto& n : preset_names()) msg += " " + n;
  throw UsageError(msg);
}

void cmd_generate(const std::string& preset, std::uint64_t seed,
                  const std::string& out_dir, std::ostream& log) {
  Preset p;
  try {
    p = preset_from_name(preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const MixtureSpec spec = preset_spec(p);
  const PointSet ps = preset_dataset(p, seed);
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "points.csv").string();
  save_points(ps, path);
  log << "generated " << preset << ": N=" << ps.n()
      << " components=" << spec.components.size() << " seed=" << seed << "\n";
  for (size_t k = 0; k < spec.components.size(); ++k)
    log << "  component " << k << ": mean=("
        << spec.components[k].mean.transpose() << ") weight="
        << spec.normalized_weights()[k] << "\n";
  log << "wrote " << path << "\n";
}

namespace {

SvgPanel curve_panel(const InformationCurve& curve) {
  double h_max = 0.0, i_max = 0.0;
  for (const auto& e : curve.entries) {
    h_max = std::max(h_max, e.record.entropy_T);
    i_max = std::max(i_max, e.record.info_TX);
  }
  SvgPanel panel(320, 300, 0, h_max * 1.05 + 1e-9, 0, i_max * 1.05 + 1e-9,
                 "information plane");
  panel.axes("H(T) [nats]", "I(T;x) [nats]");
  std::vector<double> hx, hy;
  for (const auto& e : curve.entries) {
    if (!e.on_hull) continue;
    hx.push_back(e.record.entropy_T);
    hy.push_back(e.record.info_TX);
  }
  panel.markers(hx, hy, palette_color(3), 3.0, true);
  std::vector<double> ax, ay;
  for (const auto& e : curve.entries) {
    ax.push_back(e.record.entropy_T);
    ay.push_back(e.record.info_TX);
  }
  panel.markers(ax, ay, "#999999", 1.5, false);
  return panel;
}

SvgPanel info_fraction_panel(const std::vector<SolutionRecord>& records,
                             double info_ix) {
  int nc_max = 1;
  for (const auto& r : records) nc_max = std::max(nc_max, r.n_c);
  SvgPanel panel(320, 300, 0, nc_max + 1, 0, 1.05, "spatial info fraction");
  panel.axes("n_c", "I(c;x)/I(i;x)");
  std::vector<double> x, y;
  for (const auto& r : records) {
    x.push_back(r.n_c);
    y.push_back(r.info_TX / info_ix);
  }
  panel.markers(x, y, palette_color(0), 2.5, false);
  return panel;
}

SvgPanel theta_panel(const InformationCurve& curve) {
  int nc_max = 1;
  double th_max = 0.0;
  for (const auto& e : curve.entries) {
    nc_max = std::max(nc_max, e.record.n_c);
    if (e.has_kink) th_max = std::max(th_max, e.theta);
  }
  SvgPanel panel(320, 300, 0, nc_max + 1, 0, std::max(th_max * 1.2, 0.1),
                 "kink angle");
  panel.axes("n_c", "theta [rad]");
  std::vector<double> x, y;
  for (const auto& e : curve.entries)
    if (e.has_kink) {
      x.push_back(e.record.n_c);
      y.push_back(e.theta);
    }
  panel.markers(x, y, palette_color(2), 3.0, false);
  return panel;
}

}  // namespace

SweepOutcome cmd_sweep(const RunConfig& config, std::ostream& log) {
  const PointSet ps = resolve_dataset(config);
  const Grid grid = build_grid(ps, config.s, config.bins);
  const JointDistribution joint = smooth_joint(ps, config.s, grid);
  const auto schedule =
      geometric_schedule(config.beta_lo, config.beta_hi, config.beta_steps);
  SweepOptions opts;
  opts.max_iter = config.max_iter;
  opts.tol = config.tol;
  const auto records =
      beta_sweep(joint, schedule, config.restarts, config.seed, opts);
  const InformationCurve curve = kink_angles(pareto_frontier(records));
  const Selection sel = select_n_clusters(curve);

  SweepOutcome outcome;
  outcome.selection = sel;
  for (const auto& r : records)
    if (!r.converged) ++outcome.nonconverged;
  for (const auto& e : curve.entries)
    if (e.has_kink && e.record.n_c > 1)
      outcome.max_theta_multi = std::max(outcome.max_theta_multi, e.theta);
  outcome.robust = !sel.degenerate && sel.n_c > 1 &&
                   outcome.max_theta_multi >= config.theta_min;

  Json doc;
  doc["config"] = config_to_json(config);
  doc["info_ix"] = joint.info_ix;
  Json recs = Json::array();
  for (const auto& r : records) recs.push_back(record_to_json(r));
  doc["records"] = std::move(recs);
  doc["curve"] = curve_to_json(curve);
  doc["selected_n_c"] = sel.n_c;
  doc["selected_theta"] =
      std::isnan(sel.theta) ? Json(nullptr) : Json(sel.theta);
  doc["selection_degenerate"] = sel.degenerate;
  doc["nonconverged"] = outcome.nonconverged;
  write_file(out_path(config, "solutions.json"), doc.dump(2) + "\n");
  write_file(out_path(config, "curve.csv"), curve_to_csv(curve));

  SvgDocument svg;
  svg.add_panel(curve_panel(curve));
  svg.add_panel(info_fraction_panel(records, joint.info_ix));
  svg.add_panel(theta_panel(curve));
  svg.write(out_path(config, "curve.svg"));

  log << "sweep: dataset=" << config.dataset << " s=" << config.s
      << " records=" << records.size()
      << " nonconverged=" << outcome.nonconverged << "\n";
  if (outcome.nonconverged > 0)
    log << "warning: " << outcome.nonconverged << " non-converged solves\n";
  if (outcome.robust)
    log << "selected n_c=" << sel.n_c << " (theta=" << sel.theta << " rad)\n";
  else
    log << "no robust multi-cluster solution (max theta="
        << outcome.max_theta_multi << " rad over n_c>1)\n";

  if (outcome.nonconverged >
      config.max_nonconverged_frac * static_cast<double>(records.size()))
    throw NonConvergenceError(
        std::to_string(outcome.nonconverged) + " of " +
        std::to_string(records.size()) + " solves failed to converge");
  return outcome;
}

void cmd_cluster(const RunConfig& config, double beta, std::ostream& log) {
  const PointSet ps = resolve_dataset(config);
  const Grid grid = build_grid(ps, config.s, config.bins);
  const JointDistribution joint = smooth_joint(ps, config.s, grid);
  const int init = std::min(ps.n(), 16);
  const SolutionRecord rec =
      dib_solve(joint, beta, init, config.seed, config.max_iter, config.tol);

  std::ostringstream csv;
  csv << "i,x1,x2,cluster\n";
  char buf[40];
  for (int i = 0; i < ps.n(); ++i) {
    csv << i;
    for (int a = 0; a < ps.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", ps.points(i, a));
      csv << ',' << buf;
    }
    csv << ',' << rec.assignment[i] << "\n";
  }
  write_file(out_path(config, "assignment.csv"), csv.str());

  const Region reg = bounding_region(ps, 1.0);
  SvgPanel panel(420, 380, reg.x_min, reg.x_max, reg.y_min, reg.y_max,
                 "clusters (n_c=" + std::to_string(rec.n_c) + ")");
  panel.axes("x1", "x2");
  panel.scatter_colored(ps.points, rec.assignment, 2.5);
  SvgDocument svg;
  svg.add_panel(std::move(panel));
  svg.write(out_path(config, "clusters.svg"));

  log << "cluster: beta=" << beta << " n_c=" << rec.n_c
      << " L=" << rec.cost_L << " converged=" << (rec.converged ? "yes" : "no")
      << " iterations=" << rec.iterations << "\n";
  if (!rec.converged)
    throw NonConvergenceError("solve at beta=" + std::to_string(beta) +
                              " did not converge");
}

namespace {

// Mid-plateau 2-cluster solution for one smoothing scale, or nullopt.
std::optional<SolutionRecord> find_two_cluster_solution(
    const JointDistribution& joint, const RunConfig& config) {
  const auto schedule = geometric_schedule(0.5, 64.0, 8);
  SweepOptions opts;
  opts.max_iter = config.max_iter;
  opts.tol = config.tol;
  const int restarts = std::min(config.restarts, 3);
  const auto records =
      beta_sweep(joint, schedule, restarts, mix_seed(config.seed, 40), opts);
  std::vector<SolutionRecord> twos;
  for (const auto& r : records)
    if (r.n_c == 2 && r.converged) twos.push_back(r);
  if (twos.empty()) return std::nullopt;
  return twos[twos.size() / 2];
}

}  // namespace

void cmd_boundaries(const RunConfig& config, std::ostream& log) {
  const PointSet ps = resolve_dataset(config);
  if (ps.dim() != 2) throw DataError("boundaries: requires 2-D data");
  const Region reg = bounding_region(ps, 1.0);

  std::vector<std::pair<std::string, std::vector<Polyline>>> curves;

  const KMeansResult km =
      kmeans(ps, 2, mix_seed(config.seed, 11), config.restarts);
  curves.emplace_back(
      "kmeans",
      decision_boundary(kmeans_classifier(km), reg, config.resolution));
  log << "kmeans: inertia=" << km.inertia << "\n";

  std::vector<GaussianComponent> comps;
  if (config.gmm_generative) {
    if (!is_preset_name(config.dataset))
      throw UsageError("--gmm-generative requires a preset dataset");
    comps = preset_spec(preset_from_name(config.dataset)).components;
    log << "gmm: using generative components\n";
  } else {
    const GmmResult gm =
        gmm_em(ps, 2, mix_seed(config.seed, 12), config.restarts);
    comps = gm.components;
    log << "gmm: loglik=" << gm.log_likelihood
        << (gm.ridge_applied ? " (ridge applied)" : "") << "\n";
  }
  curves.emplace_back(
      "gmm", decision_boundary(gmm_classifier(comps), reg, config.resolution));

  for (double s : config.boundary_s) {
    const Grid grid = build_grid(ps, s, config.bins);
    const JointDistribution joint = smooth_joint(ps, s, grid);
    const auto rec = find_two_cluster_solution(joint, config);
    std::ostringstream name;
    name << "dib_s" << s;
    if (!rec) {
      log << name.str() << ": no converged 2-cluster solution, skipped\n";
      continue;
    }
    const HardClustering clustering = make_clustering(joint, rec->assignment);
    curves.emplace_back(
        name.str(),
        decision_boundary(dib_cluster_classifier(joint, clustering, rec->beta),
                          reg, config.resolution));
    log << name.str() << ": beta=" << rec->beta << " L=" << rec->cost_L
        << "\n";
  }

  write_file(out_path(config, "boundaries.csv"), boundaries_to_csv(curves));

  SvgPanel panel(520, 460, reg.x_min, reg.x_max, reg.y_min, reg.y_max,
                 "decision boundaries");
  panel.axes("x1", "x2");
  panel.scatter(ps.points, 1.6, "#333333");
  std::vector<std::pair<std::string, std::string>> legend;
  for (size_t k = 0; k < curves.size(); ++k) {
    for (const auto& line : curves[k].second)
      panel.polyline(line, palette_color(static_cast<int>(k)), 2.0);
    legend.emplace_back(curves[k].first, palette_color(static_cast<int>(k)));
  }
  panel.legend(legend);
  SvgDocument svg;
  svg.add_panel(std::move(panel));
  svg.write(out_path(config, "boundaries.svg"));
  log << "wrote " << curves.size() << " boundary curves\n";
}

void cmd_smooth_dump(const RunConfig& config, std::ostream& log) {
  const PointSet ps = resolve_dataset(config);
  const Grid grid = build_grid(ps, config.s, config.bins);
  const double entries = static_cast<double>(ps.n()) * grid.cell_count();
  if (entries > 1e7) {
    std::ostringstream os;
    os << "joint table would hold " << ps.n() << " x " << grid.cell_count()
       << " = " << entries << " entries (> 1e7); reduce --bins or the "
       << "dataset size";
    throw DataError(os.str());
  }
  const JointDistribution joint = smooth_joint(ps, config.s, grid);
  dump_joint_csv(joint, out_path(config, "joint.csv"));

  // Fig-style heat map: one row per data index, columns are flattened cells.
  SvgPanel panel(720, 420, 0, joint.m(), 0, joint.n(), "joint p(i,x)");
  panel.axes("flattened cell", "data index i");
  const double top = joint.conditional.maxCoeff();
  const double cell_w = 1.0, threshold = 1e-4 * top;
  for (int i = 0; i < joint.n(); ++i)
    for (int x = 0; x < joint.m(); ++x) {
      const double v = joint.conditional(i, x);
      if (v < threshold) continue;
      panel.cell(x, x + cell_w, i, i + 1, heat_color(v / top));
    }
  SvgDocument svg;
  svg.add_panel(std::move(panel));
  svg.write(out_path(config, "joint.svg"));

  log << "smooth-dump: N=" << joint.n() << " M=" << joint.m()
      << " s=" << config.s << "\n";
}

}  // namespace dibgeo
