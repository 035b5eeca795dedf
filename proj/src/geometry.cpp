#include "dibgeo/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dibgeo/rng.hpp"

namespace dibgeo {

GaussianComponent::GaussianComponent(Eigen::VectorXd mean_in,
                                     Eigen::MatrixXd covariance_in,
                                     double weight_in)
    : mean(std::move(mean_in)),
      covariance(std::move(covariance_in)),
      weight(weight_in) {
  if (mean.size() == 0)
    throw std::invalid_argument("GaussianComponent: empty mean");
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw std::invalid_argument("GaussianComponent: covariance shape mismatch");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * scale)
    throw std::invalid_argument("GaussianComponent: covariance not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "GaussianComponent: covariance not positive-definite");
  if (!(weight > 0.0))
    throw std::invalid_argument("GaussianComponent: weight must be > 0");
}

MixtureSpec::MixtureSpec(std::vector<GaussianComponent> components_in)
    : components(std::move(components_in)) {
  if (components.empty())
    throw std::invalid_argument("MixtureSpec: needs at least one component");
  const int d = components.front().dim();
  for (const auto& c : components)
    if (c.dim() != d)
      throw std::invalid_argument("MixtureSpec: mixed dimensions");
}

Eigen::VectorXd MixtureSpec::normalized_weights() const {
  Eigen::VectorXd w(components.size());
  for (size_t k = 0; k < components.size(); ++k) w[k] = components[k].weight;
  return w / w.sum();
}

void validate_points(const PointSet& ps) {
  if (ps.n() < 1) throw std::invalid_argument("PointSet: no points");
  if (!ps.points.allFinite())
    throw std::invalid_argument("PointSet: non-finite coordinate");
  if (ps.has_labels()) {
    if (static_cast<int>(ps.labels.size()) != ps.n())
      throw std::invalid_argument("PointSet: label count != point count");
    for (int l : ps.labels)
      if (l < 0) throw std::invalid_argument("PointSet: negative label");
  }
}

PointSet sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_mixture: n must be >= 1");
  const int d = spec.dim();
  const Eigen::VectorXd weights = spec.normalized_weights();

  std::vector<Eigen::MatrixXd> chol;
  chol.reserve(spec.components.size());
  for (const auto& c : spec.components)
    chol.push_back(Eigen::LLT<Eigen::MatrixXd>(c.covariance).matrixL());

  Rng rng(seed);
  PointSet ps;
  ps.points.resize(n, d);
  ps.labels.resize(n);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    const int k = rng.categorical(weights);
    for (int a = 0; a < d; ++a) z[a] = rng.normal();
    ps.points.row(i) =
        (spec.components[k].mean + chol[k] * z).transpose();
    ps.labels[i] = k;
  }
  return ps;
}

namespace {

Eigen::Vector2d vec2(double x, double y) { return Eigen::Vector2d(x, y); }

MixtureSpec unit_gaussians_at(const std::vector<Eigen::Vector2d>& means) {
  std::vector<GaussianComponent> comps;
  comps.reserve(means.size());
  for (const auto& m : means)
    comps.emplace_back(m, Eigen::Matrix2d::Identity(), 1.0);
  return MixtureSpec(std::move(comps));
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "three_equal", "three_unequal", "five_multiscale", "single_blob",
      "symmetric_plus_skew"};
  return names;
}

Preset preset_from_name(const std::string& name) {
  const auto& names = preset_names();
  for (size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return static_cast<Preset>(k);
  std::string msg = "unknown preset '" + name + "'; valid presets:";
  for (const auto& n : names) msg += " " + n;
  throw std::invalid_argument(msg);
}

MixtureSpec preset_spec(Preset preset) {
  switch (preset) {
    case Preset::three_equal: {
      // Unit-variance clusters at the vertices of an equilateral triangle
      // with side 8.
      const double h = 4.0 * std::sqrt(3.0);
      return unit_gaussians_at({vec2(0, 0), vec2(8, 0), vec2(4, h)});
    }
    case Preset::three_unequal:
      return unit_gaussians_at({vec2(0, 0), vec2(5, 0), vec2(16, 0)});
    case Preset::five_multiscale:
      return unit_gaussians_at({vec2(0, 0), vec2(5, 0), vec2(16, 0),
                                vec2(16, 12), vec2(0, 12)});
    case Preset::single_blob:
      return unit_gaussians_at({vec2(0, 0)});
    case Preset::symmetric_plus_skew: {
      // Isotropic unit gaussian plus a gaussian with covariance eigenvalues
      // (4, 1) rotated by 45 degrees.
      Eigen::Matrix2d skew;
      skew << 2.5, 1.5, 1.5, 2.5;
      std::vector<GaussianComponent> comps;
      comps.emplace_back(vec2(0, 0), Eigen::Matrix2d::Identity(), 0.5);
      comps.emplace_back(vec2(8, 0), skew, 0.5);
      return MixtureSpec(std::move(comps));
    }
  }
  throw std::logic_error("preset_spec: unreachable");
}

int preset_sample_count(Preset preset) {
  switch (preset) {
    case Preset::three_equal: return 150;
    case Preset::three_unequal: return 150;
    case Preset::five_multiscale: return 250;
    case Preset::single_blob: return 100;
    case Preset::symmetric_plus_skew: return 1000;
  }
  throw std::logic_error("preset_sample_count: unreachable");
}

PointSet preset_dataset(Preset preset, std::uint64_t seed) {
  return sample_mixture(preset_spec(preset), preset_sample_count(preset), seed);
}

PointSet preset_dataset(const std::string& name, std::uint64_t seed) {
  return preset_dataset(preset_from_name(name), seed);
}

void save_points(const PointSet& ps, const std::string& path) {
  validate_points(ps);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_points: cannot open " + path);
  for (int a = 0; a < ps.dim(); ++a) out << (a ? ",x" : "x") << a + 1;
  if (ps.has_labels()) out << ",label";
  out << "\n";
  char buf[40];
  for (int i = 0; i < ps.n(); ++i) {
    for (int a = 0; a < ps.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", ps.points(i, a));
      out << (a ? "," : "") << buf;
    }
    if (ps.has_labels()) out << "," << ps.labels[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_points: write failed for " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, int line_no) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("load_points: non-numeric field '" + s +
                             "' at line " + std::to_string(line_no));
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos != s.size())
    throw std::runtime_error("load_points: non-numeric field '" + s +
                             "' at line " + std::to_string(line_no));
  return v;
}

}  // namespace

PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_points: cannot open " + path);

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw std::runtime_error("load_points: no points in " + path);
  ++line_no;

  auto header = split_csv_line(line);
  bool with_labels = !header.empty() && header.back() == "label";
  const int d = static_cast<int>(header.size()) - (with_labels ? 1 : 0);
  if (d < 1)
    throw std::runtime_error("load_points: malformed header at line 1");

  std::vector<Eigen::VectorXd> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d + (with_labels ? 1 : 0))
      throw std::runtime_error(
          "load_points: expected " +
          std::to_string(d + (with_labels ? 1 : 0)) + " fields, got " +
          std::to_string(fields.size()) + " at line " +
          std::to_string(line_no));
    Eigen::VectorXd row(d);
    for (int a = 0; a < d; ++a) row[a] = parse_double(fields[a], line_no);
    rows.push_back(row);
    if (with_labels) {
      const double lv = parse_double(fields[d], line_no);
      const int l = static_cast<int>(lv);
      if (lv != l || l < 0)
        throw std::runtime_error("load_points: bad label at line " +
                                 std::to_string(line_no));
      labels.push_back(l);
    }
  }
  if (rows.empty())
    throw std::runtime_error("load_points: no points in " + path);

  PointSet ps;
  ps.points.resize(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i) ps.points.row(i) = rows[i];
  ps.labels = std::move(labels);
  validate_points(ps);
  return ps;
}

}  // namespace dibgeo
