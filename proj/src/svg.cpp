#include "dibgeo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dibgeo {

namespace {

constexpr double kMargin = 46.0;  // px reserved for axes and labels

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

const std::string& palette_color(int index) {
  static const std::vector<std::string> palette = {
      "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
      "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd"};
  return palette[((index % 10) + 10) % 10];
}

std::string heat_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  // white -> blue -> red
  int r, g, b;
  if (v < 0.5) {
    const double t = v / 0.5;
    r = static_cast<int>(255 + t * (60 - 255));
    g = static_cast<int>(255 + t * (90 - 255));
    b = static_cast<int>(255 + t * (200 - 255));
  } else {
    const double t = (v - 0.5) / 0.5;
    r = static_cast<int>(60 + t * (200 - 60));
    g = static_cast<int>(90 + t * (40 - 90));
    b = static_cast<int>(200 + t * (60 - 200));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string svg_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgPanel::SvgPanel(double px_width, double px_height, double data_x_min,
                   double data_x_max, double data_y_min, double data_y_max,
                   std::string title)
    : w_(px_width),
      h_(px_height),
      x0_(data_x_min),
      x1_(data_x_max),
      y0_(data_y_min),
      y1_(data_y_max),
      title_(std::move(title)) {
  if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
  if (!(y1_ > y0_)) y1_ = y0_ + 1.0;
}

double SvgPanel::to_px_x(double x) const {
  return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 2 * kMargin);
}

double SvgPanel::to_px_y(double y) const {
  return h_ - kMargin - (y - y0_) / (y1_ - y0_) * (h_ - 2 * kMargin);
}

void SvgPanel::axes(const std::string& x_label, const std::string& y_label) {
  std::ostringstream os;
  os << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin)
     << "\" width=\"" << fmt(w_ - 2 * kMargin) << "\" height=\""
     << fmt(h_ - 2 * kMargin)
     << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>";
  elems_.push_back(os.str());

  for (int t = 0; t <= 4; ++t) {
    const double fx = x0_ + (x1_ - x0_) * t / 4.0;
    const double fy = y0_ + (y1_ - y0_) * t / 4.0;
    std::ostringstream tick;
    tick << "<text x=\"" << fmt(to_px_x(fx)) << "\" y=\"" << fmt(h_ - kMargin + 14)
         << "\" font-size=\"9\" text-anchor=\"middle\" fill=\"#555555\">"
         << svg_escape(fmt(fx)) << "</text>"
         << "<text x=\"" << fmt(kMargin - 4) << "\" y=\"" << fmt(to_px_y(fy) + 3)
         << "\" font-size=\"9\" text-anchor=\"end\" fill=\"#555555\">"
         << svg_escape(fmt(fy)) << "</text>";
    elems_.push_back(tick.str());
  }

  std::ostringstream lbl;
  lbl << "<text x=\"" << fmt(w_ / 2) << "\" y=\"" << fmt(h_ - 8)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << svg_escape(x_label)
      << "</text>"
      << "<text x=\"12\" y=\"" << fmt(h_ / 2)
      << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << fmt(h_ / 2) << ")\">" << svg_escape(y_label) << "</text>";
  if (!title_.empty())
    lbl << "<text x=\"" << fmt(w_ / 2)
        << "\" y=\"16\" font-size=\"12\" text-anchor=\"middle\">"
        << svg_escape(title_) << "</text>";
  elems_.push_back(lbl.str());
}

void SvgPanel::scatter(const Eigen::MatrixXd& pts, double radius,
                       const std::string& color) {
  std::ostringstream os;
  for (int i = 0; i < pts.rows(); ++i)
    os << "<circle cx=\"" << fmt(to_px_x(pts(i, 0))) << "\" cy=\""
       << fmt(to_px_y(pts(i, 1))) << "\" r=\"" << fmt(radius) << "\" fill=\""
       << color << "\" fill-opacity=\"0.75\"/>";
  elems_.push_back(os.str());
}

void SvgPanel::scatter_colored(const Eigen::MatrixXd& pts,
                               const std::vector<int>& color_index,
                               double radius) {
  std::ostringstream os;
  for (int i = 0; i < pts.rows(); ++i)
    os << "<circle cx=\"" << fmt(to_px_x(pts(i, 0))) << "\" cy=\""
       << fmt(to_px_y(pts(i, 1))) << "\" r=\"" << fmt(radius) << "\" fill=\""
       << palette_color(color_index[i]) << "\" fill-opacity=\"0.8\"/>";
  elems_.push_back(os.str());
}

void SvgPanel::polyline(const std::vector<Eigen::Vector2d>& pts,
                        const std::string& color, double width) {
  if (pts.size() < 2) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << fmt(width) << "\" points=\"";
  for (const auto& p : pts)
    os << fmt(to_px_x(p.x())) << "," << fmt(to_px_y(p.y())) << " ";
  os << "\"/>";
  elems_.push_back(os.str());
}

void SvgPanel::markers(const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& color,
                       double radius, bool connect) {
  if (connect && x.size() >= 2) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1\" points=\"";
    for (size_t i = 0; i < x.size(); ++i)
      os << fmt(to_px_x(x[i])) << "," << fmt(to_px_y(y[i])) << " ";
    os << "\"/>";
    elems_.push_back(os.str());
  }
  std::ostringstream os;
  for (size_t i = 0; i < x.size(); ++i)
    os << "<circle cx=\"" << fmt(to_px_x(x[i])) << "\" cy=\""
       << fmt(to_px_y(y[i])) << "\" r=\"" << fmt(radius) << "\" fill=\""
       << color << "\"/>";
  elems_.push_back(os.str());
}

void SvgPanel::cell(double x0, double x1, double y0, double y1,
                    const std::string& color) {
  const double px = to_px_x(x0), py = to_px_y(y1);
  std::ostringstream os;
  os << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\""
     << fmt(to_px_x(x1) - px) << "\" height=\"" << fmt(to_px_y(y0) - py)
     << "\" fill=\"" << color << "\"/>";
  elems_.push_back(os.str());
}

void SvgPanel::label(double x, double y, const std::string& text,
                     const std::string& color) {
  std::ostringstream os;
  os << "<text x=\"" << fmt(to_px_x(x)) << "\" y=\"" << fmt(to_px_y(y))
     << "\" font-size=\"10\" fill=\"" << color << "\">" << svg_escape(text)
     << "</text>";
  elems_.push_back(os.str());
}

void SvgPanel::legend(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream os;
  double y = kMargin + 12;
  for (const auto& [name, color] : entries) {
    os << "<rect x=\"" << fmt(w_ - kMargin - 110) << "\" y=\"" << fmt(y - 8)
       << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>"
       << "<text x=\"" << fmt(w_ - kMargin - 96) << "\" y=\"" << fmt(y)
       << "\" font-size=\"10\">" << svg_escape(name) << "</text>";
    y += 14;
  }
  elems_.push_back(os.str());
}

std::string SvgPanel::body(double offset_x, double offset_y) const {
  std::ostringstream os;
  os << "<g transform=\"translate(" << fmt(offset_x) << " " << fmt(offset_y)
     << ")\">\n";
  for (const auto& e : elems_) os << e << "\n";
  os << "</g>\n";
  return os.str();
}

void SvgDocument::add_panel(SvgPanel panel) {
  panels_.push_back(std::move(panel));
}

std::string SvgDocument::render() const {
  double width = 0.0, height = 0.0;
  for (const auto& p : panels_) {
    width += p.px_width();
    height = std::max(height, p.px_height());
  }
  if (panels_.empty()) width = height = 100.0;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
     << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
     << " " << fmt(height) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  double off = 0.0;
  for (const auto& p : panels_) {
    os << p.body(off, 0.0);
    off += p.px_width();
  }
  os << "</svg>\n";
  return os.str();
}

void SvgDocument::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("SvgDocument::write: cannot open " + path);
  out << render();
  if (!out) throw std::runtime_error("SvgDocument::write: failed " + path);
}

}  // namespace dibgeo
