#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dibgeo {

// Categorical palette for cluster coloring.
const std::string& palette_color(int index);

// One data-space panel of an SVG document. Pixel layout is handled by the
// owning SvgDocument; draw calls take data coordinates.
class SvgPanel {
 public:
  SvgPanel(double px_width, double px_height, double data_x_min,
           double data_x_max, double data_y_min, double data_y_max,
           std::string title = "");

  void axes(const std::string& x_label, const std::string& y_label);
  void scatter(const Eigen::MatrixXd& pts, double radius,
               const std::string& color);
  void scatter_colored(const Eigen::MatrixXd& pts,
                       const std::vector<int>& color_index, double radius);
  void polyline(const std::vector<Eigen::Vector2d>& pts,
                const std::string& color, double width);
  void markers(const std::vector<double>& x, const std::vector<double>& y,
               const std::string& color, double radius, bool connect);
  // filled axis-aligned data-space rectangle (heat map cell)
  void cell(double x0, double x1, double y0, double y1,
            const std::string& color);
  void label(double x, double y, const std::string& text,
             const std::string& color = "#333333");
  void legend(const std::vector<std::pair<std::string, std::string>>&
                  name_color_pairs);

  double px_width() const { return w_; }
  double px_height() const { return h_; }
  std::string body(double offset_x, double offset_y) const;

 private:
  double to_px_x(double x) const;
  double to_px_y(double y) const;

  double w_, h_;
  double x0_, x1_, y0_, y1_;
  std::string title_;
  std::vector<std::string> elems_;
};

// Side-by-side panels rendered as one standalone SVG document.
class SvgDocument {
 public:
  void add_panel(SvgPanel panel);  // panels are laid out left to right
  std::string render() const;
  void write(const std::string& path) const;

 private:
  std::vector<SvgPanel> panels_;
};

// Linear white->blue->red ramp for values in [0, 1].
std::string heat_color(double value01);

std::string svg_escape(const std::string& text);

}  // namespace dibgeo
