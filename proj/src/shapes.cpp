#include "speclab/shapes.hpp"

#include <cmath>
#include <numbers>

namespace speclab {

Loop regular_polygon_loop(int n, double radius, Point center, double phase) {
  Loop l;
  l.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2.0 * std::numbers::pi * i / n;
    l.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return l;
}

Domain regular_polygon(int n, double radius, const std::string& label) {
  Domain d;
  d.label = label.empty() ? "polygon" + std::to_string(n) : label;
  d.outer = regular_polygon_loop(n, radius);
  return d;
}

Domain rectangle(double width, double height, const std::string& label) {
  Domain d;
  d.label = label.empty() ? "rectangle" : label;
  d.outer = {{0, 0}, {width, 0}, {width, height}, {0, height}};
  return d;
}

Domain l_shape() {
  Domain d;
  d.label = "lshape";
  d.outer = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  return d;
}

Domain square_with_hole() {
  Domain d;
  d.label = "square_hole";
  d.outer = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  d.holes = {{{-0.25, -0.25}, {-0.25, 0.25}, {0.25, 0.25}, {0.25, -0.25}}};
  return d;
}

Domain two_discs(int n_per_disc, double separation) {
  Domain d;
  d.label = "two_discs";
  d.outer = regular_polygon_loop(n_per_disc, 1.0, {-0.5 * separation, 0.0});
  d.components = {regular_polygon_loop(n_per_disc, 1.0, {0.5 * separation, 0.0})};
  return d;
}

std::vector<Domain> standard_corpus() {
  return {regular_polygon(64, 1.0, "disc64"),
          regular_polygon(128, 1.0, "disc128"),
          regular_polygon(256, 1.0, "disc256"),
          rectangle(1, 1, "square"),
          rectangle(2, 1, "rect2x1"),
          rectangle(4, 1, "rect4x1"),
          regular_polygon(5, 1.0, "pentagon"),
          regular_polygon(6, 1.0, "hexagon"),
          l_shape(),
          square_with_hole(),
          two_discs()};
}

Domain corpus_domain(const std::string& label) {
  for (auto& d : standard_corpus()) {
    if (d.label == label) return d;
  }
  throw ArgumentError("unknown corpus domain " + label);
}

}  // namespace speclab
