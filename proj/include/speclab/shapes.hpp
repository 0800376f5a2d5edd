#pragma once

#include <string>
#include <vector>

#include "speclab/geometry.hpp"

namespace speclab {

// Regular n-gon inscribed in the circle of given radius and center, first
// vertex at angle `phase`.
Loop regular_polygon_loop(int n, double radius = 1.0, Point center = {}, double phase = 0.0);
Domain regular_polygon(int n, double radius = 1.0, const std::string& label = "");
Domain rectangle(double width, double height, const std::string& label = "");
Domain l_shape();
Domain square_with_hole();
Domain two_discs(int n_per_disc = 64, double separation = 3.0);

// The standard corpus: disc64, disc128, disc256, square, rect2x1, rect4x1,
// pentagon, hexagon, lshape, square_hole, two_discs.
std::vector<Domain> standard_corpus();
Domain corpus_domain(const std::string& label);

}  // namespace speclab
