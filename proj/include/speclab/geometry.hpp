#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "speclab/types.hpp"

namespace speclab {

// A planar polygonal region. `outer` is counterclockwise, holes clockwise.
// `components` holds further counterclockwise outer loops for disconnected
// regions; each hole lies inside exactly one outer loop.
struct Domain {
  std::string label;
  Loop outer;
  std::vector<Loop> holes;
  std::vector<Loop> components;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

double signed_area(const Loop& loop);

// All loops of the domain: outer loops first, then holes.
std::vector<const Loop*> all_loops(const Domain& d);
std::vector<const Loop*> outer_loops(const Domain& d);

// Throws InvalidDomainError naming the first violated invariant.
void validate_domain(const Domain& d);

// Re-orients loops to the canonical orientation; returns a note per fix.
std::vector<std::string> normalize_orientation(Domain& d);

bool contains(const Domain& d, Point p);
double distance_to_boundary(const Domain& d, Point p);
bool is_convex(const Domain& d);

double measure(const Domain& d);
double perimeter(const Domain& d);
double diameter(const Domain& d);
Point barycenter(const Domain& d);
Point boundary_barycenter(const Domain& d);

struct Inradius {
  double radius = 0.0;
  Point center;
  bool exact = false;
  double error_bound = 0.0;
};

// Chebyshev center of a convex domain (exact LP) or a sampled distance-field
// maximum otherwise.
Inradius inradius(const Domain& d);

struct BasicFunctionals {
  double perimeter = 0.0;
  double diameter = 0.0;
  Point barycenter;
  Point boundary_barycenter;
  Inradius inradius;
  double equivalent_radius = 0.0;
};

BasicFunctionals basic_functionals(const Domain& d);

double weighted_perimeter_p2(const Domain& d);

double disc_intersection_area(const Domain& d, const Ball& b);

// Integral over the domain of g(|x - center|), given G(s) = int_0^s g(r) r dr.
// `breaks` lists radii where g is not smooth.
double radial_integral(const Domain& d, Point center, const std::function<double(double)>& antiderivative,
                       const std::vector<double>& breaks = {});

Ball min_enclosing_ball(const Domain& d);

// Largest ball centered at `center` inside the domain and smallest ball at
// `center` containing it.
double inscribed_radius_at(const Domain& d, Point center);
double enclosing_radius_at(const Domain& d, Point center);

enum class AsymmetryKind { fraenkel, dN, dM, fraenkel2, alpha };
std::string to_string(AsymmetryKind k);

struct AsymmetryReport {
  AsymmetryKind kind = AsymmetryKind::fraenkel;
  double value = 0.0;
  std::vector<Ball> witness;
  bool is_upper_bound = false;
};

struct OptimizerOptions {
  std::uint64_t seed = 20240611;
  int grid = 7;
  int random_starts = 6;
};

AsymmetryReport fraenkel_asymmetry(const Domain& d, std::optional<Point> hint = std::nullopt,
                                   const OptimizerOptions& opts = {});
AsymmetryReport fraenkel_2_asymmetry(const Domain& d, const OptimizerOptions& opts = {});
AsymmetryReport asymmetry_dN(const Domain& d);
AsymmetryReport asymmetry_dM(const Domain& d);
AsymmetryReport asymmetry_alpha(const Domain& d);

struct StructuredAsymmetries {
  AsymmetryReport dN;
  AsymmetryReport dM;
  AsymmetryReport alpha;
};

StructuredAsymmetries structured_asymmetries(const Domain& d);

// Symmetric Hausdorff distance between the closed domain and a ball; the
// ball side is sampled with `resolution` boundary and radial points.
double hausdorff_to_ball(const Domain& d, const Ball& b, int resolution = 2048);

struct ShellRadii {
  double inner = 0.0;
  double outer = 0.0;
};

// Radii of the balls centered at the origin with measures |D n D*| and |D \ D*| + |D|.
ShellRadii shell_radii(const Domain& d);

Domain translated(const Domain& d, Point shift);
Domain scaled(const Domain& d, double factor);
// Translated to barycenter 0 and scaled to the given measure.
Domain normalized(const Domain& d, double target_measure = 1.0);

// Part of the domain on the side {x : n.x <= offset}.
Domain clip_halfplane(const Domain& d, Point normal, double offset);

}  // namespace speclab
