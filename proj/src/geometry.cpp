#include "speclab/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "minimize.hpp"
#include "speclab/rng.hpp"

namespace speclab {
namespace {

constexpr double kPi = std::numbers::pi;

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

bool inside_loop(const Loop& loop, Point p) {
  bool in = false;
  const size_t n = loop.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = loop[j], b = loop[i];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * ab);
}

template <typename F>
void for_each_edge(const Domain& d, F&& f) {
  for (const Loop* loop : all_loops(d)) {
    const size_t n = loop->size();
    for (size_t i = 0; i < n; ++i) f((*loop)[i], (*loop)[(i + 1) % n]);
  }
}

// Signed area of disc(0, r) intersected with triangle (0, a, b).
double triangle_disc_area(Point a, Point b, double r) {
  const Point ab = b - a;
  const double A = dot(ab, ab);
  if (A == 0.0) return 0.0;
  const double B = 2.0 * dot(a, ab);
  const double C = dot(a, a) - r * r;
  std::array<double, 4> ts{0.0, 0.0, 0.0, 1.0};
  int count = 1;
  const double disc = B * B - 4 * A * C;
  if (disc > 0) {
    const double s = std::sqrt(disc);
    const double t1 = (-B - s) / (2 * A);
    const double t2 = (-B + s) / (2 * A);
    if (t1 > 0 && t1 < 1) ts[count++] = t1;
    if (t2 > 0 && t2 < 1) ts[count++] = t2;
  }
  ts[count++] = 1.0;
  double area = 0.0;
  for (int k = 0; k + 1 < count; ++k) {
    const Point p = a + ts[k] * ab;
    const Point q = a + ts[k + 1] * ab;
    const Point m = 0.5 * (p + q);
    if (dot(m, m) <= r * r) {
      area += 0.5 * cross(p, q);
    } else {
      area += 0.5 * r * r * std::atan2(cross(p, q), dot(p, q));
    }
  }
  return area;
}

// Dense-dictionary simplex for max c.z subject to A z <= b, z >= 0, with
// b >= 0 so the slack basis is feasible. Bland's rule prevents cycling.
std::vector<double> simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                const std::vector<double>& c) {
  const size_t m = A.size(), n = c.size();
  // Row i: basic_i = rhs_i - sum_j coef_ij * nonbasic_j.
  std::vector<std::vector<double>> coef = A;
  std::vector<double> rhs = b;
  std::vector<double> obj = c;  // z = z0 + sum obj_j nonbasic_j
  std::vector<size_t> nonbasic(n), basic(m);
  for (size_t j = 0; j < n; ++j) nonbasic[j] = j;
  for (size_t i = 0; i < m; ++i) basic[i] = n + i;
  for (int iter = 0; iter < 100000; ++iter) {
    size_t enter = n;
    for (size_t j = 0; j < n; ++j) {
      if (obj[j] > 1e-14 && (enter == n || nonbasic[j] < nonbasic[enter])) enter = j;
    }
    if (enter == n) break;
    size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
      if (coef[i][enter] > 1e-14) {
        const double ratio = rhs[i] / coef[i][enter];
        if (leave == m || ratio < best - 1e-15 || (ratio <= best + 1e-15 && basic[i] < basic[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw SolverError("inradius linear program is unbounded");
    const double piv = coef[leave][enter];
    // Solve row `leave` for the entering variable.
    std::vector<double> prow(n);
    for (size_t j = 0; j < n; ++j) prow[j] = coef[leave][j] / piv;
    prow[enter] = 1.0 / piv;
    const double prhs = rhs[leave] / piv;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = coef[i][enter];
      if (f == 0.0) continue;
      for (size_t j = 0; j < n; ++j) coef[i][j] -= f * prow[j];
      coef[i][enter] = -f * prow[enter];
      rhs[i] -= f * prhs;
    }
    const double f = obj[enter];
    for (size_t j = 0; j < n; ++j) obj[j] -= f * prow[j];
    obj[enter] = -f * prow[enter];
    coef[leave] = prow;
    rhs[leave] = prhs;
    std::swap(basic[leave], nonbasic[enter]);
  }
  std::vector<double> z(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    if (basic[i] < n) z[basic[i]] = rhs[i];
  }
  return z;
}

Inradius chebyshev_center(const Domain& d) {
  const Point o = barycenter(d);
  const Loop& loop = d.outer;
  const size_t m = loop.size();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    const Point p = loop[i] - o, q = loop[(i + 1) % m] - o;
    const Point e = q - p;
    const double len = norm(e);
    if (len == 0.0) continue;
    const Point n{e.y / len, -e.x / len};  // outward for a counterclockwise loop
    // n.(x) + r <= n.p with x = (x+ - x-, y+ - y-)
    A.push_back({n.x, -n.x, n.y, -n.y, 1.0});
    b.push_back(std::max(0.0, dot(n, p)));
  }
  const auto z = simplex_max(A, b, {0, 0, 0, 0, 1});
  Inradius out;
  out.center = o + Point{z[0] - z[1], z[2] - z[3]};
  out.radius = z[4];
  out.exact = true;
  return out;
}

Inradius sampled_inradius(const Domain& d) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Loop* l : all_loops(d)) {
    for (Point p : *l) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const int n = 160;
  const double step = std::max(xmax - xmin, ymax - ymin) / n;
  std::vector<std::pair<double, Point>> samples;
  for (double y = ymin + 0.5 * step; y < ymax; y += step) {
    for (double x = xmin + 0.5 * step; x < xmax; x += step) {
      const Point p{x, y};
      if (contains(d, p)) samples.push_back({distance_to_boundary(d, p), p});
    }
  }
  if (samples.empty()) throw InvalidDomainError("domain has no interior sample points");
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && std::tie(a.second.x, a.second.y) < std::tie(b.second.x, b.second.y));
  });
  Inradius best{samples.front().first, samples.front().second, false, step};
  const size_t polish = std::min<size_t>(samples.size(), 8);
  for (size_t k = 0; k < polish; ++k) {
    auto f = [&](const std::vector<double>& v) {
      const Point p{v[0], v[1]};
      return contains(d, p) ? -distance_to_boundary(d, p) : 0.0;
    };
    const auto r = detail::nelder_mead(f, {samples[k].second.x, samples[k].second.y}, {0.5 * step, 0.5 * step},
                                       1e-12 * step);
    if (-r.value > best.radius) {
      best.radius = -r.value;
      best.center = {r.x[0], r.x[1]};
    }
  }
  best.error_bound = step;
  return best;
}

Ball circle_two(Point a, Point b) { return {0.5 * (a + b), 0.5 * dist(a, b)}; }

Ball circle_three(Point a, Point b, Point c) {
  const double d = 2.0 * cross(b - a, c - a);
  if (std::fabs(d) < 1e-300) {
    Ball best = circle_two(a, b);
    for (Ball cand : {circle_two(a, c), circle_two(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const Point ab = b - a, ac = c - a;
  const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  const Point u{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + u, norm(u)};
}

bool in_ball(const Ball& b, Point p) { return dist(b.center, p) <= b.radius * (1.0 + 1e-12) + 1e-300; }

}  // namespace

double signed_area(const Loop& loop) {
  double s = 0.0;
  const size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) s += cross(loop[i], loop[(i + 1) % n]);
  return 0.5 * s;
}

std::vector<const Loop*> outer_loops(const Domain& d) {
  std::vector<const Loop*> out{&d.outer};
  for (const auto& c : d.components) out.push_back(&c);
  return out;
}

std::vector<const Loop*> all_loops(const Domain& d) {
  auto out = outer_loops(d);
  for (const auto& h : d.holes) out.push_back(&h);
  return out;
}

void validate_domain(const Domain& d) {
  const auto loops = all_loops(d);
  const size_t n_outer = 1 + d.components.size();
  for (size_t k = 0; k < loops.size(); ++k) {
    const Loop& l = *loops[k];
    const std::string name = k == 0 ? "outer loop" : (k < n_outer ? "component loop" : "hole loop");
    if (l.size() < 3) throw InvalidDomainError(name + " has fewer than 3 vertices");
    for (Point p : l) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidDomainError(name + " has a non-finite vertex");
    }
    for (size_t i = 0; i < l.size(); ++i) {
      if (l[i] == l[(i + 1) % l.size()]) throw InvalidDomainError(name + " has a repeated vertex");
    }
    const double a = signed_area(l);
    if (a == 0.0) throw InvalidDomainError(name + " is degenerate (zero area)");
    if (k < n_outer && a < 0) throw InvalidDomainError(name + " must be counterclockwise");
    if (k >= n_outer && a > 0) throw InvalidDomainError(name + " must be clockwise");
  }

  // Simplicity across all loops, by a sweep over x-extents.
  struct Seg {
    Point a, b;
    size_t loop, index, len;
    double xmin, xmax;
  };
  std::vector<Seg> segs;
  for (size_t k = 0; k < loops.size(); ++k) {
    const Loop& l = *loops[k];
    for (size_t i = 0; i < l.size(); ++i) {
      const Point a = l[i], b = l[(i + 1) % l.size()];
      segs.push_back({a, b, k, i, l.size(), std::min(a.x, b.x), std::max(a.x, b.x)});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) { return s.xmin < t.xmin; });
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax; ++j) {
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (s.loop == t.loop) {
        const size_t diff = (s.index + s.len - t.index) % s.len;
        if (diff == 1 || diff == s.len - 1) {
          // Adjacent edges share one vertex; they overlap only if collinear and folded back.
          const Point shared = (diff == 1) ? s.a : s.b;
          const Point other_s = (diff == 1) ? s.b : s.a;
          const Point other_t = (diff == 1) ? t.a : t.b;
          if (orient(shared, other_s, other_t) == 0.0 && dot(other_s - shared, other_t - shared) > 0) {
            throw InvalidDomainError("loop folds back on itself");
          }
          continue;
        }
      }
      if (segments_intersect(s.a, s.b, t.a, t.b)) throw InvalidDomainError("loops are not simple or intersect each other");
    }
  }

  const auto outers = outer_loops(d);
  for (size_t i = 0; i < outers.size(); ++i) {
    for (size_t j = 0; j < outers.size(); ++j) {
      if (i != j && inside_loop(*outers[j], outers[i]->front())) {
        throw InvalidDomainError("outer loops must be disjoint");
      }
    }
  }
  for (size_t h = 0; h < d.holes.size(); ++h) {
    int owners = 0;
    for (const Loop* o : outers) owners += inside_loop(*o, d.holes[h].front()) ? 1 : 0;
    if (owners != 1) throw InvalidDomainError("hole loop is not strictly inside an outer loop");
    for (size_t g = 0; g < d.holes.size(); ++g) {
      if (g != h && inside_loop(d.holes[g], d.holes[h].front())) throw InvalidDomainError("hole loops must be disjoint");
    }
  }
  if (!(measure(d) > 0.0)) throw InvalidDomainError("domain measure is not positive");
}

std::vector<std::string> normalize_orientation(Domain& d) {
  std::vector<std::string> notes;
  if (signed_area(d.outer) < 0) {
    std::reverse(d.outer.begin(), d.outer.end());
    notes.push_back("outer loop reversed to counterclockwise");
  }
  for (size_t i = 0; i < d.components.size(); ++i) {
    if (signed_area(d.components[i]) < 0) {
      std::reverse(d.components[i].begin(), d.components[i].end());
      notes.push_back("component loop " + std::to_string(i) + " reversed to counterclockwise");
    }
  }
  for (size_t i = 0; i < d.holes.size(); ++i) {
    if (signed_area(d.holes[i]) > 0) {
      std::reverse(d.holes[i].begin(), d.holes[i].end());
      notes.push_back("hole loop " + std::to_string(i) + " reversed to clockwise");
    }
  }
  return notes;
}

bool contains(const Domain& d, Point p) {
  bool in = false;
  for (const Loop* l : all_loops(d)) {
    if (inside_loop(*l, p)) in = !in;
  }
  return in;
}

double distance_to_boundary(const Domain& d, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for_each_edge(d, [&](Point a, Point b) { best = std::min(best, point_segment_distance(p, a, b)); });
  return best;
}

bool is_convex(const Domain& d) {
  if (!d.holes.empty() || !d.components.empty()) return false;
  const Loop& l = d.outer;
  const size_t n = l.size();
  double scale = 0.0;
  for (Point p : l) scale = std::max(scale, norm(p - l[0]));
  for (size_t i = 0; i < n; ++i) {
    const Point a = l[i], b = l[(i + 1) % n], c = l[(i + 2) % n];
    if (orient(a, b, c) < -1e-12 * scale * scale) return false;
  }
  // A convex turn sequence could still wind more than once.
  double turning = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point e1 = l[(i + 1) % n] - l[i], e2 = l[(i + 2) % n] - l[(i + 1) % n];
    turning += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  return std::fabs(turning - 2 * kPi) < 1e-6;
}

double measure(const Domain& d) {
  double a = 0.0;
  for (const Loop* l : all_loops(d)) a += signed_area(*l);
  return a;
}

double perimeter(const Domain& d) {
  double p = 0.0;
  for_each_edge(d, [&](Point a, Point b) { p += dist(a, b); });
  return p;
}

double diameter(const Domain& d) {
  std::vector<Point> pts;
  for (const Loop* l : outer_loops(d)) pts.insert(pts.end(), l->begin(), l->end());
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const Point e = pts[i] - pts[j];
      best = std::max(best, dot(e, e));
    }
  }
  return std::sqrt(best);
}

Point barycenter(const Domain& d) {
  double cx = 0.0, cy = 0.0;
  for_each_edge(d, [&](Point a, Point b) {
    const double c = cross(a, b);
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  });
  const double a6 = 6.0 * measure(d);
  return {cx / a6, cy / a6};
}

Point boundary_barycenter(const Domain& d) {
  double len = 0.0;
  Point acc;
  for_each_edge(d, [&](Point a, Point b) {
    const double l = dist(a, b);
    len += l;
    acc = acc + l * (0.5 * (a + b));
  });
  return (1.0 / len) * acc;
}

Inradius inradius(const Domain& d) { return is_convex(d) ? chebyshev_center(d) : sampled_inradius(d); }

BasicFunctionals basic_functionals(const Domain& d) {
  BasicFunctionals f;
  f.perimeter = perimeter(d);
  f.diameter = diameter(d);
  f.barycenter = barycenter(d);
  f.boundary_barycenter = boundary_barycenter(d);
  f.inradius = inradius(d);
  f.equivalent_radius = std::sqrt(measure(d) / kPi);
  return f;
}

double weighted_perimeter_p2(const Domain& d) {
  double s = 0.0;
  for_each_edge(d, [&](Point a, Point b) { s += dist(a, b) * (dot(a, a) + dot(a, b) + dot(b, b)) / 3.0; });
  return s;
}

double disc_intersection_area(const Domain& d, const Ball& b) {
  double s = 0.0;
  for_each_edge(d, [&](Point p, Point q) { s += triangle_disc_area(p - b.center, q - b.center, b.radius); });
  return std::clamp(s, 0.0, std::min(measure(d), kPi * b.radius * b.radius));
}

namespace {

// Interval halving with a 20-point Gauss rule, accepted relative to the piece
// itself so short pieces stop at once.
template <typename F>
double adaptive_gauss(const F& f, double a, double b, int depth, double whole) {
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  const double m = 0.5 * (a + b);
  const double left = Gauss::integrate(f, a, m), right = Gauss::integrate(f, m, b);
  const double halves = left + right;
  if (depth == 0 || std::fabs(halves - whole) <= 1e-14 * std::fabs(halves) + 1e-300) return halves;
  return adaptive_gauss(f, a, m, depth - 1, left) + adaptive_gauss(f, m, b, depth - 1, right);
}

template <typename F>
double adaptive_gauss(const F& f, double a, double b) {
  return adaptive_gauss(f, a, b, 14, boost::math::quadrature::gauss<double, 20>::integrate(f, a, b));
}

}  // namespace

double radial_integral(const Domain& d, Point center, const std::function<double(double)>& antiderivative,
                       const std::vector<double>& breaks) {
  double total = 0.0;
  for_each_edge(d, [&](Point pa, Point pb) {
    const Point a = pa - center, b = pb - center;
    const double c = cross(a, b);
    const double la = norm(a), lb = norm(b);
    if (std::fabs(c) <= 1e-15 * la * lb) return;
    // Line through a, b at distance p from the origin, foot at angle phi.
    const Point e = b - a;
    const double el = norm(e);
    const Point nrm{e.y / el, -e.x / el};
    double p = dot(a, nrm);
    Point foot = p * nrm;
    if (p < 0) p = -p;
    const double phi = std::atan2(foot.y, foot.x);
    const double ta = std::atan2(a.y, a.x);
    const double span = std::atan2(c, dot(a, b));  // signed angle from a to b
    auto wrap = [](double x) {
      while (x > kPi) x -= 2 * kPi;
      while (x < -kPi) x += 2 * kPi;
      return x;
    };
    // Work in the local angle s in [0, span] measured from a.
    const double s_foot = wrap(phi - ta);
    std::vector<double> cuts{0.0, span};
    auto add_cut = [&](double s) {
      if ((span > 0 && s > 0 && s < span) || (span < 0 && s < 0 && s > span)) cuts.push_back(s);
    };
    add_cut(s_foot);
    for (double r : breaks) {
      if (r > p) {
        const double w = std::acos(p / r);
        add_cut(wrap(s_foot + w));
        add_cut(wrap(s_foot - w));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double s) {
      const double rho = p / std::cos(s - s_foot);
      return antiderivative(rho);
    };
    double edge = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] - cuts[k] <= 0) continue;
      edge += adaptive_gauss(integrand, cuts[k], cuts[k + 1]);
    }
    total += span > 0 ? edge : -edge;
  });
  return total;
}

Ball min_enclosing_ball(const Domain& d) {
  std::vector<Point> pts;
  for (const Loop* l : outer_loops(d)) pts.insert(pts.end(), l->begin(), l->end());
  Rng rng(0x5eed);
  for (size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.next() % i]);
  Ball b{pts[0], 0.0};
  for (size_t i = 1; i < pts.size(); ++i) {
    if (in_ball(b, pts[i])) continue;
    b = {pts[i], 0.0};
    for (size_t j = 0; j < i; ++j) {
      if (in_ball(b, pts[j])) continue;
      b = circle_two(pts[i], pts[j]);
      for (size_t k = 0; k < j; ++k) {
        if (!in_ball(b, pts[k])) b = circle_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return b;
}

double inscribed_radius_at(const Domain& d, Point center) {
  return contains(d, center) ? distance_to_boundary(d, center) : 0.0;
}

double enclosing_radius_at(const Domain& d, Point center) {
  double r = 0.0;
  for (const Loop* l : outer_loops(d)) {
    for (Point p : *l) r = std::max(r, dist(p, center));
  }
  return r;
}

std::string to_string(AsymmetryKind k) {
  switch (k) {
    case AsymmetryKind::fraenkel: return "fraenkel";
    case AsymmetryKind::dN: return "dN";
    case AsymmetryKind::dM: return "dM";
    case AsymmetryKind::fraenkel2: return "fraenkel2";
    case AsymmetryKind::alpha: return "alpha";
  }
  return "unknown";
}

namespace {

struct BoundingBox {
  double xmin, xmax, ymin, ymax;
};

BoundingBox bounding_box(const Domain& d) {
  BoundingBox bb{1e300, -1e300, 1e300, -1e300};
  for (const Loop* l : outer_loops(d)) {
    for (Point p : *l) {
      bb.xmin = std::min(bb.xmin, p.x);
      bb.xmax = std::max(bb.xmax, p.x);
      bb.ymin = std::min(bb.ymin, p.y);
      bb.ymax = std::max(bb.ymax, p.y);
    }
  }
  return bb;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Minimizes f from every start (after ranking starts by value and keeping the
// best `keep`), returning the best point with a lexicographic tie-break.
detail::MinimizeResult multistart(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<std::vector<double>> starts, const std::vector<double>& step,
                                  size_t keep) {
  std::vector<std::pair<double, size_t>> ranked;
  for (size_t i = 0; i < starts.size(); ++i) ranked.push_back({f(starts[i]), i});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const size_t n = std::min(keep, ranked.size());
  std::vector<detail::MinimizeResult> results(n);
#pragma omp parallel for schedule(dynamic)
  for (size_t k = 0; k < n; ++k) {
    auto r = detail::nelder_mead(f, starts[ranked[k].second], step, 1e-11);
    // Restart once from the result to escape simplex collapse.
    auto r2 = detail::nelder_mead(f, r.x, step, 1e-12);
    results[k] = r2.value <= r.value ? r2 : r;
  }
  detail::MinimizeResult best = results[0];
  for (size_t k = 1; k < n; ++k) {
    const auto& r = results[k];
    if (r.value < best.value - 1e-14 || (std::fabs(r.value - best.value) <= 1e-14 && lex_less(r.x, best.x))) best = r;
  }
  return best;
}

}  // namespace

AsymmetryReport fraenkel_asymmetry(const Domain& d, std::optional<Point> hint, const OptimizerOptions& opts) {
  const double area = measure(d);
  const double r = std::sqrt(area / kPi);
  auto f = [&](const std::vector<double>& c) { return -disc_intersection_area(d, {{c[0], c[1]}, r}); };

  std::vector<std::vector<double>> starts;
  auto add = [&](Point p) { starts.push_back({p.x, p.y}); };
  add(barycenter(d));
  add(boundary_barycenter(d));
  add(inradius(d).center);
  if (hint) add(*hint);
  const auto bb = bounding_box(d);
  for (int i = 0; i < opts.grid; ++i) {
    for (int j = 0; j < opts.grid; ++j) {
      add({bb.xmin + (i + 0.5) / opts.grid * (bb.xmax - bb.xmin), bb.ymin + (j + 0.5) / opts.grid * (bb.ymax - bb.ymin)});
    }
  }
  Rng rng(opts.seed);
  for (int k = 0; k < opts.random_starts; ++k) add({rng.uniform(bb.xmin, bb.xmax), rng.uniform(bb.ymin, bb.ymax)});

  const auto best = multistart(f, starts, {0.1 * r, 0.1 * r}, 6);
  AsymmetryReport rep;
  rep.kind = AsymmetryKind::fraenkel;
  rep.value = std::max(0.0, 2.0 * (area + best.value) / area);
  rep.witness = {{{best.x[0], best.x[1]}, r}};
  rep.is_upper_bound = true;
  return rep;
}

AsymmetryReport fraenkel_2_asymmetry(const Domain& d, const OptimizerOptions& opts) {
  const double area = measure(d);
  const double r = std::sqrt(area / (2.0 * kPi));
  // Parameters: midpoint (x, y), direction angle, excess half-distance s; the
  // half-distance r + |s| keeps the two balls disjoint.
  auto centers = [r](const std::vector<double>& v) {
    const double h = r + std::fabs(v[3]);
    const Point u{std::cos(v[2]), std::sin(v[2])};
    const Point m{v[0], v[1]};
    return std::pair<Point, Point>{m + h * u, m - h * u};
  };
  auto f = [&](const std::vector<double>& v) {
    const auto [cp, cm] = centers(v);
    return -(disc_intersection_area(d, {cp, r}) + disc_intersection_area(d, {cm, r}));
  };

  const Point g = barycenter(d);
  // Principal axis of the boundary vertex cloud.
  double sxx = 0, syy = 0, sxy = 0;
  for (const Loop* l : outer_loops(d)) {
    for (Point p : *l) {
      const Point q = p - g;
      sxx += q.x * q.x;
      syy += q.y * q.y;
      sxy += q.x * q.y;
    }
  }
  const double axis = 0.5 * std::atan2(2 * sxy, sxx - syy);
  std::vector<std::vector<double>> starts;
  for (double ang : {axis, axis + kPi / 4, axis + kPi / 2, axis + 3 * kPi / 4}) {
    for (double s : {0.0, 0.25 * r, 0.5 * r, r}) starts.push_back({g.x, g.y, ang, s});
  }
  const auto bb = bounding_box(d);
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int k = 0; k < 4 * opts.random_starts; ++k) {
    starts.push_back({rng.uniform(bb.xmin, bb.xmax), rng.uniform(bb.ymin, bb.ymax), rng.uniform(0, kPi),
                      rng.uniform(0, r)});
  }
  const auto best = multistart(f, starts, {0.1 * r, 0.1 * r, 0.2, 0.1 * r}, 6);
  const auto [cp, cm] = centers(best.x);
  AsymmetryReport rep;
  rep.kind = AsymmetryKind::fraenkel2;
  rep.value = std::max(0.0, 2.0 * (area + best.value) / area);
  rep.witness = {{cp, r}, {cm, r}};
  if (std::tie(rep.witness[1].center.x, rep.witness[1].center.y) <
      std::tie(rep.witness[0].center.x, rep.witness[0].center.y)) {
    std::swap(rep.witness[0], rep.witness[1]);
  }
  rep.is_upper_bound = true;
  return rep;
}

AsymmetryReport asymmetry_dN(const Domain& d) {
  const auto in = inradius(d);
  AsymmetryReport rep;
  rep.kind = AsymmetryKind::dN;
  rep.value = std::max(0.0, 1.0 - in.radius / std::sqrt(measure(d) / kPi));
  rep.witness = {{in.center, in.radius}};
  rep.is_upper_bound = !in.exact;
  return rep;
}

AsymmetryReport asymmetry_dM(const Domain& d) {
  if (!is_convex(d)) throw UnsupportedInputError("dM asymmetry requires a convex domain");
  // The inner and outer balls are chosen independently, so the optimal pair
  // is the Chebyshev ball together with the minimal enclosing ball.
  const double area = measure(d);
  const auto in = chebyshev_center(d);
  const auto out = min_enclosing_ball(d);
  AsymmetryReport rep;
  rep.kind = AsymmetryKind::dM;
  rep.value = std::max({0.0, 1.0 - kPi * in.radius * in.radius / area, 1.0 - area / (kPi * out.radius * out.radius)});
  rep.witness = {{in.center, in.radius}, out};
  rep.is_upper_bound = false;
  return rep;
}

AsymmetryReport asymmetry_alpha(const Domain& d) {
  // Evaluated at |D| = |B_1|. Over D delta B_1(x_D) the weight |1 - |x - x_D||
  // integrates to  int_D |x - x_D| dx - |D| + pi/3.
  const Domain u = normalized(d, kPi);
  const double first_moment = radial_integral(u, {0.0, 0.0}, [](double s) { return s * s * s / 3.0; });
  AsymmetryReport rep;
  rep.kind = AsymmetryKind::alpha;
  rep.value = std::max(0.0, first_moment - kPi + kPi / 3.0);
  rep.witness = {{barycenter(d), std::sqrt(measure(d) / kPi)}};
  rep.is_upper_bound = false;
  return rep;
}

StructuredAsymmetries structured_asymmetries(const Domain& d) {
  return {asymmetry_dN(d), asymmetry_dM(d), asymmetry_alpha(d)};
}

double hausdorff_to_ball(const Domain& d, const Ball& b, int resolution) {
  double out = 0.0;
  for (const Loop* l : outer_loops(d)) {
    for (Point p : *l) out = std::max(out, dist(p, b.center) - b.radius);
  }
  const int rings = std::max(8, resolution / 32);
  for (int k = 1; k <= rings; ++k) {
    const double rr = b.radius * k / rings;
    const int m = std::max(8, static_cast<int>(std::ceil(resolution * static_cast<double>(k) / rings)));
    const int count = k == rings ? resolution : m;
    for (int i = 0; i < count; ++i) {
      const double t = 2 * kPi * i / count;
      const Point p = b.center + Point{rr * std::cos(t), rr * std::sin(t)};
      if (!contains(d, p)) out = std::max(out, distance_to_boundary(d, p));
    }
  }
  if (!contains(d, b.center)) out = std::max(out, distance_to_boundary(d, b.center));
  return out;
}

ShellRadii shell_radii(const Domain& d) {
  const double area = measure(d);
  const double inter = disc_intersection_area(d, {{0.0, 0.0}, std::sqrt(area / kPi)});
  return {std::sqrt(inter / kPi), std::sqrt((2.0 * area - inter) / kPi)};
}

Domain translated(const Domain& d, Point shift) {
  Domain out = d;
  auto move = [&](Loop& l) {
    for (Point& p : l) p = p + shift;
  };
  move(out.outer);
  for (auto& l : out.components) move(l);
  for (auto& l : out.holes) move(l);
  return out;
}

Domain scaled(const Domain& d, double factor) {
  Domain out = d;
  auto mul = [&](Loop& l) {
    for (Point& p : l) p = factor * p;
  };
  mul(out.outer);
  for (auto& l : out.components) mul(l);
  for (auto& l : out.holes) mul(l);
  return out;
}

Domain normalized(const Domain& d, double target_measure) {
  const Point g = barycenter(d);
  return scaled(translated(d, -1.0 * g), std::sqrt(target_measure / measure(d)));
}

Domain clip_halfplane(const Domain& d, Point normal, double offset) {
  if (!d.holes.empty() || !d.components.empty()) {
    throw UnsupportedInputError("half-plane clipping supports a single outer loop only");
  }
  Loop out;
  const Loop& in = d.outer;
  const size_t n = in.size();
  for (size_t i = 0; i < n; ++i) {
    const Point a = in[i], b = in[(i + 1) % n];
    const double fa = dot(normal, a) - offset, fb = dot(normal, b) - offset;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) out.push_back(a + (fa / (fa - fb)) * (b - a));
  }
  Domain res;
  res.label = d.label + "-clipped";
  for (const Point& p : out) {
    if (res.outer.empty() || !(res.outer.back() == p)) res.outer.push_back(p);
  }
  if (res.outer.size() > 1 && res.outer.front() == res.outer.back()) res.outer.pop_back();
  validate_domain(res);
  return res;
}

}  // namespace speclab
