#include "speclab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace speclab {
namespace {

#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

int orient(Point a, Point b, Point c) {
  Wide abx = Wide(b.x) - a.x, aby = Wide(b.y) - a.y;
  Wide acx = Wide(c.x) - a.x, acy = Wide(c.y) - a.y;
  Wide det = abx * acy - aby * acx;
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

// Positive when d lies strictly inside the circle through counterclockwise a, b, c.
int incircle(Point a, Point b, Point c, Point d) {
  Wide adx = Wide(a.x) - d.x, ady = Wide(a.y) - d.y;
  Wide bdx = Wide(b.x) - d.x, bdy = Wide(b.y) - d.y;
  Wide cdx = Wide(c.x) - d.x, cdy = Wide(c.y) - d.y;
  Wide alift = adx * adx + ady * ady;
  Wide blift = bdx * bdx + bdy * bdy;
  Wide clift = cdx * cdx + cdy * cdy;
  Wide det = alift * (bdx * cdy - bdy * cdx) - blift * (adx * cdy - ady * cdx) + clift * (adx * bdy - ady * bdx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

Point circumcenter(Point a, Point b, Point c) {
  Point ab = b - a, ac = c - a;
  double dd = 2.0 * cross(ab, ac);
  double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  return {a.x + (ac.y * ab2 - ab.y * ac2) / dd, a.y + (ab.x * ac2 - ac.x * ab2) / dd};
}

double min_angle(Point a, Point b, Point c) {
  auto ang = [](Point p, Point q, Point r) {
    Point u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

std::uint64_t undirected_key(int a, int b) { return a < b ? edge_key(a, b) : edge_key(b, a); }

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // neighbor across the edge opposite v[i]
  bool alive = true;
};

struct Segment {
  int a, b, loop;
};

class Delaunay {
 public:
  std::vector<Point> pts;
  std::vector<Tri> tris;
  std::unordered_map<std::uint64_t, int> edge_owner;  // directed edge -> triangle

  explicit Delaunay(Point lo, Point hi) {
    Point c = 0.5 * (lo + hi);
    double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
    double big = 64.0 * span;
    pts.push_back({c.x - big, c.y - big});
    pts.push_back({c.x + big, c.y - big});
    pts.push_back({c.x, c.y + big});
    add_tri({0, 1, 2}, {-1, -1, -1});
  }

  bool is_super(int v) const { return v < 3; }

  int insert(Point p, int hint = -1) {
    int t0 = locate(p, hint);
    if (t0 < 0) throw MeshingError("point location failed");
    for (int v : tris[t0].v)
      if (pts[v] == p) return -1;
    int pi = static_cast<int>(pts.size());
    pts.push_back(p);

    std::vector<int> cavity{t0};
    std::unordered_set<int> in_cavity{t0};
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& t = tris[cavity[k]];
      for (int i = 0; i < 3; ++i) {
        int n = t.nb[i];
        if (n < 0 || in_cavity.count(n)) continue;
        const Tri& u = tris[n];
        if (incircle(pts[u.v[0]], pts[u.v[1]], pts[u.v[2]], p) > 0) {
          in_cavity.insert(n);
          cavity.push_back(n);
        }
      }
    }

    struct Rim {
      int a, b, outer;
    };
    std::vector<Rim> rim;
    for (int c : cavity) {
      const Tri& t = tris[c];
      for (int i = 0; i < 3; ++i) {
        int n = t.nb[i];
        if (n >= 0 && in_cavity.count(n)) continue;
        rim.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], n});
      }
    }
    for (int c : cavity) kill(c);

    std::unordered_map<int, int> by_start, by_end;
    std::vector<int> created;
    for (const Rim& r : rim) {
      if (orient(pts[pi], pts[r.a], pts[r.b]) <= 0) throw MeshingError("degenerate cavity during insertion");
      int t = add_tri({pi, r.a, r.b}, {r.outer, -1, -1});
      if (r.outer >= 0) {
        Tri& o = tris[r.outer];
        for (int i = 0; i < 3; ++i)
          if (o.v[(i + 1) % 3] == r.b && o.v[(i + 2) % 3] == r.a) o.nb[i] = t;
      }
      by_start[r.a] = t;
      by_end[r.b] = t;
      created.push_back(t);
    }
    for (int t : created) {
      Tri& tri = tris[t];
      // opposite v[1]=a is edge (b, p): neighbor starts at b
      tri.nb[1] = by_start.at(tri.v[2]);
      // opposite v[2]=b is edge (p, a): neighbor ends at a
      tri.nb[2] = by_end.at(tri.v[1]);
    }
    last_ = created.front();
    return pi;
  }

  int find_directed(int a, int b) const {
    auto it = edge_owner.find(edge_key(a, b));
    return it == edge_owner.end() ? -1 : it->second;
  }

  int apex(int t, int a, int b) const {
    for (int v : tris[t].v)
      if (v != a && v != b) return v;
    return -1;
  }

  int last() const { return last_; }

 private:
  int last_ = 0;

  int add_tri(std::array<int, 3> v, std::array<int, 3> nb) {
    int id = static_cast<int>(tris.size());
    tris.push_back({v, nb, true});
    for (int i = 0; i < 3; ++i) edge_owner[edge_key(v[i], v[(i + 1) % 3])] = id;
    return id;
  }

  void kill(int t) {
    tris[t].alive = false;
    const auto& v = tris[t].v;
    for (int i = 0; i < 3; ++i) {
      auto it = edge_owner.find(edge_key(v[i], v[(i + 1) % 3]));
      if (it != edge_owner.end() && it->second == t) edge_owner.erase(it);
    }
  }

  bool inside_or_on(int t, Point p) const {
    const Tri& tri = tris[t];
    for (int i = 0; i < 3; ++i)
      if (orient(pts[tri.v[(i + 1) % 3]], pts[tri.v[(i + 2) % 3]], p) < 0) return false;
    return true;
  }

  int locate(Point p, int hint) const {
    int t = hint >= 0 && hint < static_cast<int>(tris.size()) && tris[hint].alive ? hint : last_;
    if (!tris[t].alive) t = first_alive();
    std::size_t limit = 4 * tris.size() + 64;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& tri = tris[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        int i = static_cast<int>((step + k) % 3);
        if (orient(pts[tri.v[(i + 1) % 3]], pts[tri.v[(i + 2) % 3]], p) < 0) {
          next = tri.nb[i];
          break;
        }
      }
      if (next == -1) {
        if (inside_or_on(t, p)) return t;
        break;
      }
      t = next;
    }
    for (std::size_t i = 0; i < tris.size(); ++i)
      if (tris[i].alive && inside_or_on(static_cast<int>(i), p)) return static_cast<int>(i);
    return -1;
  }

  int first_alive() const {
    for (std::size_t i = 0; i < tris.size(); ++i)
      if (tris[i].alive) return static_cast<int>(i);
    return -1;
  }
};

class Mesher {
 public:
  Mesher(const Domain& d, double h, const MeshingOptions& opts) : domain_(d), h_(h), opts_(opts), dt_(lo(d), hi(d)) {}

  Mesh run() {
    insert_boundary();
    insert_lattice();
    split_encroached_all();
    refine();
    return extract();
  }

 private:
  const Domain& domain_;
  double h_;
  MeshingOptions opts_;
  Delaunay dt_;
  std::vector<Segment> segs_;

  static Point lo(const Domain& d) {
    Point p{1e300, 1e300};
    for (const Loop* l : all_loops(d))
      for (Point q : *l) p = {std::min(p.x, q.x), std::min(p.y, q.y)};
    return p;
  }
  static Point hi(const Domain& d) {
    Point p{-1e300, -1e300};
    for (const Loop* l : all_loops(d))
      for (Point q : *l) p = {std::max(p.x, q.x), std::max(p.y, q.y)};
    return p;
  }

  int insert_point(Point p) {
    if (static_cast<int>(dt_.pts.size()) > opts_.max_vertices)
      throw MeshingError("vertex budget exceeded; h too small for the domain or a needle-like feature");
    return dt_.insert(p, dt_.last());
  }

  void insert_boundary() {
    auto loops = all_loops(domain_);
    for (std::size_t li = 0; li < loops.size(); ++li) {
      const Loop& loop = *loops[li];
      std::vector<int> ids;
      for (std::size_t i = 0; i < loop.size(); ++i) {
        Point a = loop[i], b = loop[(i + 1) % loop.size()];
        int n = std::max(1, static_cast<int>(std::ceil(dist(a, b) / h_ - 1e-9)));
        for (int k = 0; k < n; ++k) {
          double t = static_cast<double>(k) / n;
          int id = insert_point(a + t * (b - a));
          if (id < 0) throw MeshingError("duplicate boundary vertex near (" + std::to_string(a.x) + ", " +
                                         std::to_string(a.y) + ")");
          ids.push_back(id);
        }
      }
      for (std::size_t i = 0; i < ids.size(); ++i)
        segs_.push_back({ids[i], ids[(i + 1) % ids.size()], static_cast<int>(li)});
    }
  }

  void insert_lattice() {
    Point l = lo(domain_), u = hi(domain_);
    double dy = h_ * std::sqrt(3.0) / 2.0;
    int rows = static_cast<int>(std::ceil((u.y - l.y) / dy)) + 1;
    int cols = static_cast<int>(std::ceil((u.x - l.x) / h_)) + 2;
    double margin = 0.6 * h_;
    for (int r = 0; r < rows; ++r) {
      double y = l.y + (r + 0.5) * dy;
      double shift = (r % 2) ? 0.5 * h_ : 0.0;
      for (int c = 0; c < cols; ++c) {
        int cc = (r % 2) ? cols - 1 - c : c;
        Point p{l.x + shift + cc * h_ - 0.25 * h_, y};
        if (!contains(domain_, p) || distance_to_boundary(domain_, p) < margin) continue;
        insert_point(p);
      }
    }
  }

  bool encroached(const Segment& s) const {
    int t1 = dt_.find_directed(s.a, s.b);
    int t2 = dt_.find_directed(s.b, s.a);
    if (t1 < 0 || t2 < 0) return true;
    Point a = dt_.pts[s.a], b = dt_.pts[s.b];
    for (int t : {t1, t2}) {
      int v = dt_.apex(t, s.a, s.b);
      if (dt_.is_super(v)) continue;
      Point p = dt_.pts[v];
      if (dot(a - p, b - p) < 0.0) return true;
    }
    return false;
  }

  void split(std::size_t i) {
    Segment s = segs_[i];
    Point m = 0.5 * (dt_.pts[s.a] + dt_.pts[s.b]);
    if (dist(dt_.pts[s.a], dt_.pts[s.b]) < 1e-9 * h_)
      throw MeshingError("segment collapse near (" + std::to_string(m.x) + ", " + std::to_string(m.y) +
                         "): needle-like feature");
    int id = insert_point(m);
    if (id < 0) throw MeshingError("segment midpoint coincides with a vertex");
    segs_[i] = {s.a, id, s.loop};
    segs_.push_back({id, s.b, s.loop});
  }

  void split_encroached_all() {
    for (int round = 0;; ++round) {
      bool any = false;
      std::size_t n = segs_.size();
      for (std::size_t i = 0; i < n; ++i)
        if (encroached(segs_[i])) {
          split(i);
          any = true;
        }
      if (!any) return;
      if (round > 200) throw MeshingError("segment recovery did not terminate");
    }
  }

  // Parity flood fill: crossing a segment toggles inside/outside.
  std::vector<char> classify() const {
    std::unordered_set<std::uint64_t> seg_keys;
    for (const Segment& s : segs_) seg_keys.insert(undirected_key(s.a, s.b));
    std::vector<char> state(dt_.tris.size(), -1);
    std::vector<int> stack;
    for (std::size_t t = 0; t < dt_.tris.size(); ++t) {
      const Tri& tri = dt_.tris[t];
      if (!tri.alive) continue;
      if (dt_.is_super(tri.v[0]) || dt_.is_super(tri.v[1]) || dt_.is_super(tri.v[2])) {
        if (state[t] < 0) {
          state[t] = 0;
          stack.push_back(static_cast<int>(t));
        }
      }
    }
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      const Tri& tri = dt_.tris[t];
      for (int i = 0; i < 3; ++i) {
        int n = tri.nb[i];
        if (n < 0 || state[n] >= 0) continue;
        bool crosses = seg_keys.count(undirected_key(tri.v[(i + 1) % 3], tri.v[(i + 2) % 3])) > 0;
        state[n] = crosses ? static_cast<char>(1 - state[t]) : state[t];
        stack.push_back(n);
      }
    }
    return state;
  }

  bool is_bad(const Tri& t, double theta) const {
    Point a = dt_.pts[t.v[0]], b = dt_.pts[t.v[1]], c = dt_.pts[t.v[2]];
    if (min_angle(a, b, c) < theta) return true;
    double longest = std::max({dist(a, b), dist(b, c), dist(c, a)});
    return longest > 1.35 * h_;
  }

  void refine() {
    const double theta = opts_.min_angle_deg * std::numbers::pi / 180.0;
    for (int round = 0;; ++round) {
      auto state = classify();
      std::vector<int> bad;
      for (std::size_t t = 0; t < dt_.tris.size(); ++t)
        if (dt_.tris[t].alive && state[t] == 1 && is_bad(dt_.tris[t], theta)) bad.push_back(static_cast<int>(t));
      if (bad.empty()) return;
      if (round > 500) throw MeshingError("quality refinement did not terminate");
      for (int t : bad) {
        if (!dt_.tris[t].alive) continue;
        const Tri& tri = dt_.tris[t];
        Point c = circumcenter(dt_.pts[tri.v[0]], dt_.pts[tri.v[1]], dt_.pts[tri.v[2]]);
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < segs_.size(); ++i) {
          Point a = dt_.pts[segs_[i].a], b = dt_.pts[segs_[i].b];
          if (dot(a - c, b - c) < 0.0) hits.push_back(i);
        }
        if (hits.empty() && !contains(domain_, c)) {
          double best = 1e300;
          std::size_t arg = 0;
          for (std::size_t i = 0; i < segs_.size(); ++i) {
            Point a = dt_.pts[segs_[i].a], b = dt_.pts[segs_[i].b];
            double dd = dist(0.5 * (a + b), c);
            if (dd < best) best = dd, arg = i;
          }
          hits.push_back(arg);
        }
        if (!hits.empty()) {
          for (std::size_t i : hits) split(i);
          split_encroached_all();
        } else {
          insert_point(c);
        }
      }
    }
  }

  Mesh extract() const {
    auto state = classify();
    Mesh m;
    m.h = h_;
    std::vector<int> remap(dt_.pts.size(), -1);
    for (std::size_t t = 0; t < dt_.tris.size(); ++t) {
      const Tri& tri = dt_.tris[t];
      if (!tri.alive || state[t] != 1) continue;
      std::array<int, 3> out;
      for (int i = 0; i < 3; ++i) {
        int v = tri.v[i];
        if (remap[v] < 0) {
          remap[v] = static_cast<int>(m.vertices.size());
          m.vertices.push_back(dt_.pts[v]);
        }
        out[i] = remap[v];
      }
      m.triangles.push_back(out);
    }
    for (const Segment& s : segs_) {
      if (remap[s.a] < 0 || remap[s.b] < 0) throw MeshingError("boundary segment detached from the mesh");
      m.boundary_edges.push_back({remap[s.a], remap[s.b]});
      m.boundary_loop.push_back(s.loop);
    }
    if (m.triangles.empty()) throw MeshingError("empty triangulation");
    return m;
  }
};

}  // namespace

Mesh triangulate(const Domain& d, double h, const MeshingOptions& opts) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("mesh size must be positive");
  validate_domain(d);
  Mesher mesher(d, h, opts);
  return mesher.run();
}

Mesh refine_uniform(const Mesh& m) {
  Mesh r;
  r.h = 0.5 * m.h;
  r.vertices = m.vertices;
  std::unordered_map<std::uint64_t, int> mids;
  auto mid = [&](int a, int b) {
    auto key = undirected_key(a, b);
    auto it = mids.find(key);
    if (it != mids.end()) return it->second;
    int id = static_cast<int>(r.vertices.size());
    r.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
    mids.emplace(key, id);
    return id;
  };
  r.triangles.reserve(4 * m.triangles.size());
  for (const auto& t : m.triangles) {
    int a = t[0], b = t[1], c = t[2];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    r.triangles.push_back({a, ab, ca});
    r.triangles.push_back({ab, b, bc});
    r.triangles.push_back({ca, bc, c});
    r.triangles.push_back({ab, bc, ca});
  }
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    auto [a, b] = m.boundary_edges[i];
    int mm = mid(a, b);
    r.boundary_edges.push_back({a, mm});
    r.boundary_edges.push_back({mm, b});
    r.boundary_loop.push_back(m.boundary_loop[i]);
    r.boundary_loop.push_back(m.boundary_loop[i]);
  }
  return r;
}

MeshStats mesh_stats(const Mesh& m) {
  MeshStats s;
  s.n_vertices = static_cast<int>(m.vertices.size());
  s.n_triangles = static_cast<int>(m.triangles.size());
  s.n_boundary_edges = static_cast<int>(m.boundary_edges.size());
  double amin = std::numbers::pi;
  for (const auto& t : m.triangles) {
    Point a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
    amin = std::min(amin, min_angle(a, b, c));
    s.max_edge = std::max({s.max_edge, dist(a, b), dist(b, c), dist(c, a)});
    s.area += 0.5 * cross(b - a, c - a);
  }
  s.min_angle_deg = amin * 180.0 / std::numbers::pi;
  return s;
}

std::vector<int> boundary_vertices(const Mesh& m) {
  std::vector<int> out;
  for (const auto& e : m.boundary_edges) {
    out.push_back(e[0]);
    out.push_back(e[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_off(const Mesh& m, std::ostream& out) {
  out << "OFF\n" << m.vertices.size() << ' ' << m.triangles.size() << " 0\n";
  out << std::setprecision(17);
  for (Point p : m.vertices) out << p.x << ' ' << p.y << " 0\n";
  for (const auto& t : m.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void export_off(const Mesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  write_off(m, f);
}

}  // namespace speclab
