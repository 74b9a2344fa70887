#include "minkperi/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "detail/nelder_mead.hpp"
#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"

namespace minkperi {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-12;

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

double raw_extent(std::span<const Vec3> pts) {
  if (pts.empty()) return 0.0;
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return norm(hi - lo);
}

void require_planar(const ConvexPolytope& p, const char* what) {
  if (p.dim() != 2) {
    throw Unsupported(std::string(what) + " is only available for planar polygons");
  }
}

// Rotate so the lexicographically smallest vertex comes first.
void canonical_start(std::vector<Vec3>& v) {
  const auto it = std::min_element(v.begin(), v.end(), lex_less);
  std::rotate(v.begin(), it, v.end());
}

// Distance from b to the line through a and c.
double line_distance(Vec3 a, Vec3 b, Vec3 c) {
  const double len = norm(c - a);
  if (len == 0.0) return norm(b - a);
  return std::abs(cross2(c - a, b - a)) / len;
}

ConvexPolytope hull_2d(std::span<const Vec3> points) {
  std::vector<Vec3> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back({p.x, p.y, 0.0});
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateInput("convex hull needs at least 3 distinct points");
  const double eps = kRelTol * raw_extent(pts);

  // Keep b only when it turns strictly left by more than eps.
  auto keeps = [eps](Vec3 a, Vec3 b, Vec3 c) {
    return cross2(b - a, c - a) > 0.0 && line_distance(a, b, c) > eps;
  };
  std::vector<Vec3> hull;
  hull.reserve(2 * pts.size());
  for (const auto& p : pts) {
    while (hull.size() >= 2 && !keeps(hull[hull.size() - 2], hull.back(), p)) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (hull.size() >= lower && !keeps(hull[hull.size() - 2], hull.back(), *it)) hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  if (hull.size() < 3) throw DegenerateInput("convex hull input is collinear");
  return ConvexPolytope::from_trusted(2, std::move(hull));
}

// Incremental 3D hull with triangular facets.
ConvexPolytope hull_3d(std::span<const Vec3> points) {
  std::vector<Vec3> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double extent = raw_extent(pts);
  const double eps = kRelTol * std::max(extent, 1e-300);
  if (pts.size() < 4) throw DegenerateInput("3D hull needs at least 4 points");

  // Initial tetrahedron.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0.0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    const double d = norm(pts[i] - pts[i0]);
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0 || best <= eps) throw DegenerateInput("3D hull input is a single point");
  best = 0.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0])) / norm(pts[i1] - pts[i0]);
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0 || best <= eps) throw DegenerateInput("3D hull input is collinear");
  const Vec3 n0 = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
  best = 0.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = std::abs(dot(n0, pts[i] - pts[i0])) / norm(n0);
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0 || best <= eps) throw DegenerateInput("3D hull input is coplanar");

  struct Face {
    int a, b, c;
    Vec3 normal;
    double offset;
    bool alive;
  };
  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    Vec3 nrm = cross(pts[b] - pts[a], pts[c] - pts[a]);
    const double len = norm(nrm);
    nrm = (1.0 / len) * nrm;
    faces.push_back({a, b, c, nrm, dot(nrm, pts[a]), true});
  };
  const Vec3 inner = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  auto oriented = [&](int a, int b, int c) {
    const Vec3 nrm = cross(pts[b] - pts[a], pts[c] - pts[a]);
    if (dot(nrm, inner - pts[a]) > 0.0) {
      add_face(a, c, b);
    } else {
      add_face(a, b, c);
    }
  };
  oriented(i0, i1, i2);
  oriented(i0, i1, i3);
  oriented(i0, i2, i3);
  oriented(i1, i2, i3);

  for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && dot(faces[f].normal, pts[p]) - faces[f].offset > eps) visible.push_back(f);
    }
    if (visible.empty()) continue;
    // Horizon: directed edges of visible faces whose reverse is not visible.
    std::vector<std::pair<int, int>> edges;
    for (int f : visible) {
      const auto& fc = faces[f];
      edges.push_back({fc.a, fc.b});
      edges.push_back({fc.b, fc.c});
      edges.push_back({fc.c, fc.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& e : edges) {
      const bool shared = std::any_of(edges.begin(), edges.end(), [&](const auto& o) {
        return o.first == e.second && o.second == e.first;
      });
      if (!shared) horizon.push_back(e);
    }
    for (int f : visible) faces[f].alive = false;
    for (const auto& e : horizon) add_face(e.first, e.second, p);
  }

  std::vector<int> used;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    used.push_back(f.a);
    used.push_back(f.b);
    used.push_back(f.c);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<int> remap(pts.size(), -1);
  std::vector<Vec3> verts;
  for (int idx : used) {
    remap[idx] = static_cast<int>(verts.size());
    verts.push_back(pts[idx]);
  }
  std::vector<ConvexPolytope::Facet> facets;
  for (const auto& f : faces) {
    if (f.alive) facets.push_back({remap[f.a], remap[f.b], remap[f.c]});
  }
  return ConvexPolytope::from_trusted(3, std::move(verts), std::move(facets));
}

// Signed area of (triangle origin, a, b) n disk(origin, R).
double triangle_disk_area(Vec3 a, Vec3 b, double R) {
  const double r2 = R * R;
  auto sector = [&](Vec3 p, Vec3 q) { return 0.5 * r2 * std::atan2(cross2(p, q), dot(p, q)); };
  const Vec3 d = b - a;
  const double A = dot(d, d);
  if (A == 0.0) return 0.0;
  const double B = dot(a, d);
  const double C = dot(a, a) - r2;
  const double disc = B * B - A * C;
  std::vector<double> ts{0.0};
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double t1 = (-B - sq) / A;
    const double t2 = (-B + sq) / A;
    if (t1 > 0.0 && t1 < 1.0) ts.push_back(t1);
    if (t2 > 0.0 && t2 < 1.0) ts.push_back(t2);
  }
  ts.push_back(1.0);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const Vec3 p = a + ts[i] * d;
    const Vec3 q = a + ts[i + 1] * d;
    const Vec3 mid = 0.5 * (p + q);
    if (dot(mid, mid) <= r2) {
      area += 0.5 * cross2(p, q);
    } else {
      area += sector(p, q);
    }
  }
  return area;
}

double point_segment_distance(Vec3 p, Vec3 a, Vec3 b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

double point_polygon_distance(const ConvexPolytope& poly, Vec3 p) {
  if (contains(poly, p)) return 0.0;
  const auto& v = poly.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

// Interval [lo, hi] of the slice {x : (x . across) = t} through the
// polygon, measured along `along`. Returns false when the slice is empty.
bool slice_interval(const ConvexPolytope& p, Vec3 along, Vec3 across, double t, double* lo,
                    double* hi) {
  const auto& v = p.vertices();
  double a = std::numeric_limits<double>::infinity();
  double b = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 p0 = v[i];
    const Vec3 p1 = v[(i + 1) % v.size()];
    const double s0 = dot(p0, across) - t;
    const double s1 = dot(p1, across) - t;
    if (s0 == 0.0) {
      const double u = dot(p0, along);
      a = std::min(a, u);
      b = std::max(b, u);
    }
    if ((s0 < 0.0 && s1 > 0.0) || (s0 > 0.0 && s1 < 0.0)) {
      const double w = s0 / (s0 - s1);
      const double u = dot(p0, along) + w * (dot(p1, along) - dot(p0, along));
      a = std::min(a, u);
      b = std::max(b, u);
    }
  }
  if (!(a <= b)) return false;
  *lo = a;
  *hi = b;
  return true;
}

template <class F>
double golden_max(F&& f, double a, double b, int iterations, double* argmax) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  // Endpoints matter for bodies whose best box touches the extremes.
  const double fa = f(a), fb = f(b);
  double best_x = x1, best_f = f1;
  if (f2 > best_f) {
    best_x = x2;
    best_f = f2;
  }
  if (fa > best_f) {
    best_x = a;
    best_f = fa;
  }
  if (fb > best_f) {
    best_x = b;
    best_f = fb;
  }
  *argmax = best_x;
  return best_f;
}

}  // namespace

Vec3 AffineMap::apply(Vec3 x) const {
  return {linear[0] * x.x + linear[1] * x.y + linear[2] * x.z + offset.x,
          linear[3] * x.x + linear[4] * x.y + linear[5] * x.z + offset.y,
          linear[6] * x.x + linear[7] * x.y + linear[8] * x.z + offset.z};
}

ConvexPolytope ConvexPolytope::from_trusted(int dim, std::vector<Vec3> vertices,
                                            std::vector<Facet> facets) {
  ConvexPolytope p;
  p.dim_ = dim;
  p.vertices_ = std::move(vertices);
  p.facets_ = std::move(facets);
  return p;
}

ConvexPolytope ConvexPolytope::polygon(std::vector<Vec3> vertices) {
  const std::size_t k = vertices.size();
  if (k < 3) throw DegenerateInput("a polygon needs at least 3 vertices");
  for (auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw DegenerateInput("polygon vertex is not finite");
    }
    v.z = 0.0;
  }
  const double eps = kRelTol * raw_extent(vertices);
  double turning = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 a = vertices[(i + k - 1) % k];
    const Vec3 b = vertices[i];
    const Vec3 c = vertices[(i + 1) % k];
    if (!(cross2(b - a, c - b) > 0.0) || line_distance(a, b, c) <= eps) {
      throw DegenerateInput("polygon is not strictly convex and counter-clockwise at vertex " +
                            std::to_string(i));
    }
    turning += std::atan2(cross2(b - a, c - b), dot(b - a, c - b));
  }
  if (std::abs(turning - 2.0 * kPi) > 1e-6) {
    throw DegenerateInput("polygon winds more than once");
  }
  ConvexPolytope p;
  p.dim_ = 2;
  p.vertices_ = std::move(vertices);
  return p;
}

ConvexPolytope convex_hull(std::span<const Vec3> points, int dim) {
  if (dim == 2) return hull_2d(points);
  if (dim == 3) return hull_3d(points);
  throw InvalidArgument("convex hull supports dimensions 2 and 3");
}

double volume_polytope(const ConvexPolytope& p) {
  const auto& v = p.vertices();
  if (p.dim() == 2) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) twice += cross2(v[i], v[(i + 1) % v.size()]);
    return 0.5 * twice;
  }
  double six = 0.0;
  for (const auto& f : p.facets()) six += dot(v[f[0]], cross(v[f[1]], v[f[2]]));
  return six / 6.0;
}

double boundary_measure(const ConvexPolytope& p) {
  const auto& v = p.vertices();
  double total = 0.0;
  if (p.dim() == 2) {
    for (std::size_t i = 0; i < v.size(); ++i) total += norm(v[(i + 1) % v.size()] - v[i]);
    return total;
  }
  for (const auto& f : p.facets()) total += 0.5 * norm(cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]));
  return total;
}

Vec3 centroid(const ConvexPolytope& p) {
  const auto& v = p.vertices();
  if (p.dim() == 2) {
    // Relative to the first vertex for accuracy on far-translated shapes.
    const Vec3 o = v[0];
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec3 p0 = v[i] - o;
      const Vec3 p1 = v[(i + 1) % v.size()] - o;
      const double c = cross2(p0, p1);
      a2 += c;
      cx += (p0.x + p1.x) * c;
      cy += (p0.y + p1.y) * c;
    }
    return {o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2), 0.0};
  }
  const Vec3 o = v[0];
  double vol = 0.0;
  Vec3 acc{};
  for (const auto& f : p.facets()) {
    const Vec3 a = v[f[0]] - o, b = v[f[1]] - o, c = v[f[2]] - o;
    const double t = dot(a, cross(b, c)) / 6.0;
    vol += t;
    acc = acc + (t / 4.0) * (a + b + c);
  }
  return o + (1.0 / vol) * acc;
}

double diameter(const ConvexPolytope& p) {
  const auto& v = p.vertices();
  const std::size_t k = v.size();
  if (p.dim() == 3 || k < 3) {
    double best = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) best = std::max(best, norm(v[i] - v[j]));
    }
    return best;
  }
  // Rotating calipers over antipodal pairs.
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 e = v[(i + 1) % k] - v[i];
    while (cross2(e, v[(j + 1) % k] - v[j]) > 0.0) j = (j + 1) % k;
    best = std::max({best, norm(v[i] - v[j]), norm(v[(i + 1) % k] - v[j])});
  }
  return best;
}

double support(const ConvexPolytope& p, Vec3 u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices()) best = std::max(best, dot(v, u));
  return best;
}

double width(const ConvexPolytope& p, Vec3 u) { return support(p, u) + support(p, -1.0 * u); }

bool contains(const ConvexPolytope& p, Vec3 x, double tol) {
  const auto& v = p.vertices();
  if (p.dim() == 2) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec3 a = v[i], b = v[(i + 1) % v.size()];
      const double len = norm(b - a);
      if (cross2(b - a, x - a) < -tol * len) return false;
    }
    return true;
  }
  for (const auto& f : p.facets()) {
    const Vec3 n = cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]);
    if (dot(n, x - v[f[0]]) > tol * norm(n)) return false;
  }
  return true;
}

BoxProfile john_box(const ConvexPolytope& p) {
  require_planar(p, "john_box");
  const auto& v = p.vertices();
  const std::size_t k = v.size();

  // Frame of the minimum-area bounding rectangle (one side on an edge).
  double best_area = std::numeric_limits<double>::infinity();
  Vec3 best_dir{1, 0, 0};
  for (std::size_t i = 0; i < k; ++i) {
    Vec3 e = v[(i + 1) % k] - v[i];
    e = (1.0 / norm(e)) * e;
    const Vec3 n{-e.y, e.x, 0};
    const double area = width(p, e) * width(p, n);
    if (area < best_area * (1.0 - 1e-12)) {
      best_area = area;
      best_dir = e;
    }
  }
  Vec3 e1 = best_dir;
  Vec3 e2{-e1.y, e1.x, 0};
  // Long axis second.
  if (width(p, e1) > width(p, e2)) {
    const Vec3 t = e1;
    e1 = e2;
    e2 = -1.0 * t;
  }

  // Largest inscribed rectangle with sides along (e1, e2): choose the slab
  // [t0, t1] along e2; the e1-extent is the overlap of the two end slices.
  const double t_min = -support(p, -1.0 * e2);
  const double t_max = support(p, e2);
  auto slice = [&](double t, double* lo, double* hi) {
    return slice_interval(p, e1, e2, std::clamp(t, t_min, t_max), lo, hi);
  };
  auto box_for = [&](double t0, double t1, double* x0, double* x1) {
    double a0, b0, a1, b1;
    if (!slice(t0, &a0, &b0) || !slice(t1, &a1, &b1)) return 0.0;
    *x0 = std::max(a0, a1);
    *x1 = std::min(b0, b1);
    return std::max(0.0, *x1 - *x0) * (t1 - t0);
  };
  auto inner_best = [&](double t0, double* t1_out) {
    double dummy0, dummy1;
    return golden_max([&](double t1) { return box_for(t0, t1, &dummy0, &dummy1); }, t0, t_max,
                      90, t1_out);
  };
  double t0 = t_min;
  golden_max(
      [&](double s) {
        double t1;
        return inner_best(s, &t1);
      },
      t_min, t_max, 90, &t0);
  double t1 = t_max;
  inner_best(t0, &t1);
  double x0 = 0.0, x1 = 0.0;
  box_for(t0, t1, &x0, &x1);

  BoxProfile box;
  box.dim = 2;
  const double inner_e1 = std::max(0.0, x1 - x0);
  const double inner_e2 = t1 - t0;
  const double outer_e1 = width(p, e1);
  const double outer_e2 = width(p, e2);
  box.anchor = x0 * e1 + t0 * e2;
  if (inner_e1 <= inner_e2) {
    box.lambdas = {inner_e1, inner_e2, 0.0};
    box.outer_lambdas = {outer_e1, outer_e2, 0.0};
    box.frame = {e1, e2, Vec3{0, 0, 1}};
  } else {
    box.lambdas = {inner_e2, inner_e1, 0.0};
    box.outer_lambdas = {outer_e2, outer_e1, 0.0};
    box.frame = {e2, e1, Vec3{0, 0, 1}};
  }
  box.containment = std::max(box.outer_lambdas[0] / box.lambdas[0],
                             box.outer_lambdas[1] / box.lambdas[1]);
  return box;
}

double ball_perimeter_analytic(double radius, double r, int n) {
  if (!(radius > 0.0) || !(r > 0.0)) {
    throw InvalidArgument("ball_perimeter_analytic needs R > 0 and r > 0");
  }
  const double outer = ball_volume(n, radius + r);
  const double inner = radius > r ? ball_volume(n, radius - r) : 0.0;
  return (outer - inner) / (2.0 * r);
}

std::optional<ConvexPolytope> inner_parallel_body(const ConvexPolytope& p, double r) {
  require_planar(p, "inner_parallel_body");
  if (!(r > 0.0)) throw InvalidArgument("offset radius must be positive");
  const auto& v = p.vertices();
  const std::size_t k = v.size();
  std::vector<Vec3> poly = v;
  std::vector<Vec3> next;
  for (std::size_t i = 0; i < k && !poly.empty(); ++i) {
    const Vec3 a = v[i];
    const Vec3 e = v[(i + 1) % k] - a;
    const Vec3 nrm = (1.0 / norm(e)) * Vec3{-e.y, e.x, 0};  // inward for CCW
    auto side = [&](Vec3 x) { return dot(x - a, nrm) - r; };
    next.clear();
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const Vec3 s = poly[j];
      const Vec3 t = poly[(j + 1) % poly.size()];
      const double fs = side(s), ft = side(t);
      if (fs >= 0.0) next.push_back(s);
      if ((fs >= 0.0) != (ft >= 0.0)) {
        const double w = fs / (fs - ft);
        next.push_back(s + w * (t - s));
      }
    }
    poly.swap(next);
  }
  if (poly.size() < 3) return std::nullopt;
  try {
    auto body = convex_hull(poly, 2);
    if (volume_polytope(body) <= 0.0) return std::nullopt;
    return body;
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

double outer_parallel_volume(const ConvexPolytope& p, double r) {
  require_planar(p, "outer_parallel_volume");
  return volume_polytope(p) + r * boundary_measure(p) + kPi * r * r;
}

double perimeter_convex_exact(const ConvexPolytope& p, double r) {
  require_planar(p, "perimeter_convex_exact");
  if (!(r > 0.0)) throw InvalidArgument("r-perimeter radius must be positive");
  const double outer = outer_parallel_volume(p, r);
  const auto inner = inner_parallel_body(p, r);
  const double inner_vol = inner ? volume_polytope(*inner) : 0.0;
  return (outer - inner_vol) / (2.0 * r);
}

ConvexPolytope map_vertices(const ConvexPolytope& p, const AffineMap& map) {
  std::vector<Vec3> verts;
  verts.reserve(p.size());
  for (const auto& v : p.vertices()) verts.push_back(map.apply(v));
  if (p.dim() == 2) {
    for (auto& x : verts) x.z = 0.0;
  }
  return ConvexPolytope::from_trusted(p.dim(), std::move(verts), p.facets());
}

ConvexPolytope scale(const ConvexPolytope& p, double s) {
  AffineMap m;
  m.linear = {s, 0, 0, 0, s, 0, 0, 0, s};
  return map_vertices(p, m);
}

ConvexPolytope translate(const ConvexPolytope& p, Vec3 t) {
  AffineMap m;
  m.offset = t;
  if (p.dim() == 2) m.offset.z = 0.0;
  return map_vertices(p, m);
}

ConvexPolytope rotate(const ConvexPolytope& p, double angle, Vec3 pivot) {
  require_planar(p, "rotate");
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Vec3> verts;
  verts.reserve(p.size());
  for (const auto& v : p.vertices()) {
    const Vec3 d = v - pivot;
    verts.push_back({pivot.x + c * d.x - s * d.y, pivot.y + s * d.x + c * d.y, 0.0});
  }
  canonical_start(verts);
  return ConvexPolytope::from_trusted(2, std::move(verts));
}

ConvexPolytope rescale_to_volume(const ConvexPolytope& p, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("target volume must be positive");
  const double vol = volume_polytope(p);
  const double s = std::pow(m / vol, 1.0 / p.dim());
  if (s == 1.0) return p;
  const Vec3 c = centroid(p);
  AffineMap map;
  map.linear = {s, 0, 0, 0, s, 0, 0, 0, s};
  map.offset = c - s * c;
  return map_vertices(p, map);
}

double hausdorff_distance(const ConvexPolytope& p, const ConvexPolytope& q) {
  if (p.dim() != q.dim()) throw InvalidArgument("hausdorff_distance needs equal dimensions");
  require_planar(p, "hausdorff_distance");
  double best = 0.0;
  for (const auto& v : p.vertices()) best = std::max(best, point_polygon_distance(q, v));
  for (const auto& v : q.vertices()) best = std::max(best, point_polygon_distance(p, v));
  return best;
}

double hausdorff_to_ball(const ConvexPolytope& p, Vec3 center, double radius) {
  require_planar(p, "hausdorff_to_ball");
  const auto& v = p.vertices();
  const std::size_t k = v.size();
  double far = 0.0;
  for (const auto& x : v) far = std::max(far, norm(x - center));
  // min over directions u of h_P(u) - center.u: attained at an edge normal or
  // at a direction pointing from a vertex back through the center.
  auto shifted_support = [&](Vec3 u) { return support(p, u) - dot(center, u); };
  double near = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 e = v[(i + 1) % k] - v[i];
    const Vec3 nrm = (1.0 / norm(e)) * Vec3{e.y, -e.x, 0};  // outward for CCW
    near = std::min(near, shifted_support(nrm));
    const Vec3 back = center - v[i];
    const double len = norm(back);
    if (len > 0.0) near = std::min(near, shifted_support((1.0 / len) * back));
  }
  return std::max(far - radius, radius - near);
}

double disk_intersection_area(const ConvexPolytope& p, Vec3 center, double radius) {
  require_planar(p, "disk_intersection_area");
  const auto& v = p.vertices();
  double area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    area += triangle_disk_area(v[i] - center, v[(i + 1) % v.size()] - center, radius);
  }
  return area;
}

PolygonAsymmetry fraenkel_asymmetry(const ConvexPolytope& p) {
  require_planar(p, "fraenkel_asymmetry");
  const double area = volume_polytope(p);
  const double radius = std::sqrt(area / kPi);
  auto objective = [&](Vec3 x) {
    return std::clamp(2.0 * (area - disk_intersection_area(p, x, radius)) / area, 0.0, 2.0);
  };
  const auto best =
      detail::nelder_mead_2d(objective, centroid(p), 0.1 * radius, 1e-11 * radius, 4000);
  return {best.value, best.x, radius};
}

BallFit hausdorff_to_ball_translated(const ConvexPolytope& p, double radius) {
  auto objective = [&](Vec3 x) { return hausdorff_to_ball(p, x, radius); };
  Vec3 start = centroid(p);
  detail::PlanarMinimum best{start, objective(start)};
  // Restarts shrink the simplex around the incumbent; the objective is
  // convex but not smooth.
  double step = 0.1 * radius;
  for (int round = 0; round < 4; ++round) {
    const auto next = detail::nelder_mead_2d(objective, best.x, step, 1e-12 * radius, 2000);
    if (next.value <= best.value) best = next;
    step *= 0.1;
  }
  return {best.value, best.x};
}

ConvexPolytope regular_polygon(int k, double circumradius, Vec3 center, double phase) {
  if (k < 3) throw InvalidArgument("regular polygon needs k >= 3");
  std::vector<Vec3> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double t = phase + 2.0 * kPi * i / k;
    pts.push_back({center.x + circumradius * std::cos(t), center.y + circumradius * std::sin(t), 0});
  }
  return convex_hull(pts, 2);
}

ConvexPolytope ellipse_polygon(int k, double a, double b, Vec3 center) {
  if (k < 3) throw InvalidArgument("ellipse polygon needs k >= 3");
  std::vector<Vec3> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * kPi * i / k;
    pts.push_back({center.x + a * std::cos(t), center.y + b * std::sin(t), 0});
  }
  return convex_hull(pts, 2);
}

ConvexPolytope rectangle(Vec3 lo, Vec3 hi) {
  if (!(hi.x > lo.x) || !(hi.y > lo.y)) throw DegenerateInput("rectangle has zero extent");
  return ConvexPolytope::from_trusted(
      2, {{lo.x, lo.y, 0}, {hi.x, lo.y, 0}, {hi.x, hi.y, 0}, {lo.x, hi.y, 0}});
}

GridSet rasterize(const ConvexPolytope& p, double h, const GridLimits& limits) {
  Vec3 lo = p.vertices()[0], hi = lo;
  for (const auto& v : p.vertices()) {
    for (int a = 0; a < p.dim(); ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  return rasterize(
      p.dim(), lo, hi, h, [&](Vec3 x) { return contains(p, x); }, 1, limits);
}

}  // namespace minkperi
