#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "minkperi/grid_set.hpp"
#include "minkperi/vec.hpp"

namespace minkperi {

struct AffineMap {
  // Row-major 3x3 linear part and translation.
  std::array<double, 9> linear{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3 offset{};
  Vec3 apply(Vec3 x) const;
};

// Convex body given by its vertices. Planar polygons keep their vertices in
// counter-clockwise order starting from the lexicographically smallest one;
// 3D polytopes carry outward-oriented triangular facets.
class ConvexPolytope {
 public:
  using Facet = std::array<int, 3>;

  ConvexPolytope() = default;

  // Validating constructor for planar polygons: vertices must already be
  // strictly convex and counter-clockwise (any starting vertex). Order is kept
  // as given. Throws DegenerateInput otherwise.
  static ConvexPolytope polygon(std::vector<Vec3> vertices);

  // No validation: the vertices must already be a minimal hull in canonical
  // order (used by the hull and affine-map routines).
  static ConvexPolytope from_trusted(int dim, std::vector<Vec3> vertices,
                                     std::vector<Facet> facets = {});

  int dim() const { return dim_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const ConvexPolytope&, const ConvexPolytope&) = default;

 private:
  int dim_ = 2;
  std::vector<Vec3> vertices_;
  std::vector<Facet> facets_;
};

struct BallSpec {
  Vec3 center{};
  double radius = 1.0;
  int dim = 2;
};

// Box sandwich for a planar convex body. `lambdas` are the sides of the
// largest-area rectangle inscribed in the body with sides along `frame`
// (ascending); `outer_lambdas` are the sides of the bounding rectangle in
// the same frame. `containment` is the smallest C with
// body subset of a translate of C * inner box.
struct BoxProfile {
  std::array<double, 3> lambdas{};
  std::array<double, 3> outer_lambdas{};
  std::array<Vec3, 3> frame{};
  Vec3 anchor{};  // lower corner of the inner box
  int dim = 2;
  double containment = 1.0;
};

// Published outer containment constant of john_box: C(n) <= n^{3/2}.
inline double box_constant_bound(int n) { return std::pow(static_cast<double>(n), 1.5); }

// Minimal vertex representation of the convex hull. dim 2 uses Andrew's
// monotone chain, dim 3 an incremental hull. Throws DegenerateInput when the
// points are affinely dependent.
ConvexPolytope convex_hull(std::span<const Vec3> points, int dim = 2);

double volume_polytope(const ConvexPolytope& p);
// Classical perimeter (planar) or surface area (3D).
double boundary_measure(const ConvexPolytope& p);
Vec3 centroid(const ConvexPolytope& p);
double diameter(const ConvexPolytope& p);
// Width of the polygon in direction u (unit vector).
double width(const ConvexPolytope& p, Vec3 u);
double support(const ConvexPolytope& p, Vec3 u);
bool contains(const ConvexPolytope& p, Vec3 x, double tol = 0.0);

BoxProfile john_box(const ConvexPolytope& p);

// (|B_{R+r}| - |B_{max(R-r,0)}|) / (2r).
double ball_perimeter_analytic(double radius, double r, int n);

// Intersection of the inward r-offsets of all edge half-planes; empty when
// the inradius is at most r.
std::optional<ConvexPolytope> inner_parallel_body(const ConvexPolytope& p, double r);

// Exact r-perimeter of a planar convex polygon from the Steiner formula and
// the inner parallel body.
double perimeter_convex_exact(const ConvexPolytope& p, double r);

// |P + B_r| for a planar convex polygon (Steiner formula).
double outer_parallel_volume(const ConvexPolytope& p, double r);

// Homothety about the centroid to volume m.
ConvexPolytope rescale_to_volume(const ConvexPolytope& p, double m);

// Homothety about the origin, x -> s x.
ConvexPolytope scale(const ConvexPolytope& p, double s);
ConvexPolytope translate(const ConvexPolytope& p, Vec3 t);
ConvexPolytope rotate(const ConvexPolytope& p, double angle, Vec3 pivot = {});

// Image under an orientation-preserving affine map (vertex order kept).
ConvexPolytope map_vertices(const ConvexPolytope& p, const AffineMap& map);

double hausdorff_distance(const ConvexPolytope& p, const ConvexPolytope& q);
double hausdorff_to_ball(const ConvexPolytope& p, Vec3 center, double radius);

// Exact area of polygon n disk.
double disk_intersection_area(const ConvexPolytope& p, Vec3 center, double radius);

struct PolygonAsymmetry {
  double value = 0.0;  // inf_x |P xor B_R(x)| / |B_R| with |B_R| = |P|
  Vec3 center{};
  double radius = 0.0;
};

// Exact-geometry Fraenkel asymmetry of a planar convex polygon against the
// disk of equal area. The overlap |P n B(x)| is log-concave in x, so the
// centroid-seeded local search reaches the global infimum.
PolygonAsymmetry fraenkel_asymmetry(const ConvexPolytope& p);

struct BallFit {
  double distance = 0.0;
  Vec3 center{};
};
// inf over translations x of d_H(P, B_R(x)).
BallFit hausdorff_to_ball_translated(const ConvexPolytope& p, double radius);

// Regular k-gon with the given circumradius, first vertex at angle `phase`.
ConvexPolytope regular_polygon(int k, double circumradius, Vec3 center = {}, double phase = 0.0);
// Polygon with k vertices on the ellipse with semi-axes a, b.
ConvexPolytope ellipse_polygon(int k, double a, double b, Vec3 center = {});
ConvexPolytope rectangle(Vec3 lo, Vec3 hi);

// Cells whose centers lie inside the polytope.
GridSet rasterize(const ConvexPolytope& p, double h, const GridLimits& limits = {});

}  // namespace minkperi
