#pragma once

#include <functional>

#include "minkperi/grid_set.hpp"

namespace minkperi {

// How a signed distance value relates to the occupancy boundary.
enum class DistanceConvention {
  // Distance from a cell center to the nearest cell center of the opposite
  // phase.
  kCellCenter,
  // Distance to the interface between phases, taken half a cell before the
  // nearest opposite-phase center. Exact for axis-aligned interfaces; used by
  // dilation, erosion and the r-perimeter.
  kInterface,
};

// Signed distance per cell: negative on occupied cells, positive elsewhere.
struct DistanceField {
  GridGeometry geometry;
  std::vector<double> values;
  DistanceConvention convention = DistanceConvention::kInterface;
};

// Set of cells whose centers satisfy `inside`, on a grid covering
// [lo, hi] with spacing h plus `margin` empty cells on every side.
GridSet rasterize(int dim, Vec3 lo, Vec3 hi, double h, const std::function<bool(Vec3)>& inside,
                  int margin = 1, const GridLimits& limits = {});

// Open ball |x - center| < R. Requires R > 0, h > 0 and h <= R/4.
GridSet rasterize_ball(int dim, Vec3 center, double radius, double h,
                       const GridLimits& limits = {});

// Axis-aligned half-open box [lo, hi) (both corners inclusive up to
// cell-center sampling).
GridSet rasterize_box(int dim, Vec3 lo, Vec3 hi, double h, const GridLimits& limits = {});

// Union of two sets living on grids with the same spacing; the result grid
// covers both with a one-cell margin.
GridSet set_union(const GridSet& a, const GridSet& b, const GridLimits& limits = {});

double volume(const GridSet& set);
Vec3 centroid(const GridSet& set);

// Copy of `set` with `cells` extra empty cells on every used side.
GridSet pad(const GridSet& set, int cells, const GridLimits& limits = {});

// Shift occupancy by whole cells inside the same array. The shifted region
// must keep at least one empty cell of margin.
GridSet shift_cells(const GridSet& set, std::array<int, 3> offset);

// Exact Euclidean distance transform (separable lower-envelope method).
DistanceField distance_transform(const GridSet& set,
                                 DistanceConvention convention = DistanceConvention::kInterface);

// E + B_r: cells with signed interface distance < r. The grid is re-padded so
// the dilation fits.
GridSet dilate(const GridSet& set, double r, const GridLimits& limits = {});

// E - B_r: occupied cells with signed interface distance <= -r.
GridSet erode(const GridSet& set, double r);

// (|E + B_r| - |E - B_r|) / (2r). Requires r >= 2h.
double minkowski_perimeter(const GridSet& set, double r, const GridLimits& limits = {});

// Volume of A xor B. Grids must share spacing; cell lattices are aligned by
// nearest cell center.
double symmetric_difference_volume(const GridSet& a, const GridSet& b);

enum class AsymmetrySearch {
  // Centroid-seeded lattice descent followed by per-axis golden-section.
  kLocal,
  // Lattice sweep over every translation placing the ball center inside the
  // bounding box of the set, refined locally from the best lattice point.
  kExhaustive,
};

struct AsymmetryResult {
  double value = 0.0;  // inf_x |E xor B_R(x)| / |B_R|, in [0, 2]
  Vec3 center{};       // minimizing ball center
};

// Smooth estimate of |E n B_R(x)|: every occupied cell contributes its
// volume times a linear coverage ramp of width h across the sphere.
double ball_overlap_volume(const GridSet& set, Vec3 center, double radius);

// Fraenkel asymmetry against the ball of radius R. Requires
// |E| = |B_R| within 1%.
AsymmetryResult fraenkel_asymmetry(const GridSet& set, double radius,
                                   AsymmetrySearch search = AsymmetrySearch::kLocal);

}  // namespace minkperi
