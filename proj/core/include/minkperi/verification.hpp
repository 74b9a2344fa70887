#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/grid_set.hpp"
#include "minkperi/io.hpp"

namespace minkperi {

enum class Method { kExact, kGrid };
std::string_view to_string(Method m);

struct DeficitRecord {
  std::string shape_id;
  double r = 0.0;
  double radius = 0.0;  // R with |B_R| = |E|
  double per_r_shape = 0.0;
  double per_r_ball = 0.0;
  double deficit = 0.0;  // (per_r_shape - per_r_ball) / per_r_ball
  double asymmetry = 0.0;
  double min_factor = 1.0;  // min(R/r, 1)
  // deficit / (min_factor * asymmetry^2); empty when asymmetry == 0.
  std::optional<double> implied_constant;
  // Same ratio without min_factor and with the 1/2 of the R >= r branch,
  // i.e. 2 deficit / asymmetry^2 when R >= r.
  std::optional<double> proof_constant;
  Method method = Method::kExact;
};

enum class BoundTag { kDiam, kRiesz1, kRiesz2, kPerc, kBm1, kContopot, kPerc1, kPhic };
std::string_view to_string(BoundTag t);

struct BoundRecord {
  std::string shape_id;
  BoundTag tag = BoundTag::kDiam;
  double lhs = 0.0;
  double rhs = 0.0;  // right-hand side without the constant
  // lhs / rhs when rhs > 0.
  std::optional<double> observed_constant;
  // Extra quantity some bounds carry (asymmetry for bm1).
  std::optional<double> asymmetry;
  // Only bounds with a known constant are asserted; others hold trivially
  // when the observed constant is finite and positive.
  bool holds = true;
};

// Exact path for planar polygons, grid path otherwise. For grids the
// reference ball is rasterized at the same spacing so both perimeters carry
// the same discretization bias. Throws InvalidArgument when |E| = 0.
DeficitRecord isoperimetric_deficit(const ConvexPolytope& p, double r, std::string shape_id = {});
DeficitRecord isoperimetric_deficit(const GridSet& set, double r, std::string shape_id = {});
DeficitRecord isoperimetric_deficit(const Shape& shape, double r, std::string shape_id = {});

// Seeded shape generators. Every shape depends only on (seed, index).
enum class Family {
  kBalls,           // disks of random center and radius in [0.05, 2]
  kRandomHulls,     // hulls of 5..30 uniform points in the disk, area pi
  kEllipseSweep,    // aspect 1 -> 10 over the trials, area pi
  kBoxes,           // rectangles of aspect in [1, 10], area pi
  kFarUnions,       // two disks of area pi/2, centers 2..4 apart (grid)
  kCylinders,       // L x 1/L with L cycling through 4, 8, 16, 32
  kThinRectangles,  // [0, L] x [0, 0.1] with L in [2, 20]
};
std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);

struct FamilyOptions {
  // Spacing for shapes that only exist on grids.
  double h = 0.01;
  // Vertex count for polygonized smooth bodies.
  int smooth_vertices = 256;
};

struct ShapeSample {
  std::string id;
  Shape shape;
};

ShapeSample generate_shape(Family family, std::uint64_t seed, std::size_t index,
                           std::size_t trials, const FamilyOptions& options = {});

struct SuiteSummary {
  std::string family;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<double> min_constant;
  std::size_t violations = 0;
};

struct IsoOptions {
  // A deficit below -tolerance is a violation.
  double tolerance = 1e-3;
  FamilyOptions family;
};

struct IsoReport {
  std::vector<DeficitRecord> records;
  SuiteSummary summary;
  // Minimum of the proof normalization over records with R >= r.
  std::optional<double> min_proof_constant;
  // Records with deficit < 1e-2 but asymmetry >= 0.1.
  std::size_t equality_outliers = 0;
  std::vector<std::size_t> violating;  // trial indices
};

// Trials run in parallel; records are ordered by trial index.
IsoReport check_quantitative_iso(Family family, double r, std::size_t trials, std::uint64_t seed,
                                 const IsoOptions& options = {});

// |F + B_r|^{1/n} - |F|^{1/n} - |B_r|^{1/n} against
// min(|F|^{1/n}, |B_r|^{1/n}) * asymmetry^2. Exact Steiner path for planar
// polygons; dilation plus exhaustive asymmetry search on grids.
BoundRecord check_bm_quantitative(const ConvexPolytope& f, double r, std::string shape_id = {});
BoundRecord check_bm_quantitative(const GridSet& f, double r, std::string shape_id = {});
BoundRecord check_bm_quantitative(const Shape& f, double r, std::string shape_id = {});

struct BmOptions {
  double tolerance = 1e-3;       // lhs below -tolerance is a violation
  double equality_band = 1e-2;   // |lhs| below this counts as equality
  double equality_asymmetry = 0.1;
  FamilyOptions family;
};

struct BmReport {
  std::vector<BoundRecord> records;
  SuiteSummary summary;
  std::size_t equality_outliers = 0;  // |lhs| < band with asymmetry >= 0.1
  std::vector<std::size_t> violating;
};

BmReport check_bm_family(Family family, double r, std::size_t trials, std::uint64_t seed,
                         const BmOptions& options = {});

// diam, riesz1 (asserted with constant 1), riesz2 and perc records for a
// planar polygon. Requires 0 < alpha < 2.
std::vector<BoundRecord> check_convex_bounds(const ConvexPolytope& p, double r, double alpha,
                                             std::string shape_id = {});

struct BoundsReport {
  std::vector<BoundRecord> records;
  SuiteSummary summary;
  // Smallest and largest observed constant per tag, indexed by BoundTag.
  std::vector<std::pair<double, double>> constant_range;
  std::vector<std::size_t> violating;
};

BoundsReport check_bounds_family(Family family, double r, double alpha, std::size_t trials,
                                 std::uint64_t seed, const FamilyOptions& options = {});

// |Phi(B) - Phi(E)| against inf_x |E xor B(x)| for a unit-area polygon,
// asserted with potential_gap_constant(2, alpha).
BoundRecord check_potential_gap(const ConvexPolytope& p, double alpha, std::string shape_id = {});

BoundsReport check_potential_gap_family(Family family, double alpha, std::size_t trials,
                                        std::uint64_t seed, const FamilyOptions& options = {});

struct CylinderOptions {
  // Grid spacing for n = 3; 0 picks min(r, R) / 8.
  double h = 0.0;
};

// Per_r and Phi_alpha of the unit-volume cylinder of length L (the rectangle
// L x 1/L for n = 2), as perc1 (rhs L^{1/(n-1)}) and phic (rhs L^{-alpha})
// records. Requires L >= max(R, r, 1) and alpha < n - 1.
std::pair<BoundRecord, BoundRecord> cylinder_energy_bounds(double length, double r, double alpha,
                                                           int n,
                                                           const CylinderOptions& options = {});

struct CylinderReport {
  std::vector<BoundRecord> records;  // perc1 and phic per length
  double perc1_spread = 1.0;         // max / min of observed constants
  double phic_spread = 1.0;
  // Both spreads allow a common center c with every constant in
  // [(1 - band) c, (1 + band) c].
  bool stable = true;
};

CylinderReport check_cylinders(const std::vector<double>& lengths, double r, double alpha, int n,
                               double band = 0.2, const CylinderOptions& options = {});

// Reports. Columns:
//   deficits: shape_id,r,R,per_r_shape,per_r_ball,deficit,asymmetry,
//             min_factor,implied_constant,proof_constant,method
//   bounds:   shape_id,tag,lhs,rhs,observed_constant,asymmetry,holds
//   scatter:  x = min_factor * asymmetry^2, y = deficit
// Empty optional fields are written as empty cells.
std::string deficit_csv(const std::vector<DeficitRecord>& records);
std::string bound_csv(const std::vector<BoundRecord>& records);
std::string deficit_scatter_csv(const std::vector<DeficitRecord>& records);
// {"family","seed","trials","min_constant","violations"} plus `extra` keys
// given as raw JSON values.
std::string summary_json(const SuiteSummary& summary,
                         const std::vector<std::pair<std::string, std::string>>& extra = {});

}  // namespace minkperi
