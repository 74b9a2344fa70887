#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/riesz.hpp"
#include "minkperi/verification.hpp"
#include "oracles.hpp"

namespace minkperi {
namespace {

using oracle::kPi;

const BoundRecord& find(const std::vector<BoundRecord>& records, BoundTag tag) {
  const auto it = std::find_if(records.begin(), records.end(),
                               [tag](const BoundRecord& r) { return r.tag == tag; });
  if (it == records.end()) throw std::runtime_error("missing record");
  return *it;
}

TEST(Deficit, DiskIsEqualityCase) {
  const auto exact = isoperimetric_deficit(regular_polygon(256, 1.0), 0.5);
  EXPECT_NEAR(exact.deficit, 0.0, 1e-3);
  EXPECT_LT(exact.asymmetry, 1e-3);
  EXPECT_EQ(exact.method, Method::kExact);
  const auto grid = isoperimetric_deficit(rasterize_ball(2, {0, 0, 0}, 1.0, 0.01), 0.5);
  EXPECT_NEAR(grid.deficit, 0.0, 1e-2);
  EXPECT_LT(grid.asymmetry, 2e-2);
  EXPECT_EQ(grid.method, Method::kGrid);
}

TEST(Deficit, SquareOfAreaPi) {
  const double s = std::sqrt(kPi), r = 0.1;
  const auto rec = isoperimetric_deficit(rectangle({0, 0, 0}, {s, s, 0}), r);
  const double per_square = 4 * s - 2 * r + kPi * r / 2;
  const double per_disk = 2 * kPi;
  EXPECT_NEAR(rec.per_r_shape, per_square, 1e-12);
  EXPECT_NEAR(rec.per_r_ball, per_disk, 1e-12);
  EXPECT_NEAR(rec.deficit, (per_square - per_disk) / per_disk, 1e-12);
  EXPECT_NEAR(rec.asymmetry, oracle::kSquareAreaPiAsymmetry, 1e-9);
  ASSERT_TRUE(rec.implied_constant.has_value());
  EXPECT_GT(*rec.implied_constant, 0.0);
}

TEST(Deficit, RectangleTwoByHalf) {
  const auto rec = isoperimetric_deficit(rectangle({0, 0, 0}, {2, 0.5, 0}), 0.1);
  EXPECT_GT(rec.deficit, 0.0);
  ASSERT_TRUE(rec.implied_constant.has_value());
  EXPECT_GT(*rec.implied_constant, 0.0);
}

TEST(Deficit, EmptyGridRejected) {
  EXPECT_THROW(isoperimetric_deficit(GridSet(2, 0.01, {0, 0, 0}, {10, 10, 1}), 0.1),
               InvalidArgument);
}

TEST(IsoSuite, BallsHaveNoDeficit) {
  const auto rep = check_quantitative_iso(Family::kBalls, 0.1, 10, 3);
  EXPECT_EQ(rep.summary.violations, 0u);
  for (const auto& rec : rep.records) {
    EXPECT_NEAR(rec.deficit, 0.0, 1e-3) << rec.shape_id;
    EXPECT_LT(rec.asymmetry, 2e-3) << rec.shape_id;
  }
}

TEST(IsoSuite, RandomHullsRegressionLock) {
  const auto rep = check_quantitative_iso(Family::kRandomHulls, 0.1, 200, 42);
  EXPECT_EQ(rep.records.size(), 200u);
  EXPECT_EQ(rep.summary.violations, 0u);
  EXPECT_EQ(rep.equality_outliers, 0u);
  ASSERT_TRUE(rep.summary.min_constant.has_value());
  EXPECT_GE(*rep.summary.min_constant, oracle::kIsoConstantLock);
}

TEST(IsoSuite, EllipseSweepPositive) {
  const auto rep = check_quantitative_iso(Family::kEllipseSweep, 0.1, 10, 1);
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    ASSERT_TRUE(rep.records[i].implied_constant.has_value());
    EXPECT_GT(*rep.records[i].implied_constant, 0.0);
    EXPECT_GT(rep.records[i].asymmetry, rep.records[i - 1].asymmetry);
  }
}

TEST(IsoSuite, NegativeToleranceFlagsEveryShape) {
  IsoOptions opts;
  opts.tolerance = -1.0;
  const auto rep = check_quantitative_iso(Family::kRandomHulls, 0.1, 5, 42, opts);
  EXPECT_EQ(rep.summary.violations, 5u);
  EXPECT_EQ(rep.violating.size(), 5u);
}

TEST(IsoSuite, IndependentOfThreadCount) {
  ::setenv("MINKPERI_THREADS", "1", 1);
  const auto serial = check_quantitative_iso(Family::kRandomHulls, 0.1, 12, 9);
  ::setenv("MINKPERI_THREADS", "4", 1);
  const auto threaded = check_quantitative_iso(Family::kRandomHulls, 0.1, 12, 9);
  ::unsetenv("MINKPERI_THREADS");
  EXPECT_EQ(deficit_csv(serial.records), deficit_csv(threaded.records));
}

TEST(ShapeFamilies, SeededAndEnumerable) {
  for (auto f : {Family::kBalls, Family::kRandomHulls, Family::kEllipseSweep, Family::kBoxes,
                 Family::kCylinders, Family::kThinRectangles}) {
    const auto a = generate_shape(f, 5, 3, 10);
    const auto b = generate_shape(f, 5, 3, 10);
    EXPECT_EQ(a.id, b.id);
    EXPECT_TRUE(a.shape == b.shape) << to_string(f);
    const auto parsed = family_from_string(to_string(f));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, f);
  }
  EXPECT_FALSE(family_from_string("spheres").has_value());
}

TEST(BrunnMinkowski, DiskIsEquality) {
  const auto rec = check_bm_quantitative(regular_polygon(256, 1.0), 0.3);
  EXPECT_NEAR(rec.lhs, 0.0, 1e-3);
  EXPECT_TRUE(rec.holds);
}

TEST(BrunnMinkowski, SquareSteiner) {
  const auto rec = check_bm_quantitative(rectangle({0, 0, 0}, {1, 1, 0}), 0.3);
  EXPECT_NEAR(rec.lhs, oracle::kSquareBm03, 1e-12);
  ASSERT_TRUE(rec.asymmetry.has_value());
  EXPECT_GT(*rec.asymmetry, 0.1);
}

TEST(BrunnMinkowski, FarDisks) {
  const double rho = std::sqrt(0.5), h = 0.01;
  const auto pair = set_union(rasterize_ball(2, {0, 0, 0}, rho, h),
                              rasterize_ball(2, {3, 0, 0}, rho, h));
  const auto rec = check_bm_quantitative(pair, 0.3);
  EXPECT_GT(rec.lhs, 0.0);
  ASSERT_TRUE(rec.asymmetry.has_value());
  EXPECT_GE(*rec.asymmetry, 0.5);
}

TEST(BrunnMinkowski, RandomHullsNeverNegative) {
  const auto rep = check_bm_family(Family::kRandomHulls, 1.0, 50, 42);
  EXPECT_EQ(rep.summary.violations, 0u);
  EXPECT_EQ(rep.equality_outliers, 0u);
  for (const auto& rec : rep.records) EXPECT_GE(rec.lhs, -1e-3);
}

TEST(ConvexBounds, UnitSquare) {
  const auto records = check_convex_bounds(rectangle({0, 0, 0}, {1, 1, 0}), 0.1, 0.5);
  const auto& diam = find(records, BoundTag::kDiam);
  EXPECT_NEAR(diam.lhs, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(diam.rhs, oracle::kSquarePer01, 1e-12);
  ASSERT_TRUE(diam.observed_constant.has_value());
  EXPECT_NEAR(*diam.observed_constant, std::sqrt(2.0) / oracle::kSquarePer01, 1e-12);
}

TEST(ConvexBounds, DiskRiesz1) {
  const auto records = check_convex_bounds(regular_polygon(256, 1.0), 0.1, 1.0);
  const auto& rec = find(records, BoundTag::kRiesz1);
  EXPECT_TRUE(rec.holds);
  EXPECT_NEAR(rec.lhs, oracle::kDiskPhi1 * 2.0, 1e-3 * oracle::kDiskPhi1 * 2.0);
  EXPECT_GE(rec.lhs, rec.rhs);
}

TEST(ConvexBounds, ThinRectangle) {
  const auto p = rectangle({0, 0, 0}, {10, 0.1, 0});
  const auto records = check_convex_bounds(p, 0.05, 0.5);
  EXPECT_EQ(records.size(), 4u);
  for (const auto& rec : records) {
    EXPECT_TRUE(std::isfinite(rec.lhs));
    EXPECT_TRUE(std::isfinite(rec.rhs));
    EXPECT_TRUE(rec.holds);
  }
  EXPECT_DOUBLE_EQ(john_box(p).lambdas[0], 0.1);
}

TEST(ConvexBounds, FamilyHasNoViolations) {
  const auto rep = check_bounds_family(Family::kRandomHulls, 0.1, 0.5, 40, 42);
  EXPECT_EQ(rep.summary.violations, 0u);
  for (BoundTag t : {BoundTag::kDiam, BoundTag::kRiesz1, BoundTag::kRiesz2, BoundTag::kPerc}) {
    const auto [lo, hi] = rep.constant_range[static_cast<std::size_t>(t)];
    EXPECT_GT(lo, 0.0) << to_string(t);
    EXPECT_TRUE(std::isfinite(hi)) << to_string(t);
  }
}

TEST(PotentialGap, HoldsWithExplicitConstant) {
  for (double alpha : {0.5, 1.0}) {
    const auto rep = check_potential_gap_family(Family::kRandomHulls, alpha, 40, 42);
    EXPECT_EQ(rep.summary.violations, 0u) << alpha;
  }
  const auto disk = check_potential_gap(rescale_to_volume(regular_polygon(256, 1.0), 1.0), 0.5);
  EXPECT_TRUE(disk.holds);
  EXPECT_LT(disk.lhs, 1e-3);
}

TEST(Cylinder, RectanglePerimeterClosedForm) {
  const double L = 8.0, r = 0.1;
  const auto [perc1, phic] = cylinder_energy_bounds(L, r, 0.5, 2);
  EXPECT_NEAR(perc1.lhs, L + 1 / L + 1 / (2 * r) + kPi * r / 2, 1e-12);
  EXPECT_DOUBLE_EQ(perc1.rhs, L);
  EXPECT_NEAR(phic.lhs, riesz_energy_polygon(rectangle({0, 0, 0}, {L, 1 / L, 0}), 0.5), 1e-9);
}

TEST(Cylinder, PhiFollowsPowerLaw) {
  double prev = cylinder_energy_bounds(4, 0.1, 0.5, 2).second.lhs;
  for (double L : {8.0, 16.0}) {
    const double cur = cylinder_energy_bounds(L, 0.1, 0.5, 2).second.lhs;
    EXPECT_NEAR(cur / prev, std::pow(2.0, -0.5), 0.15 * std::pow(2.0, -0.5)) << L;
    prev = cur;
  }
}

TEST(Cylinder, Preconditions) {
  EXPECT_THROW(cylinder_energy_bounds(0.5, 0.1, 0.5, 2), InvalidArgument);
  EXPECT_THROW(cylinder_energy_bounds(4, 5.0, 0.5, 2), InvalidArgument);
  EXPECT_THROW(cylinder_energy_bounds(4, 0.1, 1.0, 2), InvalidArgument);
}

TEST(Reports, CsvShapes) {
  const auto rep = check_quantitative_iso(Family::kRandomHulls, 0.1, 3, 42);
  const auto csv = deficit_csv(rep.records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "shape_id,r,R,per_r_shape,per_r_ball,deficit,asymmetry,min_factor,implied_constant,"
            "proof_constant,method");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto scatter = deficit_scatter_csv(rep.records);
  EXPECT_EQ(std::count(scatter.begin(), scatter.end(), '\n'), 4);
  const auto json = summary_json(rep.summary, {{"r", "0.1"}});
  EXPECT_NE(json.find("\"violations\""), std::string::npos);
  EXPECT_NE(json.find("\"r\""), std::string::npos);
}

}  // namespace
}  // namespace minkperi
