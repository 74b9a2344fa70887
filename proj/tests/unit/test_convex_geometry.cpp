#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"
#include "oracles.hpp"

namespace minkperi {
namespace {

using oracle::kPi;

ConvexPolytope unit_square() { return rectangle({0, 0, 0}, {1, 1, 0}); }

ConvexPolytope random_polygon(std::mt19937_64& rng, int points) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  while (static_cast<int>(pts.size()) < points) {
    const Vec3 p{u(rng), u(rng), 0};
    if (dot(p, p) <= 1.0) pts.push_back(p);
  }
  return convex_hull(pts, 2);
}

bool parallel(Vec3 a, Vec3 b) { return std::abs(std::abs(dot(a, b)) - norm(a) * norm(b)) < 1e-6; }

TEST(ConvexHull, DropsInteriorPoint) {
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 0}};
  const auto hull = convex_hull(pts, 2);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_DOUBLE_EQ(volume_polytope(hull), 1.0);
}

TEST(ConvexHull, Triangle) {
  const std::vector<Vec3> pts{{0, 0, 0}, {2, 0, 0}, {0, 1, 0}};
  const auto hull = convex_hull(pts, 2);
  ASSERT_EQ(hull.size(), 3u);
  for (const auto& v : pts) {
    bool found = false;
    for (const auto& w : hull.vertices()) found = found || v == w;
    EXPECT_TRUE(found);
  }
}

TEST(ConvexHull, CollinearIsDegenerate) {
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
  EXPECT_THROW(convex_hull(pts, 2), DegenerateInput);
}

TEST(ConvexHull, SampledDiskAreaGrows) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  double prev = 0.0;
  for (int target : {100, 1000, 10000}) {
    while (static_cast<int>(pts.size()) < target) {
      const Vec3 p{u(rng), u(rng), 0};
      if (dot(p, p) <= 1.0) pts.push_back(p);
    }
    const double area = volume_polytope(convex_hull(pts, 2));
    EXPECT_LE(area, kPi);
    EXPECT_GE(area, prev);
    prev = area;
  }
  EXPECT_GT(prev, 0.99 * kPi);
}

TEST(VolumePolytope, Examples) {
  EXPECT_DOUBLE_EQ(volume_polytope(unit_square()), 1.0);
  const std::vector<Vec3> tri{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  EXPECT_DOUBLE_EQ(volume_polytope(convex_hull(tri, 2)), 0.5);
  EXPECT_NEAR(volume_polytope(regular_polygon(6, 1.0)), 3 * std::sqrt(3.0) / 2, 1e-12);
}

TEST(Diameter, Examples) {
  EXPECT_NEAR(diameter(unit_square()), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(diameter(rectangle({0, 0, 0}, {10, 1e-3, 0})), std::hypot(10.0, 1e-3), 1e-12);
  EXPECT_NEAR(diameter(regular_polygon(6, 1.0)), 2.0, 1e-12);
}

TEST(JohnBox, AxisAlignedRectangle) {
  const auto box = john_box(rectangle({0, 0, 0}, {2, 1, 0}));
  EXPECT_NEAR(box.lambdas[0], 1.0, 1e-9);
  EXPECT_NEAR(box.lambdas[1], 2.0, 1e-9);
  EXPECT_TRUE(parallel(box.frame[0], {0, 1, 0}));
  EXPECT_TRUE(parallel(box.frame[1], {1, 0, 0}));
}

TEST(JohnBox, RotatedRectangle) {
  const double angle = kPi / 6;
  const auto box = john_box(rotate(rectangle({0, 0, 0}, {2, 1, 0}), angle));
  EXPECT_NEAR(box.lambdas[0], 1.0, 1e-6);
  EXPECT_NEAR(box.lambdas[1], 2.0, 1e-6);
  EXPECT_TRUE(parallel(box.frame[1], {std::cos(angle), std::sin(angle), 0}));
}

TEST(JohnBox, DiskPolygonIsRound) {
  const auto box = john_box(regular_polygon(256, 1.0));
  const double ratio = box.lambdas[1] / box.lambdas[0];
  EXPECT_GE(ratio, 0.7);
  EXPECT_LE(ratio, 1.43);
}

TEST(JohnBox, LongSideBracketsDiameter) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_polygon(rng, 5 + t % 20);
    const auto box = john_box(p);
    const double d = diameter(p);
    // outer_lambdas follow the inner box's axis order.
    const double longest = std::max(box.outer_lambdas[0], box.outer_lambdas[1]);
    EXPECT_GE(longest, d / std::sqrt(2.0) - 1e-12);
    EXPECT_LE(longest, d + 1e-12);
    EXPECT_LE(box.lambdas[0], box.lambdas[1]);
    EXPECT_LE(box.lambdas[0], box.outer_lambdas[0] + 1e-12);
    EXPECT_LE(box.lambdas[1], box.outer_lambdas[1] + 1e-12);
  }
}

TEST(BallPerimeterAnalytic, Examples) {
  EXPECT_NEAR(ball_perimeter_analytic(1.0, 0.5, 2), 2 * kPi, 1e-12);
  EXPECT_NEAR(ball_perimeter_analytic(0.5, 1.0, 2), kPi * 2.25 / 2, 1e-12);
  EXPECT_NEAR(ball_perimeter_analytic(1.0, 1e-8, 2), 2 * kPi, 1e-6);
}

TEST(PerimeterConvexExact, Square) {
  EXPECT_NEAR(perimeter_convex_exact(unit_square(), 0.1), oracle::kSquarePer01,
              1e-13 * oracle::kSquarePer01);
  EXPECT_NEAR(perimeter_convex_exact(unit_square(), 0.6), oracle::kSquarePer06,
              1e-13 * oracle::kSquarePer06);
}

TEST(PerimeterConvexExact, DiskPolygon) {
  EXPECT_NEAR(perimeter_convex_exact(regular_polygon(256, 1.0), 0.5), 2 * kPi, 1e-3 * 2 * kPi);
}

TEST(PerimeterConvexExact, ThinRectangleClosedForm) {
  // L x 1/L with 1/L < 2r: Per_r = L + 1/L + 1/(2r) + pi r / 2.
  const double L = 8.0, r = 0.1;
  const double expected = L + 1 / L + 1 / (2 * r) + kPi * r / 2;
  EXPECT_NEAR(perimeter_convex_exact(rectangle({0, 0, 0}, {L, 1 / L, 0}), r), expected,
              1e-12 * expected);
}

TEST(PerimeterConvexExact, SpatialIsUnsupported) {
  const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_THROW(perimeter_convex_exact(convex_hull(pts, 3), 0.1), Unsupported);
}

TEST(PerimeterConvexExact, AgreesWithGrid) {
  std::mt19937_64 rng(5);
  const double r = 0.2, h = r / 20;
  for (int t = 0; t < 8; ++t) {
    const auto p = random_polygon(rng, 6 + 3 * t);
    const double exact = perimeter_convex_exact(p, r);
    const double grid = minkowski_perimeter(rasterize(p, h), r);
    EXPECT_NEAR(grid, exact, 0.03 * exact) << "trial " << t;
  }
}

TEST(RescaleToVolume, Examples) {
  const auto sq = rescale_to_volume(unit_square(), 4.0);
  EXPECT_NEAR(volume_polytope(sq), 4.0, 1e-12);
  EXPECT_NEAR(diameter(sq), 2 * std::sqrt(2.0), 1e-12);
  const std::vector<Vec3> tri{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const auto t = convex_hull(tri, 2);
  EXPECT_NEAR(volume_polytope(rescale_to_volume(t, kPi)), kPi, 1e-12);
  const auto same = rescale_to_volume(t, volume_polytope(t));
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(same.vertices()[i].x, t.vertices()[i].x, 1e-15);
    EXPECT_NEAR(same.vertices()[i].y, t.vertices()[i].y, 1e-15);
  }
}

TEST(RescaleToVolume, GroupAction) {
  std::mt19937_64 rng(2);
  const auto p = random_polygon(rng, 12);
  const auto twice = rescale_to_volume(rescale_to_volume(p, 0.3), 7.0);
  const auto once = rescale_to_volume(p, 7.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(twice.vertices()[i].x, once.vertices()[i].x, 1e-12 * 7);
    EXPECT_NEAR(twice.vertices()[i].y, once.vertices()[i].y, 1e-12 * 7);
  }
}

TEST(HausdorffDistance, Examples) {
  const auto sq = unit_square();
  EXPECT_EQ(hausdorff_distance(sq, sq), 0.0);
  EXPECT_NEAR(hausdorff_distance(sq, translate(sq, {0.3, 0, 0})), 0.3, 1e-15);
  const double eps = 0.01;
  EXPECT_NEAR(hausdorff_distance(rectangle({-1, -1, 0}, {1, 1, 0}),
                                 rectangle({-1 - eps, -1 - eps, 0}, {1 + eps, 1 + eps, 0})),
              eps * std::sqrt(2.0), 1e-12);
}

TEST(HausdorffDistance, IsAMetric) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_polygon(rng, 8);
    const auto b = random_polygon(rng, 8);
    const auto c = random_polygon(rng, 8);
    EXPECT_NEAR(hausdorff_distance(a, b), hausdorff_distance(b, a), 1e-12);
    EXPECT_LE(hausdorff_distance(a, c), hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-12);
  }
}

TEST(PolygonAsymmetry, MatchesClosedForm) {
  const double half = std::sqrt(kPi) / 2;
  EXPECT_NEAR(fraenkel_asymmetry(rectangle({-half, -half, 0}, {half, half, 0})).value,
              oracle::kSquareAreaPiAsymmetry, 1e-9);
  EXPECT_LT(fraenkel_asymmetry(regular_polygon(256, 1.0, {2, 3, 0})).value, 1e-3);
}

}  // namespace
}  // namespace minkperi
