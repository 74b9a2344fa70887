#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <unistd.h>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/io.hpp"

namespace minkperi {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / ("minkperi_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

TEST(Pgm, PlanarRoundTrip) {
  const auto disk = rasterize_ball(2, {0.3, -0.1, 0}, 0.7, 0.013);
  std::stringstream buf;
  write_pgm(buf, disk);
  EXPECT_EQ(read_pgm(buf), disk);
}

TEST(Pgm, VolumeRoundTrip) {
  const auto ball = rasterize_ball(3, {0, 0, 0}, 0.5, 0.1);
  std::stringstream buf;
  write_pgm(buf, ball);
  EXPECT_EQ(read_pgm(buf), ball);
}

TEST(Pgm, FloatRoundTrip) {
  const auto disk = rasterize_ball(2, {0, 0, 0}, 0.5, 0.05);
  const auto field = distance_transform(disk);
  ScalarField f{field.geometry, field.values};
  std::stringstream buf;
  write_pgm_float32(buf, f);
  const auto back = read_pgm_float32(buf);
  EXPECT_EQ(back.geometry, f.geometry);
  ASSERT_EQ(back.values.size(), f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    EXPECT_EQ(back.values[i], static_cast<double>(static_cast<float>(f.values[i])));
  }
}

TEST(Pgm, MalformedIsParseError) {
  std::stringstream bad("P2\n3 3\n255\n");
  EXPECT_THROW(read_pgm(bad), ParseError);
  std::stringstream truncated("P5\n# minkperi h=0.1 origin=0 0\n4 4\n255\nab");
  EXPECT_THROW(read_pgm(truncated), ParseError);
}

TEST(PolytopeJson, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng), 0});
  const auto hull = convex_hull(pts, 2);
  EXPECT_EQ(polytope_from_json(polytope_to_json(hull)), hull);
}

TEST(PolytopeJson, ClockwiseIsReversed) {
  const auto p = polytope_from_json(R"({"n": 2, "vertices": [[0,0],[0,1],[1,1],[1,0]]})");
  EXPECT_DOUBLE_EQ(volume_polytope(p), 1.0);
}

TEST(PolytopeJson, Rejects) {
  EXPECT_THROW(polytope_from_json("{"), ParseError);
  EXPECT_THROW(polytope_from_json(R"({"n": 2})"), ParseError);
  EXPECT_THROW(polytope_from_json(R"({"n": 2, "vertices": [[0,0],[1,0],[0.5,0.5],[1,1],[0,1]]})"),
               Error);
}

TEST(ReadShape, DetectsFormat) {
  const auto dir = temp_dir();
  write_text_file(dir / "sq.json", polytope_to_json(rectangle({0, 0, 0}, {1, 1, 0})));
  {
    std::ofstream f(dir / "disk.pgm", std::ios::binary);
    write_pgm(f, rasterize_ball(2, {0, 0, 0}, 0.5, 0.05));
  }
  EXPECT_TRUE(std::holds_alternative<ConvexPolytope>(read_shape(dir / "sq.json")));
  EXPECT_TRUE(std::holds_alternative<GridSet>(read_shape(dir / "disk.pgm")));
  write_text_file(dir / "junk.txt", "hello");
  EXPECT_THROW(read_shape(dir / "junk.txt"), ParseError);
  fs::remove_all(dir);
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310, 3.141592653589793}) {
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
}

}  // namespace
}  // namespace minkperi
