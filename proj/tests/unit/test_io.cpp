#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "dcomp/io.hpp"
#include "dcomp/pointcloud.hpp"

using dcomp::BoundaryMask;
using dcomp::CameraIntrinsics;
using dcomp::PointCloud;
using dcomp::ScalarField;

namespace {

std::string tmp_path(const std::string& name) {
  const auto dir = std::filesystem::path("io_test_tmp");
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("eight-bit grayscale images load normalized to unit range") {
  ScalarField img(5, 3);
  for (std::size_t i = 0; i < img.size(); ++i)
    img.values[i] = static_cast<double>(i) / (img.size() - 1);
  const std::string path = tmp_path("gray8.png");
  dcomp::save_gray(path, img);
  const ScalarField back = dcomp::load_image(path);
  REQUIRE(back.width == 5);
  REQUIRE(back.height == 3);
  for (std::size_t i = 0; i < img.size(); ++i)
    REQUIRE(back.values[i] ==
            Catch::Approx(img.values[i]).margin(1.0 / 255.0));
}

TEST_CASE("depth png round trip is exact on quarter-millimeter steps") {
  ScalarField depth = ScalarField::all_invalid(6, 4);
  depth.set(0, 0, 5.0);
  depth.set(3, 1, 19.25);
  depth.set(5, 3, 0.00390625);  // raw value 1, the smallest encodable
  const std::string path = tmp_path("depth16.png");
  dcomp::save_depth(path, depth);
  const ScalarField back = dcomp::load_depth(path);
  REQUIRE(back.valid_count() == 3);
  REQUIRE(back.at(0, 0) == 5.0);
  REQUIRE(back.at(3, 1) == 19.25);
  REQUIRE(back.at(5, 3) == 0.00390625);
  REQUIRE_FALSE(back.is_valid(1, 1));
}

TEST_CASE("depth png loading rejects eight-bit files") {
  const ScalarField img(4, 4, 0.5);
  const std::string path = tmp_path("gray_for_depth.png");
  dcomp::save_gray(path, img);
  REQUIRE_THROWS_WITH(dcomp::load_depth(path),
                      Catch::Matchers::ContainsSubstring("16-bit"));
}

TEST_CASE("boundary mask png round trip preserves all four states") {
  BoundaryMask mask(4, 2);
  mask.a[mask.index(1, 0)] = 1;
  mask.b[mask.index(2, 0)] = 1;
  mask.a[mask.index(3, 1)] = 1;
  mask.b[mask.index(3, 1)] = 1;
  const std::string path = tmp_path("mask.png");
  dcomp::save_boundary_mask(path, mask);
  const BoundaryMask back = dcomp::load_boundary_mask(path);
  REQUIRE(back.a == mask.a);
  REQUIRE(back.b == mask.b);
}

TEST_CASE("unrecognized mask colors are reported with coordinates") {
  std::vector<std::uint8_t> rgb(2 * 2 * 3, 255);
  rgb[3 * 3 + 0] = 7;  // pixel (1,1) off-palette
  rgb[3 * 3 + 1] = 7;
  rgb[3 * 3 + 2] = 7;
  const std::string path = tmp_path("bad_mask.png");
  dcomp::detail::write_png(path, 2, 2, 8, PNG_COLOR_TYPE_RGB, rgb);
  REQUIRE_THROWS_WITH(dcomp::load_boundary_mask(path),
                      Catch::Matchers::ContainsSubstring("(1,1)"));
}

TEST_CASE("color images collapse to luma on load") {
  std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0,
                                   0,   0, 255, 255, 255, 255};
  const std::string path = tmp_path("rgb.png");
  dcomp::detail::write_png(path, 4, 1, 8, PNG_COLOR_TYPE_RGB, rgb);
  const ScalarField img = dcomp::load_image(path);
  REQUIRE(img.at(0, 0) == Catch::Approx(0.299).margin(1e-9));
  REQUIRE(img.at(1, 0) == Catch::Approx(0.587).margin(1e-9));
  REQUIRE(img.at(2, 0) == Catch::Approx(0.114).margin(1e-9));
  REQUIRE(img.at(3, 0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("seed index sidecars round trip including negatives") {
  const std::vector<std::int32_t> seeds = {0, 7, -1, 1 << 20, 65535};
  const std::string path = tmp_path("seeds.bin");
  dcomp::write_seed_indices(path, seeds);
  REQUIRE(dcomp::read_seed_indices(path, seeds.size()) == seeds);
  REQUIRE_THROWS_WITH(dcomp::read_seed_indices(path, seeds.size() + 1),
                      Catch::Matchers::ContainsSubstring("too short"));
}

TEST_CASE("intrinsics files parse four values and reject garbage") {
  const std::string path = tmp_path("intrinsics.txt");
  {
    std::ofstream out(path);
    out << "721.5377 721.5377 609.5593 172.854\n";
  }
  const CameraIntrinsics k = dcomp::load_intrinsics(path);
  REQUIRE(k.fx == Catch::Approx(721.5377));
  REQUIRE(k.cy == Catch::Approx(172.854));

  const std::string bad = tmp_path("intrinsics_bad.txt");
  {
    std::ofstream out(bad);
    out << "only two 3.0\n";
  }
  REQUIRE_THROWS_AS(dcomp::load_intrinsics(bad), std::runtime_error);
}

TEST_CASE("missing files surface the offending path") {
  REQUIRE_THROWS_WITH(dcomp::load_image("does_not_exist_417.png"),
                      Catch::Matchers::ContainsSubstring("does_not_exist_417"));
}

TEST_CASE("point clouds survive an ascii ply round trip") {
  std::mt19937_64 rng(219);
  std::uniform_real_distribution<double> coord(-80.0, 80.0);
  std::uniform_real_distribution<double> gray(0.0, 1.0);
  PointCloud cloud;
  for (int k = 0; k < 1000; ++k) {
    cloud.points.push_back({coord(rng), coord(rng), std::abs(coord(rng)) + 1});
    cloud.gray.push_back(gray(rng));
  }
  const std::string path = tmp_path("cloud.ply");
  dcomp::write_ply(cloud, path);
  const PointCloud back = dcomp::read_ply(path);
  REQUIRE(back.size() == cloud.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst,
                       std::abs(back.points[i][c] - cloud.points[i][c]));
  REQUIRE(worst <= 1e-5);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    REQUIRE(std::abs(back.gray[i] - cloud.gray[i]) <= 0.5 / 255.0 + 1e-9);
}

TEST_CASE("an empty cloud writes a parseable ply") {
  const std::string path = tmp_path("empty.ply");
  dcomp::write_ply(PointCloud{}, path);
  const PointCloud back = dcomp::read_ply(path);
  REQUIRE(back.size() == 0);
}

TEST_CASE("backprojection follows the pinhole rays") {
  const CameraIntrinsics k{100.0, 100.0, 50.0, 40.0};
  ScalarField depth = ScalarField::all_invalid(200, 100);
  depth.set(50, 40, 5.0);    // principal point
  depth.set(150, 40, 2.0);   // one focal length to the right
  const PointCloud cloud = dcomp::backproject(depth, k);
  REQUIRE(cloud.size() == 2);
  REQUIRE(cloud.points[0][0] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(cloud.points[0][1] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(cloud.points[0][2] == 5.0);
  REQUIRE(cloud.points[1][0] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(cloud.points[1][2] == 2.0);
}

TEST_CASE("backprojection and reprojection cancel") {
  const CameraIntrinsics k{240.0, 260.0, 31.5, 23.5};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> depth_dist(0.5, 60.0);
  ScalarField depth = ScalarField::all_invalid(64, 48);
  std::uniform_int_distribution<int> cx(0, 63), cy(0, 47);
  for (int n = 0; n < 50; ++n) depth.set(cx(rng), cy(rng), depth_dist(rng));

  const PointCloud cloud = dcomp::backproject(depth, k);
  std::size_t idx = 0;
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      if (!depth.is_valid(x, y)) continue;
      const auto& p = cloud.points[idx++];
      REQUIRE(p[0] / p[2] * k.fx + k.cx == Catch::Approx(x).margin(1e-9));
      REQUIRE(p[1] / p[2] * k.fy + k.cy == Catch::Approx(y).margin(1e-9));
    }
  REQUIRE(idx == cloud.size());
}
