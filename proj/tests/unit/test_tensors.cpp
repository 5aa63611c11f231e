#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dcomp/boundary_mask.hpp"
#include "dcomp/diff_ops.hpp"
#include "dcomp/diffusion_tensor.hpp"

using dcomp::AdtParams;
using dcomp::BoundaryMask;
using dcomp::ScalarField;
using dcomp::TensorCase;
using dcomp::TensorField;

namespace {

// Eigenvalues of a symmetric 2x2 matrix (xx, xy; xy, yy).
std::pair<double, double> eigenvalues(double xx, double xy, double yy) {
  const double mean = (xx + yy) / 2.0;
  const double det = xx * yy - xy * xy;
  const double disc = std::sqrt(std::max(0.0, mean * mean - det));
  return {mean - disc, mean + disc};
}

double spectral_distance(double axx, double axy, double ayy, double bxx,
                         double bxy, double byy) {
  const auto [lo, hi] = eigenvalues(axx - bxx, axy - bxy, ayy - byy);
  return std::max(std::abs(lo), std::abs(hi));
}

}  // namespace

TEST_CASE("boundary mask conditions map to the four binary tensors") {
  BoundaryMask mask(2, 2);
  mask.a[mask.index(1, 0)] = 1;                          // horizontal jump
  mask.b[mask.index(0, 1)] = 1;                          // vertical jump
  mask.a[mask.index(1, 1)] = 1;
  mask.b[mask.index(1, 1)] = 1;                          // both
  const TensorField t = dcomp::build_badt(mask);

  const std::size_t none = mask.index(0, 0);
  REQUIRE(t.tag[none] == TensorCase::Identity);
  REQUIRE(t.xx[none] == 1.0);
  REQUIRE(t.xy[none] == 0.0);
  REQUIRE(t.yy[none] == 1.0);

  const std::size_t a_only = mask.index(1, 0);
  REQUIRE(t.tag[a_only] == TensorCase::KillX);
  REQUIRE(t.xx[a_only] == 0.0);
  REQUIRE(t.xy[a_only] == 0.0);
  REQUIRE(t.yy[a_only] == 1.0);

  const std::size_t b_only = mask.index(0, 1);
  REQUIRE(t.tag[b_only] == TensorCase::KillY);
  REQUIRE(t.xx[b_only] == 1.0);
  REQUIRE(t.xy[b_only] == 0.0);
  REQUIRE(t.yy[b_only] == 0.0);

  const std::size_t both = mask.index(1, 1);
  REQUIRE(t.tag[both] == TensorCase::Zero);
  REQUIRE(t.xx[both] == 0.0);
  REQUIRE(t.xy[both] == 0.0);
  REQUIRE(t.yy[both] == 0.0);
}

TEST_CASE("binary tensor application annihilates exactly the flagged axis") {
  BoundaryMask mask(4, 1);
  mask.a[1] = 1;
  mask.b[2] = 1;
  mask.a[3] = 1;
  mask.b[3] = 1;
  const TensorField t = dcomp::build_badt(mask);

  double ox, oy;
  t.apply(0, 3.5, -2.0, ox, oy);
  REQUIRE(ox == 3.5);
  REQUIRE(oy == -2.0);
  t.apply(1, 3.5, -2.0, ox, oy);
  REQUIRE(ox == 0.0);
  REQUIRE(oy == -2.0);
  t.apply(2, 3.5, -2.0, ox, oy);
  REQUIRE(ox == 3.5);
  REQUIRE(oy == 0.0);
  t.apply(3, 3.5, -2.0, ox, oy);
  REQUIRE(ox == 0.0);
  REQUIRE(oy == 0.0);
}

TEST_CASE("gradient tensor of a constant image is the identity") {
  const ScalarField img(5, 5, 0.3);
  const TensorField t = dcomp::build_adt(img, AdtParams{});
  for (std::size_t i = 0; i < t.size(); ++i) {
    REQUIRE(t.xx[i] == 1.0);
    REQUIRE(t.xy[i] == 0.0);
    REQUIRE(t.yy[i] == 1.0);
  }
}

TEST_CASE("gradient tensor matches hand evaluation for an axis gradient") {
  double xx, xy, yy;
  dcomp::adt_tensor(0.5, 0.0, AdtParams{10.0, 0.5}, xx, xy, yy);
  const double s = std::exp(-10.0 * std::sqrt(0.5));
  REQUIRE(xx == Catch::Approx(s).margin(1e-15));
  REQUIRE(xy == 0.0);
  REQUIRE(yy == 1.0);
}

TEST_CASE("gradient tensor approaches the tangent projector for huge "
          "gradients") {
  const AdtParams params{10.0, 0.5};
  for (double theta : {0.0, 0.4, 1.1, 2.0, 3.0}) {
    const double gx = 1e8 * std::cos(theta);
    const double gy = 1e8 * std::sin(theta);
    double xx, xy, yy;
    dcomp::adt_tensor(gx, gy, params, xx, xy, yy);
    const double norm = std::hypot(gx, gy);
    const double nx = gx / norm, ny = gy / norm;
    // Tangent projector built from the perpendicular (-ny, nx).
    const double pxx = ny * ny, pxy = -ny * nx, pyy = nx * nx;
    REQUIRE(spectral_distance(xx, xy, yy, pxx, pxy, pyy) <= 1e-6);
  }
}

TEST_CASE("gradient tensor is unchanged by flipping the perpendicular") {
  const AdtParams params{10.0, 0.5};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double gx = dist(rng), gy = dist(rng);
    const double norm = std::hypot(gx, gy);
    if (norm == 0.0) continue;
    const double nx = gx / norm, ny = gy / norm;
    const double s = std::exp(-params.a * std::pow(norm, params.b));

    // Both orientations of the perpendicular, built explicitly.
    for (double sign : {1.0, -1.0}) {
      const double px = sign * -ny, py = sign * nx;
      const double exx = s * nx * nx + px * px;
      const double exy = s * nx * ny + px * py;
      const double eyy = s * ny * ny + py * py;
      double xx, xy, yy;
      dcomp::adt_tensor(gx, gy, params, xx, xy, yy);
      REQUIRE(xx == Catch::Approx(exx).margin(1e-15));
      REQUIRE(xy == Catch::Approx(exy).margin(1e-15));
      REQUIRE(yy == Catch::Approx(eyy).margin(1e-15));
    }
  }
}

TEST_CASE("gradient tensor eigenvalues are the decay weight and one") {
  const AdtParams params{10.0, 0.5};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double gx = dist(rng), gy = dist(rng);
    const double norm = std::hypot(gx, gy);
    double xx, xy, yy;
    dcomp::adt_tensor(gx, gy, params, xx, xy, yy);
    const auto [lo, hi] = eigenvalues(xx, xy, yy);
    const double s = norm == 0.0
                         ? 1.0
                         : std::exp(-params.a * std::pow(norm, params.b));
    REQUIRE(hi == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(lo == Catch::Approx(s).margin(1e-12));
  }
}

TEST_CASE("binary tensors are the limits of the gradient tensor") {
  const AdtParams params{10.0, 0.5};
  double xx, xy, yy;

  dcomp::adt_tensor(1e8, 0.0, params, xx, xy, yy);  // wall normal to x
  REQUIRE(std::abs(xx) <= 1e-6);
  REQUIRE(xy == 0.0);
  REQUIRE(yy == 1.0);

  dcomp::adt_tensor(0.0, 1e8, params, xx, xy, yy);  // wall normal to y
  REQUIRE(xx == 1.0);
  REQUIRE(xy == 0.0);
  REQUIRE(std::abs(yy) <= 1e-6);

  dcomp::adt_tensor(0.0, 0.0, params, xx, xy, yy);
  REQUIRE(xx == 1.0);
  REQUIRE(xy == 0.0);
  REQUIRE(yy == 1.0);
}
