#pragma once

#include <cmath>
#include <vector>

#include "dcomp/boundary_mask.hpp"
#include "dcomp/camera.hpp"
#include "dcomp/field.hpp"
#include "dcomp/ignns.hpp"
#include "dcomp/ransac_plane.hpp"

namespace dcomp {

struct GroundParams {
  int n_ransac = 1000;
  double t_ransac = 0.2;  // meters
};

/// Thresholds the forward differences of the piecewise constant depth map:
/// a vertical boundary flag where |dbar(x+1,y) - dbar(x,y)| > t, a
/// horizontal one where |dbar(x,y+1) - dbar(x,y)| > t.
inline BoundaryMask detect_boundaries(const ScalarField& dbar, double t) {
  assert(dbar.fully_valid());
  BoundaryMask mask(dbar.width, dbar.height);
  const int w = dbar.width, h = dbar.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = dbar.index(x, y);
      if (x < w - 1 && std::abs(dbar.values[i + 1] - dbar.values[i]) > t)
        mask.a[i] = 1;
      if (y < h - 1 && std::abs(dbar.values[i + w] - dbar.values[i]) > t)
        mask.b[i] = 1;
    }
  }
  return mask;
}

/// Ground labels from RANSAC plane segmentation of the back-projected
/// sparse depth map. A measured point is ground when it lies in or below
/// the detected plane (signed distance along the upward-oriented normal
/// <= t_ransac); every pixel then inherits the label of its nearest
/// measured neighbor.
inline BoolField ground_labels(const ScalarField& depth,
                               const CameraIntrinsics& intrinsics,
                               const NearestNeighborMap& nn,
                               const GroundParams& params,
                               std::uint64_t seed) {
  require(depth.valid_count() >= 3, "ground_labels: need at least 3 points");
  require(nn.width == depth.width && nn.height == depth.height,
          "ground_labels: nearest-neighbor map dimensions differ");

  const int w = depth.width, h = depth.height;
  std::vector<Eigen::Vector3d> points;
  std::vector<std::size_t> point_pixel;
  points.reserve(depth.valid_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!depth.is_valid(x, y)) continue;
      const double z = depth.at(x, y);
      points.emplace_back((x - intrinsics.cx) * z / intrinsics.fx,
                          (y - intrinsics.cy) * z / intrinsics.fy, z);
      point_pixel.push_back(depth.index(x, y));
    }
  }

  Plane plane =
      fit_plane_ransac(points, params.n_ransac, params.t_ransac, seed);
  // Orient the normal away from the ground: +y points downward in the
  // camera frame, so the upward normal has negative y.
  if (plane.normal.y() > 0.0) {
    plane.normal = -plane.normal;
    plane.offset = -plane.offset;
  }

  std::vector<std::uint8_t> point_ground(points.size(), 0);
  BoolField seed_ground(w, h, false);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (plane.signed_distance(points[k]) <= params.t_ransac) {
      point_ground[k] = 1;
      seed_ground.data[point_pixel[k]] = 1;
    }
  }

  BoolField labels(w, h, false);
  for (std::size_t i = 0; i < labels.data.size(); ++i)
    labels.data[i] =
        seed_ground.data[static_cast<std::size_t>(nn.seed_index[i])];
  return labels;
}

/// Clears a boundary flag when both pixels of its forward-difference pair
/// are labeled ground; every other flag is kept.
inline BoundaryMask filter_boundaries(const BoundaryMask& mask,
                                      const BoolField& ground) {
  require(mask.width == ground.width && mask.height == ground.height,
          "filter_boundaries: dimensions differ");
  BoundaryMask out = mask;
  const int w = mask.width, h = mask.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = mask.index(x, y);
      if (out.a[i] && x < w - 1 && ground.data[i] && ground.data[i + 1])
        out.a[i] = 0;
      if (out.b[i] && y < h - 1 && ground.data[i] && ground.data[i + w])
        out.b[i] = 0;
    }
  }
  return out;
}

}  // namespace dcomp
