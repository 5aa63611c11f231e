#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "dcomp/camera.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

/// A guidance image with its dense ground-truth depth map.
struct Scene {
  ScalarField image;
  ScalarField depth;
};

struct GroundScene {
  ScalarField image;
  ScalarField depth;
  CameraIntrinsics intrinsics;
  double camera_height = 0.0;  // meters above the ground plane
  int horizon_y = 0;           // rows at or above this see the backdrop
  int box_x0 = 0, box_x1 = 0;  // inclusive pixel bounds of the box face
  int box_y0 = 0, box_y1 = 0;
  double box_depth = 0.0;
};

/// Two fronto-parallel planes split down the middle, near on the left. The
/// image carries a soft intensity ramp across the split instead of a hard
/// edge, so gradient-driven tensors keep some diffusion across it.
inline Scene two_region_scene(int width = 32, int height = 32,
                              double near_m = 5.0, double far_m = 20.0) {
  Scene s;
  s.image = ScalarField(width, height, 0.0);
  s.depth = ScalarField(width, height, 0.0);
  const int split = width / 2;
  const int ramp_start = split - 4;
  const double ramp_len = 7.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = s.image.index(x, y);
      s.depth.values[i] = (x < split) ? near_m : far_m;
      const double t =
          std::clamp((x - ramp_start) / ramp_len, 0.0, 1.0);
      s.image.values[i] = 0.5 + 0.2 * t;
    }
  }
  return s;
}

/// A flat ground plane receding from the camera, a box standing on it, and
/// a distant backdrop above the horizon. The ground depth is a pinhole
/// projection of the plane y = camera_height, so equal pixel steps down the
/// image correspond to shrinking depth jumps.
inline GroundScene ground_ramp_scene() {
  GroundScene s;
  const int w = 48, h = 48;
  s.intrinsics = {40.0, 40.0, 24.0, 10.0};
  s.camera_height = 1.5;
  s.horizon_y = 10;
  s.box_x0 = 28;
  s.box_x1 = 40;
  s.box_y0 = 20;
  s.box_y1 = 40;
  s.box_depth = 2.0;
  const double backdrop = 80.0;

  s.image = ScalarField(w, h, 0.8);
  s.depth = ScalarField(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = s.depth.index(x, y);
      double d;
      if (y <= s.horizon_y) {
        d = backdrop;
      } else {
        d = s.intrinsics.fy * s.camera_height / (y - s.intrinsics.cy);
      }
      const bool in_box = x >= s.box_x0 && x <= s.box_x1 && y >= s.box_y0 &&
                          y <= s.box_y1;
      if (in_box && s.box_depth < d) {
        d = s.box_depth;
        s.image.values[i] = 0.2;
      }
      s.depth.values[i] = d;
    }
  }
  return s;
}

/// A shaded background ramp with two boxes at distinct depths, overlaid
/// with low-amplitude texture and noise. Suited to sparse-sampling
/// experiments where the guidance image has to carry the structure.
inline Scene textured_scene(int width = 64, int height = 48,
                            std::uint64_t seed = 7) {
  Scene s;
  s.image = ScalarField(width, height, 0.0);
  s.depth = ScalarField(width, height, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.02, 0.02);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = s.image.index(x, y);
      const double fx = static_cast<double>(x) / (width - 1);
      double d = 10.0 + 20.0 * fx;
      double base = 0.45 + 0.25 * fx;
      if (x >= 8 && x <= 22 && y >= 12 && y <= 30) {
        d = 5.0;
        base = 0.85;
      } else if (x >= 38 && x <= 56 && y >= 20 && y <= 44) {
        d = 12.0;
        base = 0.15;
      }
      const double texture = 0.05 * std::sin(0.7 * x) * std::cos(0.9 * y);
      s.depth.values[i] = d;
      s.image.values[i] =
          std::clamp(base + texture + noise(rng), 0.0, 1.0);
    }
  }
  return s;
}

/// Keeps every pixel whose coordinates are both multiples of `step`.
inline ScalarField sample_grid(const ScalarField& dense, int step) {
  require(step >= 1, "sample_grid: step must be >= 1");
  ScalarField out = ScalarField::all_invalid(dense.width, dense.height);
  for (int y = 0; y < dense.height; y += step)
    for (int x = 0; x < dense.width; x += step) {
      const std::size_t i = dense.index(x, y);
      if (dense.is_valid(i)) out.set(i, dense.values[i]);
    }
  return out;
}

/// Keeps a fixed fraction of the valid pixels, chosen by shuffling with the
/// given seed, so the sample count is exact and reproducible.
inline ScalarField sample_random(const ScalarField& dense, double fraction,
                                 std::uint64_t seed) {
  require(fraction > 0.0 && fraction <= 1.0,
          "sample_random: fraction must be in (0,1]");
  std::vector<std::size_t> valid;
  valid.reserve(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense.is_valid(i)) valid.push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(valid.begin(), valid.end(), rng);
  const std::size_t keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(valid.size() * fraction)));
  ScalarField out = ScalarField::all_invalid(dense.width, dense.height);
  for (std::size_t k = 0; k < keep && k < valid.size(); ++k)
    out.set(valid[k], dense.values[valid[k]]);
  return out;
}

}  // namespace dcomp
