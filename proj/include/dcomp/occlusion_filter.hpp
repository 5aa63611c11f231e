#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcomp/field.hpp"

namespace dcomp {

/// Lower-semi-circle filter for LIDAR returns that are occluded from the
/// camera viewpoint. The radius shrinks with the center's depth:
/// r = r_occ_coeff / d.
struct OcclusionFilterParams {
  double r_occ_coeff = 256.0;  // pixels * meters
  double t_occ = 2.0;          // meters
};

/// Invalidates every measured pixel q for which some other measured pixel s
/// covers q with its lower semi-circle (rows at or below s) and
/// d(q) - d(s) > t_occ. All centers are drawn from the original point set,
/// so the result is single-pass and independent of iteration order.
/// Surviving values are copied unchanged.
inline ScalarField remove_occluded_background(
    const ScalarField& d, const OcclusionFilterParams& params) {
  require(params.r_occ_coeff > 0.0 && params.t_occ > 0.0,
          "occlusion filter: parameters must be positive");

  const int w = d.width, h = d.height;
  // Valid pixels bucketed per row with ascending x, for range scans.
  std::vector<std::vector<int>> xs_by_row(h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (d.is_valid(x, y)) {
        require(d.at(x, y) > 0.0,
                "occlusion filter: depth must be positive at valid pixels");
        xs_by_row[y].push_back(x);
      }

  std::vector<std::uint8_t> removed(d.size(), 0);
  for (int ys = 0; ys < h; ++ys) {
    for (int xs : xs_by_row[ys]) {
      const double ds = d.at(xs, ys);
      const double r = params.r_occ_coeff / ds;
      const double r2 = r * r;
      const int ymax = std::min(h - 1, ys + static_cast<int>(std::floor(r)));
      for (int y = ys; y <= ymax; ++y) {
        const double dy = y - ys;
        const double half = std::sqrt(std::max(0.0, r2 - dy * dy));
        const int x0 = std::max(0, static_cast<int>(std::ceil(xs - half)));
        const int x1 = std::min(w - 1, static_cast<int>(std::floor(xs + half)));
        const auto& row = xs_by_row[y];
        auto it = std::lower_bound(row.begin(), row.end(), x0);
        for (; it != row.end() && *it <= x1; ++it) {
          const int x = *it;
          if (x == xs && y == ys) continue;
          if (d.at(x, y) - ds > params.t_occ) removed[d.index(x, y)] = 1;
        }
      }
    }
  }

  ScalarField out = d;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (removed[d.index(x, y)]) out.invalidate(x, y);
  return out;
}

}  // namespace dcomp
