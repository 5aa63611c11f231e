#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "dcomp/field.hpp"

namespace dcomp {

/// Plane in Hessian form: normal . x = offset, |normal| = 1.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitY();
  double offset = 0.0;

  double signed_distance(const Eigen::Vector3d& p) const {
    return normal.dot(p) - offset;
  }
};

/// Least-squares plane through a subset of points: centroid plus the
/// covariance eigenvector of smallest eigenvalue.
inline Plane fit_plane_least_squares(const std::vector<Eigen::Vector3d>& pts,
                                     const std::vector<int>& subset) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int i : subset) centroid += pts[i];
  centroid /= static_cast<double>(subset.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int i : subset) {
    const Eigen::Vector3d q = pts[i] - centroid;
    cov += q * q.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Plane plane;
  plane.normal = eig.eigenvectors().col(0).normalized();
  plane.offset = plane.normal.dot(centroid);
  return plane;
}

/// Standard 3-point RANSAC maximizing the inlier count within `tol`,
/// followed by a least-squares refit on the winning inliers. Deterministic
/// for a fixed seed. Degenerate (near-collinear) samples are redrawn.
inline Plane fit_plane_ransac(const std::vector<Eigen::Vector3d>& pts,
                              int iterations, double tol,
                              std::uint64_t seed) {
  require(pts.size() >= 3, "ransac: need at least 3 points");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);

  Plane best;
  int best_inliers = -1;
  for (int it = 0; it < iterations; ++it) {
    std::size_t ia = 0, ib = 0, ic = 0;
    Eigen::Vector3d n;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      ia = pick(rng);
      ib = pick(rng);
      ic = pick(rng);
      if (ia == ib || ib == ic || ia == ic) continue;
      n = (pts[ib] - pts[ia]).cross(pts[ic] - pts[ia]);
      const double scale =
          (pts[ib] - pts[ia]).norm() * (pts[ic] - pts[ia]).norm();
      if (scale > 0.0 && n.norm() > 1e-12 * scale) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;

    n.normalize();
    const double offset = n.dot(pts[ia]);
    int inliers = 0;
    for (const auto& p : pts)
      if (std::abs(n.dot(p) - offset) <= tol) ++inliers;
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best.normal = n;
      best.offset = offset;
    }
  }
  require(best_inliers >= 3, "ransac: no non-degenerate sample found");

  std::vector<int> inlier_idx;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::abs(best.signed_distance(pts[i])) <= tol)
      inlier_idx.push_back(static_cast<int>(i));
  if (inlier_idx.size() >= 3) best = fit_plane_least_squares(pts, inlier_idx);
  return best;
}

}  // namespace dcomp
