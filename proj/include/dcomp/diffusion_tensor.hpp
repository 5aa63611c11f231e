#pragma once

#include <cmath>

#include "dcomp/boundary_mask.hpp"
#include "dcomp/diff_ops.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

/// Per-pixel tensor case. The four binary cases admit branch-cheap
/// application; Generic is the continuous image-driven tensor.
enum class TensorCase : std::uint8_t {
  Identity = 0,
  KillX = 1,  // vertical occlusion boundary: annihilate the x-derivative
  KillY = 2,  // horizontal occlusion boundary: annihilate the y-derivative
  Zero = 3,
  Generic = 4,
};

/// Per-pixel symmetric 2x2 diffusion tensors stored as (xx, xy, yy) plus a
/// case tag. Binary fields carry only 0/1 entries with xy = 0.
struct TensorField {
  int width = 0;
  int height = 0;
  std::vector<double> xx;
  std::vector<double> xy;
  std::vector<double> yy;
  std::vector<TensorCase> tag;

  TensorField() = default;

  TensorField(int w, int h)
      : width(w),
        height(h),
        xx(static_cast<std::size_t>(w) * h, 1.0),
        xy(static_cast<std::size_t>(w) * h, 0.0),
        yy(static_cast<std::size_t>(w) * h, 1.0),
        tag(static_cast<std::size_t>(w) * h, TensorCase::Identity) {}

  std::size_t size() const { return xx.size(); }

  /// Tensor-vector product at pixel i.
  void apply(std::size_t i, double vx, double vy, double& ox,
             double& oy) const {
    switch (tag[i]) {
      case TensorCase::Identity:
        ox = vx;
        oy = vy;
        return;
      case TensorCase::KillX:
        ox = 0.0;
        oy = vy;
        return;
      case TensorCase::KillY:
        ox = vx;
        oy = 0.0;
        return;
      case TensorCase::Zero:
        ox = 0.0;
        oy = 0.0;
        return;
      case TensorCase::Generic:
        ox = xx[i] * vx + xy[i] * vy;
        oy = xy[i] * vx + yy[i] * vy;
        return;
    }
    ox = oy = 0.0;
  }
};

/// Binary tensor from the boundary mask: identity off boundaries,
/// diag(0,1) on vertical boundaries, diag(1,0) on horizontal ones, and the
/// zero matrix where both meet.
inline TensorField build_badt(const BoundaryMask& mask) {
  TensorField t(mask.width, mask.height);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool a = mask.a[i] != 0;
    const bool b = mask.b[i] != 0;
    if (a && b) {
      t.tag[i] = TensorCase::Zero;
      t.xx[i] = t.yy[i] = 0.0;
    } else if (a) {
      t.tag[i] = TensorCase::KillX;
      t.xx[i] = 0.0;
    } else if (b) {
      t.tag[i] = TensorCase::KillY;
      t.yy[i] = 0.0;
    }
  }
  return t;
}

/// Magnitude/sharpness parameters of the continuous tensor.
struct AdtParams {
  double a = 10.0;
  double b = 0.5;
};

/// Continuous tensor for one image-gradient sample:
///   exp(-a*|g|^b) n n^T + n_perp n_perp^T,  n = g/|g|.
/// Zero gradient maps to the identity (the |g| -> 0 limit).
inline void adt_tensor(double gx, double gy, const AdtParams& params,
                       double& xx, double& xy, double& yy) {
  const double mag = std::sqrt(gx * gx + gy * gy);
  if (mag == 0.0) {
    xx = 1.0;
    xy = 0.0;
    yy = 1.0;
    return;
  }
  const double nx = gx / mag;
  const double ny = gy / mag;
  const double s = std::exp(-params.a * std::pow(mag, params.b));
  // n_perp = (-ny, nx); the perpendicular part is quadratic in n_perp so
  // the sign choice cannot matter.
  xx = s * nx * nx + ny * ny;
  xy = s * nx * ny - ny * nx;
  yy = s * ny * ny + nx * nx;
}

/// Continuous image-driven tensor field (the comparison baseline).
inline TensorField build_adt(const ScalarField& image,
                             const AdtParams& params) {
  const VectorField g = image_gradient(image);
  TensorField t(image.width, image.height);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.tag[i] = TensorCase::Generic;
    adt_tensor(g.x[i], g.y[i], params, t.xx[i], t.xy[i], t.yy[i]);
  }
  return t;
}

/// G p applied pointwise over a whole field.
inline VectorField apply_tensor(const TensorField& t, const VectorField& p) {
  VectorField out(p.width, p.height);
  for (std::size_t i = 0; i < p.size(); ++i)
    t.apply(i, p.x[i], p.y[i], out.x[i], out.y[i]);
  return out;
}

}  // namespace dcomp
