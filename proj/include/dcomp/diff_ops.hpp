#pragma once

#include "dcomp/field.hpp"

namespace dcomp {

/// Forward differences with Neumann boundary (zero derivative on the last
/// column/row). This is the discrete gradient used by the energy; its exact
/// negative adjoint is divergence() below.
inline VectorField forward_gradient(const ScalarField& f) {
  assert(f.fully_valid());
  VectorField g(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const std::size_t i = f.index(x, y);
      g.x[i] = (x < f.width - 1) ? f.values[i + 1] - f.values[i] : 0.0;
      g.y[i] = (y < f.height - 1) ? f.values[i + f.width] - f.values[i] : 0.0;
    }
  }
  return g;
}

/// Backward-difference divergence, the exact negative adjoint of
/// forward_gradient: <grad f, p> = -<f, div p> for all f, p.
inline ScalarField divergence(const VectorField& p) {
  ScalarField d(p.width, p.height, 0.0);
  const int w = p.width, h = p.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = p.index(x, y);
      double v = 0.0;
      if (x < w - 1) v += p.x[i];
      if (x > 0) v -= p.x[i - 1];
      if (y < h - 1) v += p.y[i];
      if (y > 0) v -= p.y[i - w];
      d.values[i] = v;
    }
  }
  return d;
}

/// Channel-wise forward gradient of a 2-vector field.
inline JacobianField forward_jacobian(const VectorField& v) {
  JacobianField j(v.width, v.height);
  const int w = v.width, h = v.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = v.index(x, y);
      j.xx[i] = (x < w - 1) ? v.x[i + 1] - v.x[i] : 0.0;
      j.xy[i] = (y < h - 1) ? v.x[i + w] - v.x[i] : 0.0;
      j.yx[i] = (x < w - 1) ? v.y[i + 1] - v.y[i] : 0.0;
      j.yy[i] = (y < h - 1) ? v.y[i + w] - v.y[i] : 0.0;
    }
  }
  return j;
}

/// Row-wise divergence of a Jacobian field: the negative adjoint of
/// forward_jacobian, returning one 2-vector per pixel.
inline VectorField divergence(const JacobianField& q) {
  VectorField d(q.width, q.height);
  const int w = q.width, h = q.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      double dx = 0.0, dy = 0.0;
      if (x < w - 1) {
        dx += q.xx[i];
        dy += q.yx[i];
      }
      if (x > 0) {
        dx -= q.xx[i - 1];
        dy -= q.yx[i - 1];
      }
      if (y < h - 1) {
        dx += q.xy[i];
        dy += q.yy[i];
      }
      if (y > 0) {
        dx -= q.xy[i - w];
        dy -= q.yy[i - w];
      }
      d.x[i] = dx;
      d.y[i] = dy;
    }
  }
  return d;
}

/// Central differences on interior pixels, one-sided at borders. Used for
/// the image-driven costs (path cost accumulation and the continuous
/// diffusion tensor), not for the energy discretization.
inline VectorField image_gradient(const ScalarField& img) {
  assert(img.fully_valid());
  VectorField g(img.width, img.height);
  const int w = img.width, h = img.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = img.index(x, y);
      if (w == 1)
        g.x[i] = 0.0;
      else if (x == 0)
        g.x[i] = img.values[i + 1] - img.values[i];
      else if (x == w - 1)
        g.x[i] = img.values[i] - img.values[i - 1];
      else
        g.x[i] = 0.5 * (img.values[i + 1] - img.values[i - 1]);

      if (h == 1)
        g.y[i] = 0.0;
      else if (y == 0)
        g.y[i] = img.values[i + w] - img.values[i];
      else if (y == h - 1)
        g.y[i] = img.values[i] - img.values[i - w];
      else
        g.y[i] = 0.5 * (img.values[i + w] - img.values[i - w]);
    }
  }
  return g;
}

inline double dot(const ScalarField& a, const ScalarField& b) {
  assert(a.same_size(b));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

inline double dot(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.x[i] * b.x[i] + a.y[i] * b.y[i];
  return s;
}

inline double dot(const JacobianField& a, const JacobianField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.xx[i] * b.xx[i] + a.xy[i] * b.xy[i] + a.yx[i] * b.yx[i] +
         a.yy[i] * b.yy[i];
  return s;
}

inline double norm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const VectorField& a) { return std::sqrt(dot(a, a)); }

}  // namespace dcomp
