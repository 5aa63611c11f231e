#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcomp/diff_ops.hpp"
#include "dcomp/diffusion_tensor.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

struct SolverParams {
  double lambda_s = 0.2;
  double lambda_a = 1.6;
  double lambda_d = 0.2;
  double tau_p = 1.0 / std::sqrt(8.0);
  double tau_q = 1.0 / std::sqrt(8.0);
  double tau_u = 1.0 / std::sqrt(12.0);
  double tau_v = 1.0 / std::sqrt(12.0);
  int iterations = 200;
  double weight_exponent = 1.0;
};

/// Data term of the energy: target values g (scaled inverse depth), the
/// per-pixel weight w, and the normalization factor. Pixels with w = 0 do
/// not constrain the solution.
struct DataTerm {
  ScalarField g;
  ScalarField weight;
  double scale = 1.0;
};

/// Inverse-depth data term from a fully valid depth map, normalized so the
/// maximum inverse depth is one. w = depth^exponent.
inline DataTerm prepare_data(const ScalarField& dbar,
                             double weight_exponent = 1.0) {
  require(dbar.fully_valid(), "prepare_data: depth map must be fully valid");
  DataTerm out;
  out.g = ScalarField(dbar.width, dbar.height, 0.0);
  out.weight = ScalarField(dbar.width, dbar.height, 0.0);
  double max_inv = 0.0;
  for (std::size_t i = 0; i < dbar.size(); ++i) {
    require(dbar.values[i] > 0.0, "prepare_data: depth must be positive");
    const double inv = 1.0 / dbar.values[i];
    out.g.values[i] = inv;
    out.weight.values[i] = std::pow(dbar.values[i], weight_exponent);
    if (inv > max_inv) max_inv = inv;
  }
  out.scale = max_inv;
  for (double& v : out.g.values) v /= max_inv;
  return out;
}

/// Euclidean projection onto the ball of radius `radius`; radius <= 0
/// projects onto the origin.
inline std::array<double, 2> prox_p(std::array<double, 2> p, double radius) {
  if (radius <= 0.0) return {0.0, 0.0};
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1]);
  if (norm > radius) {
    const double s = radius / norm;
    p[0] *= s;
    p[1] *= s;
  }
  return p;
}

inline std::array<double, 4> prox_q(std::array<double, 4> q, double radius) {
  if (radius <= 0.0) return {0.0, 0.0, 0.0, 0.0};
  const double norm =
      std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  if (norm > radius) {
    const double s = radius / norm;
    for (double& c : q) c *= s;
  }
  return q;
}

/// Primal and dual iterates. u lives in scaled inverse depth.
struct SolverState {
  ScalarField u;
  VectorField v;
  VectorField p;
  JacobianField q;
  ScalarField u_bar;
  VectorField v_bar;
  double scale = 1.0;
};

struct SolveResult {
  ScalarField depth;  // meters
  std::vector<double> energy_trace;
};

/// Discrete energy: sum over pixels of
///   lambda_d w (u - g)^2 + lambda_s |G(grad u - v)| + lambda_a |grad v|
/// with Euclidean norms (Frobenius on the Jacobian).
inline double energy(const ScalarField& u, const VectorField& v,
                     const ScalarField& g, const ScalarField& weight,
                     const TensorField& tensors, double lambda_s,
                     double lambda_a, double lambda_d) {
  const int w = u.width, h = u.height;
  double total = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = u.index(x, y);
      const double du = u.values[i] - g.values[i];
      total += lambda_d * weight.values[i] * du * du;

      const double gx =
          (x < w - 1) ? u.values[i + 1] - u.values[i] : 0.0;
      const double gy =
          (y < h - 1) ? u.values[i + w] - u.values[i] : 0.0;
      double tx, ty;
      tensors.apply(i, gx - v.x[i], gy - v.y[i], tx, ty);
      total += lambda_s * std::sqrt(tx * tx + ty * ty);

      const double jxx = (x < w - 1) ? v.x[i + 1] - v.x[i] : 0.0;
      const double jxy = (y < h - 1) ? v.x[i + w] - v.x[i] : 0.0;
      const double jyx = (x < w - 1) ? v.y[i + 1] - v.y[i] : 0.0;
      const double jyy = (y < h - 1) ? v.y[i + w] - v.y[i] : 0.0;
      total += lambda_a *
               std::sqrt(jxx * jxx + jxy * jxy + jyx * jyx + jyy * jyy);
    }
  }
  return total;
}

using SolverObserver = std::function<void(int iteration, const SolverState&)>;

namespace detail {

inline void check_finite(const SolverState& s, int iteration) {
  auto bad = [iteration](const char* field) {
    throw std::runtime_error("solver: non-finite value in " +
                             std::string(field) + " at iteration " +
                             std::to_string(iteration));
  };
  for (double v : s.u.values)
    if (!std::isfinite(v)) bad("u");
  for (std::size_t i = 0; i < s.v.size(); ++i)
    if (!std::isfinite(s.v.x[i]) || !std::isfinite(s.v.y[i])) bad("v");
  for (std::size_t i = 0; i < s.p.size(); ++i)
    if (!std::isfinite(s.p.x[i]) || !std::isfinite(s.p.y[i])) bad("p");
  for (std::size_t i = 0; i < s.q.size(); ++i)
    if (!std::isfinite(s.q.xx[i]) || !std::isfinite(s.q.xy[i]) ||
        !std::isfinite(s.q.yx[i]) || !std::isfinite(s.q.yy[i]))
      bad("q");
}

}  // namespace detail

/// Primal-dual minimization of the tensor-weighted second-order energy over
/// scaled inverse depth. Per iteration, in order: dual ascent on p with the
/// tensor and ball projection, dual ascent on q with projection, the
/// closed-form data proximal step on u, the v descent step, and
/// over-relaxation of both primal variables. The returned depth map is
/// 1 / (u * scale) with u clamped below at 1e-6.
inline SolveResult minimize(const DataTerm& data, const TensorField& tensors,
                            const SolverParams& params, bool record_trace = false,
                            const SolverObserver& observer = {},
                            const std::optional<ScalarField>& init = {}) {
  const int w = data.g.width, h = data.g.height;
  require(tensors.width == w && tensors.height == h,
          "minimize: tensor field dimensions differ");
  require(params.iterations >= 1, "minimize: iterations must be >= 1");
  require(params.tau_p > 0 && params.tau_q > 0 && params.tau_u > 0 &&
              params.tau_v > 0,
          "minimize: step sizes must be positive");

  SolverState s;
  s.u = init ? *init : data.g;
  require(s.u.width == w && s.u.height == h,
          "minimize: init dimensions differ");
  s.u_bar = s.u;
  s.v = VectorField(w, h);
  s.v_bar = VectorField(w, h);
  s.p = VectorField(w, h);
  s.q = JacobianField(w, h);
  s.scale = data.scale;

  std::vector<double> trace;
  if (record_trace) trace.reserve(params.iterations);

  VectorField gp(w, h);  // tensor-weighted dual, for the divergence in u
  const std::size_t n = s.u.size();

  for (int iter = 0; iter < params.iterations; ++iter) {
    // Dual ascent: p += tau_p * G(grad u_bar - v_bar), then ball projection.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double gx =
            (x < w - 1) ? s.u_bar.values[i + 1] - s.u_bar.values[i] : 0.0;
        const double gy =
            (y < h - 1) ? s.u_bar.values[i + w] - s.u_bar.values[i] : 0.0;
        double tx, ty;
        tensors.apply(i, gx - s.v_bar.x[i], gy - s.v_bar.y[i], tx, ty);
        const auto p = prox_p({s.p.x[i] + params.tau_p * tx,
                               s.p.y[i] + params.tau_p * ty},
                              params.lambda_s);
        s.p.x[i] = p[0];
        s.p.y[i] = p[1];
      }
    }

    // Dual ascent: q += tau_q * grad v_bar, then ball projection.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double jxx =
            (x < w - 1) ? s.v_bar.x[i + 1] - s.v_bar.x[i] : 0.0;
        const double jxy =
            (y < h - 1) ? s.v_bar.x[i + w] - s.v_bar.x[i] : 0.0;
        const double jyx =
            (x < w - 1) ? s.v_bar.y[i + 1] - s.v_bar.y[i] : 0.0;
        const double jyy =
            (y < h - 1) ? s.v_bar.y[i + w] - s.v_bar.y[i] : 0.0;
        const auto q = prox_q({s.q.xx[i] + params.tau_q * jxx,
                               s.q.xy[i] + params.tau_q * jxy,
                               s.q.yx[i] + params.tau_q * jyx,
                               s.q.yy[i] + params.tau_q * jyy},
                              params.lambda_a);
        s.q.xx[i] = q[0];
        s.q.xy[i] = q[1];
        s.q.yx[i] = q[2];
        s.q.yy[i] = q[3];
      }
    }

    for (std::size_t i = 0; i < n; ++i)
      tensors.apply(i, s.p.x[i], s.p.y[i], gp.x[i], gp.y[i]);

    // Primal descent on u: closed-form resolvent of the data term.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        double div = 0.0;
        if (x < w - 1) div += gp.x[i];
        if (x > 0) div -= gp.x[i - 1];
        if (y < h - 1) div += gp.y[i];
        if (y > 0) div -= gp.y[i - w];
        const double ldw = params.lambda_d * data.weight.values[i];
        const double u_old = s.u.values[i];
        const double u_new = (u_old + params.tau_u * (div + ldw * data.g.values[i])) /
                             (1.0 + params.tau_u * ldw);
        s.u.values[i] = u_new;
        s.u_bar.values[i] = 2.0 * u_new - u_old;
      }
    }

    // Primal descent on v: v += tau_v * (p + div q).
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        double dx = 0.0, dy = 0.0;
        if (x < w - 1) {
          dx += s.q.xx[i];
          dy += s.q.yx[i];
        }
        if (x > 0) {
          dx -= s.q.xx[i - 1];
          dy -= s.q.yx[i - 1];
        }
        if (y < h - 1) {
          dx += s.q.xy[i];
          dy += s.q.yy[i];
        }
        if (y > 0) {
          dx -= s.q.xy[i - w];
          dy -= s.q.yy[i - w];
        }
        const double vx_old = s.v.x[i];
        const double vy_old = s.v.y[i];
        const double vx_new = vx_old + params.tau_v * (s.p.x[i] + dx);
        const double vy_new = vy_old + params.tau_v * (s.p.y[i] + dy);
        s.v.x[i] = vx_new;
        s.v.y[i] = vy_new;
        s.v_bar.x[i] = 2.0 * vx_new - vx_old;
        s.v_bar.y[i] = 2.0 * vy_new - vy_old;
      }
    }

    detail::check_finite(s, iter + 1);
    if (record_trace)
      trace.push_back(energy(s.u, s.v, data.g, data.weight, tensors,
                             params.lambda_s, params.lambda_a,
                             params.lambda_d));
    if (observer) observer(iter + 1, s);
  }

  SolveResult result;
  result.depth = ScalarField(w, h, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    result.depth.values[i] =
        1.0 / (std::max(s.u.values[i], 1e-6) * s.scale);
  result.energy_trace = std::move(trace);
  return result;
}

}  // namespace dcomp
