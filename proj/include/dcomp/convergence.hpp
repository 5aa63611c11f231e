#pragma once

#include <vector>

#include "dcomp/boundary.hpp"
#include "dcomp/diffusion_tensor.hpp"
#include "dcomp/field.hpp"
#include "dcomp/ignns.hpp"
#include "dcomp/solver.hpp"

namespace dcomp {

struct ConvergenceTraces {
  std::vector<double> dense;   // data term on every pixel of the propagated map
  std::vector<double> sparse;  // data term only on the measured pixels
};

/// Runs the energy minimization twice on the same scene and records both
/// energy traces. The dense run constrains every pixel to the propagated
/// depth map; the sparse run constrains only the pixels the sensor actually
/// measured, with zero weight elsewhere. Both runs share the propagated
/// boundaries, the tensor field, and the normalization scale. Each run
/// starts from its own data field, which is all a sparse-only pipeline
/// would have available.
inline ConvergenceTraces convergence_report(const ScalarField& image,
                                            const ScalarField& sparse_depth,
                                            const IgnnsParams& ignns_params,
                                            double boundary_threshold,
                                            const SolverParams& solver_params) {
  const IgnnsResult prop = ignns(image, sparse_depth, ignns_params);
  const BoundaryMask mask = detect_boundaries(prop.dbar, boundary_threshold);
  const TensorField tensors = build_badt(mask);

  const DataTerm dense = prepare_data(prop.dbar, solver_params.weight_exponent);

  DataTerm sparse;
  sparse.scale = dense.scale;
  sparse.g = ScalarField(sparse_depth.width, sparse_depth.height, 0.0);
  sparse.weight = ScalarField(sparse_depth.width, sparse_depth.height, 0.0);
  for (std::size_t i = 0; i < sparse_depth.size(); ++i) {
    if (!sparse_depth.is_valid(i)) continue;
    require(sparse_depth.values[i] > 0.0,
            "convergence_report: measured depth must be positive");
    sparse.g.values[i] = (1.0 / sparse_depth.values[i]) / dense.scale;
    sparse.weight.values[i] =
        std::pow(sparse_depth.values[i], solver_params.weight_exponent);
  }

  ConvergenceTraces traces;
  traces.dense =
      minimize(dense, tensors, solver_params, true).energy_trace;
  traces.sparse = minimize(sparse, tensors, solver_params, true).energy_trace;
  return traces;
}

}  // namespace dcomp
