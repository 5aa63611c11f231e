#pragma once

#include <cstdint>
#include <optional>

#include "dcomp/boundary.hpp"
#include "dcomp/camera.hpp"
#include "dcomp/diffusion_tensor.hpp"
#include "dcomp/field.hpp"
#include "dcomp/ignns.hpp"
#include "dcomp/occlusion_filter.hpp"
#include "dcomp/solver.hpp"

namespace dcomp {

struct PipelineParams {
  bool apply_occlusion_filter = false;
  OcclusionFilterParams occlusion;
  IgnnsParams ignns;
  double boundary_threshold = 2.0;  // meters
  bool ground_filter = true;
  GroundParams ground;
  std::uint64_t ransac_seed = 1;
  bool use_adt = false;  // image-driven tensor instead of the binary mask
  AdtParams adt;
  SolverParams solver;
  bool record_trace = false;
};

struct PipelineInputs {
  ScalarField image;
  ScalarField sparse_depth;
  std::optional<CameraIntrinsics> intrinsics;  // needed for ground filtering
};

struct PipelineResult {
  ScalarField depth;          // dense, meters
  ScalarField dbar;           // propagated piecewise-constant map
  NearestNeighborMap nn;
  BoundaryMask raw_mask;      // before ground filtering
  BoundaryMask mask;          // as used by the tensor
  std::optional<BoolField> ground;
  std::vector<double> energy_trace;
};

/// Full depth completion: optional occlusion preprocessing, nearest-neighbor
/// propagation, boundary detection with optional ground filtering, tensor
/// construction, then energy minimization.
inline PipelineResult run_pipeline(const PipelineInputs& in,
                                   const PipelineParams& params) {
  require(in.image.same_size(in.sparse_depth),
          "pipeline: image and depth dimensions differ");
  require(in.image.fully_valid(), "pipeline: image must be fully valid");

  PipelineResult out;

  ScalarField depth_in = params.apply_occlusion_filter
                             ? remove_occluded_background(in.sparse_depth,
                                                          params.occlusion)
                             : in.sparse_depth;
  require(depth_in.valid_count() > 0,
          "pipeline: no valid depth measurements after preprocessing");

  IgnnsResult prop = ignns(in.image, depth_in, params.ignns);
  out.dbar = std::move(prop.dbar);
  out.nn = std::move(prop.nn);

  out.raw_mask = detect_boundaries(out.dbar, params.boundary_threshold);
  out.mask = out.raw_mask;
  if (params.ground_filter) {
    require(in.intrinsics.has_value(),
            "pipeline: ground filtering requires camera intrinsics");
    out.ground = ground_labels(depth_in, *in.intrinsics, out.nn,
                               params.ground, params.ransac_seed);
    out.mask = filter_boundaries(out.raw_mask, *out.ground);
  }

  const TensorField tensors = params.use_adt
                                  ? build_adt(in.image, params.adt)
                                  : build_badt(out.mask);

  const DataTerm data =
      prepare_data(out.dbar, params.solver.weight_exponent);
  SolveResult solved =
      minimize(data, tensors, params.solver, params.record_trace);
  out.depth = std::move(solved.depth);
  out.energy_trace = std::move(solved.energy_trace);
  return out;
}

}  // namespace dcomp
