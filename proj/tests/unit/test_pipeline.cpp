#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dcomp/eval.hpp"
#include "dcomp/pipeline.hpp"
#include "dcomp/synthetic.hpp"

using dcomp::PipelineInputs;
using dcomp::PipelineParams;
using dcomp::PipelineResult;
using dcomp::ScalarField;

namespace {

// Seed columns 14 and 17 flank the depth split of a width-32 scene, so the
// nearest-seed map changes depth exactly where the scene does.
PipelineInputs two_plane_inputs(ScalarField* gt_out) {
  const dcomp::Scene scene = dcomp::two_region_scene();
  PipelineInputs in;
  in.image = scene.image;
  in.sparse_depth = ScalarField::all_invalid(32, 32);
  for (int y = 2; y < 32; y += 3)
    for (int x = 2; x < 32; x += 3)
      in.sparse_depth.set(x, y, scene.depth.at(x, y));
  if (gt_out) *gt_out = scene.depth;
  return in;
}

int flag_count(const dcomp::BoundaryMask& mask) {
  int n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    n += (mask.a[i] != 0) + (mask.b[i] != 0);
  return n;
}

}  // namespace

TEST_CASE("sparse samples of a two-plane scene rebuild both planes") {
  ScalarField gt;
  PipelineInputs in = two_plane_inputs(&gt);
  PipelineParams params;
  params.ground_filter = false;
  params.solver.iterations = 300;

  const PipelineResult result = dcomp::run_pipeline(in, params);

  // The propagated map puts the jump where the planes meet, which raises a
  // wall there and lets each side settle onto its own constant.
  for (int y = 0; y < 32; ++y) REQUIRE(result.mask.a[result.mask.index(15, y)]);
  REQUIRE(dcomp::mae_mm(result.depth, gt) < 10.0);
}

TEST_CASE("ground filtering requires camera intrinsics") {
  PipelineInputs in = two_plane_inputs(nullptr);
  PipelineParams params;  // ground_filter defaults to on
  REQUIRE_THROWS_WITH(dcomp::run_pipeline(in, params),
                      Catch::Matchers::ContainsSubstring("intrinsics"));
  params.ground_filter = false;
  REQUIRE_NOTHROW(dcomp::run_pipeline(in, params));
}

TEST_CASE("the image-driven tensor variant produces finite positive depth") {
  PipelineInputs in = two_plane_inputs(nullptr);
  PipelineParams params;
  params.ground_filter = false;
  params.use_adt = true;
  params.solver.iterations = 100;
  const PipelineResult result = dcomp::run_pipeline(in, params);
  REQUIRE(result.depth.fully_valid());
  for (double d : result.depth.values) {
    REQUIRE(std::isfinite(d));
    REQUIRE(d > 0.0);
  }
}

TEST_CASE("repeated runs produce identical output") {
  const dcomp::GroundScene scene = dcomp::ground_ramp_scene();
  PipelineInputs in;
  in.image = scene.image;
  in.sparse_depth = dcomp::sample_grid(scene.depth, 4);
  in.intrinsics = scene.intrinsics;
  PipelineParams params;
  params.solver.iterations = 60;

  const PipelineResult first = dcomp::run_pipeline(in, params);
  const PipelineResult second = dcomp::run_pipeline(in, params);
  REQUIRE(first.depth.values == second.depth.values);
  REQUIRE(first.mask.a == second.mask.a);
  REQUIRE(first.mask.b == second.mask.b);
  REQUIRE(first.ground.has_value());
  REQUIRE(first.ground->data == second.ground->data);
}

TEST_CASE("ground filtering drops ramp steps but keeps the box outline") {
  const dcomp::GroundScene scene = dcomp::ground_ramp_scene();
  PipelineInputs in;
  in.image = scene.image;
  in.sparse_depth = dcomp::sample_grid(scene.depth, 4);
  in.intrinsics = scene.intrinsics;
  PipelineParams params;
  params.solver.iterations = 40;

  const PipelineResult result = dcomp::run_pipeline(in, params);

  REQUIRE(flag_count(result.mask) < flag_count(result.raw_mask));

  // The receding ground crosses the jump threshold between nearby seed rows;
  // those flags sit between two ground-owned pixels and must go. Column 10
  // is far from the box, rows 12..16 cover the first all-ground band edge.
  bool raw_ramp_flag = false;
  for (int y = 12; y <= 16; ++y) {
    raw_ramp_flag = raw_ramp_flag || result.raw_mask.b[result.raw_mask.index(10, y)];
    REQUIRE_FALSE(result.mask.b[result.mask.index(10, y)]);
  }
  REQUIRE(raw_ramp_flag);

  // The box stands off the plane, so its top edge separates ground from
  // non-ground and survives the filter.
  bool box_top_flag = false;
  for (int y = 16; y <= 22; ++y)
    for (int x = scene.box_x0 + 1; x < scene.box_x1; ++x)
      box_top_flag = box_top_flag || result.mask.b[result.mask.index(x, y)];
  REQUIRE(box_top_flag);
}

TEST_CASE("the occlusion switch feeds the filtered points to propagation") {
  ScalarField image(16, 16, 0.5);
  ScalarField sparse = ScalarField::all_invalid(16, 16);
  sparse.set(8, 8, 1.0);
  sparse.set(8, 9, 4.0);  // directly below and far behind: shadowed
  PipelineInputs in{image, sparse, std::nullopt};

  PipelineParams params;
  params.ground_filter = false;
  params.solver.iterations = 10;

  PipelineResult kept = dcomp::run_pipeline(in, params);
  bool has_far = false;
  for (double d : kept.dbar.values) has_far = has_far || d == 4.0;
  REQUIRE(has_far);

  params.apply_occlusion_filter = true;
  PipelineResult filtered = dcomp::run_pipeline(in, params);
  for (double d : filtered.dbar.values) REQUIRE(d == 1.0);
}

TEST_CASE("the energy trace is recorded only on request") {
  PipelineInputs in = two_plane_inputs(nullptr);
  PipelineParams params;
  params.ground_filter = false;
  params.solver.iterations = 25;

  REQUIRE(dcomp::run_pipeline(in, params).energy_trace.empty());

  params.record_trace = true;
  const PipelineResult traced = dcomp::run_pipeline(in, params);
  REQUIRE(traced.energy_trace.size() == 25);
}
