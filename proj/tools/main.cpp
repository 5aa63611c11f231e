// Command-line driver for the depth completion pipeline.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcomp/convergence.hpp"
#include "dcomp/eval.hpp"
#include "dcomp/io.hpp"
#include "dcomp/pipeline.hpp"
#include "dcomp/pointcloud.hpp"
#include "dcomp/synthetic.hpp"

namespace {

struct PipelineFlags {
  dcomp::PipelineParams params;
  bool no_ground_filter = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  auto& p = f.params;
  cmd->add_flag("--preproc", p.apply_occlusion_filter,
                "Drop occluded background points before propagation");
  cmd->add_option("--r-occ", p.occlusion.r_occ_coeff,
                  "Occlusion radius coefficient (pixels x meters)")
      ->capture_default_str();
  cmd->add_option("--t-occ", p.occlusion.t_occ,
                  "Occlusion depth gap threshold in meters")
      ->capture_default_str();
  cmd->add_option("--c", p.ignns.c, "Constant added to each pixel's path cost")
      ->capture_default_str();
  cmd->add_option("--t", p.boundary_threshold,
                  "Depth jump in meters that raises a boundary flag")
      ->capture_default_str();
  cmd->add_flag("--no-ground-filter", f.no_ground_filter,
                "Keep boundary flags inside the detected ground region");
  cmd->add_option("--n-ransac", p.ground.n_ransac,
                  "Plane fitting iterations")
      ->capture_default_str();
  cmd->add_option("--t-ransac", p.ground.t_ransac,
                  "Plane inlier distance in meters")
      ->capture_default_str();
  cmd->add_option("--ransac-seed", p.ransac_seed,
                  "Seed for the plane fitting sampler")
      ->capture_default_str();
  cmd->add_flag("--adt", p.use_adt,
                "Build the tensor from image gradients instead of the "
                "boundary mask");
  cmd->add_option("--adt-a", p.adt.a, "Gradient tensor decay scale")
      ->capture_default_str();
  cmd->add_option("--adt-b", p.adt.b, "Gradient tensor decay exponent")
      ->capture_default_str();
  cmd->add_option("--lambda-s", p.solver.lambda_s,
                  "First-order regularization weight")
      ->capture_default_str();
  cmd->add_option("--lambda-a", p.solver.lambda_a,
                  "Second-order regularization weight")
      ->capture_default_str();
  cmd->add_option("--lambda-d", p.solver.lambda_d, "Data term weight")
      ->capture_default_str();
  cmd->add_option("--tau-p", p.solver.tau_p, "Dual step size for p")
      ->capture_default_str();
  cmd->add_option("--tau-q", p.solver.tau_q, "Dual step size for q")
      ->capture_default_str();
  cmd->add_option("--tau-u", p.solver.tau_u, "Primal step size for u")
      ->capture_default_str();
  cmd->add_option("--tau-v", p.solver.tau_v, "Primal step size for v")
      ->capture_default_str();
  cmd->add_option("--iterations", p.solver.iterations,
                  "Solver iteration count")
      ->capture_default_str();
  cmd->add_option("--weight-exponent", p.solver.weight_exponent,
                  "Data weight is depth raised to this power")
      ->capture_default_str();
}

dcomp::NearestNeighborMap load_seed_map(const std::string& path,
                                        const dcomp::ScalarField& like) {
  dcomp::NearestNeighborMap nn;
  nn.width = like.width;
  nn.height = like.height;
  nn.seed_index = dcomp::read_seed_indices(path, like.size());
  nn.cost.assign(like.size(), 0.0);
  return nn;
}

void write_trace(const std::string& path, const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out << std::setprecision(12);
  for (double e : trace) out << e << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Densifies sparse LIDAR depth maps guided by a grayscale image"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read option defaults from a key=value file");
  // Let --config (and any future app-level flag) appear after the
  // subcommand name too.
  app.fallthrough();

  // ---- preproc ----------------------------------------------------------
  auto* preproc = app.add_subcommand(
      "preproc", "Remove occluded background points from a sparse depth map");
  struct {
    std::string depth, out;
    dcomp::OcclusionFilterParams params;
  } pre;
  preproc->add_option("--depth", pre.depth, "Sparse depth PNG")->required();
  preproc->add_option("--out", pre.out, "Filtered depth PNG")->required();
  preproc->add_option("--r-occ", pre.params.r_occ_coeff,
                      "Occlusion radius coefficient (pixels x meters)")
      ->capture_default_str();
  preproc->add_option("--t-occ", pre.params.t_occ,
                      "Occlusion depth gap threshold in meters")
      ->capture_default_str();
  preproc->callback([&] {
    const dcomp::ScalarField depth = dcomp::load_depth(pre.depth);
    dcomp::save_depth(pre.out,
                      dcomp::remove_occluded_background(depth, pre.params));
  });

  // ---- ignns ------------------------------------------------------------
  auto* prop = app.add_subcommand(
      "ignns", "Propagate sparse depths along image-guided shortest paths");
  struct {
    std::string image, depth, out, seeds;
    dcomp::IgnnsParams params;
  } ig;
  prop->add_option("--image", ig.image, "Guidance image PNG")->required();
  prop->add_option("--depth", ig.depth, "Sparse depth PNG")->required();
  prop->add_option("--out", ig.out, "Propagated depth PNG")->required();
  prop->add_option("--seeds", ig.seeds,
                   "Also write the seed-index map (raw int32, row-major)");
  prop->add_option("--c", ig.params.c,
                   "Constant added to each pixel's path cost")
      ->capture_default_str();
  prop->callback([&] {
    const dcomp::ScalarField image = dcomp::load_image(ig.image);
    const dcomp::ScalarField depth = dcomp::load_depth(ig.depth);
    const dcomp::IgnnsResult r = dcomp::ignns(image, depth, ig.params);
    dcomp::save_depth(ig.out, r.dbar);
    if (!ig.seeds.empty())
      dcomp::write_seed_indices(ig.seeds, r.nn.seed_index);
  });

  // ---- boundaries -------------------------------------------------------
  auto* bnd = app.add_subcommand(
      "boundaries",
      "Detect depth discontinuities, optionally erasing ground-internal ones");
  struct {
    std::string dbar, out, depth, seeds, intrinsics;
    double threshold = 2.0;
    bool no_ground = false;
    dcomp::GroundParams ground;
    std::uint64_t ransac_seed = 1;
  } bo;
  bnd->add_option("--dbar", bo.dbar, "Propagated depth PNG")->required();
  bnd->add_option("--out", bo.out, "Boundary mask PNG")->required();
  bnd->add_option("--t", bo.threshold,
                  "Depth jump in meters that raises a boundary flag")
      ->capture_default_str();
  bnd->add_option("--depth", bo.depth,
                  "Sparse depth PNG (enables ground filtering)");
  bnd->add_option("--seeds", bo.seeds,
                  "Seed-index map matching --dbar (enables ground filtering)");
  bnd->add_option("--intrinsics", bo.intrinsics,
                  "fx fy cx cy text file (enables ground filtering)");
  bnd->add_flag("--no-ground-filter", bo.no_ground,
                "Skip ground filtering even if its inputs are given");
  bnd->add_option("--n-ransac", bo.ground.n_ransac,
                  "Plane fitting iterations")
      ->capture_default_str();
  bnd->add_option("--t-ransac", bo.ground.t_ransac,
                  "Plane inlier distance in meters")
      ->capture_default_str();
  bnd->add_option("--ransac-seed", bo.ransac_seed,
                  "Seed for the plane fitting sampler")
      ->capture_default_str();
  bnd->callback([&] {
    const dcomp::ScalarField dbar = dcomp::load_depth(bo.dbar);
    dcomp::BoundaryMask mask = dcomp::detect_boundaries(dbar, bo.threshold);
    const int given = (!bo.depth.empty()) + (!bo.seeds.empty()) +
                      (!bo.intrinsics.empty());
    if (!bo.no_ground && given > 0) {
      if (given < 3)
        throw std::runtime_error(
            "ground filtering needs --depth, --seeds, and --intrinsics "
            "together (or pass --no-ground-filter)");
      const dcomp::ScalarField sparse = dcomp::load_depth(bo.depth);
      const dcomp::NearestNeighborMap nn = load_seed_map(bo.seeds, dbar);
      const dcomp::BoolField ground = dcomp::ground_labels(
          sparse, dcomp::load_intrinsics(bo.intrinsics), nn, bo.ground,
          bo.ransac_seed);
      mask = dcomp::filter_boundaries(mask, ground);
    }
    dcomp::save_boundary_mask(bo.out, mask);
  });

  // ---- complete ---------------------------------------------------------
  auto* comp = app.add_subcommand(
      "complete", "Run the full pipeline from image + sparse depth to a "
                  "dense depth map");
  struct {
    std::string image, depth, out, intrinsics;
    std::string dbar, seeds_in, boundaries;
    std::string trace, out_dbar, out_mask, out_seeds;
    PipelineFlags flags;
  } co;
  comp->add_option("--image", co.image, "Guidance image PNG")->required();
  comp->add_option("--depth", co.depth, "Sparse depth PNG")->required();
  comp->add_option("--out", co.out, "Dense depth PNG")->required();
  comp->add_option("--intrinsics", co.intrinsics,
                   "fx fy cx cy text file, needed for ground filtering");
  comp->add_option("--dbar", co.dbar,
                   "Reuse a propagated depth PNG instead of running the "
                   "propagation stage");
  comp->add_option("--seeds-in", co.seeds_in,
                   "Seed-index map matching --dbar");
  comp->add_option("--boundaries", co.boundaries,
                   "Reuse a boundary mask PNG instead of detecting");
  comp->add_option("--trace", co.trace,
                   "Write the energy value of every iteration, one per line");
  comp->add_option("--out-dbar", co.out_dbar,
                   "Also write the propagated depth PNG");
  comp->add_option("--out-mask", co.out_mask,
                   "Also write the boundary mask PNG");
  comp->add_option("--out-seeds", co.out_seeds,
                   "Also write the seed-index map");
  add_pipeline_flags(comp, co.flags);
  comp->callback([&] {
    dcomp::PipelineParams params = co.flags.params;
    params.ground_filter = !co.flags.no_ground_filter;
    params.record_trace = !co.trace.empty();

    const dcomp::ScalarField image = dcomp::load_image(co.image);
    const dcomp::ScalarField depth = dcomp::load_depth(co.depth);
    dcomp::require(image.same_size(depth),
                   "complete: image and depth dimensions differ");

    const dcomp::ScalarField depth_in =
        params.apply_occlusion_filter
            ? dcomp::remove_occluded_background(depth, params.occlusion)
            : depth;

    // Propagation stage, or its precomputed result.
    dcomp::ScalarField dbar;
    dcomp::NearestNeighborMap nn;
    bool have_nn = false;
    if (!co.dbar.empty()) {
      dbar = dcomp::load_depth(co.dbar);
      dcomp::require(dbar.same_size(depth),
                     "complete: --dbar dimensions differ from --depth");
      dcomp::require(dbar.fully_valid(),
                     "complete: --dbar must be a dense depth map");
      if (!co.seeds_in.empty()) {
        nn = load_seed_map(co.seeds_in, dbar);
        have_nn = true;
      }
    } else {
      dcomp::IgnnsResult r = dcomp::ignns(image, depth_in, params.ignns);
      dbar = std::move(r.dbar);
      nn = std::move(r.nn);
      have_nn = true;
    }

    // Boundary stage, or its precomputed result. The gradient tensor
    // variant reads the image directly and needs no mask.
    dcomp::BoundaryMask mask;
    bool have_mask = false;
    auto build_mask = [&] {
      if (!co.boundaries.empty()) {
        mask = dcomp::load_boundary_mask(co.boundaries);
        dcomp::require(mask.width == dbar.width && mask.height == dbar.height,
                       "complete: --boundaries dimensions differ");
      } else {
        mask = dcomp::detect_boundaries(dbar, params.boundary_threshold);
        if (params.ground_filter) {
          dcomp::require(!co.intrinsics.empty(),
                         "complete: ground filtering requires --intrinsics "
                         "(or pass --no-ground-filter)");
          dcomp::require(have_nn,
                         "complete: ground filtering with --dbar requires "
                         "--seeds-in");
          const dcomp::BoolField ground = dcomp::ground_labels(
              depth_in, dcomp::load_intrinsics(co.intrinsics), nn,
              params.ground, params.ransac_seed);
          mask = dcomp::filter_boundaries(mask, ground);
        }
      }
      have_mask = true;
    };
    if (!params.use_adt || !co.out_mask.empty()) build_mask();

    const dcomp::TensorField tensors =
        params.use_adt ? dcomp::build_adt(image, params.adt)
                       : dcomp::build_badt(mask);

    const dcomp::DataTerm data =
        dcomp::prepare_data(dbar, params.solver.weight_exponent);
    const dcomp::SolveResult solved =
        dcomp::minimize(data, tensors, params.solver, params.record_trace);

    dcomp::save_depth(co.out, solved.depth);
    if (!co.trace.empty()) write_trace(co.trace, solved.energy_trace);
    if (!co.out_dbar.empty()) dcomp::save_depth(co.out_dbar, dbar);
    if (!co.out_mask.empty() && have_mask)
      dcomp::save_boundary_mask(co.out_mask, mask);
    if (!co.out_seeds.empty()) {
      dcomp::require(have_nn, "complete: no seed map to write");
      dcomp::write_seed_indices(co.out_seeds, nn.seed_index);
    }
  });

  // ---- pointcloud -------------------------------------------------------
  auto* pc = app.add_subcommand(
      "pointcloud", "Back-project a depth map to an ASCII PLY point cloud");
  struct {
    std::string depth, intrinsics, out, image;
  } pl;
  pc->add_option("--depth", pl.depth, "Depth PNG")->required();
  pc->add_option("--intrinsics", pl.intrinsics, "fx fy cx cy text file")
      ->required();
  pc->add_option("--out", pl.out, "Output PLY path")->required();
  pc->add_option("--image", pl.image,
                 "Attach per-point gray intensity from this image");
  pc->callback([&] {
    const dcomp::ScalarField depth = dcomp::load_depth(pl.depth);
    const dcomp::CameraIntrinsics k = dcomp::load_intrinsics(pl.intrinsics);
    if (pl.image.empty()) {
      dcomp::write_ply(dcomp::backproject(depth, k), pl.out);
    } else {
      const dcomp::ScalarField image = dcomp::load_image(pl.image);
      dcomp::write_ply(dcomp::backproject(depth, k, &image), pl.out);
    }
  });

  // ---- eval -------------------------------------------------------------
  auto* ev = app.add_subcommand(
      "eval", "Mean absolute error of a depth map against ground truth");
  struct {
    std::string pred, gt;
  } evo;
  ev->add_option("--pred", evo.pred, "Predicted depth PNG")->required();
  ev->add_option("--gt", evo.gt, "Ground truth depth PNG")->required();
  ev->callback([&] {
    const double mae =
        dcomp::mae_mm(dcomp::load_depth(evo.pred), dcomp::load_depth(evo.gt));
    std::cout << std::fixed << std::setprecision(3) << mae << "\n";
  });

  // ---- sweep ------------------------------------------------------------
  auto* sw = app.add_subcommand(
      "sweep", "Score the pipeline across a range of one parameter");
  struct {
    std::string image, depth, gt, intrinsics, out, param;
    std::vector<double> values;
    PipelineFlags flags;
  } so;
  sw->add_option("--image", so.image, "Guidance image PNG")->required();
  sw->add_option("--depth", so.depth, "Sparse depth PNG")->required();
  sw->add_option("--gt", so.gt, "Ground truth depth PNG")->required();
  sw->add_option("--intrinsics", so.intrinsics, "fx fy cx cy text file");
  sw->add_option("--out", so.out, "Output CSV path")->required();
  sw->add_option("--param", so.param, "Parameter to vary: c or t")
      ->required()
      ->check(CLI::IsMember({"c", "t"}));
  sw->add_option("--values", so.values, "Comma-separated parameter values")
      ->required()
      ->delimiter(',');
  add_pipeline_flags(sw, so.flags);
  sw->callback([&] {
    dcomp::PipelineParams params = so.flags.params;
    params.ground_filter = !so.flags.no_ground_filter;
    dcomp::PipelineInputs in;
    in.image = dcomp::load_image(so.image);
    in.sparse_depth = dcomp::load_depth(so.depth);
    if (!so.intrinsics.empty())
      in.intrinsics = dcomp::load_intrinsics(so.intrinsics);
    const dcomp::ScalarField gt = dcomp::load_depth(so.gt);
    const auto which = so.param == "c" ? dcomp::SweepParameter::PathCost
                                       : dcomp::SweepParameter::BoundaryThreshold;
    dcomp::write_sweep_csv(so.out,
                           dcomp::sweep(in, gt, which, so.values, params));
  });

  // ---- synth ------------------------------------------------------------
  auto* sy = app.add_subcommand(
      "synth", "Generate a synthetic scene for demos and experiments");
  struct {
    std::string scene, out_dir;
    int sample_step = 0;
    double sample_fraction = 0.0;
    std::uint64_t sample_seed = 7;
  } syo;
  sy->add_option("--scene", syo.scene,
                 "Scene name: two-region, ground-ramp, or textured")
      ->required()
      ->check(CLI::IsMember({"two-region", "ground-ramp", "textured"}));
  sy->add_option("--out-dir", syo.out_dir, "Directory for the output files")
      ->required();
  sy->add_option("--sample-step", syo.sample_step,
                 "Keep every Nth pixel in both directions as the sparse map");
  sy->add_option("--sample-fraction", syo.sample_fraction,
                 "Keep this fraction of pixels, randomly, as the sparse map");
  sy->add_option("--sample-seed", syo.sample_seed,
                 "Seed for --sample-fraction")
      ->capture_default_str();
  sy->callback([&] {
    namespace fs = std::filesystem;
    fs::create_directories(syo.out_dir);
    const auto path = [&](const char* name) {
      return (fs::path(syo.out_dir) / name).string();
    };
    dcomp::ScalarField image, depth;
    if (syo.scene == "two-region") {
      const dcomp::Scene s = dcomp::two_region_scene();
      image = s.image;
      depth = s.depth;
    } else if (syo.scene == "textured") {
      const dcomp::Scene s = dcomp::textured_scene();
      image = s.image;
      depth = s.depth;
    } else {
      const dcomp::GroundScene s = dcomp::ground_ramp_scene();
      image = s.image;
      depth = s.depth;
      std::ofstream k(path("intrinsics.txt"));
      k << s.intrinsics.fx << " " << s.intrinsics.fy << " " << s.intrinsics.cx
        << " " << s.intrinsics.cy << "\n";
      if (!k) throw std::runtime_error("write failed: intrinsics.txt");
    }
    dcomp::save_gray(path("image.png"), image);
    dcomp::save_depth(path("depth_dense.png"), depth);
    if (syo.sample_step > 0)
      dcomp::save_depth(path("depth_sparse.png"),
                        dcomp::sample_grid(depth, syo.sample_step));
    else if (syo.sample_fraction > 0.0)
      dcomp::save_depth(
          path("depth_sparse.png"),
          dcomp::sample_random(depth, syo.sample_fraction, syo.sample_seed));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
