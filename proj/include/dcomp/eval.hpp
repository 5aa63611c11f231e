#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcomp/field.hpp"
#include "dcomp/pipeline.hpp"

namespace dcomp {

/// Mean absolute error in millimeters over the pixels where the ground
/// truth is valid. The prediction must cover that whole set.
inline double mae_mm(const ScalarField& pred, const ScalarField& gt) {
  require(pred.same_size(gt), "mae: dimensions differ");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt.is_valid(i)) continue;
    if (!pred.is_valid(i))
      throw std::invalid_argument(
          "mae: prediction invalid at a ground-truth pixel");
    sum += std::abs(pred.values[i] - gt.values[i]);
    ++count;
  }
  require(count > 0, "mae: ground truth has no valid pixels");
  return sum / static_cast<double>(count) * 1000.0;
}

enum class SweepParameter {
  PathCost,           // the constant added to each node's traversal cost
  BoundaryThreshold,  // the depth jump that raises a boundary flag
};

struct SweepPoint {
  double value = 0.0;
  double mae_mm = 0.0;
};

/// Runs the full pipeline once per parameter value, all other parameters
/// held at `base`, and scores each result against the ground truth.
inline std::vector<SweepPoint> sweep(const PipelineInputs& in,
                                     const ScalarField& gt,
                                     SweepParameter which,
                                     const std::vector<double>& values,
                                     const PipelineParams& base) {
  require(!values.empty(), "sweep: no parameter values given");
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double value : values) {
    PipelineParams params = base;
    switch (which) {
      case SweepParameter::PathCost:
        params.ignns.c = value;
        break;
      case SweepParameter::BoundaryThreshold:
        params.boundary_threshold = value;
        break;
    }
    try {
      const PipelineResult result = run_pipeline(in, params);
      points.push_back({value, mae_mm(result.depth, gt)});
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep value " + std::to_string(value) + ": " +
                               e.what());
    }
  }
  return points;
}

inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepPoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out << "value,mae_mm\n";
  for (const SweepPoint& p : points) out << p.value << "," << p.mae_mm << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dcomp
