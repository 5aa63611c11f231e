#pragma once

#include "dcomp/field.hpp"

namespace dcomp {

/// Pinhole intrinsics. Camera frame: x right, y down, z forward.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

}  // namespace dcomp
