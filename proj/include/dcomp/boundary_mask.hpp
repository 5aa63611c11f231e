#pragma once

#include <cstdint>
#include <vector>

#include "dcomp/field.hpp"

namespace dcomp {

/// Per-pixel occlusion-boundary flags. A pixel with flag `a` sits on a
/// vertical boundary (depth jumps toward its right neighbor), `b` on a
/// horizontal one (depth jumps toward the pixel below). The flag lives on
/// the lower-index pixel of the forward-difference pair so that it
/// suppresses exactly the offending derivative in the regularizer.
struct BoundaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;

  BoundaryMask() = default;

  BoundaryMask(int w, int h)
      : width(w),
        height(h),
        a(static_cast<std::size_t>(w) * h, 0),
        b(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  std::size_t size() const { return a.size(); }
};

}  // namespace dcomp
