#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dcomp {

/// H x W grid of doubles with a per-pixel validity mask, row-major.
/// Invalid pixels hold a NaN sentinel so that accidental reads surface
/// immediately in downstream arithmetic.
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  ScalarField() = default;

  ScalarField(int w, int h, double fill = 0.0)
      : width(w),
        height(h),
        values(static_cast<std::size_t>(w) * h, fill),
        valid(static_cast<std::size_t>(w) * h, 1) {
    assert(w >= 1 && h >= 1);
  }

  /// All pixels invalid (sentinel-filled); used for sparse maps built up
  /// point by point.
  static ScalarField all_invalid(int w, int h) {
    ScalarField f(w, h, std::numeric_limits<double>::quiet_NaN());
    std::fill(f.valid.begin(), f.valid.end(), std::uint8_t{0});
    return f;
  }

  std::size_t size() const { return values.size(); }

  std::size_t index(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return static_cast<std::size_t>(y) * width + x;
  }

  double at(int x, int y) const { return values[index(x, y)]; }
  double& at(int x, int y) { return values[index(x, y)]; }

  bool is_valid(int x, int y) const { return valid[index(x, y)] != 0; }
  bool is_valid(std::size_t i) const { return valid[i] != 0; }

  void set(int x, int y, double v) { set(index(x, y), v); }

  void set(std::size_t i, double v) {
    values[i] = v;
    valid[i] = 1;
  }

  void invalidate(int x, int y) { invalidate(index(x, y)); }

  void invalidate(std::size_t i) {
    values[i] = std::numeric_limits<double>::quiet_NaN();
    valid[i] = 0;
  }

  bool fully_valid() const {
    for (std::uint8_t v : valid)
      if (!v) return false;
    return true;
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : valid) n += v;
    return n;
  }

  bool same_size(const ScalarField& o) const {
    return width == o.width && height == o.height;
  }
};

/// Per-pixel 2-vectors (gradients, relaxation variable v, dual p).
/// Both channels are dense; there is no validity mask.
struct VectorField {
  int width = 0;
  int height = 0;
  std::vector<double> x;
  std::vector<double> y;

  VectorField() = default;

  VectorField(int w, int h)
      : width(w),
        height(h),
        x(static_cast<std::size_t>(w) * h, 0.0),
        y(static_cast<std::size_t>(w) * h, 0.0) {}

  std::size_t size() const { return x.size(); }

  std::size_t index(int px, int py) const {
    assert(px >= 0 && px < width && py >= 0 && py < height);
    return static_cast<std::size_t>(py) * width + px;
  }
};

/// Per-pixel 2x2 Jacobians (gradient of a VectorField, dual q).
/// Channel naming: xy = d(v_x)/dy and so on.
struct JacobianField {
  int width = 0;
  int height = 0;
  std::vector<double> xx;
  std::vector<double> xy;
  std::vector<double> yx;
  std::vector<double> yy;

  JacobianField() = default;

  JacobianField(int w, int h)
      : width(w),
        height(h),
        xx(static_cast<std::size_t>(w) * h, 0.0),
        xy(static_cast<std::size_t>(w) * h, 0.0),
        yx(static_cast<std::size_t>(w) * h, 0.0),
        yy(static_cast<std::size_t>(w) * h, 0.0) {}

  std::size_t size() const { return xx.size(); }
};

/// Boolean field (ground labels and similar per-pixel flags).
struct BoolField {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BoolField() = default;

  BoolField(int w, int h, bool fill = false)
      : width(w),
        height(h),
        data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  std::size_t index(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return static_cast<std::size_t>(y) * width + x;
  }

  bool at(int x, int y) const { return data[index(x, y)] != 0; }
  void set(int x, int y, bool v) { data[index(x, y)] = v ? 1 : 0; }
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace dcomp
