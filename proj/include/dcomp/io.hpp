#pragma once

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcomp/boundary_mask.hpp"
#include "dcomp/camera.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

namespace detail {

/// Decoded PNG samples, interleaved, 16-bit values still big-endian as
/// stored in the file.
struct RawPng {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  // Sample c of pixel (x, y) as an integer, regardless of bit depth.
  unsigned sample(int x, int y, int c) const {
    const std::size_t stride =
        static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    const std::size_t off = static_cast<std::size_t>(y) * stride +
                            (static_cast<std::size_t>(x) * channels + c) *
                                (bit_depth / 8);
    if (bit_depth == 16)
      return (static_cast<unsigned>(data[off]) << 8) | data[off + 1];
    return data[off];
  }
};

struct PngReadCtx {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteCtx {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

inline RawPng read_png(const std::string& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw std::runtime_error("cannot open file: " + path);

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");

  RawPng out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("failed to decode PNG: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  // Palette and low-bit-depth images become plain 8-bit samples.
  png_set_expand(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  out.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  out.channels = png_get_channels(ctx.png, ctx.info);

  const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
  out.data.resize(rowbytes * out.height);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + static_cast<std::size_t>(y) * rowbytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return out;
}

inline void write_png(const std::string& path, int width, int height,
                      int bit_depth, int color_type,
                      const std::vector<std::uint8_t>& data) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw std::runtime_error("cannot open file for write: " + path);

  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");

  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("failed to encode PNG: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  const int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
  const std::size_t rowbytes =
      static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(data.data()) +
              static_cast<std::size_t>(y) * rowbytes;
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace detail

/// Guidance image: grayscale in [0,1]. Color inputs are reduced with the
/// BT.601 luma weights before normalization; alpha is ignored.
inline ScalarField load_image(const std::string& path) {
  const detail::RawPng raw = detail::read_png(path);
  ScalarField img(raw.width, raw.height, 0.0);
  const double maxval = (raw.bit_depth == 16) ? 65535.0 : 255.0;
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      double v;
      if (raw.channels >= 3) {
        v = 0.299 * raw.sample(x, y, 0) + 0.587 * raw.sample(x, y, 1) +
            0.114 * raw.sample(x, y, 2);
      } else {
        v = raw.sample(x, y, 0);
      }
      img.values[img.index(x, y)] = v / maxval;
    }
  }
  return img;
}

/// Sparse or dense depth map: 16-bit grayscale, meters = value / 256,
/// value 0 marks a pixel with no measurement.
inline ScalarField load_depth(const std::string& path) {
  const detail::RawPng raw = detail::read_png(path);
  if (raw.bit_depth != 16 || raw.channels != 1)
    throw std::runtime_error("depth PNG must be 16-bit grayscale: " + path);
  ScalarField depth = ScalarField::all_invalid(raw.width, raw.height);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const unsigned v = raw.sample(x, y, 0);
      if (v != 0) depth.set(depth.index(x, y), v / 256.0);
    }
  }
  return depth;
}

inline void save_depth(const std::string& path, const ScalarField& depth) {
  std::vector<std::uint8_t> data(depth.size() * 2, 0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!depth.is_valid(i)) continue;
    long v = std::lround(depth.values[i] * 256.0);
    // 0 is reserved for "no measurement"; valid pixels saturate instead.
    v = std::clamp(v, 1L, 65535L);
    data[2 * i] = static_cast<std::uint8_t>(v >> 8);
    data[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
  }
  detail::write_png(path, depth.width, depth.height, 16,
                    PNG_COLOR_TYPE_GRAY, data);
}

/// 8-bit grayscale from values in [0,1] (clamped).
inline void save_gray(const std::string& path, const ScalarField& img) {
  std::vector<std::uint8_t> data(img.size(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.values[i], 0.0, 1.0);
    data[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  detail::write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                    data);
}

/// Boundary mask visualization: white = no boundary, blue = horizontal only,
/// red = vertical only, green = both.
inline void save_boundary_mask(const std::string& path,
                               const BoundaryMask& mask) {
  std::vector<std::uint8_t> data(mask.size() * 3);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    std::uint8_t r = 255, g = 255, b = 255;
    if (mask.a[i] && mask.b[i]) {
      r = 0; g = 255; b = 0;
    } else if (mask.a[i]) {
      r = 0; g = 0; b = 255;
    } else if (mask.b[i]) {
      r = 255; g = 0; b = 0;
    }
    data[3 * i] = r;
    data[3 * i + 1] = g;
    data[3 * i + 2] = b;
  }
  detail::write_png(path, mask.width, mask.height, 8, PNG_COLOR_TYPE_RGB,
                    data);
}

inline BoundaryMask load_boundary_mask(const std::string& path) {
  const detail::RawPng raw = detail::read_png(path);
  if (raw.channels < 3 || raw.bit_depth != 8)
    throw std::runtime_error("boundary mask PNG must be 8-bit color: " + path);
  BoundaryMask mask(raw.width, raw.height);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const unsigned r = raw.sample(x, y, 0);
      const unsigned g = raw.sample(x, y, 1);
      const unsigned b = raw.sample(x, y, 2);
      const std::size_t i = mask.index(x, y);
      if (r == 255 && g == 255 && b == 255) {
        // no boundary
      } else if (r == 0 && g == 0 && b == 255) {
        mask.a[i] = 1;
      } else if (r == 255 && g == 0 && b == 0) {
        mask.b[i] = 1;
      } else if (r == 0 && g == 255 && b == 0) {
        mask.a[i] = 1;
        mask.b[i] = 1;
      } else {
        std::ostringstream msg;
        msg << "unrecognized boundary mask color (" << r << "," << g << ","
            << b << ") at (" << x << "," << y << ") in " << path;
        throw std::runtime_error(msg.str());
      }
    }
  }
  return mask;
}

/// Seed-index sidecar: row-major 32-bit little-endian signed indices.
inline void write_seed_indices(const std::string& path,
                               const std::vector<std::int32_t>& seeds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  for (std::int32_t s : seeds) {
    const std::uint32_t u = static_cast<std::uint32_t>(s);
    const std::uint8_t bytes[4] = {
        static_cast<std::uint8_t>(u & 0xff),
        static_cast<std::uint8_t>((u >> 8) & 0xff),
        static_cast<std::uint8_t>((u >> 16) & 0xff),
        static_cast<std::uint8_t>((u >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<std::int32_t> read_seed_indices(const std::string& path,
                                                   std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::int32_t> seeds(expected);
  std::vector<std::uint8_t> buf(expected * 4);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()))
    throw std::runtime_error("seed index file too short: " + path);
  for (std::size_t i = 0; i < expected; ++i) {
    const std::uint32_t u =
        static_cast<std::uint32_t>(buf[4 * i]) |
        (static_cast<std::uint32_t>(buf[4 * i + 1]) << 8) |
        (static_cast<std::uint32_t>(buf[4 * i + 2]) << 16) |
        (static_cast<std::uint32_t>(buf[4 * i + 3]) << 24);
    seeds[i] = static_cast<std::int32_t>(u);
  }
  return seeds;
}

/// Text file holding "fx fy cx cy", whitespace separated.
inline CameraIntrinsics load_intrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  CameraIntrinsics k;
  if (!(in >> k.fx >> k.fy >> k.cx >> k.cy))
    throw std::runtime_error("intrinsics file must hold fx fy cx cy: " + path);
  return k;
}

}  // namespace dcomp
