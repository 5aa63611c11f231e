#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcomp/camera.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

/// Points in the camera frame: x right, y down, z forward (meters).
/// `gray` is either empty or one intensity in [0,1] per point.
struct PointCloud {
  std::vector<std::array<double, 3>> points;
  std::vector<double> gray;

  bool has_gray() const { return !gray.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Back-projects every valid depth pixel through the pinhole model:
/// X = (x - cx) d / fx, Y = (y - cy) d / fy, Z = d.
inline PointCloud backproject(const ScalarField& depth,
                              const CameraIntrinsics& k,
                              const ScalarField* intensity = nullptr) {
  require(k.fx != 0.0 && k.fy != 0.0,
          "backproject: focal lengths must be nonzero");
  if (intensity)
    require(intensity->same_size(depth),
            "backproject: intensity dimensions differ from depth");
  PointCloud cloud;
  cloud.points.reserve(depth.valid_count());
  if (intensity) cloud.gray.reserve(depth.valid_count());
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const std::size_t i = depth.index(x, y);
      if (!depth.is_valid(i)) continue;
      const double d = depth.values[i];
      require(d > 0.0, "backproject: valid depths must be positive");
      cloud.points.push_back({(x - k.cx) * d / k.fx, (y - k.cy) * d / k.fy, d});
      if (intensity) cloud.gray.push_back(intensity->values[i]);
    }
  }
  return cloud;
}

inline void write_ply(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out << "ply\n"
      << "format ascii 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\n"
      << "property float y\n"
      << "property float z\n";
  if (cloud.has_gray()) out << "property uchar gray\n";
  out << "end_header\n";
  out << std::setprecision(9);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    out << p[0] << " " << p[1] << " " << p[2];
    if (cloud.has_gray())
      out << " " << std::lround(std::clamp(cloud.gray[i], 0.0, 1.0) * 255.0);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline PointCloud read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line) || line != "ply")
    throw std::runtime_error("not a PLY file: " + path);

  std::size_t count = 0;
  bool in_vertex = false;
  std::vector<std::string> property_names;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "end_header") break;
    if (tok == "comment" || tok == "format") continue;
    if (tok == "element") {
      std::string name;
      std::size_t n = 0;
      ls >> name >> n;
      in_vertex = (name == "vertex");
      if (in_vertex) count = n;
      else if (n > 0)
        throw std::runtime_error("unsupported PLY element '" + name +
                                 "' in " + path);
    } else if (tok == "property" && in_vertex) {
      std::string type, name;
      ls >> type >> name;
      property_names.push_back(name);
    }
  }

  auto find = [&](const std::string& name) {
    for (std::size_t i = 0; i < property_names.size(); ++i)
      if (property_names[i] == name) return static_cast<long>(i);
    return -1L;
  };
  const long ix = find("x"), iy = find("y"), iz = find("z");
  const long ig = find("gray");
  if (ix < 0 || iy < 0 || iz < 0)
    throw std::runtime_error("PLY lacks x/y/z vertex properties: " + path);

  PointCloud cloud;
  cloud.points.reserve(count);
  if (ig >= 0) cloud.gray.reserve(count);
  std::vector<double> fields(property_names.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (double& f : fields)
      if (!(in >> f))
        throw std::runtime_error("truncated PLY vertex data: " + path);
    cloud.points.push_back({fields[ix], fields[iy], fields[iz]});
    if (ig >= 0) cloud.gray.push_back(fields[ig] / 255.0);
  }
  return cloud;
}

}  // namespace dcomp
