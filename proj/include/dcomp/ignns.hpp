#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "dcomp/diff_ops.hpp"
#include "dcomp/field.hpp"

namespace dcomp {

struct IgnnsParams {
  double c = 0.01;  // constant cost per path pixel
};

/// For every pixel: the measured pixel reached by the cheapest path and the
/// cost of that path. Measured pixels map to themselves with cost equal to
/// their own node cost.
struct NearestNeighborMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> seed_index;  // linear index of the owning seed
  std::vector<double> cost;

  NearestNeighborMap() = default;

  NearestNeighborMap(int w, int h)
      : width(w),
        height(h),
        seed_index(static_cast<std::size_t>(w) * h, -1),
        cost(static_cast<std::size_t>(w) * h,
             std::numeric_limits<double>::infinity()) {}
};

struct IgnnsResult {
  NearestNeighborMap nn;
  ScalarField dbar;  // piecewise constant depth, fully valid
};

/// Image-guided nearest neighbor search. The node cost of pixel k is
/// |grad I(k)|^2 + c and a path's cost is the sum of node costs over its
/// pixels, both endpoints included; paths move on the 4-connected grid.
/// Multi-source Dijkstra over (cost, seed index) pairs ordered
/// lexicographically, so equal-cost ties always resolve to the seed with
/// the smaller linear index.
inline IgnnsResult ignns(const ScalarField& image, const ScalarField& depth,
                         const IgnnsParams& params = {}) {
  require(image.width == depth.width && image.height == depth.height,
          "ignns: image and depth dimensions differ");
  require(params.c > 0.0, "ignns: c must be positive");
  require(depth.valid_count() > 0, "ignns: no seeds");

  const int w = image.width, h = image.height;
  const std::size_t n = image.size();

  const VectorField g = image_gradient(image);
  std::vector<double> node_cost(n);
  for (std::size_t i = 0; i < n; ++i)
    node_cost[i] = g.x[i] * g.x[i] + g.y[i] * g.y[i] + params.c;

  NearestNeighborMap nn(w, h);
  using Entry = std::tuple<double, std::int32_t, std::int32_t>;  // cost, seed, pixel
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  for (std::size_t i = 0; i < n; ++i) {
    if (depth.valid[i]) {
      nn.cost[i] = node_cost[i];
      nn.seed_index[i] = static_cast<std::int32_t>(i);
      queue.emplace(nn.cost[i], nn.seed_index[i], static_cast<std::int32_t>(i));
    }
  }

  while (!queue.empty()) {
    const auto [cost, seed, pixel] = queue.top();
    queue.pop();
    const std::size_t i = static_cast<std::size_t>(pixel);
    if (cost != nn.cost[i] || seed != nn.seed_index[i]) continue;  // stale

    const int x = pixel % w;
    const int y = pixel / w;
    const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (const auto& [bx, by] : nb) {
      if (bx < 0 || bx >= w || by < 0 || by >= h) continue;
      const std::size_t j = static_cast<std::size_t>(by) * w + bx;
      const double cand = cost + node_cost[j];
      if (cand < nn.cost[j] ||
          (cand == nn.cost[j] && seed < nn.seed_index[j])) {
        nn.cost[j] = cand;
        nn.seed_index[j] = seed;
        queue.emplace(cand, seed, static_cast<std::int32_t>(j));
      }
    }
  }

  ScalarField dbar(w, h, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    dbar.values[i] = depth.values[static_cast<std::size_t>(nn.seed_index[i])];

  return {std::move(nn), std::move(dbar)};
}

}  // namespace dcomp
