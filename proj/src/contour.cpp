#include <map>
#include <optional>

#include "simdeck/error.hpp"
#include "simdeck/render.hpp"

namespace simdeck {

namespace {

// Edge ids: horizontal edge (i,j)-(i,j+1) -> 2*(i*W+j); vertical edge
// (i,j)-(i+1,j) -> 2*(i*W+j)+1, with i the row and j the column.
struct Segment {
  long a, b;
};

}  // namespace

std::vector<std::vector<Point>> contour_zero(const ImageBuffer& grid, const AxisLayout& axis, double level) {
  check_axis(axis);
  const int W = grid.width, H = grid.height;
  if (W < 2 || H < 2) return {};
  auto val = [&](int i, int j) { return grid.at(j, i) - level; };
  auto inside = [&](int i, int j) { return val(i, j) >= 0.0; };
  auto hedge = [&](int i, int j) { return 2L * (static_cast<long>(i) * W + j); };
  auto vedge = [&](int i, int j) { return 2L * (static_cast<long>(i) * W + j) + 1; };

  const double dx = (axis.x_max - axis.x_min) / (W - 1);
  const double dy = (axis.y_max - axis.y_min) / (H - 1);
  auto vertex = [&](long e) {
    const long cell = e / 2;
    const int i = static_cast<int>(cell / W), j = static_cast<int>(cell % W);
    const bool vertical = e % 2;
    const int i2 = vertical ? i + 1 : i, j2 = vertical ? j : j + 1;
    const double a = val(i, j), b = val(i2, j2);
    const double t = a == b ? 0.5 : a / (a - b);
    return Point{axis.x_min + (j + t * (j2 - j)) * dx, axis.y_min + (i + t * (i2 - i)) * dy};
  };

  std::vector<Segment> segs;
  for (int i = 0; i + 1 < H; ++i) {
    for (int j = 0; j + 1 < W; ++j) {
      const int c = (inside(i, j) ? 1 : 0) | (inside(i, j + 1) ? 2 : 0) | (inside(i + 1, j + 1) ? 4 : 0) |
                    (inside(i + 1, j) ? 8 : 0);
      const long B = hedge(i, j), T = hedge(i + 1, j), L = vedge(i, j), R = vedge(i, j + 1);
      const bool center_in = (val(i, j) + val(i, j + 1) + val(i + 1, j + 1) + val(i + 1, j)) / 4.0 >= 0.0;
      switch (c) {
        case 1: case 14: segs.push_back({L, B}); break;
        case 2: case 13: segs.push_back({B, R}); break;
        case 3: case 12: segs.push_back({L, R}); break;
        case 4: case 11: segs.push_back({R, T}); break;
        case 6: case 9: segs.push_back({B, T}); break;
        case 7: case 8: segs.push_back({L, T}); break;
        case 5:
          if (center_in) segs.push_back({B, R}), segs.push_back({L, T});
          else segs.push_back({L, B}), segs.push_back({R, T});
          break;
        case 10:
          if (center_in) segs.push_back({L, B}), segs.push_back({R, T});
          else segs.push_back({B, R}), segs.push_back({L, T});
          break;
        default: break;
      }
    }
  }

  std::map<long, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    by_edge[segs[s].a].push_back(s);
    by_edge[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_from = [&](long edge) -> std::optional<std::size_t> {
    for (auto s : by_edge[edge])
      if (!used[s]) return s;
    return std::nullopt;
  };
  // Walks from `edge` through unused segments, returning visited edges.
  auto walk = [&](long edge) {
    std::vector<long> out;
    while (auto s = next_from(edge)) {
      used[*s] = true;
      edge = segs[*s].a == edge ? segs[*s].b : segs[*s].a;
      out.push_back(edge);
    }
    return out;
  };

  std::vector<std::vector<Point>> lines;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    const auto fwd = walk(segs[s].b);
    std::vector<long> edges;
    if (!fwd.empty() && fwd.back() == segs[s].a) {
      edges.push_back(segs[s].a);
      edges.push_back(segs[s].b);
      edges.insert(edges.end(), fwd.begin(), fwd.end());
    } else {
      const auto back = walk(segs[s].a);
      edges.assign(back.rbegin(), back.rend());
      edges.push_back(segs[s].a);
      edges.push_back(segs[s].b);
      edges.insert(edges.end(), fwd.begin(), fwd.end());
    }
    std::vector<Point> pts;
    pts.reserve(edges.size());
    for (long e : edges) pts.push_back(vertex(e));
    lines.push_back(std::move(pts));
  }
  return lines;
}

}  // namespace simdeck
