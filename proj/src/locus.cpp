#include <cmath>
#include <limits>

#include "lightcone/parallel.hpp"
#include "lightcone/surface.hpp"

namespace lightcone {

namespace {

constexpr int kMaxBisections = 200;

struct NodeValue {
  double B;
  double tol;
};

// Lines along `axis`: every combination of node indices on the other axes, in
// lexicographic order.
std::vector<std::vector<int>> lines_along(const Grid& grid, int axis) {
  std::vector<int> counts = grid.nodes;
  counts[static_cast<std::size_t>(axis)] = 1;
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  std::vector<std::vector<int>> lines;
  lines.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx(counts.size());
    std::size_t rest = flat;
    for (std::size_t a = counts.size(); a-- > 0;) {
      idx[a] = static_cast<int>(rest % static_cast<std::size_t>(counts[a]));
      rest /= static_cast<std::size_t>(counts[a]);
    }
    idx[static_cast<std::size_t>(axis)] = -1;
    lines.push_back(std::move(idx));
  }
  return lines;
}

std::size_t flat_index(const Grid& grid, std::span<const int> idx) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) flat = flat * static_cast<std::size_t>(grid.nodes[a]) + static_cast<std::size_t>(idx[a]);
  return flat;
}

}  // namespace

LocusScan scan_lightlike_locus(const GraphHypersurface& S, const Grid& grid, std::optional<double> tol_b,
                               double tol_grad) {
  if (grid.dim() != S.n) throw std::invalid_argument("grid dimension must equal n");
  for (int k : grid.nodes)
    if (k < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");

  std::vector<NodeValue> nodes(grid.size());
  parallel_for(nodes.size(), [&](std::size_t flat) {
    const std::vector<int> idx = grid.unflatten(flat);
    const std::vector<double> x = grid.point(idx);
    const FirstFundamental ff = induced_metric(S, x);
    nodes[flat] = {ff.B, tol_b ? *tol_b : default_tol_b(ff.s)};
  });

  LocusScan scan;
  bool all_zero = true;
  for (const NodeValue& v : nodes) all_zero = all_zero && std::fabs(v.B) <= v.tol;
  if (all_zero) {
    scan.identically_lightlike = true;
    return scan;
  }

  for (int axis = 0; axis < grid.dim(); ++axis) {
    const std::vector<std::vector<int>> lines = lines_along(grid, axis);
    std::vector<std::vector<LocusPoint>> found(lines.size());
    parallel_for(lines.size(), [&](std::size_t li) {
      std::vector<int> idx = lines[li];
      const int count = grid.nodes[static_cast<std::size_t>(axis)];
      auto at = [&](int k) {
        idx[static_cast<std::size_t>(axis)] = k;
        return nodes[flat_index(grid, idx)];
      };
      auto point_at = [&](double t) {
        idx[static_cast<std::size_t>(axis)] = 0;
        std::vector<double> x = grid.point(idx);
        x[static_cast<std::size_t>(axis)] = t;
        return x;
      };
      auto record = [&](double t) {
        std::vector<double> x = point_at(t);
        PointClass cls = classify_point(S, x, tol_b, tol_grad);
        // A sign change across a pole of B is not a light-like point.
        if (cls.kind != PointClass::Kind::LightLike) return;
        LocusPoint p;
        p.axis = axis;
        p.line = lines[li];
        p.parameter = t;
        p.x = std::move(x);
        p.cls = cls;
        found[li].push_back(std::move(p));
      };

      NodeValue prev = at(0);
      bool prev_zero = std::fabs(prev.B) <= prev.tol;
      if (prev_zero) record(grid.coordinate(axis, 0));
      for (int k = 1; k < count; ++k) {
        const NodeValue cur = at(k);
        const bool cur_zero = std::fabs(cur.B) <= cur.tol;
        if (cur_zero) {
          record(grid.coordinate(axis, k));
        } else if (!prev_zero && std::signbit(prev.B) != std::signbit(cur.B)) {
          double lo = grid.coordinate(axis, k - 1), hi = grid.coordinate(axis, k);
          const bool lo_negative = std::signbit(prev.B);
          double mid = 0.5 * (lo + hi);
          for (int it = 0; it < kMaxBisections; ++it) {
            mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double Bm = B_value(S, point_at(mid));
            if (Bm == 0.0) break;
            if (std::signbit(Bm) == lo_negative)
              lo = mid;
            else
              hi = mid;
          }
          record(mid);
        }
        prev = cur;
        prev_zero = cur_zero;
      }
    });
    for (auto& line_points : found)
      for (auto& p : line_points) scan.points.push_back(std::move(p));
  }
  return scan;
}

}  // namespace lightcone
