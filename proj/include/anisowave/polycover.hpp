#pragma once

#include <Eigen/Dense>

#include <vector>

#include "anisowave/common.hpp"

namespace anisowave {

// Exact arrangement of convex cells in dimension 1 or 2: a disjoint list of
// convex patches, each carrying the indices of the cells covering it.
// Used for piecewise-constant quadrature of overlapping dilated lattice
// cells, where the integrand is constant on every patch.

struct ConvexCell {
  // d = 1: [lo, hi); d = 2: convex CCW polygon.
  double lo = 0.0, hi = 0.0;
  std::vector<Eigen::Vector2d> pts;

  double measure(int d) const {
    if (d == 1) return hi - lo;
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      const auto& q = pts[(i + 1) % pts.size()];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * std::abs(a);
  }
};

struct CoverPatch {
  ConvexCell geom;
  std::vector<int> members;
};

namespace detail {

// Clip a convex CCW polygon against the half-plane n.x <= b.
inline ConvexCell clip_halfplane(const ConvexCell& poly, const Eigen::Vector2d& n, double b) {
  ConvexCell out;
  const std::size_t k = poly.pts.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = poly.pts[i];
    const auto& q = poly.pts[(i + 1) % k];
    const double dp = n.dot(p) - b, dq = n.dot(q) - b;
    if (dp <= 0) out.pts.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      const double t = dp / (dp - dq);
      out.pts.push_back(p + t * (q - p));
    }
  }
  return out;
}

struct HalfPlane {
  Eigen::Vector2d n;
  double b;
};

inline std::vector<HalfPlane> edges_of(const ConvexCell& cell) {
  std::vector<HalfPlane> hs;
  const std::size_t k = cell.pts.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = cell.pts[i];
    const auto& q = cell.pts[(i + 1) % k];
    Eigen::Vector2d edge = q - p;
    Eigen::Vector2d n(edge.y(), -edge.x());  // inward for CCW is n.x <= n.p
    hs.push_back({n, n.dot(p)});
  }
  return hs;
}

// Split `piece` by `cell`: returns the inside part (may be empty) and
// appends the outside fragments to `outside`.
inline ConvexCell split_by_cell(const ConvexCell& piece, const std::vector<HalfPlane>& cell_edges,
                                std::vector<ConvexCell>& outside, double eps) {
  ConvexCell inside = piece;
  for (const auto& h : cell_edges) {
    ConvexCell out_frag = clip_halfplane(inside, -h.n, -h.b);
    if (out_frag.pts.size() >= 3 && out_frag.measure(2) > eps) outside.push_back(std::move(out_frag));
    inside = clip_halfplane(inside, h.n, h.b);
    if (inside.pts.size() < 3 || inside.measure(2) <= eps) {
      inside.pts.clear();
      break;
    }
  }
  return inside;
}

}  // namespace detail

// Incremental disjoint decomposition of a union of convex cells.
inline std::vector<CoverPatch> build_arrangement(const std::vector<ConvexCell>& cells, int d) {
  std::vector<CoverPatch> patches;
  if (d == 1) {
    for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
      const auto& c = cells[static_cast<std::size_t>(ci)];
      std::vector<std::pair<double, double>> leftover{{c.lo, c.hi}};
      std::vector<CoverPatch> created;
      for (auto& patch : patches) {
        const double lo = std::max(patch.geom.lo, c.lo), hi = std::min(patch.geom.hi, c.hi);
        if (hi - lo <= 1e-14) continue;
        // carve the overlap out of the existing patch
        CoverPatch mid = patch;
        mid.geom.lo = lo;
        mid.geom.hi = hi;
        mid.members.push_back(ci);
        if (patch.geom.lo < lo) created.push_back({{patch.geom.lo, lo, {}}, patch.members});
        if (hi < patch.geom.hi) created.push_back({{hi, patch.geom.hi, {}}, patch.members});
        patch = mid;
        // remove the overlap from the leftover of the new cell
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : leftover) {
          const double l = std::max(a, lo), r = std::min(b, hi);
          if (r - l <= 1e-14) {
            next.emplace_back(a, b);
            continue;
          }
          if (a < l) next.emplace_back(a, l);
          if (r < b) next.emplace_back(r, b);
        }
        leftover = std::move(next);
      }
      for (auto& p : created) patches.push_back(std::move(p));
      for (auto [a, b] : leftover)
        if (b - a > 1e-14) patches.push_back({{a, b, {}}, {ci}});
    }
    return patches;
  }

  constexpr double kEps = 1e-13;
  for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
    const auto& cell = cells[static_cast<std::size_t>(ci)];
    const auto cell_edges = detail::edges_of(cell);
    std::vector<ConvexCell> leftover{cell};
    std::vector<CoverPatch> next;
    next.reserve(patches.size() + 4);
    for (auto& patch : patches) {
      std::vector<ConvexCell> outside;
      ConvexCell inside = detail::split_by_cell(patch.geom, cell_edges, outside, kEps);
      if (inside.pts.empty()) {
        next.push_back(std::move(patch));
        continue;
      }
      for (auto& frag : outside) next.push_back({std::move(frag), patch.members});
      auto members = patch.members;
      members.push_back(ci);
      next.push_back({std::move(inside), std::move(members)});
      // subtract the patch from the leftover of the new cell
      const auto patch_edges = detail::edges_of(patch.geom);
      std::vector<ConvexCell> new_leftover;
      for (auto& piece : leftover) {
        std::vector<ConvexCell> outs;
        detail::split_by_cell(piece, patch_edges, outs, kEps);
        for (auto& o : outs) new_leftover.push_back(std::move(o));
      }
      leftover = std::move(new_leftover);
    }
    for (auto& piece : leftover)
      if (piece.pts.size() >= 3 && piece.measure(2) > kEps) next.push_back({std::move(piece), {ci}});
    patches = std::move(next);
  }
  return patches;
}

}  // namespace anisowave
