// Copyright 2026 The lisa-match Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "lisa/core.hpp"

namespace lisa {

using Edge = std::pair<std::size_t, std::size_t>;

namespace geometry {

// Predicates run on integer coordinates: unit-square points are snapped to
// the 2^-30 grid (exact for points produced by gen_points). With |difference|
// <= 2^30 the in-circle determinant stays below 2^124 and fits in __int128.
inline constexpr double kGridScale = 1073741824.0;  // 2^30

struct GridPoint {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

inline GridPoint snap(const Point& p) {
  return {static_cast<std::int64_t>(std::llround(p.x * kGridScale)),
          static_cast<std::int64_t>(std::llround(p.y * kGridScale))};
}

using Wide = __int128;

inline int sign(Wide v) { return (v > 0) - (v < 0); }

/// Sign of (b - a) x (c - a): +1 when a, b, c turn counter-clockwise.
inline int orient(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  const Wide v = Wide(b.x - a.x) * (c.y - a.y) - Wide(b.y - a.y) * (c.x - a.x);
  return sign(v);
}

/// Unperturbed in-circle determinant; positive when d is strictly inside the
/// circle through counter-clockwise a, b, c.
inline Wide incircle_det(const GridPoint& a, const GridPoint& b, const GridPoint& c,
                         const GridPoint& d) {
  const Wide adx = a.x - d.x, ady = a.y - d.y;
  const Wide bdx = b.x - d.x, bdy = b.y - d.y;
  const Wide cdx = c.x - d.x, cdy = c.y - d.y;
  const Wide alift = adx * adx + ady * ady;
  const Wide blift = bdx * bdx + bdy * bdy;
  const Wide clift = cdx * cdx + cdy * cdy;
  return adx * (bdy * clift - cdy * blift) - ady * (bdx * clift - cdx * blift) +
         alift * (bdx * cdy - cdx * bdy);
}

/// In-circle test with symbolic perturbation of the lifted heights: point
/// ranked r (lexicographic (x, y) order) is lifted by eps^(r+1). An exact zero
/// is resolved by the partial derivative of the determinant with respect to
/// the lowest-ranked lift whose cofactor is nonzero.
class InCircle {
 public:
  InCircle() = default;
  InCircle(std::vector<GridPoint> pts) : pts_(std::move(pts)), rank_(pts_.size()) {
    std::vector<std::size_t> order(pts_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return pts_[i] < pts_[j]; });
    for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
  }

  const GridPoint& operator[](std::size_t i) const { return pts_[i]; }
  std::size_t size() const noexcept { return pts_.size(); }
  std::size_t rank(std::size_t i) const { return rank_[i]; }

  /// +1 if d lies inside the (perturbed) circumcircle of ccw a, b, c, else -1.
  int operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    const int s = sign(incircle_det(pts_[a], pts_[b], pts_[c], pts_[d]));
    if (s != 0) return s;
    // d(det)/d(lift_a) = orient(d, b, c), ... , d(det)/d(lift_d) = -orient(a, b, c).
    std::array<std::pair<std::size_t, int>, 4> terms{{
        {rank_[a], orient(pts_[d], pts_[b], pts_[c])},
        {rank_[b], orient(pts_[d], pts_[c], pts_[a])},
        {rank_[c], orient(pts_[d], pts_[a], pts_[b])},
        {rank_[d], -orient(pts_[a], pts_[b], pts_[c])},
    }};
    std::sort(terms.begin(), terms.end());
    for (const auto& [r, partial] : terms)
      if (partial != 0) return partial;
    return -1;  // unreachable for a non-degenerate triangle
  }

 private:
  std::vector<GridPoint> pts_;
  std::vector<std::size_t> rank_;
};

}  // namespace geometry

/// Delaunay triangulation by incremental Bowyer-Watson insertion.
///
/// The convex hull is closed with ghost triangles (a, b, ghost) whose
/// "circumdisk" is the open half-plane left of a->b plus the open segment ab,
/// so no super-triangle coordinates ever enter a predicate. Ties between
/// cocircular points go through geometry::InCircle's symbolic perturbation.
class DelaunayTriangulation {
 public:
  using Triangle = std::array<std::size_t, 3>;

  explicit DelaunayTriangulation(const PointSet& points) {
    const std::size_t n = points.size();
    if (n < 3) throw DegenerateError("Delaunay triangulation needs at least 3 points");
    std::vector<geometry::GridPoint> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = geometry::snap(points[i]);
    check_distinct(grid);
    pred_ = geometry::InCircle(std::move(grid));
    build();
  }

  std::size_t point_count() const noexcept { return pred_.size(); }

  /// Real triangles, counter-clockwise.
  std::vector<Triangle> triangles() const {
    std::vector<Triangle> out;
    for (const auto& t : tris_)
      if (t.alive && t.v[2] != kGhost) out.push_back(t.v);
    return out;
  }

  /// Undirected edges (i < j), sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& t : tris_) {
      if (!t.alive || t.v[2] == kGhost) continue;
      for (int k = 0; k < 3; ++k) {
        const std::size_t u = t.v[k], w = t.v[(k + 1) % 3];
        out.emplace_back(std::min(u, w), std::max(u, w));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const geometry::InCircle& predicate() const noexcept { return pred_; }

 private:
  static constexpr std::size_t kGhost = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Tri {
    Triangle v;                        // ccw; a ghost keeps kGhost in v[2]
    std::array<std::size_t, 3> nb;     // nb[k] lies across the edge opposite v[k]
    bool alive = true;
  };

  static void check_distinct(const std::vector<geometry::GridPoint>& grid) {
    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return grid[i] < grid[j]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (grid[order[k]] == grid[order[k - 1]]) {
        throw DomainError("coincident points " + std::to_string(order[k - 1]) + " and " +
                          std::to_string(order[k]));
      }
    }
  }

  bool is_ghost(std::size_t t) const { return tris_[t].v[2] == kGhost; }

  // Is point d inside the circumdisk of triangle t (ghost rule for ghosts)?
  bool in_disk(std::size_t t, std::size_t d) const {
    const auto& v = tris_[t].v;
    if (v[2] == kGhost) {
      const auto& a = pred_[v[0]];
      const auto& b = pred_[v[1]];
      const auto& p = pred_[d];
      const int o = geometry::orient(a, b, p);
      if (o != 0) return o > 0;
      const geometry::Wide along_a = geometry::Wide(p.x - a.x) * (b.x - a.x) +
                                     geometry::Wide(p.y - a.y) * (b.y - a.y);
      const geometry::Wide along_b = geometry::Wide(p.x - b.x) * (a.x - b.x) +
                                     geometry::Wide(p.y - b.y) * (a.y - b.y);
      return along_a > 0 && along_b > 0;
    }
    return pred_(v[0], v[1], v[2], d) > 0;
  }

  std::size_t new_tri(Triangle v) {
    Tri t{v, {kNone, kNone, kNone}, true};
    if (!free_.empty()) {
      const std::size_t id = free_.back();
      free_.pop_back();
      tris_[id] = t;
      return id;
    }
    tris_.push_back(t);
    return tris_.size() - 1;
  }

  // Sets the neighbour of t across its edge {u, w}.
  void link(std::size_t t, std::size_t u, std::size_t w, std::size_t other) {
    auto& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      const std::size_t p = tri.v[(k + 1) % 3], q = tri.v[(k + 2) % 3];
      if ((p == u && q == w) || (p == w && q == u)) {
        tri.nb[k] = other;
        return;
      }
    }
    throw Error("Delaunay: triangles do not share the expected edge");
  }

  // Triangle (e0, e1, p) rotated so that a ghost vertex ends up last.
  static Triangle place_ghost_last(std::size_t e0, std::size_t e1, std::size_t p) {
    if (e0 == kGhost) return {e1, p, kGhost};
    if (e1 == kGhost) return {p, e0, kGhost};
    return {e0, e1, p};
  }

  void build() {
    const std::size_t n = pred_.size();
    const std::size_t i0 = 0, i1 = 1;
    std::size_t i2 = kNone;
    for (std::size_t k = 2; k < n; ++k) {
      if (geometry::orient(pred_[i0], pred_[i1], pred_[k]) != 0) {
        i2 = k;
        break;
      }
    }
    if (i2 == kNone) throw DegenerateError("all points are collinear");
    std::size_t a = i0, b = i1, c = i2;
    if (geometry::orient(pred_[a], pred_[b], pred_[c]) < 0) std::swap(b, c);

    const std::size_t t0 = new_tri({a, b, c});
    const std::size_t gc = new_tri({b, a, kGhost});  // across a-b
    const std::size_t ga = new_tri({c, b, kGhost});  // across b-c
    const std::size_t gb = new_tri({a, c, kGhost});  // across c-a
    link(t0, a, b, gc);
    link(t0, b, c, ga);
    link(t0, c, a, gb);
    link(gc, a, b, t0);
    link(ga, b, c, t0);
    link(gb, c, a, t0);
    link(gc, b, kGhost, ga);
    link(ga, b, kGhost, gc);
    link(ga, c, kGhost, gb);
    link(gb, c, kGhost, ga);
    link(gb, a, kGhost, gc);
    link(gc, a, kGhost, gb);
    last_ = t0;

    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || p == b || p == c) continue;
      insert(p);
    }
  }

  std::size_t locate(std::size_t p) {
    std::size_t t = last_;
    if (!tris_[t].alive || is_ghost(t)) t = any_real();
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      if (is_ghost(t)) return t;
      const auto& tri = tris_[t];
      bool moved = false;
      for (std::size_t e = 0; e < 3; ++e) {
        const std::size_t k = (e + step) % 3;
        const std::size_t u = tri.v[(k + 1) % 3], w = tri.v[(k + 2) % 3];
        if (geometry::orient(pred_[u], pred_[w], pred_[p]) < 0) {
          t = tri.nb[k];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    // Walk did not settle; fall back to a scan.
    for (std::size_t id = 0; id < tris_.size(); ++id)
      if (tris_[id].alive && in_disk(id, p)) return id;
    throw Error("Delaunay: point location failed");
  }

  std::size_t any_real() const {
    for (std::size_t id = 0; id < tris_.size(); ++id)
      if (tris_[id].alive && !is_ghost(id)) return id;
    throw Error("Delaunay: no live triangle");
  }

  void insert(std::size_t p) {
    std::size_t start = locate(p);
    if (!in_disk(start, p)) {
      start = kNone;
      for (std::size_t id = 0; id < tris_.size() && start == kNone; ++id)
        if (tris_[id].alive && in_disk(id, p)) start = id;
      if (start == kNone) throw Error("Delaunay: no triangle conflicts with inserted point");
    }

    ++stamp_;
    mark_.resize(tris_.size(), 0);
    state_.resize(tris_.size(), 0);
    cavity_.clear();
    boundary_.clear();
    auto visit = [&](std::size_t t) -> bool {
      if (mark_[t] != stamp_) {
        mark_[t] = stamp_;
        state_[t] = in_disk(t, p) ? 1 : 0;
      }
      return state_[t] == 1;
    };
    visit(start);
    cavity_.push_back(start);
    for (std::size_t head = 0; head < cavity_.size(); ++head) {
      const std::size_t t = cavity_[head];
      for (int k = 0; k < 3; ++k) {
        const std::size_t nb = tris_[t].nb[k];
        const bool seen = mark_[nb] == stamp_;
        if (visit(nb)) {
          if (!seen) cavity_.push_back(nb);
        } else {
          boundary_.push_back({t, k});
        }
      }
    }

    // One new triangle (e0, e1, p) per boundary edge.
    created_.clear();
    for (const auto& [t, k] : boundary_) {
      const std::size_t e0 = tris_[t].v[(k + 1) % 3];
      const std::size_t e1 = tris_[t].v[(k + 2) % 3];
      const std::size_t outside = tris_[t].nb[k];
      created_.push_back({e0, e1, outside, kNone});
    }
    for (const std::size_t t : cavity_) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    for (auto& c : created_) {
      c.id = new_tri(place_ghost_last(c.e0, c.e1, p));
      link(c.id, c.e0, c.e1, c.outside);
      link(c.outside, c.e0, c.e1, c.id);
    }
    // Fan around p: edge (e1, p) is shared with the triangle whose e0 == e1.
    for (const auto& c : created_) {
      for (const auto& other : created_) {
        if (other.e0 == c.e1) {
          link(c.id, c.e1, p, other.id);
          link(other.id, other.e0, p, c.id);
          break;
        }
      }
    }
    for (const auto& c : created_) {
      if (!is_ghost(c.id)) {
        last_ = c.id;
        break;
      }
    }
    mark_.resize(tris_.size(), 0);
    state_.resize(tris_.size(), 0);
  }

  struct Created {
    std::size_t e0;
    std::size_t e1;
    std::size_t outside;
    std::size_t id;
  };

  geometry::InCircle pred_;
  std::vector<Tri> tris_;
  std::vector<std::size_t> free_;
  std::size_t last_ = 0;

  std::size_t stamp_ = 0;
  std::vector<std::size_t> mark_;
  std::vector<char> state_;
  std::vector<std::size_t> cavity_;
  std::vector<std::pair<std::size_t, int>> boundary_;
  std::vector<Created> created_;
};

/// Delaunay edge set of p, sorted with i < j.
inline std::vector<Edge> delaunay_edges(const PointSet& p) {
  return DelaunayTriangulation(p).edges();
}

}  // namespace lisa
