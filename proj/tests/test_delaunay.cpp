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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "lisa/delaunay.hpp"
#include "lisa/graphgen.hpp"
#include "oracles.hpp"

namespace {

using lisa::Point;
using lisa::PointSet;

std::set<lisa::Edge> as_set(const std::vector<lisa::Edge>& e) { return {e.begin(), e.end()}; }

void expect_planar_connected(const PointSet& p, const std::vector<lisa::Edge>& edges) {
  const std::size_t n = p.size();
  EXPECT_LE(edges.size(), 3 * n - 6);
  oracle::UnionFind uf(n);
  std::size_t components = n;
  for (const auto& [i, j] : edges) {
    ASSERT_LT(i, j);
    ASSERT_LT(j, n);
    components -= uf.unite(i, j);
  }
  EXPECT_EQ(components, 1u);
  EXPECT_EQ(as_set(edges).size(), edges.size());
}

TEST(Delaunay, SingleTriangle) {
  const PointSet p({{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.8}});
  EXPECT_EQ(lisa::delaunay_edges(p), (std::vector<lisa::Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(Delaunay, UnitSquareHasOneDiagonal) {
  const PointSet p({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto edges = lisa::delaunay_edges(p);
  EXPECT_EQ(edges.size(), 5u);
  EXPECT_EQ(as_set(edges), oracle::delaunay_edges(p));
  const auto s = as_set(edges);
  for (lisa::Edge hull : {lisa::Edge{0, 1}, {1, 2}, {2, 3}, {0, 3}}) EXPECT_TRUE(s.count(hull));
}

TEST(Delaunay, Errors) {
  EXPECT_THROW(lisa::delaunay_edges(PointSet({{0, 0}, {1, 1}})), lisa::DegenerateError);
  EXPECT_THROW(lisa::delaunay_edges(PointSet({{0, 0}, {0.5, 0.5}, {1, 1}})), lisa::DegenerateError);
  EXPECT_THROW(lisa::delaunay_edges(PointSet({{0, 0}, {0.5, 0.1}, {0.5, 0.1}, {1, 1}})),
               lisa::DomainError);
}

TEST(Delaunay, MatchesBruteForceOnRandomSets) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 48;
    const PointSet p = lisa::gen_points(n, seed);
    const auto edges = lisa::delaunay_edges(p);
    EXPECT_EQ(as_set(edges), oracle::delaunay_edges(p)) << "seed " << seed;
    expect_planar_connected(p, edges);
  }
}

// Lattices are full of cocircular quadruples and collinear runs.
TEST(Delaunay, MatchesBruteForceOnDegenerateLattices) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + trial % 5;
    std::vector<Point> pts;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (trial < 5 || rng() % 3 != 0) pts.push_back({i / double(k - 1) * 0.5, j / double(k - 1) * 0.5});
    std::shuffle(pts.begin(), pts.end(), rng);
    if (pts.size() < 3) continue;
    const PointSet p(pts);
    bool collinear = true;
    for (std::size_t i = 2; i < pts.size() && collinear; ++i) {
      const double cross = (pts[1].x - pts[0].x) * (pts[i].y - pts[0].y) -
                           (pts[1].y - pts[0].y) * (pts[i].x - pts[0].x);
      collinear = cross == 0.0;
    }
    if (collinear) continue;
    const auto edges = lisa::delaunay_edges(p);
    EXPECT_EQ(as_set(edges), oracle::delaunay_edges(p)) << "trial " << trial;
    expect_planar_connected(p, edges);
  }
}

TEST(Delaunay, CollinearRunWithOneApex) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({i / 8.0, 0.25});
  pts.push_back({0.5, 0.75});
  const PointSet p(pts);
  const auto edges = lisa::delaunay_edges(p);
  EXPECT_EQ(as_set(edges), oracle::delaunay_edges(p));
  EXPECT_EQ(edges.size(), 7u + 8u);
}

TEST(Delaunay, TrianglesAreCounterClockwiseAndEuler) {
  const PointSet p = lisa::gen_points(500, 77);
  const lisa::DelaunayTriangulation dt(p);
  const auto tris = dt.triangles();
  const auto edges = dt.edges();
  const auto& pred = dt.predicate();
  for (const auto& t : tris) EXPECT_EQ(lisa::geometry::orient(pred[t[0]], pred[t[1]], pred[t[2]]), 1);
  // Euler for a triangulated point set: E = 3n - 3 - h, T = 2n - 2 - h.
  const std::size_t h = 3 * p.size() - 3 - edges.size();
  EXPECT_EQ(tris.size(), 2 * p.size() - 2 - h);
}

TEST(Delaunay, LargeInstancesStayPlanarAndConnected) {
  for (std::size_t n : {1000u, 10000u}) {
    const PointSet p = lisa::gen_points(n, n);
    expect_planar_connected(p, lisa::delaunay_edges(p));
  }
}

}  // namespace
