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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lisa/core.hpp"
#include "lisa/delaunay.hpp"
#include "lisa/rng.hpp"

namespace lisa {

/// n points uniform on the unit square (multiples of 2^-30), drawn from the
/// point sub-stream of `seed`.
inline PointSet gen_points(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("gen_points: n must be positive");
  CounterRng rng(seed, kPointStream);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = rng.grid_coordinate();
    p.y = rng.grid_coordinate();
  }
  return PointSet(std::move(pts));
}

inline double distance(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Complete graph weighted by Euclidean distance, zero diagonal.
inline AffinityMatrix dense_euclidean(const PointSet& p) {
  const std::size_t n = p.size();
  if (n < 2) throw DegenerateError("dense_euclidean needs at least 2 points");
  std::vector<double> table(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(p[i], p[j]);
      table[i * n + j] = d;
      table[j * n + i] = d;
    }
  return AffinityMatrix::dense(n, std::move(table));
}

/// Delaunay graph weighted by Euclidean edge length.
inline AffinityMatrix sparse_weighted(const PointSet& p) {
  std::vector<Triplet> entries;
  for (const auto& [i, j] : delaunay_edges(p)) entries.push_back({i, j, distance(p[i], p[j])});
  return AffinityMatrix::sparse(p.size(), std::move(entries));
}

/// Delaunay graph with unit weights.
inline AffinityMatrix sparse_binary(const PointSet& p) {
  std::vector<Triplet> entries;
  for (const auto& [i, j] : delaunay_edges(p)) entries.push_back({i, j, 1.0});
  return AffinityMatrix::sparse(p.size(), std::move(entries));
}

inline AffinityMatrix build_graph(GraphKind kind, const PointSet& p) {
  switch (kind) {
    case GraphKind::dense_weighted: return dense_euclidean(p);
    case GraphKind::sparse_weighted: return sparse_weighted(p);
    case GraphKind::sparse_binary: return sparse_binary(p);
    case GraphKind::external: break;
  }
  throw DomainError("external graphs are loaded, not generated");
}

/// Uniform permutation of [0, n) by Fisher-Yates on the permutation
/// sub-stream of `seed`.
inline Matching random_permutation(std::size_t n, std::uint64_t seed) {
  Matching p = Matching::identity(n);
  CounterRng rng(seed, kPermutationStream);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(p.assignment[i - 1], p.assignment[j]);
  }
  return p;
}

/// Relabels a so that b(p(i), p(j)) = a(i, j).
inline AffinityMatrix permute(const AffinityMatrix& a, const Matching& p) {
  const std::size_t n = a.order();
  if (p.source_size() != n || p.target_size != n || !validate_matching(p)) {
    throw DimensionError("permute: expected a permutation of the matrix order");
  }
  const auto& m = p.assignment;
  if (a.is_dense()) {
    const auto src = a.dense_data();
    std::vector<double> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) table[m[i] * n + m[j]] = src[i * n + j];
    return AffinityMatrix::dense(n, std::move(table));
  }
  std::vector<Triplet> entries = a.upper_entries();
  for (auto& e : entries) {
    e.row = m[e.row];
    e.col = m[e.col];
  }
  return AffinityMatrix::sparse(n, std::move(entries));
}

/// (P a P^T, P) for a uniform random permutation P.
inline std::pair<AffinityMatrix, Matching> permute_instance(const AffinityMatrix& a,
                                                            std::uint64_t seed) {
  Matching p = random_permutation(a.order(), seed);
  AffinityMatrix b = permute(a, p);
  return {std::move(b), std::move(p)};
}

struct NoiseSpec {
  double level = 0.0;
  double epsilon_low = -0.01;
  double epsilon_high = 0.01;
  /// Number of unordered pairs to perturb; the node count when unset.
  std::optional<std::size_t> edges_perturbed;

  void validate() const {
    if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("noise level must be >= 0");
    if (!(epsilon_low < epsilon_high) || epsilon_low != -epsilon_high) {
      throw DomainError("noise interval must be symmetric about zero");
    }
  }
};

/// |w + level * eps|.
inline double perturbed_weight(double w, double level, double eps) {
  return std::abs(w + level * eps);
}

namespace detail {

// k distinct values from [0, total), ascending (Floyd's sampling).
inline std::vector<std::size_t> sample_distinct(std::size_t total, std::size_t k,
                                                CounterRng& rng) {
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(k * 2);
  for (std::size_t j = total - k; j < total; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::size_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Pair index of (i, j), i < j, in row-major order of the strict upper triangle.
inline std::size_t pairs_before_row(std::size_t i, std::size_t n) {
  return i * n - i * (i + 1) / 2;
}

inline Edge pair_from_index(std::size_t idx, std::size_t n) {
  // Largest row i with pairs_before_row(i) <= idx.
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (pairs_before_row(mid, n) <= idx) lo = mid; else hi = mid;
  }
  return {lo, lo + 1 + (idx - pairs_before_row(lo, n))};
}

}  // namespace detail

/// Noise model A~(i,j) = |A(i,j) + level * eps| on `edges_perturbed` distinct
/// unordered off-diagonal pairs, eps uniform on the open interval
/// (epsilon_low, epsilon_high), written to both (i, j) and (j, i). Dense
/// matrices draw from all pairs, sparse ones from their stored edges only.
inline AffinityMatrix perturb(const AffinityMatrix& a, const NoiseSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = a.order();
  const std::size_t k = spec.edges_perturbed.value_or(n);
  CounterRng rng(seed, kNoiseStream);
  auto draw_eps = [&] {
    const double u = rng.uniform_open();
    return spec.epsilon_low + (spec.epsilon_high - spec.epsilon_low) * u;
  };

  if (a.is_dense()) {
    const std::size_t total = n * (n - 1) / 2;
    if (k > total) {
      throw DomainError("perturb: " + std::to_string(k) + " edges requested but only " +
                        std::to_string(total) + " pairs exist");
    }
    std::vector<double> table(a.dense_data().begin(), a.dense_data().end());
    for (std::size_t idx : detail::sample_distinct(total, k, rng)) {
      const auto [i, j] = detail::pair_from_index(idx, n);
      const double w = perturbed_weight(table[i * n + j], spec.level, draw_eps());
      table[i * n + j] = w;
      table[j * n + i] = w;
    }
    return AffinityMatrix::dense(n, std::move(table));
  }

  std::vector<Triplet> entries = a.upper_entries();
  std::vector<std::size_t> off_diagonal;
  for (std::size_t e = 0; e < entries.size(); ++e)
    if (entries[e].row != entries[e].col) off_diagonal.push_back(e);
  if (k > off_diagonal.size()) {
    throw DomainError("perturb: " + std::to_string(k) + " edges requested but only " +
                      std::to_string(off_diagonal.size()) + " are stored");
  }
  for (std::size_t pick : detail::sample_distinct(off_diagonal.size(), k, rng)) {
    auto& e = entries[off_diagonal[pick]];
    e.weight = perturbed_weight(e.weight, spec.level, draw_eps());
  }
  return AffinityMatrix::sparse(n, std::move(entries));
}

/// Points -> graph -> random relabeling -> optional noise, all from `seed`.
/// Ground truth maps node i of `a` to node ground_truth[i] of `b`.
inline GraphInstance make_instance(GraphKind kind, std::size_t n, std::uint64_t seed,
                                   double noise_level = 0.0) {
  GraphInstance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.noise_level = noise_level;
  inst.points = gen_points(n, seed);
  inst.a = build_graph(kind, *inst.points);
  auto [b, truth] = permute_instance(inst.a, seed);
  if (noise_level > 0.0) {
    NoiseSpec spec;
    spec.level = noise_level;
    b = perturb(b, spec, seed);
  }
  inst.b = std::move(b);
  inst.ground_truth = std::move(truth);
  return inst;
}

}  // namespace lisa
