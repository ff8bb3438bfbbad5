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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lisa/errors.hpp"

namespace lisa {

inline constexpr double kSymmetryTolerance = 1e-12;

enum class Storage { dense, sparse };

struct Triplet {
  std::size_t row;
  std::size_t col;
  double weight;
};

/// Square, symmetric, non-negative weighted adjacency matrix.
///
/// Dense matrices keep the full row-major table. Sparse matrices keep each
/// undirected edge once (row <= col) in a row-compressed layout and mirror it
/// on access, so symmetry holds by construction. Instances are immutable.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;

  /// Validates order, finiteness, non-negativity and symmetry.
  static AffinityMatrix dense(std::size_t order, std::vector<double> row_major) {
    if (order == 0) throw DimensionError("affinity matrix order must be positive");
    if (row_major.size() != order * order) {
      throw DimensionError("dense data has " + std::to_string(row_major.size()) +
                           " entries, expected " + std::to_string(order * order));
    }
    for (std::size_t i = 0; i < order; ++i) {
      for (std::size_t j = 0; j < order; ++j) {
        const double w = row_major[i * order + j];
        check_weight(w, i, j);
        if (j > i && std::abs(w - row_major[j * order + i]) > kSymmetryTolerance) {
          throw DomainError("matrix is not symmetric at (" + std::to_string(i) +
                            ", " + std::to_string(j) + ")");
        }
      }
    }
    AffinityMatrix m;
    m.order_ = order;
    m.storage_ = Storage::dense;
    m.dense_ = std::move(row_major);
    return m;
  }

  /// Builds sparse storage from undirected entries. (i, j) and (j, i) name the
  /// same edge; naming an edge twice is an error.
  static AffinityMatrix sparse(std::size_t order, std::vector<Triplet> entries) {
    if (order == 0) throw DimensionError("affinity matrix order must be positive");
    for (auto& e : entries) {
      if (e.row >= order || e.col >= order) {
        throw DimensionError("entry (" + std::to_string(e.row) + ", " +
                             std::to_string(e.col) + ") outside order " +
                             std::to_string(order));
      }
      check_weight(e.weight, e.row, e.col);
      if (e.row > e.col) std::swap(e.row, e.col);
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
      return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    AffinityMatrix m;
    m.order_ = order;
    m.storage_ = Storage::sparse;
    m.row_start_.assign(order + 1, 0);
    m.cols_.reserve(entries.size());
    m.vals_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].row == entries[k - 1].row &&
          entries[k].col == entries[k - 1].col) {
        throw DomainError("duplicate entry (" + std::to_string(entries[k].row) +
                          ", " + std::to_string(entries[k].col) + ")");
      }
      ++m.row_start_[entries[k].row + 1];
      m.cols_.push_back(entries[k].col);
      m.vals_.push_back(entries[k].weight);
    }
    for (std::size_t i = 0; i < order; ++i) m.row_start_[i + 1] += m.row_start_[i];
    return m;
  }

  std::size_t order() const noexcept { return order_; }
  Storage storage() const noexcept { return storage_; }
  bool is_dense() const noexcept { return storage_ == Storage::dense; }
  bool is_sparse() const noexcept { return storage_ == Storage::sparse; }

  /// Entry A(i, j). O(1) dense, O(log degree) sparse.
  double operator()(std::size_t i, std::size_t j) const {
    if (is_dense()) return dense_[i * order_ + j];
    if (i > j) std::swap(i, j);
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return vals_[static_cast<std::size_t>(it - cols_.begin())];
  }

  /// Count of upper-triangle entries: all i <= j pairs for dense storage,
  /// the stored edges for sparse storage.
  std::size_t stored_entries() const noexcept {
    return is_dense() ? order_ * (order_ + 1) / 2 : vals_.size();
  }

  /// Calls f(i, j, w) for every stored upper-triangle entry, i <= j, in
  /// row-major order.
  template <class F>
  void for_each_upper(F&& f) const {
    if (is_dense()) {
      for (std::size_t i = 0; i < order_; ++i)
        for (std::size_t j = i; j < order_; ++j) f(i, j, dense_[i * order_ + j]);
      return;
    }
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
        f(i, cols_[k], vals_[k]);
  }

  /// y = A x. Dense is O(n^2), sparse O(stored edges). Summation order is
  /// fixed for a given matrix.
  void multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_) {
      throw DimensionError("multiply: vector length does not match matrix order");
    }
    if (is_dense()) {
      for (std::size_t i = 0; i < order_; ++i) {
        const double* row = dense_.data() + i * order_;
        double s = 0.0;
        for (std::size_t j = 0; j < order_; ++j) s += row[j] * x[j];
        y[i] = s;
      }
      return;
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < order_; ++i) {
      const double xi = x[i];
      double si = 0.0;
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        const std::size_t j = cols_[k];
        si += vals_[k] * x[j];
        if (j != i) y[j] += vals_[k] * xi;
      }
      y[i] += si;
    }
  }

  bool is_zero() const noexcept {
    const auto& v = is_dense() ? dense_ : vals_;
    return std::all_of(v.begin(), v.end(), [](double w) { return w == 0.0; });
  }

  double frobenius_norm() const {
    double s = 0.0;
    for_each_upper([&](std::size_t i, std::size_t j, double w) {
      s += (i == j ? 1.0 : 2.0) * w * w;
    });
    return std::sqrt(s);
  }

  /// Row-major table; empty for sparse storage.
  std::span<const double> dense_data() const noexcept { return dense_; }

  AffinityMatrix to_dense() const {
    if (is_dense()) return *this;
    std::vector<double> table(order_ * order_, 0.0);
    for_each_upper([&](std::size_t i, std::size_t j, double w) {
      table[i * order_ + j] = w;
      table[j * order_ + i] = w;
    });
    return dense(order_, std::move(table));
  }

  std::vector<Triplet> upper_entries() const {
    std::vector<Triplet> out;
    out.reserve(stored_entries());
    for_each_upper([&](std::size_t i, std::size_t j, double w) { out.push_back({i, j, w}); });
    return out;
  }

  friend bool operator==(const AffinityMatrix& x, const AffinityMatrix& y) {
    return x.order_ == y.order_ && x.storage_ == y.storage_ && x.dense_ == y.dense_ &&
           x.row_start_ == y.row_start_ && x.cols_ == y.cols_ && x.vals_ == y.vals_;
  }

 private:
  static void check_weight(double w, std::size_t i, std::size_t j) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") must be finite and non-negative");
    }
  }

  std::size_t order_ = 0;
  Storage storage_ = Storage::dense;
  std::vector<double> dense_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

/// Node correspondence: source i maps to target assignment[i].
struct Matching {
  std::size_t target_size = 0;
  std::vector<std::size_t> assignment;

  std::size_t source_size() const noexcept { return assignment.size(); }

  static Matching identity(std::size_t n) {
    Matching m{n, std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) m.assignment[i] = i;
    return m;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// True iff every target lies in [0, target_size), no target is used twice
/// and there are no more sources than targets.
inline bool validate_matching(const Matching& m) {
  if (m.source_size() > m.target_size) return false;
  std::vector<bool> used(m.target_size, false);
  for (std::size_t t : m.assignment) {
    if (t >= m.target_size || used[t]) return false;
    used[t] = true;
  }
  return true;
}

/// Inverse of a permutation matching.
inline Matching inverse(const Matching& m) {
  if (m.source_size() != m.target_size || !validate_matching(m)) {
    throw DomainError("inverse requires a permutation");
  }
  Matching inv{m.target_size, std::vector<std::size_t>(m.target_size)};
  for (std::size_t i = 0; i < m.assignment.size(); ++i) inv.assignment[m.assignment[i]] = i;
  return inv;
}

namespace detail {

inline void check_pair(const AffinityMatrix& a, const AffinityMatrix& b, const Matching& m,
                       const char* op) {
  if (m.source_size() != a.order() || m.target_size != b.order()) {
    throw DimensionError(std::string(op) + ": matching is " +
                         std::to_string(m.source_size()) + "->" +
                         std::to_string(m.target_size) + " but graphs have orders " +
                         std::to_string(a.order()) + " and " + std::to_string(b.order()));
  }
  if (!validate_matching(m)) throw DomainError(std::string(op) + ": invalid matching");
}

}  // namespace detail

/// ||A - M B M^T||_F^2 evaluated entrywise as sum_ij (A_ij - B_m(i)m(j))^2.
inline double kb_discrepancy(const AffinityMatrix& a, const AffinityMatrix& b,
                             const Matching& m) {
  if (a.order() != b.order()) {
    throw DimensionError("kb_discrepancy: graphs must have equal order");
  }
  detail::check_pair(a, b, m, "kb_discrepancy");
  const std::size_t n = a.order();
  const auto& p = m.assignment;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = a(i, j) - b(p[i], p[j]);
      s += d * d;
    }
  return s;
}

/// Lawler objective m^T (A kron B) m, i.e. sum_ij A_ij * B_m(i)m(j).
inline double affinity_score(const AffinityMatrix& a, const AffinityMatrix& b,
                             const Matching& m) {
  detail::check_pair(a, b, m, "affinity_score");
  const std::size_t n = a.order();
  const auto& p = m.assignment;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * b(p[i], p[j]);
  return s;
}

struct Point {
  double x;
  double y;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Node coordinates in the unit square.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw DegenerateError("point set must not be empty");
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.x > 1.0 ||
          p.y < 0.0 || p.y > 1.0) {
        throw DomainError("point coordinates must be finite and inside [0,1]^2");
      }
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point> points_;
};

enum class GraphKind { dense_weighted, sparse_weighted, sparse_binary, external };

inline std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::dense_weighted: return "dense";
    case GraphKind::sparse_weighted: return "sparse-weighted";
    case GraphKind::sparse_binary: return "sparse-binary";
    case GraphKind::external: return "external";
  }
  return "external";
}

inline std::optional<GraphKind> parse_graph_kind(std::string_view s) {
  if (s == "dense" || s == "dense-weighted") return GraphKind::dense_weighted;
  if (s == "sparse-weighted") return GraphKind::sparse_weighted;
  if (s == "sparse-binary") return GraphKind::sparse_binary;
  if (s == "external") return GraphKind::external;
  return std::nullopt;
}

/// A matched pair with optional ground truth (source i of `a` corresponds to
/// target ground_truth[i] of `b`).
struct GraphInstance {
  AffinityMatrix a;
  AffinityMatrix b;
  std::optional<Matching> ground_truth;
  GraphKind kind = GraphKind::external;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  std::optional<PointSet> points;  // debugging only; matchers never read it

  void validate() const {
    if (noise_level < 0.0 || !std::isfinite(noise_level)) {
      throw DomainError("noise level must be non-negative");
    }
    if (ground_truth) {
      if (ground_truth->source_size() != a.order() || ground_truth->target_size != b.order()) {
        throw DimensionError("ground truth sizes do not match graph orders");
      }
      if (!validate_matching(*ground_truth)) throw DomainError("ground truth is not injective");
    }
  }
};

}  // namespace lisa
