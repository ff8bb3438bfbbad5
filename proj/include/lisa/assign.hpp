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
#include <limits>
#include <numeric>
#include <span>
#include <utility>

#include "lisa/core.hpp"
#include "lisa/workspace.hpp"

namespace lisa {

/// Dense rows x cols table of assignment profits, row-major.
class ProfitMatrix {
 public:
  ProfitMatrix() = default;
  ProfitMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  ProfitMatrix(std::size_t rows, std::size_t cols, std::span<const double> row_major)
      : rows_(rows), cols_(cols), data_(row_major.begin(), row_major.end()) {
    if (data_.size() != rows * cols) throw DimensionError("profit data size mismatch");
    for (double v : data_)
      if (!std::isfinite(v)) throw DomainError("profit entries must be finite");
  }

  /// Rank-1 profit phi phi_t^T.
  static ProfitMatrix outer(std::span<const double> phi, std::span<const double> phi_t) {
    ProfitMatrix p(phi.size(), phi_t.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
      for (std::size_t j = 0; j < phi_t.size(); ++j) p(i, j) = phi[i] * phi_t[j];
    return p;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  WorkVector<double> data_;
};

/// Sum of profit(i, m[i]).
inline double assignment_objective(const ProfitMatrix& profit, const Matching& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.assignment.size(); ++i) s += profit(i, m.assignment[i]);
  return s;
}

/// One-dimensional assignment maximizing sum_i phi[i] * phi_t[m(i)].
///
/// Both sequences are ranked in descending order (stable, so equal values keep
/// ascending index order) and rank k of phi is paired with rank k of phi_t.
/// Optimal by the rearrangement inequality, including n < m where the n
/// largest entries of phi_t are used. When n < m and phi has negative
/// entries, those take the smallest targets instead (rank k of phi with rank
/// m - n + k of phi_t), which keeps the pairing optimal. O(m log m).
inline Matching one_dim_assign(std::span<const double> phi, std::span<const double> phi_t) {
  const std::size_t n = phi.size();
  const std::size_t m = phi_t.size();
  if (n == 0) throw DimensionError("one_dim_assign: empty source sequence");
  if (n > m) {
    throw DimensionError("one_dim_assign: " + std::to_string(n) + " sources but only " +
                         std::to_string(m) + " targets");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(phi.begin(), phi.end(), finite) ||
      !std::all_of(phi_t.begin(), phi_t.end(), finite)) {
    throw DomainError("one_dim_assign: non-finite score");
  }

  auto ranking = [](std::span<const double> v) {
    WorkVector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
  };
  const auto src = ranking(phi);
  const auto dst = ranking(phi_t);

  Matching out{m, std::vector<std::size_t>(n)};
  for (std::size_t k = 0; k < n; ++k)
    out.assignment[src[k]] = phi[src[k]] >= 0.0 ? dst[k] : dst[m - n + k];
  return out;
}

/// Greedy rounding: repeatedly take the largest remaining entry and drop its
/// row and column. Ties go to the smallest row, then the smallest column.
inline Matching greedy_discretize(const ProfitMatrix& profit) {
  const std::size_t n = profit.rows();
  const std::size_t m = profit.cols();
  if (n == 0 || m == 0) throw DimensionError("greedy_discretize: empty profit matrix");
  if (n > m) throw DimensionError("greedy_discretize: more rows than columns");

  WorkVector<std::size_t> rows(n);
  WorkVector<std::size_t> cols(m);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});

  Matching out{m, std::vector<std::size_t>(n)};
  while (!rows.empty()) {
    std::size_t best_r = 0;
    std::size_t best_c = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double* row = profit.data().data() + rows[r] * m;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (row[cols[c]] > best) {
          best = row[cols[c]];
          best_r = r;
          best_c = c;
        }
      }
    }
    out.assignment[rows[best_r]] = cols[best_c];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best_r));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best_c));
  }
  return out;
}

inline constexpr std::size_t kBruteForceMaxTargets = 9;

/// Exact linear assignment by enumerating every injection. Test oracle only:
/// limited to 9 targets. Returns the first optimizer in lexicographic order.
inline std::pair<Matching, double> brute_force_lap(const ProfitMatrix& profit) {
  const std::size_t n = profit.rows();
  const std::size_t m = profit.cols();
  if (n == 0 || m == 0) throw DimensionError("brute_force_lap: empty profit matrix");
  if (n > m) throw DimensionError("brute_force_lap: more rows than columns");
  if (m > kBruteForceMaxTargets) {
    throw SizeLimitError("brute_force_lap supports at most " +
                         std::to_string(kBruteForceMaxTargets) + " targets");
  }

  std::vector<std::size_t> current(n);
  std::vector<std::size_t> best_assign(n);
  std::vector<bool> used(m, false);
  double best = -std::numeric_limits<double>::infinity();

  auto search = [&](auto&& self, std::size_t row, double acc) -> void {
    if (row == n) {
      if (acc > best) {
        best = acc;
        best_assign = current;
      }
      return;
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current[row] = c;
      self(self, row + 1, acc + profit(row, c));
      used[c] = false;
    }
  };
  search(search, 0, 0.0);
  return {Matching{m, std::move(best_assign)}, best};
}

}  // namespace lisa
