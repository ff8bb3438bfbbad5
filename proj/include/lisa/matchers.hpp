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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lisa/assign.hpp"
#include "lisa/core.hpp"
#include "lisa/spectral.hpp"
#include "lisa/workspace.hpp"

namespace lisa {

enum class Algorithm { lisa, sm, smkb };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::lisa: return "lisa";
    case Algorithm::sm: return "sm";
    case Algorithm::smkb: return "smkb";
  }
  return "lisa";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "lisa") return Algorithm::lisa;
  if (s == "sm") return Algorithm::sm;
  if (s == "smkb" || s == "sm-kb") return Algorithm::smkb;
  return std::nullopt;
}

struct MatchResult {
  Matching matching;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  Algorithm algorithm = Algorithm::lisa;
};

/// n * m cap on the Kronecker affinity SM materializes (150 x 150 nodes).
inline constexpr std::size_t kDefaultSmCap = 22500;

struct MatcherOptions {
  PowerConfig power;
  std::size_t sm_cap = kDefaultSmCap;
  /// Compute LiSA's two eigenvectors on separate threads.
  bool parallel = false;
};

/// Materialized Kronecker affinity W = B (x) A of order N = n m, acting on
/// column-stacked vec(X) for n x m matrices X, so that
/// W vec(X) = vec(A X B) when A and B are symmetric.
/// Entry W[i + j n, k + l n] = B(j, l) A(i, k). W is symmetric, so only the
/// upper triangle is held, packed row by row: N (N + 1) / 2 doubles.
class KroneckerAffinity {
 public:
  KroneckerAffinity(const AffinityMatrix& a, const AffinityMatrix& b)
      : n_(a.order()), m_(b.order()) {
    const std::size_t order = n_ * m_;
    packed_.resize(order * (order + 1) / 2);
    const AffinityMatrix ad = a.to_dense();
    const AffinityMatrix bd = b.to_dense();
    const auto av = ad.dense_data();
    const auto bv = bd.dense_data();
    std::size_t pos = 0;
    for (std::size_t j = 0; j < m_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t l = j; l < m_; ++l) {
          const double bjl = bv[j * m_ + l];
          const double* arow = av.data() + i * n_;
          for (std::size_t k = (l == j ? i : 0); k < n_; ++k) packed_[pos++] = bjl * arow[k];
        }
      }
    }
  }

  std::size_t order() const noexcept { return n_ * m_; }
  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return m_; }

  void multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t order = n_ * m_;
    if (x.size() != order || y.size() != order) {
      throw DimensionError("KroneckerAffinity::multiply: vector length mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    const double* w = packed_.data();
    for (std::size_t r = 0; r < order; ++r) {
      const double xr = x[r];
      double s = w[0] * xr;
      for (std::size_t c = r + 1; c < order; ++c) {
        const double wrc = w[c - r];
        s += wrc * x[c];
        y[c] += wrc * xr;
      }
      y[r] += s;
      w += order - r;
    }
  }

 private:
  std::size_t n_;
  std::size_t m_;
  WorkVector<double> packed_;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline void require_nonzero(const AffinityMatrix& a, const AffinityMatrix& b, const char* who) {
  if (a.order() == 0 || b.order() == 0) throw DimensionError(std::string(who) + ": empty graph");
  if (a.is_zero() || b.is_zero()) {
    throw DegenerateError(std::string(who) + ": affinity matrix is identically zero");
  }
  if (a.order() > b.order()) {
    throw DimensionError(std::string(who) + ": source graph has " + std::to_string(a.order()) +
                         " nodes, target only " + std::to_string(b.order()));
  }
}

// out = A X for row-major X with A's order rows and `cols` columns.
inline void left_multiply(const AffinityMatrix& a, std::span<const double> x, std::size_t cols,
                          std::span<double> out) {
  const std::size_t n = a.order();
  std::fill(out.begin(), out.end(), 0.0);
  if (a.is_dense()) {
    const auto av = a.dense_data();
    for (std::size_t i = 0; i < n; ++i) {
      double* orow = out.data() + i * cols;
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = av[i * n + k];
        if (aik == 0.0) continue;
        const double* xrow = x.data() + k * cols;
        for (std::size_t j = 0; j < cols; ++j) orow[j] += aik * xrow[j];
      }
    }
    return;
  }
  a.for_each_upper([&](std::size_t i, std::size_t k, double w) {
    double* oi = out.data() + i * cols;
    const double* xk = x.data() + k * cols;
    for (std::size_t j = 0; j < cols; ++j) oi[j] += w * xk[j];
    if (i != k) {
      double* ok = out.data() + k * cols;
      const double* xi = x.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) ok[j] += w * xi[j];
    }
  });
}

// out = X B for row-major X with `rows` rows and B's order columns.
inline void right_multiply(std::span<const double> x, std::size_t rows, const AffinityMatrix& b,
                           std::span<double> out) {
  const std::size_t m = b.order();
  if (b.is_dense()) {
    const auto bv = b.dense_data();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double* orow = out.data() + i * m;
      const double* xrow = x.data() + i * m;
      for (std::size_t l = 0; l < m; ++l) {
        const double xil = xrow[l];
        if (xil == 0.0) continue;
        const double* brow = bv.data() + l * m;
        for (std::size_t j = 0; j < m; ++j) orow[j] += xil * brow[j];
      }
    }
    return;
  }
  // B symmetric: row i of X B is B applied to row i of X.
  for (std::size_t i = 0; i < rows; ++i) {
    b.multiply(x.subspan(i * m, m), out.subspan(i * m, m));
  }
}

}  // namespace detail

/// Lightning spectral assignment: leading eigenvectors of A and B by power
/// iteration, then one-dimensional assignment of their entries. Never
/// allocates anything larger than O(n + m) beyond the inputs.
/// `iterations` is the larger of the two power-iteration counts.
inline MatchResult lisa_match(const AffinityMatrix& a, const AffinityMatrix& b,
                              const PowerConfig& cfg = {}, bool parallel = false) {
  const auto t0 = detail::Clock::now();
  detail::require_nonzero(a, b, "lisa_match");
  SpectralScores phi;
  SpectralScores phi_t;
  if (parallel) {
    auto pending = std::async(std::launch::async, [&] { return power_method(b, cfg); });
    phi = power_method(a, cfg);
    phi_t = pending.get();
  } else {
    phi = power_method(a, cfg);
    phi_t = power_method(b, cfg);
  }
  MatchResult out;
  out.matching = one_dim_assign(phi.values, phi_t.values);
  out.iterations = std::max(phi.iterations, phi_t.iterations);
  out.converged = phi.converged && phi_t.converged;
  out.algorithm = Algorithm::lisa;
  out.wall_seconds = detail::seconds_since(t0);
  return out;
}

/// Classic spectral matching on the materialized Kronecker affinity W:
/// power iteration from the all-ones vector, reshape to an n x m profit, then
/// greedy rounding. Throws SizeLimitError when n * m exceeds `cap`.
/// `on_step(k, X)` sees each iterate reshaped to row-major n x m.
template <class StepObserver = detail::NoStepObserver>
MatchResult sm_match(const AffinityMatrix& a, const AffinityMatrix& b, const PowerConfig& cfg = {},
                     std::size_t cap = kDefaultSmCap, StepObserver&& on_step = {}) {
  const auto t0 = detail::Clock::now();
  detail::require_nonzero(a, b, "sm_match");
  const std::size_t n = a.order();
  const std::size_t m = b.order();
  if (n * m > cap) {
    throw SizeLimitError("sm_match: the Kronecker affinity has order " + std::to_string(n * m) +
                         " = " + std::to_string(n) + " x " + std::to_string(m) +
                         ", above the cap of " + std::to_string(cap) +
                         " (the default cap corresponds to 150-node graphs)");
  }
  const KroneckerAffinity w(a, b);

  ProfitMatrix profit(n, m);
  auto reshape = [&](std::span<const double> x) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) profit(i, j) = x[i + j * n];
  };
  const SpectralScores x = power_method(w, cfg, [&](std::size_t k, std::span<const double> it) {
    reshape(it);
    on_step(k, std::span<const double>(profit.data()));
  });
  reshape(x.values);

  MatchResult out;
  out.matching = greedy_discretize(profit);
  out.iterations = x.iterations;
  out.converged = x.converged;
  out.algorithm = Algorithm::sm;
  out.wall_seconds = detail::seconds_since(t0);
  return out;
}

/// Spectral matching in matrix form: X <- A X B / max(A X B) from
/// X = 1 1^T / (n m), then greedy rounding of X. Stops once the largest
/// entrywise change is below cfg.tolerance. `on_step(k, X)` sees each
/// row-major iterate.
template <class StepObserver = detail::NoStepObserver>
MatchResult smkb_match(const AffinityMatrix& a, const AffinityMatrix& b, const PowerConfig& cfg = {},
                       StepObserver&& on_step = {}) {
  const auto t0 = detail::Clock::now();
  detail::require_nonzero(a, b, "smkb_match");
  const std::size_t n = a.order();
  const std::size_t m = b.order();
  cfg.validate(n * m);
  if (!cfg.initial_vector.empty()) {
    throw DomainError("smkb_match starts from 1 1^T / (n m); a custom start is not supported");
  }

  ProfitMatrix x(n, m, 1.0 / static_cast<double>(n * m));
  WorkVector<double> left(n * m);
  WorkVector<double> z(n * m);

  MatchResult out;
  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    detail::left_multiply(a, x.data(), m, left);
    detail::right_multiply(left, n, b, z);
    const double top = *std::max_element(z.begin(), z.end());
    if (!(top > 0.0)) {
      throw BreakdownError("smkb_match: max(A X B) = " + std::to_string(top) +
                           " at iteration " + std::to_string(k));
    }
    double step = 0.0;
    auto xv = x.data();
    for (std::size_t e = 0; e < xv.size(); ++e) {
      const double v = z[e] / top;
      step = std::max(step, std::abs(v - xv[e]));
      xv[e] = v;
    }
    out.iterations = k;
    on_step(k, std::span<const double>(x.data()));
    if (step < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.matching = greedy_discretize(x);
  out.algorithm = Algorithm::smkb;
  out.wall_seconds = detail::seconds_since(t0);
  return out;
}

inline MatchResult run_matcher(Algorithm algo, const AffinityMatrix& a, const AffinityMatrix& b,
                               const MatcherOptions& opts = {}) {
  switch (algo) {
    case Algorithm::lisa: return lisa_match(a, b, opts.power, opts.parallel);
    case Algorithm::sm: return sm_match(a, b, opts.power, opts.sm_cap);
    case Algorithm::smkb: return smkb_match(a, b, opts.power);
  }
  throw DomainError("unknown algorithm");
}

}  // namespace lisa
