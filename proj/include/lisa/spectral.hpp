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
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lisa/core.hpp"
#include "lisa/rng.hpp"
#include "lisa/workspace.hpp"

namespace lisa {

/// Anything that can apply a symmetric matrix to a vector.
template <class Op>
concept SymmetricOperator = requires(const Op& op, std::span<const double> x, std::span<double> y) {
  { op.order() } -> std::convertible_to<std::size_t>;
  op.multiply(x, y);
};

struct PowerConfig {
  double tolerance = 1e-4;
  std::size_t max_iterations = 1000;
  /// Starting vector; the all-ones vector when empty.
  std::vector<double> initial_vector;

  void validate(std::size_t order) const {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      throw DomainError("power method tolerance must be positive");
    }
    if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
    if (!initial_vector.empty()) {
      if (initial_vector.size() != order) {
        throw DimensionError("initial vector length does not match operator order");
      }
      for (double v : initial_vector)
        if (!std::isfinite(v)) throw DomainError("initial vector must be finite");
    }
  }
};

/// Max-normalized leading eigenvector estimate.
struct SpectralScores {
  std::vector<double> values;
  double dominant_value = 0.0;  // max(A x) at the final iterate
  std::size_t iterations = 0;
  bool converged = false;
};

struct EigenPairEstimate {
  SpectralScores vector;
  double value = 0.0;
};

namespace detail {

struct NoStepObserver {
  void operator()(std::size_t, std::span<const double>) const noexcept {}
};

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace detail

/// Copy of v scaled to unit 2-norm. Throws DegenerateError for the zero vector.
inline std::vector<double> unit_vector(std::span<const double> v) {
  const double n = detail::norm2(v);
  if (!(n > 0.0)) throw DegenerateError("cannot normalize the zero vector");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

/// Flips v in place when it points away from ref.
inline void align_sign(std::span<const double> ref, std::span<double> v) {
  if (detail::dot(ref, v) < 0.0)
    for (double& x : v) x = -x;
}

/// Power iteration x <- A x / max(A x).
///
/// Starts from cfg.initial_vector (all ones by default) and stops once the
/// infinity norm of the step falls below cfg.tolerance, or after
/// cfg.max_iterations steps with converged = false. `on_step(k, x)` sees every
/// iterate. Throws DegenerateError for a zero matrix and BreakdownError when
/// max(A x) is not positive.
template <SymmetricOperator Op, class StepObserver = detail::NoStepObserver>
SpectralScores power_method(const Op& op, const PowerConfig& cfg = {},
                            StepObserver&& on_step = {}) {
  const std::size_t n = op.order();
  if (n == 0) throw DimensionError("power method on an empty operator");
  cfg.validate(n);
  if constexpr (requires { op.is_zero(); }) {
    if (op.is_zero()) throw DegenerateError("power method on the zero matrix");
  }

  WorkVector<double> x(n, 1.0);
  if (!cfg.initial_vector.empty()) std::copy(cfg.initial_vector.begin(), cfg.initial_vector.end(), x.begin());
  WorkVector<double> z(n);

  SpectralScores out;
  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    op.multiply(x, z);
    const double top = *std::max_element(z.begin(), z.end());
    if (!(top > 0.0)) {
      throw BreakdownError("power method: max(A x) = " + std::to_string(top) +
                           " at iteration " + std::to_string(k));
    }
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = z[i] / top;
      step = std::max(step, std::abs(v - x[i]));
      x[i] = v;
    }
    out.iterations = k;
    on_step(k, std::span<const double>(x));
    if (step < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  op.multiply(x, z);
  out.dominant_value = *std::max_element(z.begin(), z.end());
  out.values.assign(x.begin(), x.end());
  return out;
}

namespace detail {

// v <- v - (u^T v) u for unit u.
inline void project_out(std::span<const double> u, std::span<double> v) {
  const double c = dot(u, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
}

// Scale so the entry of largest magnitude (first one on ties) becomes +1.
inline void max_magnitude_normalize(std::span<double> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  const double pivot = v[arg];
  for (double& x : v) x /= pivot;
  v[arg] = 1.0;
}

}  // namespace detail

/// Second eigenpair by power iteration on v -> A v - l1 (u^T v) u, where u is
/// the unit-norm leading vector. Returns the remaining eigenvalue of largest
/// magnitude. The iterate is kept at unit 2-norm with a consistent sign and is
/// re-orthogonalized against u every step; the returned vector is rescaled so
/// its largest-magnitude entry is +1.
template <SymmetricOperator Op>
EigenPairEstimate second_eigenpair(const Op& op, const EigenPairEstimate& first,
                                   const PowerConfig& cfg = {}) {
  const std::size_t n = op.order();
  if (n == 0) throw DimensionError("second_eigenpair on an empty operator");
  if (first.vector.values.size() != n) {
    throw DimensionError("leading eigenvector length does not match operator order");
  }
  cfg.validate(n);
  if constexpr (requires { op.is_zero(); }) {
    if (op.is_zero()) throw DegenerateError("second_eigenpair on the zero matrix");
  }
  const std::vector<double> lead = unit_vector(first.vector.values);
  const double lambda1 = first.value;

  WorkVector<double> v(n);
  if (!cfg.initial_vector.empty()) {
    std::copy(cfg.initial_vector.begin(), cfg.initial_vector.end(), v.begin());
  } else {
    CounterRng rng(0, kSpectralStream);
    for (double& x : v) x = 0.5 + rng.uniform();
  }
  WorkVector<double> w(n);

  auto apply = [&](std::span<const double> in, std::span<double> out) {
    op.multiply(in, out);
    const double c = detail::dot(lead, in);
    for (std::size_t i = 0; i < n; ++i) out[i] -= lambda1 * c * lead[i];
    detail::project_out(lead, out);
  };
  auto normalize = [&](std::span<double> x, std::size_t k) {
    const double nrm = detail::norm2(x);
    if (!(nrm > 0.0)) {
      throw BreakdownError("deflated iteration collapsed to zero at iteration " +
                           std::to_string(k));
    }
    for (double& e : x) e /= nrm;
  };

  detail::project_out(lead, v);
  normalize(v, 0);

  EigenPairEstimate out;
  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    apply(v, w);
    normalize(w, k);
    align_sign(v, w);
    const double step = detail::max_abs_diff(v, w);
    std::swap(v, w);
    out.vector.iterations = k;
    if (step < cfg.tolerance) {
      out.vector.converged = true;
      break;
    }
  }
  apply(v, w);
  out.value = detail::dot(v, w);
  out.vector.dominant_value = out.value;
  out.vector.values.assign(v.begin(), v.end());
  detail::max_magnitude_normalize(out.vector.values);
  return out;
}

/// Leading eigenpair from power_method, with value = max(A x).
template <SymmetricOperator Op>
EigenPairEstimate leading_eigenpair(const Op& op, const PowerConfig& cfg = {}) {
  EigenPairEstimate e;
  e.vector = power_method(op, cfg);
  e.value = e.vector.dominant_value;
  return e;
}

/// rho = lambda1 - lambda2, clamped at zero.
template <SymmetricOperator Op>
double eigengap(const Op& op, const PowerConfig& cfg = {}) {
  const EigenPairEstimate first = leading_eigenpair(op, cfg);
  const EigenPairEstimate second = second_eigenpair(op, first, cfg);
  return std::max(0.0, first.value - second.value);
}

/// Upper bound on ||phi - phi~||_2 for unit leading eigenvectors of A and
/// A + E, given ||E||_F and the eigengap rho of A. Returns nullopt when
/// sqrt(2) ||E||_F > rho / 2, where the bound does not apply.
inline std::optional<double> perturbation_bound(double e_frobenius, double rho) {
  if (!(e_frobenius >= 0.0) || !std::isfinite(e_frobenius)) {
    throw DomainError("perturbation norm must be finite and non-negative");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("eigengap must be positive");
  const double scaled = std::sqrt(2.0) * e_frobenius;
  if (scaled > rho / 2.0) return std::nullopt;
  return 4.0 * e_frobenius / (rho - scaled);
}

}  // namespace lisa
