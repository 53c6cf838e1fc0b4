/*
 * Copyright 2026 The bergman authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bergman/errors.hpp"

namespace bergman {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Deterministic reductions.
//
// All quadrature sums go through pairwise summation over a fixed index order,
// so results are bit-reproducible independent of thread count.
// ---------------------------------------------------------------------------

template <typename T>
T pairwise_sum(std::span<const T> v) {
  const std::size_t n = v.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = v[0];
    for (std::size_t i = 1; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

// ---------------------------------------------------------------------------
// Thread pool helper.  BERGMAN_THREADS caps the worker count; chunking is a
// fixed function of the range only, never of the thread count.
// ---------------------------------------------------------------------------

inline unsigned max_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BERGMAN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

/// Runs fn(chunk_index, begin, end) over [0,n) split into fixed-size chunks.
/// Chunk boundaries depend only on n and chunk, so per-chunk results are
/// stable across thread counts.
inline void parallel_chunks(std::size_t n, std::size_t chunk,
                            const std::function<void(std::size_t, std::size_t,
                                                     std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  const unsigned nthreads =
      std::min<std::size_t>(max_threads(), nchunks);
  if (nthreads <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < nchunks; c += nthreads)
        fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    });
  }
  for (auto& th : pool) th.join();
}

inline std::size_t num_chunks(std::size_t n, std::size_t chunk) {
  return (n + chunk - 1) / chunk;
}

// ---------------------------------------------------------------------------
// Gauss quadrature rules.
// ---------------------------------------------------------------------------

struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1,1], Newton iteration on the Legendre recurrence.
inline Quadrature1D gauss_legendre(int n) {
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    q.weights[n - 1 - i] = q.weights[i];
  }
  return q;
}

/// Gauss-Legendre rule mapped to [a,b].
inline Quadrature1D gauss_legendre(int n, double a, double b) {
  Quadrature1D q = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

/// Gauss-Hermite rule for weight exp(-x^2) on the real line.
inline Quadrature1D gauss_hermite(int n) {
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double sqrt_pi = std::sqrt(kPi);
  const int m = (n + 1) / 2;
  double x = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    // Standard initial guesses for the largest roots downward.
    if (i == 0) {
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      x -= 1.14 * std::pow(static_cast<double>(n), 0.426) / x;
    } else if (i == 2) {
      x = 1.86 * x - 0.86 * q.nodes[n - 1];
    } else if (i == 3) {
      x = 1.91 * x - 0.91 * q.nodes[n - 2];
    } else {
      x = 2.0 * x - q.nodes[n - i + 1];
    }
    for (int it = 0; it < 100; ++it) {
      // Orthonormal Hermite recurrence.
      double p0 = 1.0 / std::sqrt(sqrt_pi), p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = x * std::sqrt(2.0 / (j + 1.0)) * p1 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p2;
      }
      pp = std::sqrt(2.0 * n) * p1;
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-14) break;
    }
    q.nodes[n - 1 - i] = x;
    q.nodes[i] = -x;
    q.weights[n - 1 - i] = 2.0 / (pp * pp);
    q.weights[i] = q.weights[n - 1 - i];
  }
  return q;
}

// ---------------------------------------------------------------------------
// Small solver helpers.
// ---------------------------------------------------------------------------

/// Adaptive Gauss-Legendre on [a,b]: doubles the order until two successive
/// evaluations agree to tol (relative to max(1,|I|)).
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double tol = 1e-12,
                                 int max_order = 2048) {
  double prev = 0.0;
  bool have_prev = false;
  for (int n = 16; n <= max_order; n *= 2) {
    Quadrature1D q = gauss_legendre(n, a, b);
    std::vector<double> terms(n);
    for (int i = 0; i < n; ++i) terms[i] = q.weights[i] * f(q.nodes[i]);
    double val = pairwise_sum(terms);
    if (have_prev && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val)))
      return val;
    prev = val;
    have_prev = true;
  }
  throw QuadratureDiverged("integrate_adaptive: no convergence at max order");
}

/// Bisection on a bracketing interval; f(a) and f(b) must have opposite signs.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw Error("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0 || 0.5 * (b - a) < tol) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section minimizer for a unimodal function on [a,b].
inline double golden_min(const std::function<double(double)>& f, double a,
                         double b, double tol = 1e-10) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Ordinary least squares y ~ a + b*x; returns {a, b}.
inline std::pair<double, double> linear_fit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double b = (n * sxy - sx * sy) / denom;
  const double a = (sy - b * sx) / n;
  return {a, b};
}

/// Coefficient of determination for y ~ a + b*x.
inline double linear_fit_r2(const std::vector<double>& x,
                            const std::vector<double>& y) {
  auto [a, b] = linear_fit(x, y);
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - (a + b * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace bergman
