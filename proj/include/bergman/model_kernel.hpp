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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

// Flat-space model kernels on R^{2n} = C^n.  The curvature operator of the
// polarization acts on the j-th complex line with eigenvalue a_j > 0; the
// Kaehler normalization used on the manifolds sets every a_j = 2 pi.
//
// Pairing convention: operator functions even in the curvature act per real
// 2-plane as the scalar a_j; the odd part contributes the antisymmetric
// pairing <JZ, Z'> which vanishes on the diagonal.  All kernels here are
// restricted to the function component (the grading operator acts by zero).
struct ModelSpectrum {
  int n = 1;
  std::vector<double> a;  // ascending, all positive

  static ModelSpectrum kaehler(int n = 1) {
    ModelSpectrum s;
    s.n = n;
    s.a.assign(static_cast<std::size_t>(n), 2.0 * kPi);
    return s;
  }
  double det_c() const {
    double v = 1.0;
    for (double x : a) v *= x;
    return v;
  }
  double trace() const {
    double v = 0.0;
    for (double x : a) v += x;
    return v;
  }
  double min_a() const {
    double v = a.empty() ? 0.0 : a[0];
    for (double x : a) v = std::min(v, x);
    return v;
  }
  bool kaehler_normalized(double tol = 1e-12) const {
    for (double x : a)
      if (std::abs(x - 2.0 * kPi) > tol) return false;
    return true;
  }
};

/// Curvature inputs at the base point, n = 1.  rX is the scalar curvature,
/// rE the trace sqrt(-1) sum_i R^E(e_i, J e_i).  The constant-curvature
/// tensor R(u,v)w = K(<v,w> u - <u,w> v) with K = rX/2 reproduces rX under
/// the scalar-curvature contraction, and R^E = -(i/2) rE on the area form.
struct CurvatureScalars {
  double rX = 0.0;
  double rE = 0.0;
  double gauss_k() const { return 0.5 * rX; }
};

/// Constant-curvature R(u,v)w in the chart frame (n = 1).
inline std::array<double, 2> constant_curvature_r(
    double gauss_k, const std::array<double, 2>& u,
    const std::array<double, 2>& v, const std::array<double, 2>& w) {
  const double vw = v[0] * w[0] + v[1] * w[1];
  const double uw = u[0] * w[0] + u[1] * w[1];
  return {gauss_k * (vw * u[0] - uw * v[0]), gauss_k * (vw * u[1] - uw * v[1])};
}

/// Line-bundle curvature R^E(u,v) = -(i/2) rE (u1 v2 - u2 v1).
inline Complex line_bundle_re(double rE, const std::array<double, 2>& u,
                              const std::array<double, 2>& v) {
  return Complex(0.0, -0.5 * rE) * (u[0] * v[1] - u[1] * v[0]);
}

namespace detail {

inline void check_dim(std::span<const double> Z, const ModelSpectrum& s) {
  if (Z.size() != static_cast<std::size_t>(2 * s.n))
    throw Error("model kernel point has wrong dimension");
}

}  // namespace detail

/// Bergman kernel of the model operator: the orthogonal projection onto its
/// kernel in L^2(R^{2n}).
inline Complex model_bergman(std::span<const double> Z,
                             std::span<const double> Zp,
                             const ModelSpectrum& spec) {
  detail::check_dim(Z, spec);
  detail::check_dim(Zp, spec);
  double re = 0.0, im = 0.0, pref = 1.0;
  for (int j = 0; j < spec.n; ++j) {
    const double a = spec.a[static_cast<std::size_t>(j)];
    const double x1 = Z[2 * j], x2 = Z[2 * j + 1];
    const double y1 = Zp[2 * j], y2 = Zp[2 * j + 1];
    pref *= a / (2.0 * kPi);
    const double dx = x1 - y1, dy = x2 - y2;
    re += -0.25 * a * (dx * dx + dy * dy);
    im += -0.5 * a * (x1 * y2 - x2 * y1);
  }
  return pref * std::exp(Complex(re, im));
}

/// Mehler heat kernel of the model operator; converges to model_bergman as
/// u -> infinity at rate exp(-2 u min a).
inline Complex model_heat_kernel(std::span<const double> Z,
                                 std::span<const double> Zp, double u,
                                 const ModelSpectrum& spec) {
  if (!(u > 0.0)) throw Error("model_heat_kernel requires u > 0");
  detail::check_dim(Z, spec);
  detail::check_dim(Zp, spec);
  double re = 0.0, im = 0.0, pref = 1.0;
  for (int j = 0; j < spec.n; ++j) {
    const double a = spec.a[static_cast<std::size_t>(j)];
    const double x1 = Z[2 * j], x2 = Z[2 * j + 1];
    const double y1 = Zp[2 * j], y2 = Zp[2 * j + 1];
    pref *= a / (2.0 * kPi * (-std::expm1(-2.0 * u * a)));
    const double coth = 1.0 / std::tanh(u * a);
    re += -0.25 * a * coth * (x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2) +
          0.5 * a * coth * (x1 * y1 + x2 * y2);
    im += -0.5 * a * (x1 * y2 - x2 * y1);
  }
  return pref * std::exp(Complex(re, im));
}

/// Leading heat coefficient on the function component:
/// b_{0,u} = prod_j a_j / (2 pi (1 - e^{-2 u a_j})).
inline double b0u(double u, const ModelSpectrum& spec) {
  if (!(u > 0.0)) throw Error("b0u requires u > 0");
  double v = 1.0;
  for (double a : spec.a) v *= a / (2.0 * kPi * (-std::expm1(-2.0 * u * a)));
  return v;
}

// ---------------------------------------------------------------------------
// The model operator as a finite-difference stencil (n = 1, Kaehler
// normalization): Q0 = -Lap + pi^2 |Z|^2 - 2 pi + 2 i pi grad along JZ.
// ---------------------------------------------------------------------------

struct GridField2D {
  double extent = 4.0;  // field lives on [-extent, extent]^2
  int n = 0;            // points per side
  Eigen::MatrixXcd v;   // v(i, j) = f(x_i, y_j)

  double step() const { return 2.0 * extent / (n - 1); }
  double coord(int i) const { return -extent + i * step(); }

  static GridField2D sample(double extent, int n,
                            const std::function<Complex(double, double)>& f) {
    GridField2D g;
    g.extent = extent;
    g.n = n;
    g.v.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.v(i, j) = f(g.coord(i), g.coord(j));
    return g;
  }
};

/// Applies Q0 with second-order central differences.  Boundary ring is set
/// to zero; consumers sample the interior.  When diag_tol > 0, the h vs 2h
/// Laplacian discrepancy on the deep interior must stay below diag_tol
/// relative to the field scale.
inline GridField2D q0_apply(const GridField2D& f, const ModelSpectrum& spec,
                            double diag_tol = 0.0) {
  if (!spec.kaehler_normalized() || spec.n != 1)
    throw Error("q0_apply implements the n=1 Kaehler-normalized model");
  if (f.n < 5) throw GridTooCoarse("need at least a 5x5 field");
  GridField2D out = f;
  out.v.setZero();
  const double h = f.step();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 0.5 / h;
  for (int i = 1; i < f.n - 1; ++i) {
    const double x = f.coord(i);
    for (int j = 1; j < f.n - 1; ++j) {
      const double y = f.coord(j);
      const Complex lap = (f.v(i + 1, j) + f.v(i - 1, j) + f.v(i, j + 1) +
                           f.v(i, j - 1) - 4.0 * f.v(i, j)) *
                          inv_h2;
      const Complex fx = (f.v(i + 1, j) - f.v(i - 1, j)) * inv_2h;
      const Complex fy = (f.v(i, j + 1) - f.v(i, j - 1)) * inv_2h;
      const Complex angular = Complex(0.0, 2.0 * kPi) * (-y * fx + x * fy);
      out.v(i, j) = -lap +
                    (kPi * kPi * (x * x + y * y) - 2.0 * kPi) * f.v(i, j) +
                    angular;
    }
  }
  if (diag_tol > 0.0) {
    double scale = f.v.cwiseAbs().maxCoeff() / (h * h);
    double worst = 0.0;
    for (int i = 2; i < f.n - 2; ++i)
      for (int j = 2; j < f.n - 2; ++j) {
        const Complex lap1 = (f.v(i + 1, j) + f.v(i - 1, j) + f.v(i, j + 1) +
                              f.v(i, j - 1) - 4.0 * f.v(i, j)) /
                             (h * h);
        const Complex lap2 = (f.v(i + 2, j) + f.v(i - 2, j) + f.v(i, j + 2) +
                              f.v(i, j - 2) - 4.0 * f.v(i, j)) /
                             (4.0 * h * h);
        worst = std::max(worst, std::abs(lap1 - lap2));
      }
    if (worst > diag_tol * scale)
      throw GridTooCoarse("Laplacian step-halving diagnostic exceeded");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second-order perturbation coefficient J_{2,u}(0,0), n = 1.
// ---------------------------------------------------------------------------

/// The second perturbation operator applied to the heat Gaussian: all
/// curvature contractions collapse (n = 1) to
///   [ (pi/2) rE t - rE/2 + (pi^2/12) rX t^2 - (pi/6) rX coth(2 pi u1) t ]
/// times exp(-pi t / (2 tanh(2 pi u1))), t = |Z|^2.
inline Complex q2_apply_gaussian(double u1, const CurvatureScalars& curv,
                                 const std::array<double, 2>& Z) {
  const double t = Z[0] * Z[0] + Z[1] * Z[1];
  const double coth = 1.0 / std::tanh(2.0 * kPi * u1);
  const double bracket = 0.5 * kPi * curv.rE * t - 0.5 * curv.rE +
                         (kPi * kPi / 12.0) * curv.rX * t * t -
                         (kPi / 6.0) * curv.rX * coth * t;
  return Complex(bracket * std::exp(-0.5 * kPi * t * coth), 0.0);
}

/// J_{2,u}(0,0) by direct quadrature of the Volterra double integral:
/// Gauss-Legendre in u1 (order doubled until 1e-8 agreement) and tensor
/// Gauss-Hermite over the plane (likewise).
inline double j2u_volterra(double u, const CurvatureScalars& curv,
                           double tol = 1e-8) {
  if (!(u > 0.0)) throw Error("j2u_volterra requires u > 0");
  if (u > 8.0)
    throw Error("j2u_volterra integrand conditioning limits u to <= 8");

  auto inner = [&](double u1, int gh_order) {
    // int bracket(Z) exp(-c |Z|^2) dZ with the combined Gaussian width.
    const double c = 0.5 * kPi * (1.0 / std::tanh(2.0 * kPi * (u - u1)) +
                                  1.0 / std::tanh(2.0 * kPi * u1));
    Quadrature1D gh = gauss_hermite(gh_order);
    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    // Undo the u1-side Gaussian inside q2_apply_gaussian so the weight is
    // carried once by the Hermite rule.
    std::vector<double> terms;
    terms.reserve(gh.nodes.size() * gh.nodes.size());
    for (double xi : gh.nodes)
      for (double eta : gh.nodes) {
        const std::array<double, 2> Z{xi * inv_sqrt_c, eta * inv_sqrt_c};
        const double t = Z[0] * Z[0] + Z[1] * Z[1];
        const double gauss_u1 =
            std::exp(-0.5 * kPi * t / std::tanh(2.0 * kPi * u1));
        terms.push_back(q2_apply_gaussian(u1, curv, Z).real() / gauss_u1);
      }
    std::size_t idx = 0;
    std::vector<double> weighted(terms.size());
    for (double wx : gh.weights)
      for (double wy : gh.weights) weighted[idx] = wx * wy * terms[idx], ++idx;
    return pairwise_sum(weighted) / c;
  };

  auto inner_converged = [&](double u1) {
    double prev = inner(u1, 8);
    for (int order = 16; order <= 64; order *= 2) {
      const double cur = inner(u1, order);
      if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur)))
        return cur;
      prev = cur;
    }
    throw QuadratureDiverged("inner plane quadrature did not converge");
  };

  auto outer_integrand = [&](double u1) {
    const double pre = 1.0 / (std::expm1(-4.0 * kPi * u1) *
                              std::expm1(-4.0 * kPi * (u - u1)));
    return -pre * inner_converged(u1);
  };

  double prev = 0.0;
  bool have = false;
  for (int order = 16; order <= 1024; order *= 2) {
    Quadrature1D gl = gauss_legendre(order, 0.0, u);
    std::vector<double> terms(gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      terms[i] = gl.weights[i] * outer_integrand(gl.nodes[i]);
    const double val = pairwise_sum(terms);
    if (have && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val)))
      return val;
    prev = val;
    have = true;
  }
  throw QuadratureDiverged("outer u1 quadrature did not converge");
}

/// Closed form of J_{2,u}(0,0).  With
///   E(u) = (u/2)(coth(2 pi u) - 1) - 1/(4 pi)
///   M(u) = (3u/4) csch^2(2 pi u) - (3/(8 pi)) coth(2 pi u)
/// the value is -(1 - e^{-4 pi u})^{-n} [ E rE + (rX/3) M ]; the u -> inf
/// limit is (rE + rX/2)/(4 pi).  A series branch avoids the 0/0 cancellation
/// at small u.
inline double j2u_closed(double u, const CurvatureScalars& curv, int n = 1) {
  if (!(u > 0.0)) throw Error("j2u_closed requires u > 0");
  double E, M;
  if (u < 1e-3) {
    const double u2 = u * u;
    E = -0.5 * u + (kPi / 3.0) * u2 -
        (4.0 * kPi * kPi * kPi / 45.0) * u2 * u2 +
        (32.0 * std::pow(kPi, 5) / 945.0) * u2 * u2 * u2;
    M = -0.5 * u + (4.0 / 15.0) * kPi * kPi * u * u2 -
        (16.0 / 105.0) * std::pow(kPi, 4) * u * u2 * u2;
  } else {
    const double x = 2.0 * kPi * u;
    const double em = -std::expm1(-2.0 * x);      // 1 - e^{-2x}
    const double coth = 1.0 / std::tanh(x);
    const double csch2 = 4.0 * std::exp(-2.0 * x) / (em * em);
    E = 0.5 * u * (2.0 * std::exp(-2.0 * x) / em) - 0.25 / kPi;
    M = 0.75 * u * csch2 - (3.0 / (8.0 * kPi)) * coth;
  }
  const double pre = std::pow(-std::expm1(-4.0 * kPi * u), n);
  return -(E * curv.rE + curv.rX / 3.0 * M) / pre;
}

/// Distortion coefficient b_1 = (rE + rX/2) / (4 pi) for a line bundle E.
inline double b1(const CurvatureScalars& curv) {
  return (curv.rE + 0.5 * curv.rX) / (4.0 * kPi);
}

}  // namespace bergman
