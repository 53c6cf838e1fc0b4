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

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "bergman/errors.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

// Model Kaehler surfaces, all normalized to unit symplectic volume upstairs:
// the curvature of the polarizing line bundle L satisfies (i/2pi) R^L = omega
// and int omega = 1 (CyclicQuotientCP1 quotients carry volume 1/k downstairs).
enum class ModelKind {
  FubiniStudyCP1,
  PerturbedCP1,
  FlatTorus,
  BargmannFock,
  CyclicQuotientCP1,
};

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FubiniStudyCP1: return "fubini_study_cp1";
    case ModelKind::PerturbedCP1: return "perturbed_cp1";
    case ModelKind::FlatTorus: return "flat_torus";
    case ModelKind::BargmannFock: return "bargmann_fock";
    case ModelKind::CyclicQuotientCP1: return "cyclic_quotient_cp1";
  }
  return "unknown";
}

/// Which affine chart a CP^1 coordinate lives in; Inverted means w = 1/z.
enum class Chart { Affine, Inverted };

struct KaehlerModel {
  ModelKind kind = ModelKind::FubiniStudyCP1;
  double perturbation = 0.0;   // amplitude a in phi = a*s*(1-s), s = t/(1+t)
  Complex tau{0.0, 1.0};       // torus modulus, Im tau > 0
  int twist_degree = 0;        // degree m of the auxiliary bundle E = O(m)
  int quotient_order = 1;      // cyclic order k (CyclicQuotientCP1 only)

  bool cp1_family() const {
    return kind == ModelKind::FubiniStudyCP1 ||
           kind == ModelKind::PerturbedCP1 ||
           kind == ModelKind::CyclicQuotientCP1;
  }
  bool compact() const { return kind != ModelKind::BargmannFock; }
  /// Total Riemannian volume (= symplectic volume here).
  double volume() const {
    if (kind == ModelKind::CyclicQuotientCP1)
      return 1.0 / static_cast<double>(quotient_order);
    return 1.0;
  }
};

namespace detail {

inline void require_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw OutOfChart("non-finite chart coordinate (switch to the w = 1/z chart)");
}

/// psi(t) such that the perturbation contributes (a/pi) * psi(t) dx dy to
/// omega; psi = d/dz d/dzbar [s(1-s)] with s = t/(1+t), t = |z|^2.
inline double cp1_psi(double t) {
  const double w = 1.0 + t;
  return (t * t - 4.0 * t + 1.0) / (w * w * w * w);
}

/// Radial density h(t) of omega = h dx ^ dy for the CP1 family, t = |z|^2.
inline double cp1_density_t(const KaehlerModel& m, double t) {
  const double w = 1.0 + t;
  double h = 1.0 / (w * w);
  if (m.kind == ModelKind::PerturbedCP1) h += m.perturbation * cp1_psi(t);
  return h / kPi;
}

/// h, h', h'' with respect to t.
inline std::array<double, 3> cp1_density_derivs(const KaehlerModel& m,
                                                double t) {
  const double w = 1.0 + t;
  const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2, w5 = w4 * w, w6 = w4 * w2;
  double h = 1.0 / w2;
  double h1 = -2.0 / w3;
  double h2 = 6.0 / w4;
  if (m.kind == ModelKind::PerturbedCP1) {
    const double a = m.perturbation;
    const double q = t * t - 4.0 * t + 1.0;
    h += a * q / w4;
    h1 += a * ((2.0 * t - 4.0) / w4 - 4.0 * q / w5);
    h2 += a * (2.0 / w4 - 8.0 * (2.0 * t - 4.0) / w5 + 20.0 * q / w6);
  }
  return {h / kPi, h1 / kPi, h2 / kPi};
}

/// Density of omega in chart coordinates at z (dx dy measure).
inline double omega_density(const KaehlerModel& m, Complex z) {
  require_finite(z);
  switch (m.kind) {
    case ModelKind::FlatTorus:
      return 1.0 / m.tau.imag();
    case ModelKind::BargmannFock:
      return 1.0;
    default:
      return cp1_density_t(m, std::norm(z));
  }
}

/// Riemannian length of the radial segment [0, r] from the chart origin.
inline double radial_distance(const KaehlerModel& m, double r) {
  if (r == 0.0) return 0.0;
  if (m.kind == ModelKind::FubiniStudyCP1 ||
      m.kind == ModelKind::CyclicQuotientCP1)
    return std::atan(r) / std::sqrt(kPi);
  if (m.kind == ModelKind::BargmannFock) return r;
  if (m.kind == ModelKind::FlatTorus) return r / std::sqrt(m.tau.imag());
  // Perturbed sphere: integrate sqrt(h) along the ray (a geodesic by
  // rotational symmetry).  Substituting r = tan(theta) keeps the integrand
  // bounded out to r = infinity.
  const double theta_max = std::atan(r);
  return integrate_adaptive(
      [&](double theta) {
        const double c = std::cos(theta), rr = std::tan(theta);
        return std::sqrt(cp1_density_t(m, rr * rr)) / (c * c);
      },
      0.0, theta_max, 1e-13);
}

/// Inverse of radial_distance: |z| whose radial distance from 0 equals d.
inline double radius_for_distance(const KaehlerModel& m, double d) {
  if (d <= 0.0) return 0.0;
  if (m.kind == ModelKind::FubiniStudyCP1 ||
      m.kind == ModelKind::CyclicQuotientCP1)
    return std::tan(std::sqrt(kPi) * d);
  if (m.kind == ModelKind::BargmannFock) return d;
  if (m.kind == ModelKind::FlatTorus) return d * std::sqrt(m.tau.imag());
  double lo = 0.0, hi = 1.0;
  while (radial_distance(m, hi) < d) {
    hi *= 2.0;
    if (hi > 1e8) throw OutOfChart("radius_for_distance: beyond chart scale");
  }
  return bisect([&](double r) { return radial_distance(m, r) - d; }, lo, hi,
                1e-14);
}

// Geodesic shooting on a conformal metric h (dx^2 + dy^2).  Unit-speed
// equations with lambda = log(h)/2:
//   x'' = -lx (x'^2 - y'^2) - 2 ly x' y'
//   y'' = -ly (y'^2 - x'^2) - 2 lx x' y'
struct ShootState {
  double x, y, vx, vy;
};

inline ShootState geodesic_rhs(const KaehlerModel& m, const ShootState& s) {
  const double t = s.x * s.x + s.y * s.y;
  const auto d = cp1_density_derivs(m, t);
  const double lam_t = 0.5 * d[1] / d[0];
  const double lx = lam_t * 2.0 * s.x, ly = lam_t * 2.0 * s.y;
  ShootState out;
  out.x = s.vx;
  out.y = s.vy;
  out.vx = -lx * (s.vx * s.vx - s.vy * s.vy) - 2.0 * ly * s.vx * s.vy;
  out.vy = -ly * (s.vy * s.vy - s.vx * s.vx) - 2.0 * lx * s.vx * s.vy;
  return out;
}

inline ShootState rk4_step(const KaehlerModel& m, const ShootState& s,
                           double h) {
  auto add = [](const ShootState& a, const ShootState& b, double c) {
    return ShootState{a.x + c * b.x, a.y + c * b.y, a.vx + c * b.vx,
                      a.vy + c * b.vy};
  };
  ShootState k1 = geodesic_rhs(m, s);
  ShootState k2 = geodesic_rhs(m, add(s, k1, 0.5 * h));
  ShootState k3 = geodesic_rhs(m, add(s, k2, 0.5 * h));
  ShootState k4 = geodesic_rhs(m, add(s, k3, h));
  ShootState out = s;
  out.x += h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
  out.y += h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  out.vx += h / 6.0 * (k1.vx + 2 * k2.vx + 2 * k3.vx + k4.vx);
  out.vy += h / 6.0 * (k1.vy + 2 * k2.vy + 2 * k3.vy + k4.vy);
  return out;
}

inline ShootState shoot_start(const KaehlerModel& m, Complex x0, double phi) {
  ShootState s;
  s.x = x0.real();
  s.y = x0.imag();
  const double speed = 1.0 / std::sqrt(cp1_density_t(m, std::norm(x0)));
  s.vx = speed * std::cos(phi);
  s.vy = speed * std::sin(phi);
  return s;
}

/// Shoots a unit-speed geodesic from x0 with chart direction angle phi and
/// returns (miss, arclen) of the closest sampled approach to the target.
inline std::pair<double, double> shoot_geodesic(const KaehlerModel& m,
                                                Complex x0, Complex target,
                                                double phi, double s_max,
                                                int steps) {
  ShootState s = shoot_start(m, x0, phi);
  const double h = s_max / steps;
  double best_miss = std::abs(Complex(s.x, s.y) - target);
  double best_len = 0.0;
  for (int i = 1; i <= steps; ++i) {
    s = rk4_step(m, s, h);
    const double miss = std::abs(Complex(s.x, s.y) - target);
    if (miss < best_miss) {
      best_miss = miss;
      best_len = i * h;
    }
  }
  return {best_miss, best_len};
}

/// Endpoint of the geodesic with initial angle phi after arc length len.
inline ShootState shoot_endpoint(const KaehlerModel& m, Complex x0, double phi,
                                 double len, double step_hint) {
  ShootState s = shoot_start(m, x0, phi);
  const int steps = std::max(64, static_cast<int>(std::ceil(len / step_hint)));
  const double h = len / steps;
  for (int i = 0; i < steps; ++i) s = rk4_step(m, s, h);
  return s;
}

inline double perturbed_distance(const KaehlerModel& m, Complex x, Complex y) {
  if (x == y) return 0.0;
  // Rotate so symmetry is explicit; shoot from the smaller-radius point.
  if (std::abs(x) > std::abs(y)) std::swap(x, y);
  if (std::abs(x) < 1e-14)
    return std::abs(radial_distance(m, std::abs(y)));
  const Complex rot = std::polar(1.0, -std::arg(x));
  x *= rot;
  y *= rot;
  if (std::abs(y.imag()) < 1e-13 * std::abs(y) && y.real() >= 0.0) {
    // Same ray: the radial segment is a geodesic.
    return std::abs(radial_distance(m, y.real()) -
                    radial_distance(m, x.real()));
  }
  const double s_max = 1.25 * (radial_distance(m, x.real()) +
                               radial_distance(m, std::abs(y)) + 0.05);
  const double step_hint = s_max / 4000.0;

  // Newton polish on (phi, len), driving the endpoint onto the target.  The
  // len-derivative is the endpoint velocity; the phi-derivative comes from a
  // finite difference.  Returns the converged length, or nothing.
  auto polish = [&](double phi, double len) -> std::optional<double> {
    len = std::max(len, 8.0 * step_hint);
    for (int it = 0; it < 12; ++it) {
      const ShootState e = shoot_endpoint(m, x, phi, len, step_hint);
      const Complex r = Complex(e.x, e.y) - y;
      if (std::abs(r) < 1e-11) break;
      const double dphi = 1e-6;
      const ShootState ep = shoot_endpoint(m, x, phi + dphi, len, step_hint);
      const double j11 = (ep.x - e.x) / dphi, j21 = (ep.y - e.y) / dphi;
      const double j12 = e.vx, j22 = e.vy;
      const double det = j11 * j22 - j12 * j21;
      if (std::abs(det) < 1e-14) return std::nullopt;
      const double dp = (-r.real() * j22 + r.imag() * j12) / det;
      const double dl = (-j11 * r.imag() + j21 * r.real()) / det;
      phi += std::clamp(dp, -0.25, 0.25);
      len += std::clamp(dl, -0.2 * s_max, 0.2 * s_max);
      if (len <= 0.0) len = 4.0 * step_hint;
    }
    const ShootState efin = shoot_endpoint(m, x, phi, len, step_hint);
    if (std::abs(Complex(efin.x, efin.y) - y) > 1e-7) return std::nullopt;
    return len;
  };

  // Coarse angular scan; several directions can reach the target (short and
  // long arcs), so polish each local minimum of the miss and keep the
  // shortest converged length.
  const int nscan = 96;
  std::vector<double> miss(nscan), lens(nscan);
  for (int i = 0; i < nscan; ++i) {
    const double phi = -kPi + 2.0 * kPi * (i + 0.5) / nscan;
    auto [mi, le] = shoot_geodesic(m, x, y, phi, s_max, 1200);
    miss[i] = mi;
    lens[i] = le;
  }
  double best = 1e300;
  for (int i = 0; i < nscan; ++i) {
    const int prev = (i + nscan - 1) % nscan, next = (i + 1) % nscan;
    if (miss[i] <= miss[prev] && miss[i] <= miss[next]) {
      const double phi = -kPi + 2.0 * kPi * (i + 0.5) / nscan;
      if (auto len = polish(phi, lens[i])) best = std::min(best, *len);
    }
  }
  if (best == 1e300)
    throw Error("geodesic shooting failed to reach target point");
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public geometry surface.
// ---------------------------------------------------------------------------

struct MetricData {
  std::array<std::array<double, 2>, 2> g;  // Riemannian metric, chart frame
  double omega_density = 0.0;              // omega = h dx ^ dy
  double kappa = 1.0;                      // volume density in normal coords
  std::array<std::array<double, 2>, 2> J;  // complex structure, chart frame
};

struct CurvatureData {
  double rX = 0.0;  // scalar curvature of (X, g)
  double rE = 0.0;  // sqrt(-1) sum_i R^E(e_i, J e_i)
};

struct ModelConfig {
  ModelKind kind = ModelKind::FubiniStudyCP1;
  double perturbation = 0.0;
  Complex tau{0.0, 1.0};
  int twist_degree = 0;
  int quotient_order = 2;
};

/// Validates parameters and checks positivity / normalization of omega on a
/// coarse grid.
inline KaehlerModel build_model(const ModelConfig& cfg) {
  KaehlerModel m;
  m.kind = cfg.kind;
  switch (cfg.kind) {
    case ModelKind::FlatTorus: {
      if (!(cfg.tau.imag() > 0.0))
        throw BadModulus("flat torus requires Im tau > 0");
      if (cfg.twist_degree != 0)
        throw ConfigError("twist_degree must be 0 for the flat torus");
      m.tau = cfg.tau;
      return m;
    }
    case ModelKind::BargmannFock: {
      if (cfg.twist_degree != 0)
        throw ConfigError("twist_degree must be 0 for the Bargmann-Fock plane");
      return m;  // flat plane; no normalization check (noncompact)
    }
    case ModelKind::CyclicQuotientCP1: {
      if (cfg.quotient_order < 2)
        throw ConfigError("cyclic quotient requires order k >= 2");
      m.quotient_order = cfg.quotient_order;
      break;
    }
    case ModelKind::PerturbedCP1: {
      if (std::abs(cfg.perturbation) > 0.3 * (1.0 + 1e-12))
        throw NonPositiveForm(
            "perturbation amplitude outside the documented family range "
            "[-0.3, 0.3]");
      m.perturbation = cfg.perturbation;
      break;
    }
    case ModelKind::FubiniStudyCP1:
      break;
  }
  if (cfg.twist_degree < 0)
    throw ConfigError("twist_degree must be nonnegative");
  m.twist_degree = cfg.twist_degree;

  // Positivity of omega on a coarse radial grid (covers both poles through
  // s = t/(1+t)).
  for (int i = 0; i <= 64; ++i) {
    const double s = static_cast<double>(i) / 64.0;
    const double t = (s < 1.0) ? s / (1.0 - s) : 0.0;
    const double w = 1.0 + t;
    double val = 1.0 / (w * w);
    if (m.kind == ModelKind::PerturbedCP1)
      val += m.perturbation * detail::cp1_psi(t);
    // At s == 1 evaluate in the inverted chart: same expression at t = 0 by
    // the z -> 1/z symmetry of the family.
    if (val <= 0.0)
      throw NonPositiveForm("perturbation destroys positivity of omega");
  }

  // Unit normalization: integrate omega over CP1 with the s substitution,
  // d(omega) = (1/2pi)[1 + a psi(t) (1+t)^2] ds dtheta.
  if (m.cp1_family()) {
    Quadrature1D q = gauss_legendre(48, 0.0, 1.0);
    std::vector<double> terms(q.nodes.size());
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double s = q.nodes[i];
      const double t = s / (1.0 - s);
      const double w = 1.0 + t;
      double val = 1.0;
      if (m.kind == ModelKind::PerturbedCP1)
        val += m.perturbation * detail::cp1_psi(t) * w * w;
      terms[i] = q.weights[i] * val;
    }
    const double total = pairwise_sum(terms);
    if (std::abs(total - 1.0) > 1e-8)
      throw NonPositiveForm("omega normalization check failed");
  }
  return m;
}

/// Metric, symplectic density, complex structure and normal-coordinate
/// volume density at a chart point.  kappa is taken relative to the chart
/// origin as base point.
inline MetricData metric_at(const KaehlerModel& m, Complex z) {
  detail::require_finite(z);
  MetricData md;
  const double h = detail::omega_density(m, z);
  md.omega_density = h;
  md.g = {{{h, 0.0}, {0.0, h}}};
  md.J = {{{0.0, -1.0}, {1.0, 0.0}}};
  if (m.cp1_family()) {
    const double r = std::abs(z);
    if (r < 1e-8) {
      md.kappa = 1.0;
    } else {
      const double rho = detail::radial_distance(m, r);
      md.kappa = r * std::sqrt(h) / rho;
    }
  } else {
    md.kappa = 1.0;
  }
  return md;
}

/// Scalar curvature rX = -Delta log(h) / h and the E-curvature trace
/// rE = Delta phi_E / h for E = O(m) with its Fubini-Study fiber metric.
inline CurvatureData scalar_curvature(const KaehlerModel& m, Complex z) {
  detail::require_finite(z);
  CurvatureData c;
  if (!m.cp1_family()) return c;  // flat models
  const double t = std::norm(z);
  const auto d = detail::cp1_density_derivs(m, t);
  const double lh1 = d[1] / d[0];
  const double lh2 = d[2] / d[0] - lh1 * lh1;
  const double lap_log_h = 4.0 * (t * lh2 + lh1);
  c.rX = -lap_log_h / d[0];
  if (m.twist_degree != 0) {
    const double w = 1.0 + t;
    c.rE = 4.0 * m.twist_degree / (w * w * d[0]);
  }
  return c;
}

/// Geodesic distance between chart points.
inline double geodesic_distance(const KaehlerModel& m, Complex x, Complex y) {
  detail::require_finite(x);
  detail::require_finite(y);
  if (x == y) return 0.0;
  switch (m.kind) {
    case ModelKind::BargmannFock:
      return std::abs(x - y);
    case ModelKind::FlatTorus: {
      // Reduce the difference over the lattice Z + tau Z; metric is the flat
      // one scaled to unit area.
      Complex v = x - y;
      const double im = m.tau.imag();
      const double n0 = v.imag() / im;
      double best = 1e300;
      for (int n = static_cast<int>(std::floor(n0)) - 2;
           n <= static_cast<int>(std::ceil(n0)) + 2; ++n) {
        const Complex w = v - static_cast<double>(n) * m.tau;
        for (int k = static_cast<int>(std::floor(w.real())) - 2;
             k <= static_cast<int>(std::ceil(w.real())) + 2; ++k)
          best = std::min(best, std::abs(w - static_cast<double>(k)));
      }
      return best / std::sqrt(im);
    }
    case ModelKind::FubiniStudyCP1: {
      // Round sphere of area 1, radius 1/(2 sqrt(pi)).
      const double num = std::abs(1.0 + x * std::conj(y));
      const double den =
          std::sqrt((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
      const double cos_half = std::min(1.0, num / den);
      return std::acos(cos_half) / std::sqrt(kPi);
    }
    case ModelKind::CyclicQuotientCP1: {
      // Quotient distance: minimum over the deck group upstairs.
      KaehlerModel up = m;
      up.kind = ModelKind::FubiniStudyCP1;
      up.quotient_order = 1;
      double best = 1e300;
      for (int j = 0; j < m.quotient_order; ++j) {
        const Complex g = std::polar(1.0, 2.0 * kPi * j / m.quotient_order);
        best = std::min(best, geodesic_distance(up, g * x, y));
      }
      return best;
    }
    case ModelKind::PerturbedCP1: {
      // z -> 1/z is an isometry of the perturbed family; use it to keep the
      // shooting problem in the well-conditioned part of the chart.
      if (std::min(std::abs(x), std::abs(y)) > 1.5)
        return detail::perturbed_distance(m, 1.0 / x, 1.0 / y);
      return detail::perturbed_distance(m, x, y);
    }
  }
  throw Error("unreachable");
}

/// Distance to the singular set {0, infinity} of a cyclic quotient.
inline double distance_to_singular(const KaehlerModel& m, Complex z) {
  if (m.kind != ModelKind::CyclicQuotientCP1)
    throw WrongModel("distance_to_singular requires a cyclic quotient model");
  KaehlerModel up = m;
  up.kind = ModelKind::FubiniStudyCP1;
  const double d0 = detail::radial_distance(up, std::abs(z));
  const double total = 0.5 * std::sqrt(kPi);  // pole-to-pole distance
  return std::min(d0, total - d0);
}

}  // namespace bergman
