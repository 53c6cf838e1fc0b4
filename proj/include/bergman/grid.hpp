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

#include <cmath>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

// Quadrature for the L^2 inner product against dv_X.
//
// CP1 family: Gauss-Legendre in the compactified radial variable
// s = |z|^2 / (1 + |z|^2) times a uniform angular rule.  In these variables
// the Fubini-Study measure is exactly (1/2pi) ds dtheta, so monomial Gram
// entries of degree q are integrated exactly once the radial order exceeds
// (q+1)/2 and the angular count exceeds q.
//
// Flat torus: product trapezoid over the fundamental domain (spectrally
// accurate for the periodic integrands that arise here).
struct QuadratureGrid {
  KaehlerModel model;
  std::vector<Complex> nodes;
  std::vector<double> weights;  // dv_X weights; sum to Vol of the cover
  int radial_order = 0;
  int angular_count = 0;
  // Radial sub-rule: integrates rotation-invariant F(t) against dv_X as
  // sum_i radial_w[i] * F(t_i), t = s/(1-s).
  std::vector<double> radial_s;
  std::vector<double> radial_w;
  int side = 0;  // torus nodes per side
  double volume = 0.0;

  int max_exact_degree() const {
    // Largest monomial weight degree q whose Gram products are exact.
    return std::min(2 * radial_order - 2, angular_count - 1);
  }
};

namespace detail {

/// Beta-integral self check: the grid must reproduce
/// int |z|^{2j} (1+|z|^2)^{-q-2} / pi dLeb = j! (q-j)! / (q+1)!
inline double beta_oracle_value(int j, int q) {
  const double lg = std::lgamma(j + 1.0) + std::lgamma(q - j + 1.0) -
                    std::lgamma(q + 2.0);
  return std::exp(lg);
}

inline double beta_quadrature(const QuadratureGrid& g, int j, int q) {
  std::vector<double> terms(g.radial_s.size());
  for (std::size_t i = 0; i < g.radial_s.size(); ++i) {
    const double s = g.radial_s[i];
    const double t = s / (1.0 - s);
    // Lebesgue integrand divided by the local dv_X density; the density
    // cancels against the stored radial weights.
    const double f =
        std::exp(j * std::log(s) + (q - j) * std::log1p(-s));
    terms[i] = g.radial_w[i] * f /
               (kPi * cp1_density_t(g.model, t) * (1.0 + t) * (1.0 + t));
  }
  return pairwise_sum(terms);
}

}  // namespace detail

/// Builds the quadrature grid.  `order` is the radial Gauss order for the
/// CP1 family (nodes per side for the torus); the angular count is 2*order.
/// p_max defaults to (order - 4) / 2 per the order precondition.
inline QuadratureGrid build_grid(const KaehlerModel& model, int order,
                                 int p_max = -1) {
  QuadratureGrid g;
  g.model = model;
  if (model.kind == ModelKind::BargmannFock)
    throw WrongModel("build_grid supports the compact models");

  if (model.kind == ModelKind::FlatTorus) {
    if (order < 4) throw OrderTooSmall("torus grid needs at least 4 nodes/side");
    g.side = order;
    const int n2 = order * order;
    g.nodes.reserve(n2);
    g.weights.assign(n2, 1.0 / static_cast<double>(n2));
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) {
        const double u = static_cast<double>(i) / order;
        const double v = static_cast<double>(j) / order;
        g.nodes.push_back(Complex(u, 0.0) + v * model.tau);
      }
    g.volume = 1.0;
    return g;
  }

  if (order < 8) throw OrderTooSmall("radial order must be at least 8");
  if (p_max < 0) p_max = (order - 4) / 2;
  if (order < 2 * p_max + 4)
    throw OrderTooSmall("radial order must be >= 2*p_max + 4");

  g.radial_order = order;
  g.angular_count = 2 * order;
  Quadrature1D gl = gauss_legendre(order, 0.0, 1.0);
  g.radial_s = gl.nodes;
  g.radial_w.resize(order);
  for (int i = 0; i < order; ++i) {
    const double s = gl.nodes[i];
    const double t = s / (1.0 - s);
    double density_ratio = 1.0;  // dv / ((1/2pi) ds dtheta)
    if (model.kind == ModelKind::PerturbedCP1) {
      const double w = 1.0 + t;
      density_ratio += model.perturbation * detail::cp1_psi(t) * w * w;
    }
    g.radial_w[i] = gl.weights[i] * density_ratio;
  }

  const int na = g.angular_count;
  g.nodes.reserve(static_cast<std::size_t>(order) * na);
  g.weights.reserve(static_cast<std::size_t>(order) * na);
  for (int i = 0; i < order; ++i) {
    const double s = g.radial_s[i];
    const double r = std::sqrt(s / (1.0 - s));
    const double w = g.radial_w[i] / na;
    for (int a = 0; a < na; ++a) {
      const double th = 2.0 * kPi * a / na;
      g.nodes.push_back(std::polar(r, th));
      g.weights.push_back(w);
    }
  }
  g.volume = pairwise_sum(g.weights);

  // Self check against the Beta oracle at the requested p_max.
  const int qchk = 2 * p_max;
  for (int j : {0, qchk / 2, qchk}) {
    const double got = detail::beta_quadrature(g, j, qchk);
    const double want = detail::beta_oracle_value(j, qchk);
    if (std::abs(got - want) > 1e-10 * std::abs(want))
      throw OrderTooSmall("Beta oracle check failed at requested p_max");
  }
  return g;
}

}  // namespace bergman
