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

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/grid.hpp"
#include "bergman/sections.hpp"

namespace bergman {

// Gram matrix of a section basis under the L^2 product, plus the triangular
// transform T with T G T^* = I (rows of T give the orthonormalized basis in
// terms of the raw one).  For quotient models the stored Gram is the
// downstairs one: (1/k) times the integral over the CP1 cover.
struct GramFactorization {
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd transform;
  double condition = 1.0;
  bool diagonal = false;  // true when the Gram was assembled radially

  /// Orthonormal-frame coefficient vector d(x) = T conj(v(x)); kernels are
  /// P(x,y) = d(x)^H d(y).
  Eigen::VectorXcd coeffs(const SectionValues& sv) const {
    const long d = static_cast<long>(sv.weighted.size());
    Eigen::VectorXcd v(d);
    for (long i = 0; i < d; ++i)
      v[i] = std::conj(sv.weighted[static_cast<std::size_t>(i)]);
    if (diagonal) return transform.diagonal().cwiseProduct(v);
    return transform * v;
  }
};

struct KernelSample {
  int p = 0;
  std::string model;
  std::string gauge = "unit frame along the affine chart";
  std::vector<std::pair<Complex, Complex>> points;  // (x, y) pairs
  std::vector<Complex> values;
};

namespace detail {

inline void check_grid_for_basis(const SectionBasis& b,
                                 const QuadratureGrid& g) {
  if (b.domain == SectionBasis::Domain::CP1) {
    if (g.radial_order == 0)
      throw WrongModel("CP1 basis requires a CP1 grid");
    if (b.q > g.max_exact_degree())
      throw OrderTooSmall("grid order insufficient for the basis degree");
  } else {
    if (g.side == 0) throw WrongModel("torus basis requires a torus grid");
    if (g.side < 2 * b.p + 8)
      throw OrderTooSmall("torus grid needs at least 2p + 8 nodes per side");
  }
}

/// Exact radial Gram for unmixed monomial bases on rotation-invariant
/// models: G_jj = int s^j (1-s)^{q-j} e^{-p a s(1-s)} with the grid's radial
/// rule, off-diagonal entries vanishing by angular exactness.
inline Eigen::MatrixXcd gram_radial(const SectionBasis& b,
                                    const QuadratureGrid& g) {
  const int d = b.dim();
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  const double a = (b.model.kind == ModelKind::PerturbedCP1)
                       ? b.model.perturbation
                       : 0.0;
  std::vector<double> terms(g.radial_s.size());
  for (int idx = 0; idx < d; ++idx) {
    const int j = b.degrees[static_cast<std::size_t>(idx)];
    for (std::size_t i = 0; i < g.radial_s.size(); ++i) {
      const double s = g.radial_s[i];
      const double logv = j * std::log(s) + (b.q - j) * std::log1p(-s) -
                          b.p * a * s * (1.0 - s);
      terms[i] = g.radial_w[i] * std::exp(logv);
    }
    G(idx, idx) = pairwise_sum(terms);
  }
  return G;
}

/// Generic Gram by chunked node sweeps; deterministic chunk order.
inline Eigen::MatrixXcd gram_nodes(const SectionBasis& b,
                                   const QuadratureGrid& g) {
  const int d = b.dim();
  const std::size_t chunk = 2048;
  const std::size_t nchunks = num_chunks(g.nodes.size(), chunk);
  std::vector<Eigen::MatrixXcd> partial(nchunks);
  parallel_chunks(
      g.nodes.size(), chunk,
      [&](std::size_t c, std::size_t lo, std::size_t hi) {
        Eigen::MatrixXcd V(static_cast<long>(hi - lo), d);
        SectionValues sv;
        for (std::size_t i = lo; i < hi; ++i) {
          sv = evaluate_weighted(b, g.nodes[i]);
          const double sw = std::sqrt(g.weights[i]);
          for (int j = 0; j < d; ++j)
            V(static_cast<long>(i - lo), j) =
                sw * sv.weighted[static_cast<std::size_t>(j)];
        }
        Eigen::MatrixXcd Gc = Eigen::MatrixXcd::Zero(d, d);
        Gc.selfadjointView<Eigen::Lower>().rankUpdate(V.adjoint(), 1.0);
        partial[c] = Gc;
      });
  Eigen::MatrixXcd G = pairwise_sum(partial);
  G = G.selfadjointView<Eigen::Lower>();
  return G;
}

inline Eigen::VectorXd sup_norms(const SectionBasis& b,
                                 const QuadratureGrid& g) {
  const int d = b.dim();
  Eigen::VectorXd sup = Eigen::VectorXd::Zero(d);
  SectionValues sv;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sv = evaluate_weighted(b, g.nodes[i]);
    for (int j = 0; j < d; ++j)
      sup[j] = std::max(sup[j], std::abs(sv.weighted[static_cast<std::size_t>(j)]));
  }
  return sup;
}

}  // namespace detail

/// Assembles the Gram matrix and its orthonormalizing transform.
inline GramFactorization gram(const SectionBasis& b, const QuadratureGrid& g) {
  detail::check_grid_for_basis(b, g);
  GramFactorization f;
  const int d = b.dim();
  const bool radial = b.monomial_pure() && b.model.cp1_family();
  f.gram = radial ? detail::gram_radial(b, g) : detail::gram_nodes(b, g);
  if (b.model.kind == ModelKind::CyclicQuotientCP1)
    f.gram *= b.model.volume();  // downstairs norm = (1/k) * upstairs
  f.diagonal = radial;

  if (radial) {
    Eigen::VectorXd diag = f.gram.diagonal().real();
    if ((diag.array() <= 0.0).any())
      throw IndefiniteGram("nonpositive diagonal Gram entry");
    f.transform = Eigen::MatrixXcd::Zero(d, d);
    f.transform.diagonal() = diag.array().rsqrt().matrix().cast<Complex>();
    f.condition = diag.maxCoeff() / diag.minCoeff();
    return f;
  }

  Eigen::LLT<Eigen::MatrixXcd> llt(f.gram);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(d);
  if (llt.info() != Eigen::Success) {
    // Retry once after per-section sup-normalization; Gram entries can span
    // many orders of magnitude at large p.
    scale = detail::sup_norms(b, g);
    if ((scale.array() <= 0.0).any())
      throw IndefiniteGram("section with vanishing sup norm");
    Eigen::MatrixXcd Gs = f.gram;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Gs(i, j) /= scale[i] * scale[j];
    llt.compute(Gs);
    if (llt.info() != Eigen::Success)
      throw IndefiniteGram("Gram factorization failed after pre-scaling");
  }
  Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd T =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(d, d));
  // Fold the pre-scaling back so transform applies to the raw basis.
  for (int j = 0; j < d; ++j) T.col(j) /= scale[j];
  f.transform = T;
  double dmax = 0.0, dmin = 1e300;
  for (int i = 0; i < d; ++i) {
    const double v = std::abs(L(i, i));
    dmax = std::max(dmax, v);
    dmin = std::min(dmin, v);
  }
  f.condition = (dmax / dmin) * (dmax / dmin);
  return f;
}

/// Bergman density B_p(z) = sum_i |S_i(z)|^2 in the orthonormal basis.
inline double bergman_diagonal(const SectionBasis& b,
                               const GramFactorization& f, Complex z) {
  return f.coeffs(evaluate_weighted(b, z)).squaredNorm();
}

/// Off-diagonal kernel P_p(x, y) in the unit-frame gauge along the chart.
inline Complex bergman_offdiag(const SectionBasis& b,
                               const GramFactorization& f, Complex x,
                               Complex y) {
  return f.coeffs(evaluate_weighted(b, x))
      .dot(f.coeffs(evaluate_weighted(b, y)));
}

/// Orbifold Bergman kernel from the invariant basis.  Equals the
/// group-averaged kernel of the CP1 cover; tests exercise that identity.
inline Complex orbifold_kernel(const SectionBasis& b,
                               const GramFactorization& f, Complex x,
                               Complex y) {
  if (b.model.kind != ModelKind::CyclicQuotientCP1)
    throw WrongModel("orbifold_kernel requires a cyclic quotient basis");
  return bergman_offdiag(b, f, x, y);
}

/// Evaluates the kernel over a list of point pairs into a tagged sample
/// set, checking the positivity and Cauchy-Schwarz invariants on the way.
inline KernelSample sample_kernel(
    const SectionBasis& b, const GramFactorization& f,
    const std::vector<std::pair<Complex, Complex>>& pairs) {
  KernelSample ks;
  ks.p = b.p;
  ks.model = to_string(b.model.kind);
  ks.points = pairs;
  ks.values.reserve(pairs.size());
  for (auto& [x, y] : pairs) {
    const Complex v = bergman_offdiag(b, f, x, y);
    const double bx = bergman_diagonal(b, f, x);
    const double by = bergman_diagonal(b, f, y);
    if (!(bx > 0.0) || !(by > 0.0))
      throw Error("kernel sample: nonpositive diagonal value");
    if (std::norm(v) > bx * by * (1.0 + 1e-12))
      throw Error("kernel sample: Cauchy-Schwarz bound violated");
    ks.values.push_back(v);
  }
  return ks;
}

/// Quadrature of B_p over X; equals dim H^0 up to quadrature error.
inline double kernel_trace(const SectionBasis& b, const GramFactorization& f,
                           const QuadratureGrid& g) {
  const std::size_t chunk = 2048;
  const std::size_t nchunks = num_chunks(g.nodes.size(), chunk);
  std::vector<double> partial(nchunks, 0.0);
  parallel_chunks(g.nodes.size(), chunk,
                  [&](std::size_t c, std::size_t lo, std::size_t hi) {
                    std::vector<double> terms(hi - lo);
                    for (std::size_t i = lo; i < hi; ++i)
                      terms[i - lo] =
                          g.weights[i] * bergman_diagonal(b, f, g.nodes[i]);
                    partial[c] = pairwise_sum(terms);
                  });
  double total = pairwise_sum(partial);
  if (b.model.kind == ModelKind::CyclicQuotientCP1)
    total *= b.model.volume();  // integral lives downstairs
  return total;
}

/// Quadrature of P(x,.) P(., y) over X minus P(x, y); the reproducing
/// property drives this to zero.
inline Complex reproducing_residual(const SectionBasis& b,
                                    const GramFactorization& f,
                                    const QuadratureGrid& g, Complex x,
                                    Complex y) {
  const Eigen::VectorXcd dx = f.coeffs(evaluate_weighted(b, x));
  const Eigen::VectorXcd dy = f.coeffs(evaluate_weighted(b, y));
  std::vector<Complex> terms(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Eigen::VectorXcd dw = f.coeffs(evaluate_weighted(b, g.nodes[i]));
    terms[i] = g.weights[i] * dx.dot(dw) * dw.dot(dy);
  }
  double vol_factor =
      (b.model.kind == ModelKind::CyclicQuotientCP1) ? b.model.volume() : 1.0;
  return vol_factor * pairwise_sum(terms) - dx.dot(dy);
}

}  // namespace bergman
