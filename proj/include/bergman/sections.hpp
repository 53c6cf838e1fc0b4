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
#include <cmath>
#include <complex>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

// A finite basis of holomorphic sections of L^p (x) E in a fixed chart
// trivialization.  Pointwise norms are |f_j(z)|^2 exp(-W_p(z)); W_p is kept
// in the log domain throughout because (1+|z|^2)^(-p) underflows long before
// the interesting p range ends.
struct SectionBasis {
  enum class Domain { CP1, Torus };

  KaehlerModel model;
  Domain domain = Domain::CP1;
  int p = 1;

  // CP1 family: sections are linear combinations of monomials z^deg with
  // deg drawn from `degrees`; `mix` maps the monomial basis to the stored
  // basis (identity unless deliberately mixed).
  int q = 0;  // p + m, the weight degree
  std::vector<int> degrees;
  Eigen::MatrixXcd mix;

  // Torus: theta functions with characteristics j/p, j = 0..p-1.
  int truncation = 0;

  int dim() const {
    return domain == Domain::CP1 ? static_cast<int>(degrees.size()) : p;
  }
  bool monomial_pure() const {
    return domain == Domain::CP1 && mix.size() == 0;
  }
};

/// Weighted section values at a point: weighted[j] = f_j(z) exp(-W_p(z)/2).
/// These stay O(1) for every chart point and power, unlike the raw f_j.
struct SectionValues {
  std::vector<Complex> weighted;
  double half_log_weight = 0.0;  // W_p(z)/2
};

namespace detail {

/// Log-domain weight W_p(z)/2 for the CP1 family in either chart; the
/// perturbation s(1-s) takes the same value in both charts.
inline double cp1_half_weight(const SectionBasis& b, double t) {
  double w = 0.5 * b.q * std::log1p(t);
  if (b.model.kind == ModelKind::PerturbedCP1) {
    const double s = t / (1.0 + t);
    w += 0.5 * b.p * b.model.perturbation * s * (1.0 - s);
  }
  return w;
}

/// Fills out[i] = z^{degs[i]} * exp(-half_w), stable for large degrees via
/// log-domain anchoring every few entries.
inline void weighted_monomials(const std::vector<int>& degs, Complex z,
                               double half_w, std::vector<Complex>& out) {
  const std::size_t d = degs.size();
  out.resize(d);
  if (z == Complex(0.0, 0.0)) {
    for (std::size_t i = 0; i < d; ++i)
      out[i] = (degs[i] == 0) ? Complex(std::exp(-half_w), 0.0) : Complex(0.0);
    return;
  }
  const double lnr = std::log(std::abs(z));
  const double th = std::arg(z);
  Complex cur;
  for (std::size_t i = 0; i < d; ++i) {
    if (i % 16 == 0) {
      cur = std::polar(std::exp(degs[i] * lnr - half_w), degs[i] * th);
    } else {
      const int dk = degs[i] - degs[i - 1];
      cur *= std::polar(std::exp(dk * lnr), dk * th);
    }
    out[i] = cur;
  }
}

/// Documented theta tail bound: with the summation window of half-width N
/// centered at the maximizing index, the omitted mass relative to the leading
/// term is below 4N exp(-pi p Im(tau) (N-1)^2) on the fundamental domain.
inline double theta_tail_bound(int p, double im_tau, int trunc) {
  const double e = kPi * p * im_tau * (trunc - 1.0) * (trunc - 1.0);
  return 4.0 * trunc * std::exp(-e);
}

inline int auto_truncation(int p, double im_tau) {
  for (int n = 2; n < 64; ++n)
    if (theta_tail_bound(p, im_tau, n) <= 1e-15) return n;
  return 64;
}

}  // namespace detail

/// Monomial basis of H^0(CP1, O(p+m)): holo parts {1, z, ..., z^{p+m}} with
/// weight (p+m) log(1+|z|^2) + p phi(z).
inline SectionBasis basis_cp1(const KaehlerModel& model, int p) {
  if (model.kind != ModelKind::FubiniStudyCP1 &&
      model.kind != ModelKind::PerturbedCP1)
    throw WrongModel("basis_cp1 requires a CP1 model (use basis_quotient for "
                     "cyclic quotients)");
  if (p < 1) throw ConfigError("tensor power p must be >= 1");
  SectionBasis b;
  b.model = model;
  b.domain = SectionBasis::Domain::CP1;
  b.p = p;
  b.q = p + model.twist_degree;
  b.degrees.resize(b.q + 1);
  for (int j = 0; j <= b.q; ++j) b.degrees[j] = j;
  return b;
}

/// Invariant monomials z^j, j = 0 mod k, for the cyclic quotient with the
/// linearization acting trivially on the fiber at z = 0.  L^p (x) E descends
/// as an honest bundle only when k divides p + m.
inline SectionBasis basis_quotient(const KaehlerModel& model, int p) {
  if (model.kind != ModelKind::CyclicQuotientCP1)
    throw WrongModel("basis_quotient requires a cyclic quotient model");
  if (p < 1) throw ConfigError("tensor power p must be >= 1");
  const int k = model.quotient_order;
  const int q = p + model.twist_degree;
  if (q % k != 0)
    throw IncompatiblePower(
        "p + m must be divisible by the quotient order for the trivial "
        "linearization at z = 0");
  SectionBasis b;
  b.model = model;
  b.domain = SectionBasis::Domain::CP1;
  b.p = p;
  b.q = q;
  for (int j = 0; j <= q; j += k) b.degrees.push_back(j);
  return b;
}

/// Theta-function basis of H^0 for the principally polarized torus, p theta
/// series with characteristics j/p and the flat Gaussian weight
/// exp(-2 pi p (Im z)^2 / Im tau).
inline SectionBasis basis_torus(const KaehlerModel& model, int p,
                                int truncation = 0) {
  if (model.kind != ModelKind::FlatTorus)
    throw WrongModel("basis_torus requires a flat torus model");
  if (p < 1) throw ConfigError("tensor power p must be >= 1");
  SectionBasis b;
  b.model = model;
  b.domain = SectionBasis::Domain::Torus;
  b.p = p;
  const double im = model.tau.imag();
  if (truncation == 0) truncation = detail::auto_truncation(p, im);
  if (detail::theta_tail_bound(p, im, truncation) > 1e-15)
    throw TruncationTooSmall("theta tail bound exceeds 1e-15 at this truncation");
  b.truncation = truncation;
  return b;
}

/// Applies an invertible mixing matrix to the basis (rows combine sections).
inline SectionBasis mixed(const SectionBasis& b, const Eigen::MatrixXcd& M) {
  if (b.domain != SectionBasis::Domain::CP1)
    throw WrongModel("basis mixing is supported for CP1-family bases");
  SectionBasis out = b;
  out.mix = b.monomial_pure() ? M : Eigen::MatrixXcd(M * b.mix);
  return out;
}

/// Weighted section values at a chart point.  Chart::Inverted evaluates at
/// the coordinate w in the z = 1/w chart, where the monomial z^j becomes
/// w^{q-j}.
inline SectionValues evaluate_weighted(const SectionBasis& b, Complex z,
                                       Chart chart = Chart::Affine) {
  detail::require_finite(z);
  SectionValues sv;
  if (b.domain == SectionBasis::Domain::CP1) {
    const double t = std::norm(z);
    sv.half_log_weight = detail::cp1_half_weight(b, t);
    if (chart == Chart::Affine) {
      detail::weighted_monomials(b.degrees, z, sv.half_log_weight, sv.weighted);
    } else {
      std::vector<int> idegs(b.degrees.size());
      for (std::size_t i = 0; i < b.degrees.size(); ++i)
        idegs[i] = b.q - b.degrees[i];
      detail::weighted_monomials(idegs, z, sv.half_log_weight, sv.weighted);
    }
    if (!b.monomial_pure()) {
      Eigen::Map<const Eigen::VectorXcd> v(sv.weighted.data(),
                                           static_cast<long>(sv.weighted.size()));
      Eigen::VectorXcd mixed_vals = b.mix * v;
      for (std::size_t i = 0; i < sv.weighted.size(); ++i)
        sv.weighted[i] = mixed_vals[static_cast<long>(i)];
    }
    return sv;
  }

  // Torus theta values.  Each series is summed over a window centered on the
  // dominant index, with the common scale pulled out so the weighted value
  // never overflows.
  const double im = b.model.tau.imag();
  const double re = b.model.tau.real();
  const double x = z.real(), y = z.imag();
  const int p = b.p;
  sv.half_log_weight = kPi * p * y * y / im;
  sv.weighted.resize(p);
  for (int j = 0; j < p; ++j) {
    const double a = static_cast<double>(j) / p;
    const int center = static_cast<int>(std::lround(-a - y / im));
    const int N = b.truncation;
    double max_re = -1e300;
    std::vector<double> re_parts(2 * N + 1);
    std::vector<double> im_parts(2 * N + 1);
    for (int idx = 0; idx <= 2 * N; ++idx) {
      const double nu = center - N + idx + a;
      re_parts[idx] = -kPi * p * im * nu * nu - 2.0 * kPi * p * nu * y;
      im_parts[idx] = kPi * p * re * nu * nu + 2.0 * kPi * p * nu * x;
      max_re = std::max(max_re, re_parts[idx]);
    }
    std::vector<Complex> terms(2 * N + 1);
    for (int idx = 0; idx <= 2 * N; ++idx)
      terms[idx] = std::polar(std::exp(re_parts[idx] - max_re), im_parts[idx]);
    const Complex s = pairwise_sum(terms);
    sv.weighted[j] = s * std::exp(max_re - sv.half_log_weight);
  }
  return sv;
}

/// Raw chart values f_j(z) together with the weight factor exp(-W_p/2).
/// Overflows for extreme |z| or p; meant for desk-scale checks.
inline std::pair<std::vector<Complex>, double> evaluate_raw(
    const SectionBasis& b, Complex z) {
  SectionValues sv = evaluate_weighted(b, z);
  const double w = std::exp(-sv.half_log_weight);
  std::vector<Complex> raw(sv.weighted.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = sv.weighted[i] / w;
  return {raw, w};
}

}  // namespace bergman
