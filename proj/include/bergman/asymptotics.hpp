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
#include <optional>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/model_kernel.hpp"

namespace bergman {

inline SectionBasis make_basis(const KaehlerModel& m, int p) {
  switch (m.kind) {
    case ModelKind::FubiniStudyCP1:
    case ModelKind::PerturbedCP1:
      return basis_cp1(m, p);
    case ModelKind::FlatTorus:
      return basis_torus(m, p);
    case ModelKind::CyclicQuotientCP1:
      return basis_quotient(m, p);
    case ModelKind::BargmannFock:
      break;
  }
  throw WrongModel("no finite section basis for this model kind");
}

inline int default_grid_order(const KaehlerModel& m, int p_max) {
  if (m.kind == ModelKind::FlatTorus) return 2 * p_max + 32;
  return 2 * (p_max + m.twist_degree) + 4;
}

// ---------------------------------------------------------------------------
// Expansion fits.
// ---------------------------------------------------------------------------

struct ExpansionFit {
  Complex base_point{0.0, 0.0};
  std::vector<int> p_values;
  std::vector<double> coeffs;      // b-hat_0 .. b-hat_k
  double residual_rms = 0.0;       // of the fit in the scaled variable
  double condition = 0.0;          // of the equilibrated design matrix
  bool ill_conditioned = false;    // condition > 1e10
  bool probe_enabled = false;
  double half_power = 0.0;         // coefficient of the p^{n-1/2} probe term
  double half_power_stderr = 0.0;  // its standard error from the fit
};

/// Least squares for B_p ~ sum_{r<=k} b_r p^{n-r} in the scaled variable
/// x = 1/p, with column equilibration and an SVD solve.  The optional probe
/// column x^{1/2} estimates the parity-forbidden half-power coefficient.
inline ExpansionFit fit_expansion(
    const std::vector<std::pair<int, double>>& samples, int n, int k,
    bool half_probe = false) {
  const int nsamp = static_cast<int>(samples.size());
  if (nsamp < k + 2)
    throw ConfigError("need >= k+2 p-values for an order-k expansion fit");
  const int ncols = k + 1 + (half_probe ? 1 : 0);
  Eigen::MatrixXd A(nsamp, ncols);
  Eigen::VectorXd y(nsamp);
  for (int i = 0; i < nsamp; ++i) {
    const double p = static_cast<double>(samples[i].first);
    const double x = 1.0 / p;
    y[i] = samples[i].second / std::pow(p, n);
    double c = 1.0;
    for (int r = 0; r <= k; ++r) {
      A(i, r) = c;
      c *= x;
    }
    if (half_probe) A(i, k + 1) = std::sqrt(x);
  }
  Eigen::VectorXd colnorm(ncols);
  for (int j = 0; j < ncols; ++j) {
    colnorm[j] = A.col(j).norm();
    A.col(j) /= colnorm[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd c = svd.solve(y);
  ExpansionFit fit;
  fit.p_values.reserve(samples.size());
  for (auto& s : samples) fit.p_values.push_back(s.first);
  fit.condition = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
  fit.ill_conditioned = fit.condition > 1e10;
  fit.coeffs.resize(static_cast<std::size_t>(k) + 1);
  for (int r = 0; r <= k; ++r) fit.coeffs[static_cast<std::size_t>(r)] =
      c[r] / colnorm[r];
  const Eigen::VectorXd resid = A * c - y;
  fit.residual_rms = resid.norm() / std::sqrt(static_cast<double>(nsamp));
  fit.probe_enabled = half_probe;
  if (half_probe) {
    fit.half_power = c[k + 1] / colnorm[k + 1];
    // Standard error via sigma^2 (A^T A)^{-1}; A is equilibrated so the
    // inverse comes from the SVD factors.
    const int dof = std::max(1, nsamp - ncols);
    const double sigma2 = resid.squaredNorm() / dof;
    const Eigen::VectorXd sv = svd.singularValues();
    double q = 0.0;
    for (int j = 0; j < ncols; ++j) {
      const double vj = svd.matrixV()(k + 1, j) / sv[j];
      q += vj * vj;
    }
    fit.half_power_stderr = std::sqrt(sigma2 * q) / colnorm[k + 1];
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Diagonal sweeps and the b_1 comparison.
// ---------------------------------------------------------------------------

/// B_p at the given points for every p in p_list, one column per p.
inline std::vector<std::vector<double>> diagonal_samples(
    const KaehlerModel& model, const std::vector<Complex>& points,
    const std::vector<int>& p_list, int grid_order = 0) {
  int p_max = 0;
  for (int p : p_list) p_max = std::max(p_max, p);
  if (grid_order == 0) grid_order = default_grid_order(model, p_max);
  const QuadratureGrid grid = build_grid(model, grid_order);
  std::vector<std::vector<double>> out(p_list.size());
  for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
    const SectionBasis b = make_basis(model, p_list[ip]);
    const GramFactorization f = gram(b, grid);
    out[ip].resize(points.size());
    for (std::size_t j = 0; j < points.size(); ++j)
      out[ip][j] = bergman_diagonal(b, f, points[j]);
  }
  return out;
}

struct B1Check {
  Complex x;
  double fitted_b0 = 0.0;
  double fitted_b1 = 0.0;
  double predicted_b1 = 0.0;
  double error = 0.0;  // |fitted - predicted| / max(1, |predicted|)
  ExpansionFit fit;
};

/// Fits b-hat_1 from computed densities and compares with the curvature
/// formula b_1 = (rE + rX/2)/(4 pi) evaluated by the geometry module.
/// The default fit order is 3: on perturbed models the order-2 truncation
/// bias in b-hat_1 is a few percent for p <= 128, well above the target
/// accuracy, while the extra column stays comfortably conditioned.
inline std::vector<B1Check> check_b1(const KaehlerModel& model,
                                     const std::vector<Complex>& points,
                                     const std::vector<int>& p_list,
                                     int fit_k = 3, int grid_order = 0) {
  const auto samples = diagonal_samples(model, points, p_list, grid_order);
  std::vector<B1Check> checks(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::vector<std::pair<int, double>> s(p_list.size());
    for (std::size_t ip = 0; ip < p_list.size(); ++ip)
      s[ip] = {p_list[ip], samples[ip][j]};
    B1Check c;
    c.x = points[j];
    c.fit = fit_expansion(s, 1, fit_k);
    c.fit.base_point = points[j];
    c.fitted_b0 = c.fit.coeffs[0];
    c.fitted_b1 = c.fit.coeffs[1];
    const CurvatureData curv = scalar_curvature(model, points[j]);
    c.predicted_b1 = b1(CurvatureScalars{curv.rX, curv.rE});
    c.error = std::abs(c.fitted_b1 - c.predicted_b1) /
              std::max(1.0, std::abs(c.predicted_b1));
    checks[j] = c;
  }
  return checks;
}

// ---------------------------------------------------------------------------
// Off-diagonal decay scans.
// ---------------------------------------------------------------------------

struct DecayScan {
  Complex base{0.0, 0.0};
  double direction = 0.0;
  int p = 0;
  std::vector<double> distances;
  std::vector<double> logmag;        // log |P_p(x, z_d)|
  double gaussian_exponent = 0.0;    // near-zone coefficient of d^2
  double agmon_exponent = 0.0;       // far-zone c in exp(-c sqrt(p) d)
  bool monotone = true;
  double noise_floor = 0.0;          // absolute kernel-magnitude floor
  int near_count = 0;
  int far_count = 0;
};

namespace detail {

/// Chart point at geodesic distance d from x along chart direction alpha.
inline Complex point_at_distance(const KaehlerModel& m, Complex x, double d,
                                 double alpha) {
  if (std::abs(x) < 1e-14) {
    const double r = radius_for_distance(m, d);
    return std::polar(r, alpha);
  }
  if (m.kind == ModelKind::FubiniStudyCP1) {
    // Transitive isometry group: move the base point to the origin.
    const Complex w = std::polar(std::tan(std::sqrt(kPi) * d), alpha);
    return (w + x) / (1.0 - std::conj(x) * w);
  }
  if (m.kind == ModelKind::FlatTorus)
    return x + std::polar(d * std::sqrt(m.tau.imag()), alpha);
  throw Error("decay scans from a nonzero base point need a homogeneous model");
}

}  // namespace detail

/// Samples |P_p(x, .)| along a geodesic ray and fits the near-zone Gaussian
/// exponent (coefficient of d^2, with a d^4 correction column) and the
/// far-zone Agmon exponent.
inline DecayScan offdiag_decay_scan(const KaehlerModel& model, Complex x,
                                    int p, const std::vector<double>& distances,
                                    double direction = 0.0,
                                    int grid_order = 0) {
  DecayScan scan;
  scan.base = x;
  scan.direction = direction;
  scan.p = p;
  scan.distances = distances;
  std::sort(scan.distances.begin(), scan.distances.end());
  // Stay inside the injectivity scale of the model.
  const double inj = (model.kind == ModelKind::FlatTorus)
                         ? 0.5 / std::sqrt(model.tau.imag())
                         : 0.5 * std::sqrt(kPi);
  if (!scan.distances.empty() && scan.distances.back() >= 0.98 * inj)
    throw Error("decay scan distance beyond the injectivity scale");
  if (grid_order == 0) grid_order = default_grid_order(model, p);
  const QuadratureGrid grid = build_grid(model, grid_order);
  const SectionBasis b = make_basis(model, p);
  const GramFactorization f = gram(b, grid);

  const double bx = bergman_diagonal(b, f, x);
  const double dim = static_cast<double>(b.dim());
  const double trace_rel =
      std::abs(kernel_trace(b, f, grid) - dim) / dim;
  scan.noise_floor = std::max(1e-14, 10.0 * trace_rel) * bx;

  scan.logmag.resize(scan.distances.size());
  for (std::size_t i = 0; i < scan.distances.size(); ++i) {
    const Complex z = detail::point_at_distance(model, x, scan.distances[i],
                                                direction);
    scan.logmag[i] = std::log(std::abs(bergman_offdiag(b, f, x, z)));
  }

  // Monotonicity above the numerical floor.
  double prev = std::log(bx);
  for (std::size_t i = 0; i < scan.distances.size(); ++i) {
    if (scan.logmag[i] > std::log(1e-13 * bx) && scan.logmag[i] >= prev)
      scan.monotone = false;
    prev = scan.logmag[i];
  }

  // Near zone: d <= 3/sqrt(p), fit log(|P|/p^n) = c0 + c1 d^2 + c2 d^4.
  const double near_cut = 3.0 / std::sqrt(static_cast<double>(p));
  std::vector<int> near_idx, far_idx;
  for (std::size_t i = 0; i < scan.distances.size(); ++i) {
    if (scan.distances[i] <= near_cut)
      near_idx.push_back(static_cast<int>(i));
    else if (std::exp(scan.logmag[i]) > 1e3 * scan.noise_floor)
      far_idx.push_back(static_cast<int>(i));
  }
  scan.near_count = static_cast<int>(near_idx.size());
  scan.far_count = static_cast<int>(far_idx.size());
  if (near_idx.size() >= 4) {
    Eigen::MatrixXd A(near_idx.size(), 3);
    Eigen::VectorXd rhs(near_idx.size());
    for (std::size_t r = 0; r < near_idx.size(); ++r) {
      const double d2 = scan.distances[static_cast<std::size_t>(near_idx[r])] *
                        scan.distances[static_cast<std::size_t>(near_idx[r])];
      A(static_cast<long>(r), 0) = 1.0;
      A(static_cast<long>(r), 1) = d2;
      A(static_cast<long>(r), 2) = d2 * d2;
      rhs[static_cast<long>(r)] =
          scan.logmag[static_cast<std::size_t>(near_idx[r])] - std::log(dim);
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
    scan.gaussian_exponent = c[1];
  }
  if (far_idx.empty() && !near_idx.empty() &&
      near_idx.size() < scan.distances.size())
    throw BelowFloor("all far-zone samples sit below the noise floor");
  if (far_idx.size() >= 3) {
    std::vector<double> xs(far_idx.size()), ys(far_idx.size());
    for (std::size_t r = 0; r < far_idx.size(); ++r) {
      xs[r] = std::sqrt(static_cast<double>(p)) *
              scan.distances[static_cast<std::size_t>(far_idx[r])];
      ys[r] = scan.logmag[static_cast<std::size_t>(far_idx[r])] -
              std::log(static_cast<double>(p));
    }
    auto [a0, slope] = linear_fit(xs, ys);
    (void)a0;
    scan.agmon_exponent = -slope;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Orbifold profile.
// ---------------------------------------------------------------------------

struct OrbifoldProfile {
  std::vector<std::pair<int, double>> fixed_ratio;  // (p, B^orb(0)/p)
  bool ratio_monotone = true;
  double max_quadruple_ratio = 0.0;  // deviation(4p)/deviation(p)
  std::vector<std::array<double, 2>> envelope;  // (p d^2, log |corr|)
  double envelope_slope = 0.0;
  double envelope_r2 = 0.0;
  double equator_b0 = 0.0;  // smooth-locus fit at |z| = 1
  double equator_b1 = 0.0;
};

/// Fixed-point blow-up ratio and the off-fixed-point Gaussian correction
/// envelope.  The correction is measured relative to the smooth cover:
/// corr(z) = B^orb_p(z) / B^cover_p(z) - 1, whose log-envelope is linear in
/// p d^2 at the model rate -(pi/2)|1 - g|^2 = -2 pi sin^2(pi/k), i.e.
/// -2 pi for k = 2 and -3 pi/2 for k = 3 (steeper in measurement when the
/// paired group elements beat against each other).
inline OrbifoldProfile orbifold_profile(const KaehlerModel& model,
                                        const std::vector<int>& p_list,
                                        int grid_order = 0) {
  if (model.kind != ModelKind::CyclicQuotientCP1)
    throw WrongModel("orbifold_profile requires a cyclic quotient model");
  const int k = model.quotient_order;
  int p_max = 0;
  for (int p : p_list) p_max = std::max(p_max, p);
  if (grid_order == 0) grid_order = default_grid_order(model, p_max);
  const QuadratureGrid grid = build_grid(model, grid_order);

  KaehlerModel cover = model;
  cover.kind = ModelKind::FubiniStudyCP1;
  cover.quotient_order = 1;
  const QuadratureGrid cover_grid = build_grid(cover, grid_order);

  OrbifoldProfile prof;
  // Sample window for the envelope in the scaled variable p d^2; narrower
  // for k >= 3 to stay clear of the phase oscillation of the paired group
  // elements.
  const double w_lo = (k == 2) ? 0.10 : 0.06;
  const double w_hi = (k == 2) ? 0.50 : 0.30;
  std::vector<std::pair<int, double>> equator_orb;

  for (int p : p_list) {
    const SectionBasis borb = make_basis(model, p);
    const GramFactorization forb = gram(borb, grid);
    const SectionBasis bcov = basis_cp1(cover, p);
    const GramFactorization fcov = gram(bcov, cover_grid);

    const double ratio = bergman_diagonal(borb, forb, Complex(0, 0)) / p;
    prof.fixed_ratio.emplace_back(p, ratio);

    for (int iw = 0; iw < 6; ++iw) {
      const double w = w_lo + (w_hi - w_lo) * iw / 5.0;
      const double d = std::sqrt(w / p);
      const Complex z(detail::radius_for_distance(model, d), 0.0);
      const double corr = bergman_diagonal(borb, forb, z) /
                              bergman_diagonal(bcov, fcov, z) -
                          1.0;
      if (std::abs(corr) > 1e-13)
        prof.envelope.push_back({p * d * d, std::log(std::abs(corr))});
    }
    equator_orb.emplace_back(p, bergman_diagonal(borb, forb, Complex(1, 0)));
  }

  for (std::size_t i = 1; i < prof.fixed_ratio.size(); ++i)
    if (prof.fixed_ratio[i].second >= prof.fixed_ratio[i - 1].second)
      prof.ratio_monotone = false;
  for (auto& [p, r] : prof.fixed_ratio) {
    for (auto& [p4, r4] : prof.fixed_ratio) {
      if (p4 == 4 * p) {
        const double dev = std::abs(r - k);
        const double dev4 = std::abs(r4 - k);
        if (dev > 0.0)
          prof.max_quadruple_ratio =
              std::max(prof.max_quadruple_ratio, dev4 / dev);
      }
    }
  }
  if (prof.envelope.size() >= 4) {
    std::vector<double> xs, ys;
    for (auto& e : prof.envelope) {
      xs.push_back(e[0]);
      ys.push_back(e[1]);
    }
    auto [a0, slope] = linear_fit(xs, ys);
    (void)a0;
    prof.envelope_slope = slope;
    prof.envelope_r2 = linear_fit_r2(xs, ys);
  }
  if (equator_orb.size() >= 4) {
    ExpansionFit fit = fit_expansion(equator_orb, 1, 2);
    prof.equator_b0 = fit.coeffs[0];
    prof.equator_b1 = fit.coeffs[1];
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Fubini-Study pullback comparison.
// ---------------------------------------------------------------------------

struct PullbackReport {
  int p = 0;
  double sup_dev = 0.0;  // sup |(1/p) phi_p^* omega_FS / omega - 1|
};

/// Computes the relative deviation (Delta log B_p) / (4 pi p h) on a radial
/// sample grid; for Kaehler models this is the scalar form of the embedding
/// pullback comparison.
inline PullbackReport fubini_study_pullback(const KaehlerModel& model, int p,
                                            int grid_order = 0) {
  if (model.kind == ModelKind::CyclicQuotientCP1)
    throw WrongModel("pullback comparison applies to the smooth models");
  if (grid_order == 0) grid_order = default_grid_order(model, p);
  const QuadratureGrid grid = build_grid(model, grid_order);
  const SectionBasis b = make_basis(model, p);
  const GramFactorization f = gram(b, grid);

  auto log_b = [&](Complex z) {
    return std::log(bergman_diagonal(b, f, z));
  };
  auto deviation = [&](Complex z, double step) {
    const Complex dx(step, 0.0), dy(0.0, step);
    const double lap = (log_b(z + dx) + log_b(z - dx) + log_b(z + dy) +
                        log_b(z - dy) - 4.0 * log_b(z)) /
                       (step * step);
    const double h = detail::omega_density(model, z);
    return lap / (4.0 * kPi * p * h);
  };

  std::vector<Complex> pts;
  if (model.kind == ModelKind::FlatTorus) {
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j)
        pts.push_back(Complex(i / 5.0, 0.0) + (j / 5.0) * model.tau);
  } else {
    for (int i = 1; i <= 12; ++i) {
      const double s = i / 13.0;
      const double r = std::sqrt(s / (1.0 - s));
      pts.push_back(std::polar(r, 0.0));
      pts.push_back(std::polar(r, kPi / 5.0));
    }
  }

  PullbackReport rep;
  rep.p = p;
  for (Complex z : pts) {
    double scale = 1.0;
    if (model.cp1_family()) scale = 1.0 + std::norm(z);
    const double step = 0.02 * scale;
    const double d1 = deviation(z, step);
    const double d2 = deviation(z, 0.5 * step);
    if (std::abs(d1 - d2) > 0.25 * std::max(std::abs(d2), 1e-7))
      throw GridTooCoarse("pullback stencil failed the step-halving check");
    rep.sup_dev = std::max(rep.sup_dev, std::abs(d2));
  }
  return rep;
}

}  // namespace bergman
