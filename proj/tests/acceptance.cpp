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

// End-to-end acceptance suite.  Each criterion prints a single PASS/FAIL
// line with its key measured quantities; the process exits nonzero when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <random>

#include "bergman/asymptotics.hpp"

using namespace bergman;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(int idx, const char* name, bool pass, double elapsed,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%.1fs) %s\n", pass ? "PASS" : "FAIL",
              idx, name, elapsed, detail.c_str());
  if (!pass) ++g_failures;
}

KaehlerModel make(ModelKind kind, double a = 0.0, int twist = 0, int k = 2) {
  ModelConfig c;
  c.kind = kind;
  c.perturbation = a;
  c.twist_degree = twist;
  c.quotient_order = k;
  return build_model(c);
}

// --------------------------------------------------------------------------
// 1. Exact models: CP1 density constant and equal to p+m+1; torus density
//    equal to p; both to 1e-8 relative.
// --------------------------------------------------------------------------
void criterion1() {
  Timer t;
  double worst = 0.0;
  const std::vector<Complex> pts{Complex(0, 0), Complex(0.6, -0.3),
                                 Complex(1.0, 1.0), Complex(8.0, -2.0)};
  for (int twist : {0, 2}) {
    const KaehlerModel m = make(ModelKind::FubiniStudyCP1, 0.0, twist);
    const QuadratureGrid g = build_grid(m, default_grid_order(m, 64));
    for (int p : {16, 32, 64}) {
      const SectionBasis b = basis_cp1(m, p);
      const GramFactorization f = gram(b, g);
      for (Complex z : pts)
        worst = std::max(worst, std::abs(bergman_diagonal(b, f, z) /
                                             (p + twist + 1.0) -
                                         1.0));
    }
  }
  {
    const KaehlerModel m = make(ModelKind::FlatTorus);
    const QuadratureGrid g = build_grid(m, default_grid_order(m, 64));
    for (int p : {16, 32, 64}) {
      const SectionBasis b = basis_torus(m, p);
      const GramFactorization f = gram(b, g);
      for (Complex z : {Complex(0.1, 0.2), Complex(0.45, 0.8)})
        worst = std::max(worst,
                         std::abs(bergman_diagonal(b, f, z) / p - 1.0));
    }
  }
  const double el = t.seconds();
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |B_p/(p+m+1) - 1| = %.2e (tol 1e-8)",
                worst);
  report(1, "exact models B_p = p+m+1 and B_p = p", worst <= 1e-8 && el < 30.0,
         el, buf);
}

// --------------------------------------------------------------------------
// 2. Curvature formula on the perturbed sphere: fitted b1 vs (1/8pi) rX at
//    10 points, p <= 128, within 2e-2 relative.
// --------------------------------------------------------------------------
void criterion2() {
  Timer t;
  const KaehlerModel m = make(ModelKind::PerturbedCP1, 0.2);
  std::vector<Complex> pts;
  for (int i = 1; i <= 10; ++i) {
    const double s = i / 11.0;
    pts.push_back(std::polar(std::sqrt(s / (1.0 - s)), 0.3 * i));
  }
  const std::vector<int> p_list{8, 12, 16, 24, 32, 48, 64, 96, 128};
  const auto checks = check_b1(m, pts, p_list);
  double worst = 0.0;
  for (const auto& c : checks)
    worst = std::max(worst, std::abs(c.fitted_b1 - c.predicted_b1) /
                                std::abs(c.predicted_b1));
  const double el = t.seconds();
  char buf[128];
  std::snprintf(buf, sizeof buf, "max rel err b1 = %.2e (tol 2e-2)", worst);
  report(2, "perturbed-sphere b1 matches (1/8pi) rX", worst <= 2e-2 &&
         el < 300.0, el, buf);
}

// --------------------------------------------------------------------------
// 3. Volterra coefficient equals the closed form on a 3x4 sweep, and the
//    closed form converges to b1 exponentially with slope <= -2 pi.
// --------------------------------------------------------------------------
void criterion3() {
  Timer t;
  const std::vector<CurvatureScalars> curvs{
      {8.0 * kPi, 0.0}, {0.0, 4.0 * kPi}, {8.0 * kPi, 4.0 * kPi}};
  double worst = 0.0;
  for (const auto& curv : curvs)
    for (double u : {0.5, 1.0, 2.0, 4.0}) {
      const double closed = j2u_closed(u, curv);
      const double volt = j2u_volterra(u, curv);
      worst = std::max(worst, std::abs(volt - closed) /
                                  std::max(1.0, std::abs(closed)));
    }
  double worst_slope = -1e300, worst_limit = 0.0;
  for (const auto& curv : curvs) {
    std::vector<double> us, logs;
    for (double u = 1.0; u <= 2.51; u += 0.25) {
      us.push_back(u);
      logs.push_back(std::log(std::abs(j2u_closed(u, curv) - b1(curv))));
    }
    auto [c0, slope] = linear_fit(us, logs);
    (void)c0;
    worst_slope = std::max(worst_slope, slope);
    worst_limit = std::max(worst_limit,
                           std::abs(j2u_closed(6.0, curv) - b1(curv)) /
                               std::max(1.0, std::abs(b1(curv))));
  }
  const double el = t.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max volterra-closed rel = %.2e (tol 1e-6), limit gap %.1e, "
                "slope = %.2f (bound %.2f)",
                worst, worst_limit, worst_slope, -2.0 * kPi);
  report(3, "heat-coefficient oracle chain", worst <= 1e-6 &&
         worst_limit <= 1e-12 && worst_slope <= -2.0 * kPi && el < 60.0, el,
         buf);
}

// --------------------------------------------------------------------------
// 4. Model kernels: Mehler semigroup, heat equation residual second order,
//    long-time convergence to the projector, reproducing projector.
// --------------------------------------------------------------------------
void criterion4() {
  Timer t;
  const ModelSpectrum spec = ModelSpectrum::kaehler(1);
  using Vec2 = std::array<double, 2>;

  double semigroup_worst = 0.0;
  {
    const Vec2 Z{0.3, -0.2}, Zp{-0.5, 0.4};
    for (auto [u, v] : std::vector<std::pair<double, double>>{{0.5, 0.5},
                                                              {1.0, 2.0}}) {
      Quadrature1D gl = gauss_legendre(120, -5.0, 5.0);
      std::vector<Complex> terms;
      terms.reserve(gl.nodes.size() * gl.nodes.size());
      for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const Vec2 W{gl.nodes[i], gl.nodes[j]};
          terms.push_back(gl.weights[i] * gl.weights[j] *
                          model_heat_kernel(Z, W, u, spec) *
                          model_heat_kernel(W, Zp, v, spec));
        }
      const Complex conv = pairwise_sum(terms);
      const Complex direct = model_heat_kernel(Z, Zp, u + v, spec);
      semigroup_worst = std::max(semigroup_worst,
                                 std::abs(conv - direct) / std::abs(direct));
    }
  }

  double heat_ratio = 0.0;
  {
    const Vec2 Zp{0.4, 0.1};
    const double u = 0.35, du = 1e-4;
    auto residual = [&](int n) {
      auto field = [&](double uu) {
        return GridField2D::sample(2.5, n, [&](double x, double y) {
          const Vec2 Z{x, y};
          return model_heat_kernel(Z, Zp, uu, spec);
        });
      };
      const GridField2D f = field(u), fp = field(u + du), fm = field(u - du);
      const GridField2D qf = q0_apply(f, spec);
      double worst = 0.0;
      for (int i = n / 4; i < 3 * n / 4; ++i)
        for (int j = n / 4; j < 3 * n / 4; ++j)
          worst = std::max(worst,
                           std::abs((fp.v(i, j) - fm.v(i, j)) / (2.0 * du) +
                                    qf.v(i, j)));
      return worst;
    };
    heat_ratio = residual(201) / residual(101);
  }

  double slope = 0.0;
  {
    const std::vector<Vec2> pts = {
        {0.0, 0.0}, {1.0, 0.0}, {0.5, -0.5}, {1.5, 1.0}, {2.0, 0.0}};
    std::vector<double> us = {0.8, 1.15, 1.5, 1.85, 2.2}, logs;
    for (double u : us) {
      double sup = 0.0;
      for (auto& Z : pts)
        for (auto& Zp : pts)
          sup = std::max(sup, std::abs(model_heat_kernel(Z, Zp, u, spec) -
                                       model_bergman(Z, Zp, spec)));
      logs.push_back(std::log(sup));
    }
    auto [c0, sl] = linear_fit(us, logs);
    (void)c0;
    slope = sl;
  }

  double reproducing = 0.0;
  {
    const Vec2 Z{0.6, 0.2}, Zp{-0.3, 0.5};
    Quadrature1D gl = gauss_legendre(140, -6.0, 6.0);
    std::vector<Complex> terms;
    terms.reserve(gl.nodes.size() * gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const Vec2 W{gl.nodes[i], gl.nodes[j]};
        terms.push_back(gl.weights[i] * gl.weights[j] *
                        model_bergman(Z, W, spec) *
                        model_bergman(W, Zp, spec));
      }
    const Complex conv = pairwise_sum(terms);
    const Complex direct = model_bergman(Z, Zp, spec);
    reproducing = std::abs(conv - direct) / std::abs(direct);
  }

  const double el = t.seconds();
  const bool pass = semigroup_worst <= 1e-7 && heat_ratio <= 0.35 &&
                    slope <= -2.0 * kPi && reproducing <= 1e-7;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "semigroup %.1e (1e-7), h-ratio %.2f (0.35), slope %.2f "
                "(%.2f), reproducing %.1e (1e-7)",
                semigroup_worst, heat_ratio, slope, -2.0 * kPi, reproducing);
  report(4, "flat-model kernel identities", pass, el, buf);
}

// --------------------------------------------------------------------------
// 5. Off-diagonal decay at p = 64 on both round and perturbed spheres.
// --------------------------------------------------------------------------
void criterion5() {
  Timer t;
  bool pass = true;
  std::string detail;
  const int p = 64;
  const double sp = 8.0;
  std::vector<double> ds;
  for (int i = 0; i < 12; ++i) ds.push_back((0.4 + 2.6 * i / 11.0) / sp);
  for (int i = 0; i < 12; ++i) ds.push_back(3.05 / sp + (0.475 - 3.05 / sp) *
                                            (i + 1) / 12.0);
  for (double a : {0.0, 0.2}) {
    const KaehlerModel m =
        (a == 0.0) ? make(ModelKind::FubiniStudyCP1)
                   : make(ModelKind::PerturbedCP1, a);
    const DecayScan scan = offdiag_decay_scan(m, {0, 0}, p, ds);
    const double rel =
        std::abs(scan.gaussian_exponent + 0.5 * kPi * p) / (0.5 * kPi * p);
    char buf[96];
    std::snprintf(buf, sizeof buf, "[a=%.1f: near rel %.3f, agmon %.2f] ", a,
                  rel, scan.agmon_exponent);
    detail += buf;
    pass = pass && rel <= 0.05 && scan.agmon_exponent > 0.0 && scan.monotone;
  }
  const double el = t.seconds();
  report(5, "off-diagonal Gaussian and Agmon decay", pass && el < 120.0, el,
         detail);
}

// --------------------------------------------------------------------------
// 6. Orbifold: group-average identity, fixed-point ratio -> k, correction
//    envelope linear in p d^2.
// --------------------------------------------------------------------------
void criterion6() {
  Timer t;
  bool pass = true;
  std::string detail;

  // Invariant-basis kernel vs group-averaged cover kernel at k = 2.
  {
    const KaehlerModel mq = make(ModelKind::CyclicQuotientCP1, 0, 0, 2);
    const KaehlerModel cover = make(ModelKind::FubiniStudyCP1);
    const int p = 16;
    const QuadratureGrid g = build_grid(mq, 40);
    const QuadratureGrid gc = build_grid(cover, 40);
    const SectionBasis b = basis_quotient(mq, p);
    const GramFactorization f = gram(b, g);
    const SectionBasis bc = basis_cp1(cover, p);
    const GramFactorization fc = gram(bc, gc);
    std::mt19937_64 rng(0xACCE97);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Complex x = std::polar(2.0 * std::sqrt(u(rng)), 2 * kPi * u(rng));
      const Complex y = std::polar(2.0 * std::sqrt(u(rng)), 2 * kPi * u(rng));
      Complex avg = 0.0;
      for (int l = 0; l < 2; ++l)
        avg += bergman_offdiag(bc, fc, std::polar(1.0, -kPi * l) * x, y);
      const double scale = std::sqrt(bergman_diagonal(b, f, x) *
                                     bergman_diagonal(b, f, y));
      worst = std::max(worst,
                       std::abs(orbifold_kernel(b, f, x, y) - avg) / scale);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "[identity %.1e (1e-8)] ", worst);
    detail += buf;
    pass = pass && worst <= 1e-8;
  }

  for (int k : {2, 3}) {
    std::vector<int> p_list;
    for (int mult : {8, 16, 32, 64}) p_list.push_back(mult * k);
    const KaehlerModel mq = make(ModelKind::CyclicQuotientCP1, 0, 0, k);
    const OrbifoldProfile prof = orbifold_profile(mq, p_list);
    const double last_dev =
        std::abs(prof.fixed_ratio.back().second - k);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "[k=%d: ratio %.4f, quad %.2f (0.6), R2 %.3f (0.95)] ", k,
                  prof.fixed_ratio.back().second, prof.max_quadruple_ratio,
                  prof.envelope_r2);
    detail += buf;
    pass = pass && last_dev < 0.05 && prof.max_quadruple_ratio <= 0.6 &&
           prof.envelope_r2 >= 0.95;
  }
  report(6, "cyclic-quotient density profile", pass, t.seconds(), detail);
}

// --------------------------------------------------------------------------
// 7. Fubini-Study pullback deviation halves (factor <= 0.55) from p = 64 to
//    p = 128 on the perturbed sphere.
// --------------------------------------------------------------------------
void criterion7() {
  Timer t;
  const KaehlerModel m = make(ModelKind::PerturbedCP1, 0.2);
  const double d64 = fubini_study_pullback(m, 64).sup_dev;
  const double d128 = fubini_study_pullback(m, 128).sup_dev;
  const double ratio = d128 / d64;
  char buf[96];
  std::snprintf(buf, sizeof buf, "sup 64 = %.2e, sup 128 = %.2e, ratio %.3f "
                "(tol 0.55)", d64, d128, ratio);
  report(7, "embedding pullback deviation halves", ratio <= 0.55, t.seconds(),
         buf);
}

// --------------------------------------------------------------------------
// 8. Structural invariants: trace identity on an independent grid,
//    basis-change invariance, Cauchy-Schwarz, parity probe.
// --------------------------------------------------------------------------
void criterion8() {
  Timer t;
  bool pass = true;
  std::string detail;

  double trace_worst = 0.0;
  {
    auto trace_dev = [&](const KaehlerModel& m, const SectionBasis& b,
                         int order) {
      const GramFactorization f = gram(b, build_grid(m, order));
      const double tr = kernel_trace(b, f, build_grid(m, order + 13));
      return std::abs(tr - b.dim()) / b.dim();
    };
    for (int p : {8, 16, 32, 64, 128}) {
      const KaehlerModel m0 = make(ModelKind::FubiniStudyCP1);
      trace_worst = std::max(trace_worst,
                             trace_dev(m0, basis_cp1(m0, p),
                                       default_grid_order(m0, p)));
      const KaehlerModel m2 = make(ModelKind::FubiniStudyCP1, 0.0, 2);
      trace_worst = std::max(trace_worst,
                             trace_dev(m2, basis_cp1(m2, p),
                                       default_grid_order(m2, p)));
      const KaehlerModel mp = make(ModelKind::PerturbedCP1, 0.2);
      trace_worst = std::max(trace_worst,
                             trace_dev(mp, basis_cp1(mp, p),
                                       default_grid_order(mp, p)));
      if (p % 2 == 0) {
        const KaehlerModel mq = make(ModelKind::CyclicQuotientCP1, 0, 0, 2);
        trace_worst = std::max(trace_worst,
                               trace_dev(mq, basis_quotient(mq, p),
                                         default_grid_order(mq, p)));
      }
    }
    for (int p : {8, 16, 32, 64}) {
      const KaehlerModel mt = make(ModelKind::FlatTorus);
      trace_worst = std::max(trace_worst,
                             trace_dev(mt, basis_torus(mt, p),
                                       default_grid_order(mt, p)));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "[trace %.1e (1e-8)] ", trace_worst);
    detail += buf;
    pass = pass && trace_worst <= 1e-8;
  }

  {
    const KaehlerModel m = make(ModelKind::FubiniStudyCP1);
    const QuadratureGrid g = build_grid(m, 44);
    const SectionBasis b = basis_cp1(m, 16);
    const GramFactorization f = gram(b, g);
    std::mt19937_64 rng(0xBA515);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd M(b.dim(), b.dim());
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j)
        M(i, j) = Complex(gauss(rng), gauss(rng));
    M += 3.0 * Eigen::MatrixXcd::Identity(b.dim(), b.dim());
    const SectionBasis bm = mixed(b, M);
    const GramFactorization fm = gram(bm, g);
    double worst = 0.0;
    for (Complex z : {Complex(0, 0), Complex(0.9, 0.2), Complex(-2.0, 1.0)})
      worst = std::max(worst, std::abs(bergman_diagonal(bm, fm, z) /
                                           bergman_diagonal(b, f, z) -
                                       1.0));
    char buf[64];
    std::snprintf(buf, sizeof buf, "[basis-change %.1e (1e-9)] ", worst);
    detail += buf;
    pass = pass && worst <= 1e-9;
  }

  {
    const KaehlerModel m = make(ModelKind::PerturbedCP1, -0.15);
    const QuadratureGrid g = build_grid(m, 36);
    const SectionBasis b = basis_cp1(m, 10);
    const GramFactorization f = gram(b, g);
    std::mt19937_64 rng(0xC5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    bool cs = true;
    for (int i = 0; i < 500; ++i) {
      const Complex x(u(rng), u(rng)), y(u(rng), u(rng));
      const double lhs = std::norm(bergman_offdiag(b, f, x, y));
      const double rhs = bergman_diagonal(b, f, x) * bergman_diagonal(b, f, y);
      cs = cs && lhs <= rhs * (1.0 + 1e-12);
    }
    detail += cs ? "[cauchy-schwarz ok] " : "[cauchy-schwarz FAILED] ";
    pass = pass && cs;
  }

  {
    double worst_ratio = 0.0;
    const std::vector<int> p_list{8, 12, 16, 24, 32, 48, 64};
    for (const KaehlerModel& m :
         {make(ModelKind::FubiniStudyCP1), make(ModelKind::PerturbedCP1, 0.2),
          make(ModelKind::FlatTorus)}) {
      const Complex x = (m.kind == ModelKind::FlatTorus)
                            ? Complex(0.31, 0.42)
                            : Complex(0.7, 0.2);
      const auto samples = diagonal_samples(m, {x}, p_list);
      std::vector<std::pair<int, double>> s;
      for (std::size_t i = 0; i < p_list.size(); ++i)
        s.push_back({p_list[i], samples[i][0]});
      const ExpansionFit fit = fit_expansion(s, 1, 3, true);
      worst_ratio = std::max(
          worst_ratio, std::abs(fit.half_power) / fit.half_power_stderr);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "[parity t-stat %.1f (10)] ", worst_ratio);
    detail += buf;
    pass = pass && worst_ratio <= 10.0;
  }

  report(8, "structural invariants suite", pass, t.seconds(), detail);
}

}  // namespace

int main() {
  std::printf("bergman acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (g_failures == 0) {
    std::printf("all 8 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
