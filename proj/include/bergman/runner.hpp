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

#include <random>

#include "bergman/asymptotics.hpp"
#include "bergman/config.hpp"
#include "bergman/report.hpp"
#include "bergman/svg.hpp"

namespace bergman {
namespace runner {

namespace rdetail {

inline std::vector<Complex> sample_points(const KaehlerModel& m, int count) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (m.kind == ModelKind::FlatTorus) {
    for (int i = 1; i <= count; ++i) {
      const double f = i / (count + 1.0);
      pts.push_back(Complex(0.9 * f, 0.0) + (0.7 * f) * m.tau);
    }
    return pts;
  }
  for (int i = 1; i <= count; ++i) {
    const double s = i / (count + 1.0);
    const double r = std::sqrt(s / (1.0 - s));
    pts.push_back(std::polar(r, (i % 2) ? 0.0 : kPi / 3.0));
  }
  return pts;
}

inline std::vector<int> default_p_list(const KaehlerModel& m) {
  // Torus sweeps start at p = 12: the theta-gap wiggle of B_p,
  // ~ p exp(-pi p/2), pollutes coefficient fits above the 1e-4 level at
  // p = 8 and is negligible from p = 12 on.
  if (m.kind == ModelKind::FlatTorus) return {12, 16, 24, 32, 48, 64};
  return {8, 12, 16, 24, 32, 48, 64, 96, 128};
}

inline KaehlerModel model_from_config(const RunConfig& cfg) {
  if (!cfg.has_model) throw ConfigError("config must set a model");
  return build_model(cfg.model);
}

inline int finish(
    OutputTracker&, const std::string& json_path, const RunConfig& cfg,
    const std::vector<Check>& checks,
    const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
  write_json_report(json_path, cfg, checks, extra);
  for (auto& c : checks)
    if (!c.pass) return 1;
  return 0;
}

}  // namespace rdetail

// ---------------------------------------------------------------------------

inline int run_diag(const RunConfig& cfg) {
  OutputTracker out(cfg.out_dir);
  try {
    KaehlerModel model = rdetail::model_from_config(cfg);
    if (model.kind == ModelKind::BargmannFock ||
        model.kind == ModelKind::CyclicQuotientCP1)
      throw ConfigError(
          "diag runs on the smooth compact models; use the orbifold "
          "subcommand for quotients");
    std::vector<int> p_list =
        cfg.p_list.empty() ? rdetail::default_p_list(model) : cfg.p_list;
    const int fit_k = 3;
    if (static_cast<int>(p_list.size()) < fit_k + 2)
      throw ConfigError("need >= k+2 p-values for the diagonal fit (k = 3)");
    const std::vector<Complex> pts =
        rdetail::sample_points(model, cfg.points);

    const auto samples =
        diagonal_samples(model, pts, p_list, cfg.grid_order);
    CsvWriter csv(out.path("diag.csv"),
                  {"model", "p", "x_re", "x_im", "B_p"});
    for (std::size_t ip = 0; ip < p_list.size(); ++ip)
      for (std::size_t j = 0; j < pts.size(); ++j)
        csv.row({to_string(model.kind), CsvWriter::num(p_list[ip]),
                 CsvWriter::num(pts[j].real()), CsvWriter::num(pts[j].imag()),
                 CsvWriter::num(samples[ip][j])});

    std::vector<Check> checks;
    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    const auto b1_checks = check_b1(model, pts, p_list, fit_k, cfg.grid_order);
    for (std::size_t j = 0; j < b1_checks.size(); ++j) {
      const auto& c = b1_checks[j];
      checks.push_back(check_value("b0_hat[" + std::to_string(j) + "]", 1.0,
                                   c.fitted_b0, cfg.tol.at("tol_b0")));
      checks.push_back(check_value("b1_hat[" + std::to_string(j) + "]",
                                   c.predicted_b1, c.fitted_b1,
                                   cfg.tol.at("tol_b1")));
      checks.push_back(
          check_flag("fit_conditioning[" + std::to_string(j) + "]",
                     !c.fit.ill_conditioned));
      fits.push_back({{"x_re", c.x.real()},
                      {"x_im", c.x.imag()},
                      {"coefficients", c.fit.coeffs},
                      {"predicted_b1", c.predicted_b1},
                      {"residual_rms", c.fit.residual_rms},
                      {"condition", c.fit.condition}});
    }
    nlohmann::ordered_json extra;
    extra["fits"] = fits;
    if (cfg.emit_plots) {
      std::vector<SvgSeries> series;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        SvgSeries s;
        s.name = "x" + std::to_string(j);
        for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
          s.x.push_back(1.0 / p_list[ip]);
          s.y.push_back(samples[ip][j] / p_list[ip]);
        }
        series.push_back(std::move(s));
      }
      svg_line_chart(out.path("diag.svg"), "Bergman density / p vs 1/p",
                     "1/p", "B_p / p", series);
    }
    return rdetail::finish(out, out.path("diag.json"), cfg, checks, extra);
  } catch (...) {
    out.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

inline int run_offdiag(const RunConfig& cfg) {
  OutputTracker out(cfg.out_dir);
  try {
    KaehlerModel model = rdetail::model_from_config(cfg);
    if (!(model.kind == ModelKind::FubiniStudyCP1 ||
          model.kind == ModelKind::PerturbedCP1 ||
          model.kind == ModelKind::FlatTorus))
      throw ConfigError("offdiag runs on the smooth models");
    const int p = cfg.p;
    // The scan window must fit inside the injectivity scale: it spans
    // roughly [0.4, 3.8]/sqrt(p) in geodesic distance.
    const bool is_torus = model.kind == ModelKind::FlatTorus;
    const int p_min = is_torus ? 48 : 24;
    if (p < p_min)
      throw ConfigError("offdiag needs p >= " + std::to_string(p_min) +
                        " on this model");
    const double sp = std::sqrt(static_cast<double>(p));
    const double cap = is_torus ? 0.45 : 0.70;
    std::vector<double> distances;
    for (int i = 0; i < 12; ++i)
      distances.push_back((0.4 + (3.0 - 0.4) * i / 11.0) / sp);
    const double far_lo = 3.05 / sp;
    const double far_hi = std::min(cap, 3.8 / sp);
    for (int i = 0; i < 12; ++i)
      distances.push_back(far_lo + (far_hi - far_lo) * (i + 1) / 12.0);

    const DecayScan scan = offdiag_decay_scan(model, Complex(0, 0), p,
                                              distances, cfg.direction,
                                              cfg.grid_order);
    CsvWriter csv(out.path("offdiag.csv"),
                  {"model", "p", "d", "log_abs_P", "near_gauss_exponent",
                   "far_agmon_exponent"});
    for (std::size_t i = 0; i < scan.distances.size(); ++i)
      csv.row({to_string(model.kind), CsvWriter::num(p),
               CsvWriter::num(scan.distances[i]),
               CsvWriter::num(scan.logmag[i]),
               CsvWriter::num(scan.gaussian_exponent),
               CsvWriter::num(scan.agmon_exponent)});

    std::vector<Check> checks;
    const double target = -0.5 * kPi * p;
    checks.push_back(check_value("near_zone_gaussian_exponent", target,
                                 scan.gaussian_exponent,
                                 cfg.tol.at("tol_near_rel")));
    checks.push_back(
        check_lower_bound("far_zone_agmon_exponent", 1e-6,
                          scan.agmon_exponent));
    checks.push_back(check_flag("monotone_decay", scan.monotone));
    if (cfg.emit_plots) {
      SvgSeries s;
      s.name = "p=" + std::to_string(p);
      s.x = scan.distances;
      s.y = scan.logmag;
      svg_line_chart(out.path("offdiag.svg"), "off-diagonal decay",
                     "geodesic distance", "log |P_p|", {s});
    }
    return rdetail::finish(out, out.path("offdiag.json"), cfg, checks);
  } catch (...) {
    out.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

inline int run_orbifold(const RunConfig& cfg) {
  OutputTracker out(cfg.out_dir);
  try {
    KaehlerModel model = rdetail::model_from_config(cfg);
    if (model.kind != ModelKind::CyclicQuotientCP1)
      throw ConfigError("orbifold subcommand requires model = "
                        "cyclic_quotient_cp1");
    const int k = model.quotient_order;
    std::vector<int> p_list = cfg.p_list;
    if (p_list.empty())
      for (int mult : {8, 16, 32, 64}) p_list.push_back(mult * k);
    if (p_list.size() < 4)
      throw ConfigError("orbifold profile needs at least 4 powers");

    const OrbifoldProfile prof =
        orbifold_profile(model, p_list, cfg.grid_order);

    // Invariant-basis kernel against the group-averaged kernel of the cover.
    KaehlerModel cover = model;
    cover.kind = ModelKind::FubiniStudyCP1;
    cover.quotient_order = 1;
    const int p0 = p_list.front();
    const int order0 = std::max(cfg.grid_order,
                                default_grid_order(cover, p0));
    const QuadratureGrid qgrid = build_grid(model, order0);
    const QuadratureGrid cgrid = build_grid(cover, order0);
    const SectionBasis borb = basis_quotient(model, p0);
    const GramFactorization forb = gram(borb, qgrid);
    const SectionBasis bcov = basis_cp1(cover, p0);
    const GramFactorization fcov = gram(bcov, cgrid);
    std::mt19937_64 rng(0xB17C0DEULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_identity = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Complex x = std::polar(2.0 * std::sqrt(unif(rng)),
                                   2.0 * kPi * unif(rng));
      const Complex y = std::polar(2.0 * std::sqrt(unif(rng)),
                                   2.0 * kPi * unif(rng));
      Complex avg = 0.0;
      for (int g = 0; g < k; ++g)
        avg += bergman_offdiag(bcov, fcov,
                               std::polar(1.0, -2.0 * kPi * g / k) * x, y);
      const Complex val = orbifold_kernel(borb, forb, x, y);
      const double scale = std::sqrt(bergman_diagonal(borb, forb, x) *
                                     bergman_diagonal(borb, forb, y));
      worst_identity = std::max(worst_identity, std::abs(val - avg) / scale);
    }

    CsvWriter rcsv(out.path("orbifold_ratio.csv"), {"k", "p", "ratio"});
    for (auto& [p, r] : prof.fixed_ratio)
      rcsv.row({CsvWriter::num(k), CsvWriter::num(p), CsvWriter::num(r)});
    CsvWriter ecsv(out.path("orbifold_envelope.csv"),
                   {"k", "p_d2", "log_correction"});
    for (auto& e : prof.envelope)
      ecsv.row({CsvWriter::num(k), CsvWriter::num(e[0]),
                CsvWriter::num(e[1])});

    std::vector<Check> checks;
    checks.push_back(check_upper_bound("group_average_identity",
                                       cfg.tol.at("tol_identity"),
                                       worst_identity));
    checks.push_back(check_value(
        "fixed_point_ratio_limit", static_cast<double>(k),
        prof.fixed_ratio.back().second, 2.0 / p_list.back()));
    bool monotone_tail = true;
    for (std::size_t i = 2; i < prof.fixed_ratio.size(); ++i)
      if (prof.fixed_ratio[i].second >= prof.fixed_ratio[i - 1].second)
        monotone_tail = false;
    checks.push_back(check_flag("fixed_point_ratio_monotone", monotone_tail));
    checks.push_back(check_upper_bound("deviation_quadruple_ratio",
                                       cfg.tol.at("tol_ratio"),
                                       prof.max_quadruple_ratio));
    checks.push_back(check_lower_bound("envelope_r2", cfg.tol.at("tol_r2"),
                                       prof.envelope_r2));
    // The correction must decay at least at the model Gaussian rate
    // -(pi/2)|1-g|^2 = -2 pi sin^2(pi/k); phase oscillation of paired group
    // elements can only steepen the measured slope.
    const double slope_target = -2.0 * kPi * std::pow(std::sin(kPi / k), 2.0);
    checks.push_back(check_upper_bound("envelope_slope", 0.95 * slope_target,
                                       prof.envelope_slope));
    checks.push_back(check_value("equator_b0", 1.0, prof.equator_b0, 1e-3));
    const CurvatureData eq_curv = scalar_curvature(model, Complex(1.0, 0.0));
    checks.push_back(check_value("equator_b1",
                                 b1(CurvatureScalars{eq_curv.rX, eq_curv.rE}),
                                 prof.equator_b1, 1e-3));
    if (cfg.emit_plots) {
      SvgSeries s;
      s.name = "k=" + std::to_string(k);
      for (auto& [p, r] : prof.fixed_ratio) {
        s.x.push_back(static_cast<double>(p));
        s.y.push_back(r);
      }
      svg_line_chart(out.path("orbifold.svg"), "fixed-point density ratio",
                     "p", "B^orb_p(0) / p", {s});
    }
    return rdetail::finish(out, out.path("orbifold.json"), cfg, checks);
  } catch (...) {
    out.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

inline int run_model_check(const RunConfig& cfg) {
  OutputTracker out(cfg.out_dir);
  try {
    std::vector<double> u_list =
        cfg.u_list.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0}
                           : cfg.u_list;
    for (double u : u_list)
      if (!(u > 0.0)) throw ConfigError("u values must be positive");
    std::vector<std::pair<double, double>> curv_list =
        cfg.curv_list.empty()
            ? std::vector<std::pair<double, double>>{{8.0 * kPi, 0.0},
                                                     {0.0, 4.0 * kPi},
                                                     {8.0 * kPi, 4.0 * kPi}}
            : cfg.curv_list;

    const ModelSpectrum spec = ModelSpectrum::kaehler(1);
    std::vector<Check> checks;

    // Volterra quadrature against the closed form, and the b_1 limit.
    for (auto& [rx, re] : curv_list) {
      const CurvatureScalars curv{rx, re};
      for (double u : u_list) {
        if (u > 8.0) continue;
        const double closed = j2u_closed(u, curv);
        const double volterra = j2u_volterra(u, curv);
        char name[96];
        std::snprintf(name, sizeof name, "volterra_vs_closed[rX=%.3g,rE=%.3g,u=%.3g]",
                      rx, re, u);
        checks.push_back(check_upper_bound(
            name, cfg.tol.at("tol_volterra"),
            std::abs(volterra - closed) / std::max(1.0, std::abs(closed))));
      }
    }
    {
      const CurvatureScalars zero{0.0, 0.0};
      checks.push_back(check_upper_bound("volterra_zero_curvature", 1e-12,
                                         std::abs(j2u_volterra(1.0, zero))));
      checks.push_back(check_upper_bound("closed_zero_curvature", 1e-15,
                                         std::abs(j2u_closed(1.0, zero))));
    }

    // b_{0,u} definitional consistency with the Mehler diagonal.
    for (double u : u_list) {
      const std::array<double, 2> zero{0.0, 0.0};
      const double hk = model_heat_kernel(zero, zero, u, spec).real();
      char name[48];
      std::snprintf(name, sizeof name, "b0u_heat_diagonal[u=%.3g]", u);
      checks.push_back(check_upper_bound(
          name, 1e-12, std::abs(b0u(u, spec) - hk) / hk));
    }

    // Semigroup property of the Mehler kernel under plane quadrature.
    {
      const std::array<double, 2> Z{0.3, -0.2}, Zp{-0.5, 0.4};
      for (auto [u, v] : std::vector<std::pair<double, double>>{{0.5, 0.5},
                                                                {1.0, 2.0}}) {
        Quadrature1D gl = gauss_legendre(120, -5.0, 5.0);
        std::vector<Complex> terms;
        terms.reserve(gl.nodes.size() * gl.nodes.size());
        for (double wx : gl.nodes)
          for (double wy : gl.nodes) {
            const std::array<double, 2> W{wx, wy};
            terms.push_back(model_heat_kernel(Z, W, u, spec) *
                            model_heat_kernel(W, Zp, v, spec));
          }
        std::size_t idx = 0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
          for (std::size_t j = 0; j < gl.nodes.size(); ++j)
            terms[idx++] *= gl.weights[i] * gl.weights[j];
        const Complex conv = pairwise_sum(terms);
        const Complex direct = model_heat_kernel(Z, Zp, u + v, spec);
        char name[48];
        std::snprintf(name, sizeof name, "semigroup[u=%.3g,v=%.3g]", u, v);
        checks.push_back(check_upper_bound(
            name, cfg.tol.at("tol_semigroup"),
            std::abs(conv - direct) / std::abs(direct)));
      }
    }

    // Heat equation residual, second order in the stencil step.
    {
      const std::array<double, 2> Zp{0.4, 0.1};
      const double u = 0.35, du = 1e-4;
      auto residual = [&](int n) {
        auto field = [&](double uu) {
          return GridField2D::sample(2.5, n, [&](double x, double y) {
            const std::array<double, 2> Z{x, y};
            return model_heat_kernel(Z, Zp, uu, spec);
          });
        };
        const GridField2D f = field(u);
        const GridField2D fp = field(u + du);
        const GridField2D fm = field(u - du);
        const GridField2D qf = q0_apply(f, spec);
        double worst = 0.0;
        for (int i = n / 4; i < 3 * n / 4; ++i)
          for (int j = n / 4; j < 3 * n / 4; ++j) {
            const Complex ut = (fp.v(i, j) - fm.v(i, j)) / (2.0 * du);
            worst = std::max(worst, std::abs(ut + qf.v(i, j)));
          }
        return worst;
      };
      const double r1 = residual(101);
      const double r2 = residual(201);
      checks.push_back(check_upper_bound("heat_equation_residual_ratio",
                                         cfg.tol.at("tol_heat_ratio"),
                                         r2 / r1));
    }

    // Reproducing property of the model projector.
    {
      const std::array<double, 2> Z{0.6, 0.2}, Zp{-0.3, 0.5};
      Quadrature1D gl = gauss_legendre(140, -6.0, 6.0);
      std::vector<Complex> terms;
      terms.reserve(gl.nodes.size() * gl.nodes.size());
      for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const std::array<double, 2> W{gl.nodes[i], gl.nodes[j]};
          terms.push_back(gl.weights[i] * gl.weights[j] *
                          model_bergman(Z, W, spec) *
                          model_bergman(W, Zp, spec));
        }
      const Complex conv = pairwise_sum(terms);
      const Complex direct = model_bergman(Z, Zp, spec);
      checks.push_back(check_upper_bound(
          "projector_reproducing", cfg.tol.at("tol_reproducing"),
          std::abs(conv - direct) / std::abs(direct)));
    }

    // Gaussian moment identity used by the Volterra quadrature.
    {
      Quadrature1D gh = gauss_hermite(16);
      std::vector<double> terms(gh.nodes.size());
      for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double x = std::sqrt(2.0) * gh.nodes[i];
        terms[i] = gh.weights[i] * std::sqrt(2.0) * x * x * x * x;
      }
      const double got = pairwise_sum(terms);
      const double want = 3.0 * std::sqrt(2.0 * kPi);
      checks.push_back(check_upper_bound("gaussian_fourth_moment",
                                         cfg.tol.at("tol_moment"),
                                         std::abs(got - want)));
    }

    // Convergence of the heat kernel to the projector as u grows.
    {
      const std::vector<std::array<double, 2>> pts = {
          {0.0, 0.0}, {1.0, 0.0}, {0.5, -0.5}, {1.5, 1.0}, {2.0, 0.0}};
      std::vector<double> us = {0.8, 1.15, 1.5, 1.85, 2.2};
      std::vector<double> logsup(us.size());
      for (std::size_t i = 0; i < us.size(); ++i) {
        double sup = 0.0;
        for (auto& Z : pts)
          for (auto& Zp : pts)
            sup = std::max(sup,
                           std::abs(model_heat_kernel(Z, Zp, us[i], spec) -
                                    model_bergman(Z, Zp, spec)));
        logsup[i] = std::log(sup);
      }
      auto [a0, slope] = linear_fit(us, logsup);
      (void)a0;
      checks.push_back(check_upper_bound("projector_limit_slope",
                                         cfg.tol.at("tol_slope"), slope));
    }

    return rdetail::finish(out, out.path("model_check.json"), cfg, checks);
  } catch (...) {
    out.discard_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

inline int run_heat(const RunConfig& cfg) {
  OutputTracker out(cfg.out_dir);
  try {
    std::vector<double> u_list =
        cfg.u_list.empty()
            ? std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5}
            : cfg.u_list;
    for (double u : u_list)
      if (!(u > 0.0)) throw ConfigError("u values must be positive");
    std::vector<std::pair<double, double>> curv_list =
        cfg.curv_list.empty()
            ? std::vector<std::pair<double, double>>{{8.0 * kPi, 0.0},
                                                     {0.0, 4.0 * kPi},
                                                     {8.0 * kPi, 4.0 * kPi}}
            : cfg.curv_list;
    const ModelSpectrum spec = ModelSpectrum::kaehler(1);

    CsvWriter csv(out.path("heat.csv"),
                  {"u", "b0u", "abs_b0u_minus_1", "rX", "rE", "j2u", "b1",
                   "abs_j2u_minus_b1"});
    std::vector<Check> checks;
    std::vector<SvgSeries> series;
    for (auto& [rx, re] : curv_list) {
      const CurvatureScalars curv{rx, re};
      const double limit = b1(curv);
      std::vector<double> diffs;
      SvgSeries s;
      char label[48];
      std::snprintf(label, sizeof label, "rX=%.3g rE=%.3g", rx, re);
      s.name = label;
      for (double u : u_list) {
        const double bu = b0u(u, spec);
        const double j = j2u_closed(u, curv);
        diffs.push_back(std::abs(j - limit));
        csv.row({CsvWriter::num(u), CsvWriter::num(bu),
                 CsvWriter::num(std::abs(bu - 1.0)), CsvWriter::num(rx),
                 CsvWriter::num(re), CsvWriter::num(j),
                 CsvWriter::num(limit), CsvWriter::num(std::abs(j - limit))});
        s.x.push_back(u);
        s.y.push_back(std::log10(std::max(1e-300, std::abs(j - limit))));
      }
      bool decreasing = true;
      for (std::size_t i = 1; i < diffs.size(); ++i)
        if (!(diffs[i] < diffs[i - 1])) decreasing = false;
      char name[64];
      std::snprintf(name, sizeof name, "j2u_convergence_monotone[rX=%.3g,rE=%.3g]",
                    rx, re);
      checks.push_back(check_flag(name, decreasing));

      std::vector<double> su, slog;
      for (std::size_t i = 0; i < u_list.size(); ++i)
        if (u_list[i] >= 1.0 && u_list[i] <= 4.0 && diffs[i] > 1e-300) {
          su.push_back(u_list[i]);
          slog.push_back(std::log(diffs[i]));
        }
      if (su.size() >= 3) {
        auto [a0, slope] = linear_fit(su, slog);
        (void)a0;
        std::snprintf(name, sizeof name, "j2u_decay_slope[rX=%.3g,rE=%.3g]", rx,
                      re);
        checks.push_back(
            check_upper_bound(name, cfg.tol.at("tol_slope"), slope));
      }
      series.push_back(std::move(s));
    }
    {
      std::vector<double> b0_devs;
      for (double u : u_list) b0_devs.push_back(std::abs(b0u(u, spec) - 1.0));
      bool decreasing = true;
      for (std::size_t i = 1; i < b0_devs.size(); ++i)
        if (!(b0_devs[i] < b0_devs[i - 1])) decreasing = false;
      checks.push_back(check_flag("b0u_convergence_monotone", decreasing));
    }
    if (cfg.emit_plots)
      svg_line_chart(out.path("heat.svg"), "heat coefficient convergence",
                     "u", "log10 |J_{2,u}(0,0) - b_1|", series);
    return rdetail::finish(out, out.path("heat.json"), cfg, checks);
  } catch (...) {
    out.discard_all();
    throw;
  }
}

}  // namespace runner
}  // namespace bergman
