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
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "bergman/geometry.hpp"
#include "bergman/grid.hpp"

using namespace bergman;

namespace {

KaehlerModel fs() { return build_model({ModelKind::FubiniStudyCP1}); }

KaehlerModel perturbed(double a) {
  ModelConfig c;
  c.kind = ModelKind::PerturbedCP1;
  c.perturbation = a;
  return build_model(c);
}

KaehlerModel torus(Complex tau = {0.0, 1.0}) {
  ModelConfig c;
  c.kind = ModelKind::FlatTorus;
  c.tau = tau;
  return build_model(c);
}

// Independent curvature oracle: 4th-order finite differences applied to
// log(omega density) in chart coordinates, at two step sizes with a
// Richardson step.  rX = -Lap log h / h.
double curvature_fd(const KaehlerModel& m, Complex z) {
  auto logh = [&](Complex w) { return std::log(detail::omega_density(m, w)); };
  auto lap4 = [&](double h) {
    auto second = [&](Complex e) {
      return (-logh(z + 2.0 * h * e) + 16.0 * logh(z + h * e) -
              30.0 * logh(z) + 16.0 * logh(z - h * e) -
              logh(z - 2.0 * h * e)) /
             (12.0 * h * h);
    };
    return second(Complex(1, 0)) + second(Complex(0, 1));
  };
  const double h = 1e-2 * (1.0 + std::abs(z));
  const double a1 = lap4(h), a2 = lap4(0.5 * h);
  const double lap = (16.0 * a2 - a1) / 15.0;
  return -lap / detail::omega_density(m, z);
}

}  // namespace

TEST_CASE("build_model validation") {
  CHECK_NOTHROW(fs());
  CHECK_NOTHROW(perturbed(0.3));
  CHECK_THROWS_AS(perturbed(1e3), NonPositiveForm);
  CHECK_THROWS_AS(perturbed(-0.9), NonPositiveForm);
  ModelConfig bad;
  bad.kind = ModelKind::FlatTorus;
  bad.tau = Complex(1.0, -0.5);
  CHECK_THROWS_AS(build_model(bad), BadModulus);
  bad.tau = Complex(0.3, 0.0);
  CHECK_THROWS_AS(build_model(bad), BadModulus);
  ModelConfig quo;
  quo.kind = ModelKind::CyclicQuotientCP1;
  quo.quotient_order = 1;
  CHECK_THROWS_AS(build_model(quo), ConfigError);
  quo.quotient_order = 2;
  CHECK_NOTHROW(build_model(quo));
}

TEST_CASE("Fubini-Study metric at the origin") {
  const MetricData md = metric_at(fs(), {0.0, 0.0});
  CHECK(md.omega_density == Catch::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(md.g[0][0] == Catch::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(md.g[1][1] == Catch::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(md.g[0][1] == 0.0);
  CHECK(md.kappa == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("flat torus metric is constant") {
  const KaehlerModel m = torus();
  const MetricData a = metric_at(m, {0.1, 0.2});
  const MetricData b = metric_at(m, {-0.7, 0.4});
  CHECK(a.omega_density == b.omega_density);
  CHECK(a.omega_density == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero perturbation reproduces Fubini-Study") {
  const KaehlerModel p0 = perturbed(0.0);
  for (Complex z : {Complex(0.3, -0.4), Complex(2.0, 1.0)}) {
    CHECK(metric_at(p0, z).omega_density ==
          Catch::Approx(metric_at(fs(), z).omega_density).epsilon(1e-15));
    CHECK(scalar_curvature(p0, z).rX ==
          Catch::Approx(scalar_curvature(fs(), z).rX).epsilon(1e-12));
  }
}

TEST_CASE("metric compatibility: g = omega(., J.) and J^2 = -I") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const KaehlerModel& m : {fs(), perturbed(0.25), torus({0.3, 1.4})}) {
    for (int i = 0; i < 100; ++i) {
      const Complex z(u(rng), u(rng));
      const MetricData md = metric_at(m, z);
      const double h = md.omega_density;
      // omega(u, v) = h (u_x v_y - u_y v_x); check g_ab = omega(e_a, J e_b).
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double ju[2] = {md.J[0][b], md.J[1][b]};
          const double ea[2] = {a == 0 ? 1.0 : 0.0, a == 0 ? 0.0 : 1.0};
          const double omega_val = h * (ea[0] * ju[1] - ea[1] * ju[0]);
          REQUIRE(std::abs(omega_val - md.g[a][b]) < 1e-12);
        }
      const double j2[2][2] = {
          {md.J[0][0] * md.J[0][0] + md.J[0][1] * md.J[1][0],
           md.J[0][0] * md.J[0][1] + md.J[0][1] * md.J[1][1]},
          {md.J[1][0] * md.J[0][0] + md.J[1][1] * md.J[1][0],
           md.J[1][0] * md.J[0][1] + md.J[1][1] * md.J[1][1]}};
      REQUIRE(std::abs(j2[0][0] + 1.0) < 1e-12);
      REQUIRE(std::abs(j2[1][1] + 1.0) < 1e-12);
      REQUIRE(std::abs(j2[0][1]) < 1e-12);
    }
  }
}

TEST_CASE("scalar curvature of the round sphere and flat models") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Complex z(u(rng), u(rng));
    CHECK(scalar_curvature(fs(), z).rX ==
          Catch::Approx(8.0 * kPi).epsilon(1e-8));
    CHECK(scalar_curvature(torus(), z).rX == 0.0);
    CHECK(scalar_curvature(torus(), z).rE == 0.0);
  }
  KaehlerModel bf = build_model({ModelKind::BargmannFock});
  CHECK(scalar_curvature(bf, {0.5, 0.5}).rX == 0.0);
}

TEST_CASE("curvature of the twist bundle") {
  ModelConfig c;
  c.kind = ModelKind::FubiniStudyCP1;
  c.twist_degree = 3;
  const KaehlerModel m = build_model(c);
  for (Complex z : {Complex(0, 0), Complex(1.5, -0.2)})
    CHECK(scalar_curvature(m, z).rE ==
          Catch::Approx(4.0 * kPi * 3).epsilon(1e-12));
}

TEST_CASE("perturbed curvature matches the finite-difference oracle") {
  const KaehlerModel m = perturbed(0.23);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  for (int i = 0; i < 50; ++i) {
    const Complex z(u(rng), u(rng));
    const double analytic = scalar_curvature(m, z).rX;
    const double fd = curvature_fd(m, z);
    REQUIRE(std::abs(analytic - fd) < 1e-6 * std::abs(analytic));
  }
}

TEST_CASE("Gauss-Bonnet at desk scale") {
  for (const KaehlerModel& m : {fs(), perturbed(0.28)}) {
    const QuadratureGrid g = build_grid(m, 64);
    std::vector<double> terms(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      terms[i] = g.weights[i] * 0.5 * scalar_curvature(m, g.nodes[i]).rX;
    CHECK(pairwise_sum(terms) == Catch::Approx(4.0 * kPi).epsilon(1e-6));
  }
}

TEST_CASE("Fubini-Study geodesic distance closed form") {
  const KaehlerModel m = fs();
  for (double r : {0.1, 0.7, 2.0, 9.0}) {
    const Complex z(r, 0.0);
    CHECK(geodesic_distance(m, {0, 0}, z) ==
          Catch::Approx(std::atan(r) / std::sqrt(kPi)).epsilon(1e-13));
  }
  CHECK(geodesic_distance(m, {0.4, -0.7}, {0.4, -0.7}) == 0.0);
  // Exact symmetry of the closed form.
  const Complex a(0.8, -0.3), b(-1.7, 0.6);
  CHECK(geodesic_distance(m, a, b) == geodesic_distance(m, b, a));
}

TEST_CASE("torus distance reduces over the lattice") {
  const KaehlerModel m = torus();
  CHECK(geodesic_distance(m, {0, 0}, {0.5, 0.0}) ==
        Catch::Approx(0.5).epsilon(1e-14));
  // 0.9 is closer through the period than directly.
  CHECK(geodesic_distance(m, {0, 0}, {0.9, 0.0}) ==
        Catch::Approx(0.1).epsilon(1e-12));
  // Brute-force oracle over a wide window of lattice translates.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const KaehlerModel mt = torus({0.31, 0.83});
  for (int i = 0; i < 25; ++i) {
    const Complex x(u(rng), u(rng)), y(u(rng), u(rng));
    double best = 1e300;
    for (int a = -5; a <= 5; ++a)
      for (int b = -5; b <= 5; ++b)
        best = std::min(best, std::abs(x - y - static_cast<double>(a) -
                                       static_cast<double>(b) * mt.tau));
    best /= std::sqrt(mt.tau.imag());
    REQUIRE(geodesic_distance(mt, x, y) == Catch::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("geodesic shooting recovers the round closed form") {
  // The zero-amplitude perturbed model runs the generic shooting path.
  const KaehlerModel m = perturbed(0.0);
  const KaehlerModel round = fs();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 6; ++i) {
    const Complex x(u(rng), u(rng)), y(u(rng), u(rng));
    const double want = geodesic_distance(round, x, y);
    const double got = geodesic_distance(m, x, y);
    REQUIRE(std::abs(got - want) < 1e-6 * std::max(0.05, want));
  }
}

TEST_CASE("perturbed distance symmetry and triangle inequality") {
  const KaehlerModel m = perturbed(0.2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  for (int i = 0; i < 5; ++i) {
    const Complex x(u(rng), u(rng)), y(u(rng), u(rng)), z(u(rng), u(rng));
    const double dxy = geodesic_distance(m, x, y);
    const double dyx = geodesic_distance(m, y, x);
    REQUIRE(std::abs(dxy - dyx) < 1e-6);
    const double dxz = geodesic_distance(m, x, z);
    const double dzy = geodesic_distance(m, z, y);
    REQUIRE(dxy <= dxz + dzy + 1e-6);
  }
}

TEST_CASE("normal-coordinate volume density") {
  // Constant curvature: kappa(rho) = sin(2 sqrt(pi) rho) / (2 sqrt(pi) rho).
  const KaehlerModel m = fs();
  for (double r : {0.2, 1.0, 3.0}) {
    const double rho = detail::radial_distance(m, r);
    const double want = std::sin(2.0 * std::sqrt(kPi) * rho) /
                        (2.0 * std::sqrt(kPi) * rho);
    CHECK(metric_at(m, {r, 0.0}).kappa == Catch::Approx(want).epsilon(1e-12));
  }
  CHECK(metric_at(perturbed(0.25), {1e-6, 0.0}).kappa ==
        Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("radial distance inverts") {
  const KaehlerModel m = perturbed(0.2);
  for (double d : {0.05, 0.3, 0.6}) {
    const double r = detail::radius_for_distance(m, d);
    CHECK(detail::radial_distance(m, r) == Catch::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("quotient distance and the singular set") {
  ModelConfig c;
  c.kind = ModelKind::CyclicQuotientCP1;
  c.quotient_order = 2;
  const KaehlerModel m = build_model(c);
  // Antipodal pair in the chart is identified by the quotient.
  const Complex z(0.8, 0.0);
  CHECK(geodesic_distance(m, z, -z) == Catch::Approx(0.0).margin(1e-14));
  const double total = 0.5 * std::sqrt(kPi);
  CHECK(distance_to_singular(m, {1.0, 0.0}) ==
        Catch::Approx(0.5 * total).epsilon(1e-12));
}

TEST_CASE("non-finite points are out of chart") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(metric_at(fs(), Complex(inf, 0.0)), OutOfChart);
  CHECK_THROWS_AS(scalar_curvature(fs(), Complex(0.0, inf)), OutOfChart);
  CHECK_THROWS_AS(geodesic_distance(fs(), Complex(inf, 0.0), Complex(0, 0)),
                  OutOfChart);
}
