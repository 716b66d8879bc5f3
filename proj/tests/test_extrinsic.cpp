#include <cmath>

#include "doctest.h"
#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"

using namespace riesz;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("psi_numeric on circle and sphere") {
  const Shape c = make_circle(1.0);
  CHECK(psi_numeric(c, 0.4, 0.0, 2.0) == doctest::Approx(2 * pi).epsilon(1e-10));
  CHECK(psi_numeric(c, 0.4, 0.0, 3.0) == doctest::Approx(2 * pi).epsilon(1e-12));
  for (double t : {1e-3, 0.1, 0.5, 1.5})
    CHECK(psi_numeric(c, 2.0, 0.0, t) == doctest::Approx(4 * std::asin(t / 2)).epsilon(1e-12));
  const Shape s = make_sphere(1.0);
  // spherical cap with chord t has area pi t^2
  for (double t : {0.05, 0.7, 1.99})
    CHECK(psi_numeric(s, 0.3, 2.0, t) == doctest::Approx(pi * t * t).epsilon(1e-10));
  CHECK(psi_numeric(s, 0.3, 2.0, 2.5) == doctest::Approx(4 * pi).epsilon(1e-10));
  CHECK(psi_numeric(c, 0.0, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(psi_numeric(c, 0.0, 0.0, -1.0), Error);
}

TEST_CASE("psi_numeric is monotone and reaches the total measure") {
  const Shape t = make_torus(2.0, 0.5);
  double prev = 0.0;
  for (double r : {0.1, 0.4, 0.9, 1.6, 2.5, 3.5, 4.5}) {
    const double v = psi_numeric(t, 0.5, 1.0, r);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(psi_numeric(t, 0.5, 1.0, 6.0) == doctest::Approx(4 * pi * pi).epsilon(1e-10));
}

TEST_CASE("analytic jets") {
  const auto j = b_jet_analytic(make_circle(1.0), 0.0, 0.0);
  CHECK(j[1] == doctest::Approx(2.0));
  CHECK(j[3] == doctest::Approx(1.0 / 12));
  const auto e = b_jet_analytic(make_ellipse(2.0, 1.0), 0.0, 0.0);
  CHECK(e[3] == doctest::Approx(4.0 / 12));  // curvature a / b^2 = 2 at the vertex
  const auto s = b_jet_analytic(make_sphere(1.0), 1.0, 1.0);
  CHECK(s[2] == doctest::Approx(pi));
  CHECK(s[4] == doctest::Approx(0.0));
  // torus outer equator: curvatures 1/r = 2 and 1/(R + r) = 0.4
  const auto t = b_jet_analytic(make_torus(2.0, 0.5), 0.3, 0.0);
  CHECK(t[4] == doctest::Approx(pi * 1.6 * 1.6 / 32).epsilon(1e-12));
}

TEST_CASE("numeric jets match the analytic ones") {
  const auto c = b_jet_numeric(make_circle(1.0), 0.0, 0.0, 5);
  CHECK(c.jet[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(c.jet[3] == doctest::Approx(1.0 / 12).epsilon(1e-4));
  const auto e = b_jet_numeric(make_ellipse(2.0, 1.0), 0.0, 0.0, 5);
  CHECK(e.jet[3] == doctest::Approx(4.0 / 12).epsilon(1e-3));
  const Shape torus = make_torus(2.0, 0.5);
  const auto t = b_jet_numeric(torus, 0.3, 0.0, 6);
  CHECK(t.jet[2] == doctest::Approx(pi).epsilon(1e-8));
  CHECK(t.jet[4] == doctest::Approx(pi * 1.6 * 1.6 / 32).epsilon(1e-3));
  // unconstrained fit: parity-killed orders are negligible, measured on the fit window
  // (the term b_k t_hi^k against the leading b_1 t_hi)
  const auto u = b_jet_numeric(make_ellipse(2.0, 1.0), 0.7, 0.0, 6, false);
  for (int k : {2, 4, 6})
    CHECK(std::abs(u.jet[k]) * std::pow(u.t_hi, k) < 1e-6 * u.jet[1] * u.t_hi);
  CHECK_THROWS_AS(b_jet_numeric(make_circle(1.0), 0.0, 0.0, 7), Error);
}

TEST_CASE("integrated b coefficients") {
  const auto b = b_coefficients(make_circle(2.0));
  CHECK(b.integrated[1] == doctest::Approx(8 * pi));      // 2L
  CHECK(b.integrated[3] == doctest::Approx(pi / 12));     // int kappa^2 / 12 = (2 pi / r) / 12
  const auto s = b_coefficients(make_sphere(1.0));
  CHECK(s.integrated[2] == doctest::Approx(4 * pi * pi));  // pi A
  CHECK(std::abs(s.integrated[4]) < 1e-12);
}

TEST_CASE("domain jets") {
  const auto d = psi_domain_jet(make_ball(2, 1.0));
  CHECK(d[2] == doctest::Approx(pi * pi));
  CHECK(d[3] == doctest::Approx(-2.0 / 3 * 2 * pi));
  CHECK(d[4] == 0.0);
  const auto b = psi_domain_jet(make_ball(3, 1.0));
  CHECK(b[3] == doctest::Approx(4 * pi / 3 * 4 * pi / 3));
  CHECK(b[4] == doctest::Approx(-2 * pi / 8 * 4 * pi));
  // scaling c^{2n-k}
  const auto d2 = psi_domain_jet(make_ball(2, 2.0));
  CHECK(d2[2] == doctest::Approx(4 * d[2]));
  CHECK(d2[3] == doctest::Approx(2 * d[3]));
  CHECK_THROWS_AS(psi_domain_jet(make_ball(4, 1.0)), Error);
}

TEST_CASE("weighted domain profiles") {
  const auto circle = psi_rho_profile(make_ball(2, 1.0), 0.5, 0.0);
  CHECK(circle.jet()[0] == doctest::Approx(2.0));
  CHECK(circle.jet()[2] == doctest::Approx(-0.75));
  const auto sphere = psi_rho_profile(make_ball(3, 1.0), 0.5, 1.0);
  // psi_rho = pi t^2 (1 - t^2 / 4)
  CHECK(sphere.jet()[3] == doctest::Approx(-pi));
  CHECK(psi_rho_jet(3, 1.0, 1.0)[4] == doctest::Approx(-pi / 4));
  // flat limit: (n-1)-disk volume
  CHECK(psi_rho_jet(2, 0.0, 0.0).eval(0.3) == doctest::Approx(0.6));
  CHECK(psi_rho_jet(3, 0.0, 0.0).eval(0.3) == doctest::Approx(pi * 0.09));
  const Shape disk = make_ball(2, 1.0);
  CHECK(psi_numeric(std::get<Domain>(disk).boundary_curve(), 1.0, 0.0, 1.2, PairWeight::normal_dot) ==
        doctest::Approx(2 * 1.2 * std::sqrt(1 - 0.36)).epsilon(1e-12));
}
