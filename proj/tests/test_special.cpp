#include <cmath>
#include <numbers>

#include "doctest.h"
#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/special.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }
}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    const Rule& r = gauss_legendre(n);
    for (int p = 0; p < 2 * n; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("gamma on and off the real axis") {
  CHECK(rel(gamma_c(0.5), std::sqrt(pi)) < 1e-15);
  CHECK(rel(gamma_c(cplx(1.0, 1.0)), cplx(0.49801566811835604, -0.15494982830181069)) < 1e-13);
  const cplx z(0.3, 0.7);
  CHECK(rel(gamma_c(z) * gamma_c(1.0 - z), pi / std::sin(pi * z)) < 1e-13);
  CHECK(rgamma(-3.0) == cplx(0.0));
  CHECK(rel(gamma_ratio(-2.0, -4.0), cplx(12.0)) < 1e-15);  // 4!/2!
  CHECK_THROWS_AS(gamma_c(-1.0), Error);
}

TEST_CASE("unit sphere volumes") {
  CHECK(sphere_area(0) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2 * pi));
  CHECK(sphere_area(2) == doctest::Approx(4 * pi));
  CHECK(sphere_area(3) == doctest::Approx(2 * pi * pi));
  CHECK(ball_volume(3) == doctest::Approx(4 * pi / 3));
}

TEST_CASE("sphere closed form against independent integrals") {
  // Circle: B(z) = 2 pi * int_0^{2 pi} (2 sin(phi/2))^z dphi.
  for (double z : {0.0, 1.0, -0.5, 2.5}) {
    const double inner = tanh_sinh(
        [z](double phi, double) { return std::pow(2.0 * std::sin(0.5 * phi), z); }, 0.0, pi);
    CHECK(rel(beta_sphere(1, z), 4 * pi * inner) < 1e-12);
  }
  CHECK(rel(beta_sphere(1, 1.0), 16 * pi) < 1e-13);
  // The literal normalization is off by exactly 2.
  CHECK(rel(beta_sphere_literal(1, 0.0), 8 * pi * pi) < 1e-13);
  // S^2 via psi = pi t^2: B(z) = 4 pi * 2 pi * 2^{z+2} / (z + 2).
  for (double z : {0.0, -1.0, -1.5, 1.0, 3.0}) {
    CHECK(rel(beta_sphere(2, z), 8 * pi * pi * std::pow(2.0, z + 2) / (z + 2)) < 1e-13);
  }
}

TEST_CASE("sphere pole structure") {
  CHECK(beta_sphere_poles(2, 40).size() == 1);
  CHECK(beta_sphere_poles(4, 40).size() == 2);
  CHECK(beta_sphere_poles(6, 60).size() == 3);
  CHECK(beta_sphere_poles(1, 41).size() == 21);
  const auto p1 = beta_sphere_poles(1, 3);
  REQUIRE(p1.size() == 2);
  CHECK(rel(p1[0].residue, 4 * pi) < 1e-14);
  CHECK(rel(p1[1].residue, pi / 2) < 1e-14);
  CHECK(rel(beta_sphere_poles(2, 2)[0].residue, 8 * pi * pi) < 1e-14);
  CHECK_THROWS_AS(beta_sphere(2, -2.0), Error);
  CHECK_NOTHROW(beta_sphere(2, -4.0));
  CHECK(std::abs(beta_sphere(1, -2.0)) < 1e-15);
}

TEST_CASE("ball closed form") {
  CHECK(rel(beta_ball(2, 0.0), pi * pi) < 1e-13);
  CHECK(rel(beta_ball(3, 0.0), std::pow(4 * pi / 3, 2)) < 1e-13);
  // n = 3 rational form 2^{z+7} pi^2 / ((z+3)(z+4)(z+6)).
  for (double z : {-1.0, -2.5, 1.5, -7.0, -8.0}) {
    CHECK(rel(beta_ball(3, z), std::pow(2.0, z + 7) * pi * pi / ((z + 3) * (z + 4) * (z + 6))) <
          1e-13);
  }
  const auto p3 = beta_ball_poles(3, 60);
  REQUIRE(p3.size() == 3);
  CHECK(p3[0].k == 3);
  CHECK(p3[1].k == 4);
  CHECK(p3[2].k == 6);
  CHECK(rel(p3[0].residue, 16 * pi * pi / 3) < 1e-14);
  CHECK(rel(p3[1].residue, -4 * pi * pi) < 1e-14);
  CHECK(rel(p3[2].residue, pi * pi / 3) < 1e-14);
  CHECK(beta_ball_poles(5, 80).size() == 4);
  const auto p2 = beta_ball_poles(2, 5);
  REQUIRE(p2.size() == 3);
  CHECK(rel(p2[0].residue, 2 * pi * pi) < 1e-14);
  CHECK(rel(p2[1].residue, -4 * pi) < 1e-14);
  CHECK(rel(p2[2].residue, pi / 6) < 1e-14);
  CHECK(beta_ball_poles(2, 41).size() == 21);
  const auto p4 = beta_ball_poles(4, 8);
  REQUIRE(p4.size() == 3);
  CHECK(rel(p4[0].residue, std::pow(pi, 4)) < 1e-14);
  CHECK(rel(p4[1].residue, -8 * std::pow(pi, 3) / 3) < 1e-14);
  CHECK(rel(p4[2].residue, std::pow(pi, 3) / 3) < 1e-14);
}
