#include <cmath>
#include <numbers>

#include "doctest.h"
#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/regularize.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

double fact(int j) {
  double f = 1;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

// Pf int_0^1 t^z e^t dt by the termwise series (log 1 = 0 at the pole term).
double exp_series_pf(double z) {
  double s = 0;
  for (int j = 0; j < 40; ++j) {
    const double e = z + j + 1;
    if (std::abs(e) > 1e-12) s += 1.0 / (fact(j) * e);
  }
  return s;
}

TaylorJet exp_jet(int n) {
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = 1.0 / fact(j);
  return TaylorJet(c);
}

// psi' of the unit circle: 4/sqrt(4 - t^2) on [0, 2).
double circle_dpsi(double t) { return 4.0 / std::sqrt(4.0 - t * t); }
// Same with 2 - t supplied exactly near the endpoint.
double circle_dpsi_near2(double t, double gap) { return 4.0 / std::sqrt(gap * (2.0 + t)); }

TaylorJet circle_dpsi_jet() {
  // 2 (1 - t^2/4)^{-1/2} = 2 + t^2/4 + 3 t^4/64 + 5 t^6/512
  return TaylorJet({2.0, 0.0, 0.25, 0.0, 3.0 / 64, 0.0, 5.0 / 512}, Parity::even);
}

PsiProfile circle_profile() {
  auto tail = [](cplx z) {
    const double zr = z.real();
    return cplx(tanh_sinh(
        [zr](double t, double xc) {
          return std::pow(t, zr) * (xc > 0 ? circle_dpsi_near2(t, xc) : circle_dpsi(t));
        },
        1.0, 2.0));
  };
  return PsiProfile::sample(circle_dpsi_jet(), 1.0, circle_dpsi, 2.0, tail);
}

}  // namespace

TEST_CASE("jet parity is enforced on construction") {
  TaylorJet j({1.0, 2.0, 3.0, 4.0}, Parity::even);
  CHECK(j[1] == 0.0);
  CHECK(j[3] == 0.0);
  CHECK(j[2] == 3.0);
  CHECK(j.next_free_order() == 4);
  TaylorJet o({1.0, 2.0, 3.0}, Parity::odd);
  CHECK(o[0] == 0.0);
  CHECK(o.next_free_order() == 3);
  CHECK(TaylorJet({0.0, 2.0, 0.0}, Parity::odd).next_free_order() == 3);
  CHECK(TaylorJet({0.0, 2.0}, Parity::odd).next_free_order() == 3);
}

TEST_CASE("finite part of monomials") {
  for (double d : {0.5, 1.0, 2.0}) {
    for (double z : {-0.5, -2.5}) {
      const auto r = finite_part_jet(TaylorJet({1.0}), d, z);
      CHECK(std::abs(r.finite_part - std::pow(d, z + 1) / (z + 1)) < 1e-12);
      CHECK(r.residue == cplx(0.0));
      CHECK_FALSE(r.has_log);
    }
    const auto r = finite_part_jet(TaylorJet({1.0}), d, -1.0);
    CHECK(std::abs(r.finite_part - std::log(d)) < 1e-12);
    CHECK(r.residue == cplx(1.0));
    CHECK(r.has_log);
  }
  const auto zero = finite_part_jet(TaylorJet({0.0, 0.0, 0.0}), 3.0, -2.0);
  CHECK(zero.finite_part == cplx(0.0));
  CHECK(zero.residue == cplx(0.0));
}

TEST_CASE("finite part of a profile") {
  SUBCASE("phi = t at z = -2") {
    auto p = PsiProfile::sample(TaylorJet({0.0, 1.0}), 1.0, [](double t) { return t; }, 1.0);
    const auto r = finite_part_profile(p, -2.0);
    CHECK(std::abs(r.finite_part) < 1e-14);
    CHECK(r.residue == cplx(1.0));
  }
  SUBCASE("exp on [0, 1] against the termwise series") {
    auto p = PsiProfile::sample(exp_jet(4), 1.0, [](double t) { return std::exp(t); }, 1.0);
    for (double z : {-1.0, -2.0, -2.5, -0.3, 1.7, -3.0}) {
      const auto r = finite_part_profile(p, z);
      CHECK(std::abs(r.finite_part - exp_series_pf(z)) < 1e-12);
    }
    CHECK(finite_part_profile(p, -1.0).residue == cplx(1.0));
    CHECK(std::abs(finite_part_profile(p, -1.0).finite_part - 1.3179021514544038) < 1e-12);
    CHECK_THROWS_AS(finite_part_profile(p, -5.0), Error);
  }
  SUBCASE("convergent exponents reduce to plain quadrature") {
    auto phi = [](double t) { return std::cos(t) + t * t * t; };
    TaylorJet j({1.0, 0.0, -0.5, 1.0});
    auto p = PsiProfile::sample(j, 1.3, phi, 1.3);
    for (double z : {-0.5, -0.9, 0.0, 2.0}) {
      const double direct =
          tanh_sinh([&](double t, double) { return std::pow(t, z) * phi(t); }, 0.0, 1.3);
      CHECK(std::abs(finite_part_profile(p, z).finite_part - direct) < 1e-12 * std::abs(direct));
    }
  }
  SUBCASE("linearity") {
    auto p = PsiProfile::sample(exp_jet(4), 1.0, [](double t) { return std::exp(t); }, 1.0);
    auto q = PsiProfile::sample(TaylorJet({1.0, 0.0, -0.5, 0.0}), 1.0,
                                [](double t) { return std::cos(t); }, 1.0);
    const auto c = combine(2.0, p, -3.0, q);
    for (double z : {-0.5, -2.0, -2.5}) {
      const cplx lhs = finite_part_profile(c, z).finite_part;
      const cplx rhs =
          2.0 * finite_part_profile(p, z).finite_part - 3.0 * finite_part_profile(q, z).finite_part;
      CHECK(std::abs(lhs - rhs) < 1e-13);
    }
  }
  SUBCASE("complex exponent matches the series") {
    auto p = PsiProfile::sample(exp_jet(5), 1.0, [](double t) { return std::exp(t); }, 1.0);
    const cplx z(-2.3, 0.7);
    cplx s = 0.0;
    for (int j = 0; j < 40; ++j) s += 1.0 / (fact(j) * (z + double(j + 1)));
    CHECK(std::abs(finite_part_profile(p, z).finite_part - s) < 1e-12);
  }
}

TEST_CASE("unit circle profile: continuation equals the closed form") {
  const auto p = circle_profile();
  for (double z : {-0.5, -1.5, -2.5}) {
    const cplx e = 2 * pi * finite_part_profile(p, z).finite_part;
    CHECK(std::abs(e - beta_sphere(1, z)) < 1e-10 * std::abs(beta_sphere(1, z)));
  }
  // z = -2: the continuation has no pole and vanishes; the residue is zero by parity.
  const auto r2 = finite_part_profile(p, -2.0);
  CHECK(std::abs(r2.finite_part) < 1e-11);
  CHECK_FALSE(r2.has_log);
}

TEST_CASE("laurent fit recovers exact basis members") {
  std::vector<CutoffSample> s;
  for (int i = 3; i <= 10; ++i) {
    const double e = std::ldexp(1.0, -i);
    s.push_back({e, std::log(1.0 / e)});
  }
  auto f = laurent_fit(s, -1.0, 1);
  CHECK(std::abs(f.log_coeff + 1.0) < 1e-10);
  CHECK(std::abs(f.constant) < 1e-10);

  s.clear();
  for (double e : eps_schedule(0.25)) s.push_back({e, 1.0 / e + 5.0});
  f = laurent_fit(s, -2.0, 1);
  CHECK(std::abs(f.coefficient(1) - 1.0) < 1e-10);
  CHECK(std::abs(f.constant - 5.0) < 1e-10);
  CHECK(f.diagnostics.condition_number > 1.0);

  std::vector<CutoffSample> few(s.begin(), s.begin() + 3);
  CHECK_THROWS_AS(laurent_fit(few, -2.0, 3), Error);
}

TEST_CASE("laurent fit of the circle cutoff matches the continuation") {
  // Cutoff of the unit circle at z = -2: 2 pi (cot(phi0/2)) with sin(phi0/2) = eps/2.
  std::vector<CutoffSample> s;
  for (double e : eps_schedule(0.25)) {
    const double phi0 = 2 * std::asin(0.5 * e);
    s.push_back({e, 2 * pi / std::tan(0.5 * phi0)});
  }
  LaurentFitOptions o;
  o.stride = 2;
  const auto f = laurent_fit(s, -2.0, 7, o);
  CHECK(std::abs(f.coefficient(1) - 4 * pi) < 1e-8);  // 2 L / eps
  CHECK(std::abs(f.constant) < 1e-8);
}

TEST_CASE("pole removal") {
  for (double d : {0.5, 2.0}) {
    auto F = [d](cplx z) { return std::pow(d, z + 1.0) / (z + 1.0); };
    CHECK(std::abs(pole_removed_value(F, 1, 1.0) - std::log(d)) < 1e-10);
  }
  auto G = [](cplx z) { return std::exp(z); };
  CHECK(std::abs(pole_removed_value(G, 2, 0.0) - std::exp(-2.0)) < 1e-10);
  // B_{S^1} at -3 against the profile continuation.
  const cplx e3 = pole_removed_value([](cplx z) { return beta_sphere(1, z); }, 3, pi / 2);
  const auto p = circle_profile();
  CHECK(std::abs(e3 - 2 * pi * finite_part_profile(p, -3.0).finite_part) < 1e-9);
  // Wrong residue or a double pole is rejected.
  CHECK_THROWS_AS(pole_removed_value([](cplx z) { return 1.0 / (z + 1.0); }, 1, 2.0), Error);
  CHECK_THROWS_AS(
      pole_removed_value([](cplx z) { return 1.0 / ((z + 1.0) * (z + 1.0)); }, 1, 0.0), Error);
}
