#include <cmath>

#include "doctest.h"
#include "riesz/domain_energy.hpp"
#include "riesz/errors.hpp"
#include "riesz/moebius.hpp"
#include "riesz/special.hpp"

using namespace riesz;

namespace {

constexpr double pi = 3.14159265358979323846;

bool throws_kind(ErrorKind kind, const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("volume-direct energies of balls") {
  const Domain disk = make_ball(2, 1.0);
  const Domain ball = make_ball(3, 1.0);
  CHECK(domain_energy_direct(disk, 0.0).value.real() == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(domain_energy_direct(ball, 0.0).value.real() == doctest::Approx(16 * pi * pi / 9).epsilon(1e-12));
  // Newtonian self-energies of uniform unit disk and ball
  CHECK(domain_energy_direct(disk, -1.0).value.real() == doctest::Approx(16 * pi / 3).epsilon(1e-10));
  CHECK(domain_energy_direct(ball, -1.0).value.real() == doctest::Approx(32 * pi * pi / 15).epsilon(1e-10));
  CHECK(throws_kind(ErrorKind::ExponentNotConvergent, [&] { domain_energy_direct(disk, -2.5); }));
}

TEST_CASE("boundary route matches volume-direct") {
  for (const Domain& d : {make_ball(2, 1.0), make_ball(3, 1.0), make_superellipse_domain(1.5, 1.0, 4.0)})
    for (double z : {0.0, -0.5, -1.0}) {
      const auto a = domain_energy_boundary(d, z);
      const auto b = domain_energy_direct(d, z);
      CHECK(a.value.real() == doctest::Approx(b.value.real()).epsilon(1e-8));
    }
  CHECK(throws_kind(ErrorKind::ExcludedExponent, [] { domain_energy_boundary(make_ball(2, 1.0), -2.0); }));
  CHECK(throws_kind(ErrorKind::ExcludedExponent, [] { domain_energy_boundary(make_ball(3, 1.0), -3.0); }));
}

TEST_CASE("special exponents through the log kernels") {
  // z = -2 is analytic for n = 3 and a pole for n = 2
  const auto b = domain_energy(make_ball(3, 1.0), -2.0);
  CHECK(b.value.real() == doctest::Approx(domain_energy_closed_form(make_ball(3, 1.0), -2.0).value.real()).epsilon(1e-8));
  const auto d = domain_energy(make_ball(2, 1.0), -2.0);
  CHECK(d.residue_at_z.real() == doctest::Approx(2 * pi * pi).epsilon(1e-8));
  CHECK(d.value.real() == doctest::Approx(domain_energy_closed_form(make_ball(2, 1.0), -2.0).value.real()).epsilon(1e-7));
  const auto p = domain_energy(make_ball(3, 1.0), -3.0);
  CHECK(p.residue_at_z.real() == doctest::Approx(16 * pi * pi / 3).epsilon(1e-8));
}

TEST_CASE("ball closed forms") {
  CHECK(beta_ball_closed_form(2, 0.0).real() == doctest::Approx(pi * pi).epsilon(1e-13));
  CHECK(beta_ball_closed_form(3, -1.0).real() == doctest::Approx(32 * pi * pi / 15).epsilon(1e-12));
  // planar poles sit at -2, -3, -5, ...; -2n = -4 is regular
  CHECK(throws_kind(ErrorKind::PoleAt, [] { beta_ball_closed_form(2, -3.0); }));
  CHECK_NOTHROW(beta_ball_closed_form(2, -4.0));
  CHECK(throws_kind(ErrorKind::PoleAt, [] { beta_ball_closed_form(3, -6.0); }));
  CHECK_NOTHROW(beta_ball_closed_form(3, -8.0));
  CHECK_NOTHROW(beta_ball_closed_form(3, -5.0));
}

TEST_CASE("fractional perimeter of the disk") {
  const Domain disk = make_ball(2, 1.0);
  const double p = fractional_perimeter(disk, -2.5);
  CHECK(p > 0.0);
  CHECK(domain_energy(disk, -2.5).value.real() == doctest::Approx(-p).epsilon(1e-12));
  const auto c = fractional_perimeter_disk_check(disk, -2.5);
  CHECK(c.direct == doctest::Approx(p).epsilon(1e-6));
  CHECK(c.truncation_radius == doctest::Approx(16.0));
  // no log term inside the convergence strip
  const Shape big = transform_shape(MoebiusMap::homothety(2.0), disk);
  CHECK(fractional_perimeter(std::get<Domain>(big), -2.5) == doctest::Approx(std::pow(2.0, 1.5) * p).epsilon(1e-8));
  CHECK(throws_kind(ErrorKind::ExponentOutOfRange, [&] { fractional_perimeter(disk, -1.5); }));
}

TEST_CASE("domain residues") {
  const auto d = domain_residues(make_ball(2, 1.0));
  REQUIRE(d.size() == 3);
  CHECK(d[0].value == doctest::Approx(2 * pi * pi).epsilon(1e-10));
  CHECK(d[1].value == doctest::Approx(-4 * pi).epsilon(1e-10));
  CHECK(d[2].value == doctest::Approx(pi / 6).epsilon(1e-10));
  const auto b = domain_residues(make_ball(3, 1.0));
  CHECK(b[0].value == doctest::Approx(16 * pi * pi / 3).epsilon(1e-10));
  CHECK(b[1].value == doctest::Approx(-4 * pi * pi).epsilon(1e-10));
  CHECK(b[2].value == doctest::Approx(pi * pi / 3).epsilon(1e-8));
  const auto f = domain_residues_dim4(2.0, 3.0, 90.0);
  CHECK(f[0].value == doctest::Approx(4 * pi * pi));
  CHECK(f[1].value == doctest::Approx(-4 * pi));
  CHECK(f[2].value == doctest::Approx(pi));
}

TEST_CASE("boundary volume residues") {
  CHECK(boundary_volume_residue(make_ball(2, 1.0)).value == doctest::Approx(2 * pi * pi).epsilon(1e-8));
  CHECK(boundary_volume_residue(make_ball(3, 1.0)).value == doctest::Approx(16 * pi * pi / 3).epsilon(1e-6));
}

TEST_CASE("cutoff residues of the disk") {
  const Domain disk = make_ball(2, 1.0);
  CHECK(domain_residue_from_cutoff(disk, 2).value == doctest::Approx(2 * pi * pi).epsilon(1e-8));
  CHECK(domain_residue_from_cutoff(disk, 3).value == doctest::Approx(-4 * pi).epsilon(1e-8));
  CHECK(domain_residue_from_cutoff(disk, 5).value == doctest::Approx(pi / 6).epsilon(1e-4));
  CHECK_THROWS_AS(domain_residue_from_cutoff(disk, 4), Error);
}

TEST_CASE("regularized -2n energies") {
  const Domain disk = make_ball(2, 1.0);
  const auto r = regularized_minus2n_energy(disk);
  REQUIRE(r.cutoff_value);
  CHECK(r.energy.value.real() == doctest::Approx(*r.cutoff_value).epsilon(1e-8));
  CHECK(r.energy.value.real() == doctest::Approx(domain_energy_closed_form(disk, -4.0).value.real()).epsilon(1e-9));
  CHECK(planar_energy(disk).value.real() == doctest::Approx(r.energy.value.real() + pi * pi / 4).epsilon(1e-14));
  // n = 2: no pole at -2n, so E(-4) is scale invariant
  const auto s = domain_scaling_law_check(disk, -4.0, 2.0);
  CHECK(std::abs(s.scaled - r.energy.value) < 1e-8);
}

TEST_CASE("domain scaling and parity") {
  const Domain se = make_superellipse_domain(1.5, 1.0, 4.0);
  const auto s = domain_scaling_law_check(se, -1.5, 2.0);
  CHECK(std::abs(s.defect) < 1e-10 * std::abs(s.predicted));
  const auto a = domain_parity_audit(make_ball(2, 1.0), -2.5);
  CHECK(a.leading_order == 2);
  CHECK(a.worst_ratio < 1e-6);
}
