#include "riesz/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;

cplx lanczos_gamma(cplx a) {
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (a.real() < 0.5) return kPi / (std::sin(kPi * a) * lanczos_gamma(1.0 - a));
  a -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (a + static_cast<double>(i));
  const cplx t = a + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, a + 0.5) * std::exp(-t) * x;
}

double factorial(int j) {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

// Residue in z of Gamma((z + shift)/2) at the pole where the argument is -j.
double half_gamma_residue(int j) { return 2.0 * ((j % 2 == 0) ? 1.0 : -1.0) / factorial(j); }

}  // namespace

bool is_nonpositive_integer(cplx a, double tol) {
  if (std::abs(a.imag()) > tol || a.real() > tol) return false;
  return std::abs(a.real() - std::round(a.real())) <= tol;
}

int negative_integer_index(cplx z, double tol) {
  if (std::abs(z.imag()) > tol) return 0;
  const double k = -std::round(z.real());
  if (k < 1 || std::abs(z.real() + k) >= tol) return 0;
  return static_cast<int>(k);
}

cplx gamma_c(cplx a) {
  if (is_nonpositive_integer(a, 0.0))
    throw Error(ErrorKind::PoleAt, "Gamma has a pole at a nonpositive integer");
  if (a.imag() == 0.0) return std::tgamma(a.real());
  return lanczos_gamma(a);
}

cplx rgamma(cplx a) {
  if (is_nonpositive_integer(a, 0.0)) return 0.0;
  return 1.0 / gamma_c(a);
}

cplx gamma_ratio(cplx a, cplx c) {
  const bool pa = is_nonpositive_integer(a, 0.0), pc = is_nonpositive_integer(c, 0.0);
  if (pa && pc) {
    // Gamma(-p + e)/Gamma(-q + e) -> (-1)^{p-q} q!/p!
    const int p = static_cast<int>(-a.real()), q = static_cast<int>(-c.real());
    const double sign = ((p - q) % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(q) / factorial(p);
  }
  if (pa) throw Error(ErrorKind::PoleAt, "Gamma ratio has a pole");
  return gamma_c(a) * rgamma(c);
}

cplx beta_c(cplx a, cplx b) { return gamma_c(b) * gamma_ratio(a, a + b); }

double sphere_area(int k) {
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double ball_volume(int k) { return sphere_area(k - 1) / k; }

cplx beta_sphere_literal(int n, cplx z) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "sphere dimension must be >= 1");
  if (negative_integer_index(z, 0.0) != 0) {
    const int k = negative_integer_index(z, 0.0);
    for (const auto& p : beta_sphere_poles(n, k))
      if (p.k == k) throw Error(ErrorKind::PoleAt, "z = " + std::to_string(-k));
  }
  const cplx a = 0.5 * (z + static_cast<double>(n));
  return std::pow(2.0, z + static_cast<double>(n)) * sphere_area(n - 1) * sphere_area(n) *
         beta_c(a, 0.5 * n);
}

cplx beta_sphere(int n, cplx z) { return 0.5 * beta_sphere_literal(n, z); }

std::vector<Pole> beta_sphere_poles(int n, int k_max) {
  std::vector<Pole> out;
  for (int j = 0; n + 2 * j <= k_max; ++j) {
    const double z = -n - 2.0 * j;
    const cplx pre = 0.5 * std::pow(2.0, z + n) * sphere_area(n - 1) * sphere_area(n);
    const cplx res = pre * half_gamma_residue(j) * std::tgamma(0.5 * n) * rgamma(0.5 * n - j);
    if (std::abs(res) > 0.0) out.push_back({n + 2 * j, res});
  }
  return out;
}

cplx beta_ball(int n, cplx z) {
  if (n < 2) throw Error(ErrorKind::InvalidParams, "ball dimension must be >= 2");
  if (const int k = negative_integer_index(z, 0.0); k != 0) {
    for (const auto& p : beta_ball_poles(n, k))
      if (p.k == k) throw Error(ErrorKind::PoleAt, "z = " + std::to_string(-k));
  }
  const double dn = n;
  const cplx pre =
      std::pow(2.0, z + dn) * sphere_area(n - 1) * sphere_area(n - 2) / ((dn - 1.0) * (z + dn));
  return pre * beta_c(0.5 * (z + dn + 1.0), 0.5 * (dn + 1.0));
}

std::vector<Pole> beta_ball_poles(int n, int k_max) {
  std::vector<Pole> out;
  const double dn = n;
  const double q = sphere_area(n - 1) * sphere_area(n - 2) / (dn - 1.0);
  if (n <= k_max) out.push_back({n, q * beta_c(0.5, 0.5 * (dn + 1.0))});
  for (int j = 0; n + 1 + 2 * j <= k_max; ++j) {
    const double z = -dn - 1.0 - 2.0 * j;
    const cplx res = q * std::pow(2.0, z + dn) / (z + dn) * half_gamma_residue(j) *
                     std::tgamma(0.5 * (dn + 1.0)) * rgamma(0.5 * (dn + 1.0) - j);
    if (std::abs(res) > 0.0) out.push_back({n + 1 + 2 * j, res});
  }
  return out;
}

}  // namespace riesz
