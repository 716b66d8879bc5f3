#pragma once

#include <complex>
#include <vector>

namespace riesz {

using cplx = std::complex<double>;

// Gamma for complex arguments (Lanczos with reflection); std::tgamma on the real axis.
cplx gamma_c(cplx a);
// 1/Gamma, entire; exactly zero at nonpositive integers.
cplx rgamma(cplx a);
// Gamma(a)/Gamma(c), including the limit when both are poles.
cplx gamma_ratio(cplx a, cplx c);
cplx beta_c(cplx a, cplx b);

// Nonpositive integer test with a small absolute tolerance.
bool is_nonpositive_integer(cplx a, double tol = 1e-12);
// Negative integer -k (k >= 1) nearest to z if |z + k| < tol, else 0.
int negative_integer_index(cplx z, double tol = 1e-12);

// Volume of the unit k-sphere S^k in R^{k+1}: o_0 = 2, o_1 = 2 pi, o_2 = 4 pi, ...
double sphere_area(int k);
// Volume of the unit ball in R^k.
double ball_volume(int k);

struct Pole {
  int k;         // pole at z = -k
  cplx residue;  // exact residue
};

// B for the unit sphere S^n as a submanifold of R^{n+1}:
// 2^{z+n-1} o_{n-1} o_n B((z+n)/2, n/2). The literal variant omits the 1/2.
cplx beta_sphere(int n, cplx z);
cplx beta_sphere_literal(int n, cplx z);
std::vector<Pole> beta_sphere_poles(int n, int k_max);

// B for the unit ball in R^n: 2^{z+n} o_{n-1} o_{n-2} / ((n-1)(z+n)) B((z+n+1)/2, (n+1)/2).
cplx beta_ball(int n, cplx z);
std::vector<Pole> beta_ball_poles(int n, int k_max);

}  // namespace riesz
