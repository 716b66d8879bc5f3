#pragma once

// Extrinsic-ball profiles psi_x(t) = vol(M ∩ B_t(x)) of closed curves and
// surfaces, their normal-weighted variants on domain boundaries, and the
// domain profile psi_Omega(t) = vol{(x, y) in Omega^2 : |x - y| <= t}.
// Points on a shape are given by parameters: (theta, ignored) for curves,
// the base chart (u, v) for surfaces.

#include <vector>

#include "riesz/pair_engine.hpp"
#include "riesz/regularize.hpp"
#include "riesz/shapes.hpp"

namespace riesz {

// psi_x(t) by bracketing |y - x| = t along every ray of the polar fan at x.
double psi_numeric(const Shape& shape, double u, double v, double t,
                   PairWeight weight = PairWeight::none, int rays = 64);

// Jet of psi_x from curvature: curves [0, 2, 0, k^2/12, 0],
// surfaces [0, 0, pi, 0, pi (k1 - k2)^2 / 32].
TaylorJet b_jet_analytic(const Shape& shape, double u, double v);

struct JetFit {
  TaylorJet jet;
  std::vector<double> errors;  // one standard error per coefficient, 0 where forced
  double condition = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
};

// Least-squares fit of psi_numeric samples at 40 geometric radii in
// [diameter 1e-3, d / 4]. With `parity` the killed orders are forced to zero;
// without it every order in [1, order] is fitted, which is how parity is tested.
JetFit b_jet_numeric(const Shape& shape, double u, double v, int order, bool parity = true);

// Integrated jet coefficients: entry k is the integral of b_k over M.
struct BCoefficients {
  int m = 1;
  std::vector<double> integrated;
};
BCoefficients b_coefficients(const Shape& shape);

// psi_Omega jet at orders n and n + 1 for n in {2, 3}.
TaylorJet psi_domain_jet(const Domain& domain);

// Profile of psi'_rho at a boundary point, rho(y) = <n_x, n_y>, on the radial grid of [0, d].
// d <= 0 picks 0.8 / (max boundary curvature).
PsiProfile psi_rho_profile(const Domain& domain, double u, double v, double d = 0.0,
                           const RegularizeOptions& reg = {});

// Jet of psi_rho itself (not its derivative) from the curvature at a boundary point.
TaylorJet psi_rho_jet(int n, double k1, double k2);

// Rough diameter from a coarse point cloud.
double shape_diameter(const Shape& shape);

// Default near radius 0.8 / max curvature used by the profile machinery.
double default_near_radius(const Shape& shape);

}  // namespace riesz
