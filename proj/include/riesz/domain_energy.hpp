#pragma once

// Riesz energies of compact domains Omega in R^n.
//
//   volume-direct       convex domains, Re z > -n: chord decomposition
//                       E = int_{S^{n-1}} du int_{u-perp} dp g(l(p, u)),
//                       g(l) = int_0^l s^{z+n-1} (l - s) ds
//   boundary-integral   n = 2, 3, any z: E(z) = f(z) G(z + 2) with
//                       f = -1/((z+2)(z+n)) and G(w) = int int r^w <n_x, n_y>,
//                       G continued through the weighted boundary profile
//   closed-form         balls
//
// At z = -2 and z = -n the prefactor f has a pole; there the energy is taken
// from the Taylor expansion of G, which brings in log r kernels.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz/closed_energy.hpp"

namespace riesz {

struct DomainEnergyReport {
  std::string domain_id;
  cplx z;
  cplx value;
  Method method = Method::boundary_integral;
  cplx residue_at_z = 0.0;
  std::vector<ResidueEntry> residues;  // at -n, -n-1, -n-3 from curvature integrals
  std::optional<int> euler_characteristic;  // n = 2
  double error_estimate = 0.0;
  double runtime_seconds = 0.0;
  int level = 0;
};

DomainEnergyReport domain_energy_direct(const Domain& domain, cplx z, const EnergyOptions& opts = {});
// Throws ExcludedExponent at z = -2 and z = -n.
DomainEnergyReport domain_energy_boundary(const Domain& domain, cplx z, const EnergyOptions& opts = {});
// Balls only; Laurent constant term at a pole.
DomainEnergyReport domain_energy_closed_form(const Domain& domain, cplx z);
// Boundary route for n = 2, 3 (including z = -2, -n and the poles), closed
// form for 4-balls, direct otherwise when possible.
DomainEnergyReport domain_energy(const Domain& domain, cplx z, const EnergyOptions& opts = {});

// Integral over {|x - y| > eps} for convex domains (chord decomposition).
std::vector<double> domain_energy_cutoff(const Domain& domain, double z, std::span<const double> eps,
                                         double tol = 1e-13);

// P(z) over Omega x Omega^c for -n-1 < z < -n, as minus the boundary-route value.
double fractional_perimeter(const Domain& domain, double z, const EnergyOptions& opts = {});

struct PerimeterCrossCheck {
  double boundary = 0.0;  // fractional_perimeter
  double direct = 0.0;    // exterior part integrated radially
  double tail = 0.0;      // exterior contribution beyond the truncation radius, in closed form
  double truncation_radius = 0.0;
};
// Disks centred anywhere: P from int_Omega dx int_{Omega^c} |x - y|^z dy.
PerimeterCrossCheck fractional_perimeter_disk_check(const Domain& disk, double z, const EnergyOptions& opts = {});

std::vector<ResidueEntry> domain_residues(const Domain& domain);
// 4-dimensional formula: R(-4) = 2 pi^2 V4, R(-5) = -(4/3) pi V3, R(-7) = (pi/90) int (27 H^2 - 4 K).
std::vector<ResidueEntry> domain_residues_dim4(double volume4, double boundary_volume, double int_27H2_minus_4K);

// R(-n) from the boundary double integrals: -int int log r <n_x, n_y> (n = 2)
// and int int r^{2-n} <n_x, n_y> / (n - 2) (n = 3).
ResidueEntry boundary_volume_residue(const Domain& domain, const EnergyOptions& opts = {});

// Log coefficient of a Laurent fit of cutoff samples (convex domains).
ResidueEntry domain_residue_from_cutoff(const Domain& domain, int k, const EnergyOptions& opts = {});

// Cutoff schedule for domains: opts.eps times 0.8 / max boundary curvature (the radius for 4-balls).
std::vector<double> domain_eps(const Domain& domain, const EnergyOptions& opts);

struct Minus2nReport {
  DomainEnergyReport energy;  // E(-2n)
  std::optional<double> cutoff_value;  // eps-cutoff with the exact counterterms (convex domains)
  std::optional<double> pole_removed;  // symmetric pole removal (n = 3)
  std::vector<std::pair<int, double>> counterterms;  // (k, R(-k)): adds R eps^{z+k}/(z+k), R log eps at z = -k
};
// Throws MethodsDisagree when the cross-checks differ beyond tolerance.
Minus2nReport regularized_minus2n_energy(const Domain& domain, const EnergyOptions& opts = {});

// E(Omega) = E(-4) + pi^2 chi / 4 for planar domains.
DomainEnergyReport planar_energy(const Domain& domain, const EnergyOptions& opts = {});

// Unit ball in R^n; throws PoleAt on a pole.
cplx beta_ball_closed_form(int n, cplx z);

ScalingReport domain_scaling_law_check(const Domain& domain, cplx z, double c, const EnergyOptions& opts = {});

// Laurent orders j = n..n+5 of the cutoff integral (convex domains).
ParityAudit domain_parity_audit(const Domain& domain, double z, const EnergyOptions& opts = {});

}  // namespace riesz
