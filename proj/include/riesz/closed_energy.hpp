#pragma once

// Regularized z-energies E_M(z) = B_M(z) of closed curves and surfaces.
//
//   direct                 Re z > -m: the convergent double integral
//   profile-continuation   any z: finite part of the aggregated radial profile
//   counterterm-cutoff     real z: |x - y| > eps integrals plus jet counterterms,
//                          extrapolated to eps -> 0 over a schedule
//   closed-form            unit spheres
//
// At a pole the reported value is the constant term of the Laurent expansion
// and residue_at_z carries the residue.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riesz/pair_engine.hpp"
#include "riesz/shapes.hpp"

namespace riesz {

enum class Method {
  direct,
  counterterm_cutoff,
  profile_continuation,
  closed_form,
  volume_direct,
  boundary_integral,
};
std::string to_string(Method m);

struct EnergyReport {
  std::string shape_id;
  cplx z;
  cplx value;
  Method method = Method::direct;
  cplx residue_at_z = 0.0;
  std::vector<std::pair<int, double>> counterterms;  // (j, j * integral of b_j)
  double error_estimate = 0.0;
  double runtime_seconds = 0.0;
  int level = 0;
};

struct EnergyOptions {
  int level = 1;  // reported resolution; the error estimate compares with the next coarser one
  std::vector<double> eps = eps_schedule(0.25, 0.7071067811865476, 12);  // fractions of the near radius
  double tol = 1e-6;  // relative floor for method agreement
  int threads = 0;
};

// Outer grid, ray counts and far-field tensor density per level. The tensor
// density has to grow with the level too: its aliasing error does not shrink
// when only the outer grid is refined.
struct Resolution {
  int outer = 0;
  int rays = 0;
  double inner_density = 12.0;
};
Resolution closed_resolution(const Shape& shape, int level);

std::vector<EnergyReport> closed_energies(const Shape& shape, std::span<const cplx> zs, Method method,
                                          const EnergyOptions& opts = {});

EnergyReport energy_direct(const Shape& shape, cplx z, const EnergyOptions& opts = {});
EnergyReport energy_continuation(const Shape& shape, cplx z, const EnergyOptions& opts = {});
EnergyReport energy_counterterm(const Shape& shape, double z, const EnergyOptions& opts = {});

// Integral over {|x - y| > eps} for each eps (absolute radii, decreasing).
std::vector<double> energy_cutoff(const Shape& shape, double z, std::span<const double> eps,
                                  const EnergyOptions& opts = {});
double energy_cutoff(const Shape& shape, double z, double eps, const EnergyOptions& opts = {});

// Counterterm-cutoff value cross-checked against profile continuation;
// throws MethodsDisagree when they differ beyond the combined tolerance.
EnergyReport energy_hadamard(const Shape& shape, double z, const EnergyOptions& opts = {});

// direct when Re z > -m + 1/2, profile continuation otherwise.
EnergyReport energy(const Shape& shape, cplx z, const EnergyOptions& opts = {});

struct ResidueEntry {
  int k = 0;  // pole at z = -k
  double value = 0.0;
  double error_estimate = 0.0;
};
// First two poles from curvature integrals: curves k = 1, 3; surfaces k = 2, 4.
std::vector<ResidueEntry> residues(const Shape& shape);

// Residue at z = -k from the log coefficient of a Laurent fit of raw cutoff
// samples; independent of the curvature integrals used by residues().
ResidueEntry residue_from_cutoff(const Shape& shape, int k, const EnergyOptions& opts = {});

// Unconstrained Laurent fit of cutoff samples at a non-integer z, orders
// j = first..last in eps^{z+j}. Each coefficient is reported in fit-window units
// |a_j| eps0^{Re z + j} (eps0 the largest cutoff) so orders can be compared.
struct ParityAudit {
  double z = 0.0;
  int leading_order = 0;
  double leading = 0.0;
  std::vector<int> orders;
  std::vector<double> scaled;
  std::vector<bool> forbidden;
  double worst_ratio = 0.0;  // max over forbidden orders of scaled / leading
};
ParityAudit parity_audit(const Shape& shape, double z, const EnergyOptions& opts = {});

// Unit sphere S^n; throws PoleAt on a pole.
cplx beta_sphere_closed_form(int n, cplx z);

struct ScalingReport {
  double c = 1.0;
  cplx z;
  cplx scaled;     // E_{cM}(z) computed on the scaled shape
  cplx predicted;  // c^{2m+z} (E_M(z) + log c R_M(z))
  cplx defect;     // scaled - predicted
  cplx homothety_defect;  // predicted - E_M(z), the change the law predicts
  double error_estimate = 0.0;
};
ScalingReport scaling_law_check(const Shape& shape, cplx z, double c, const EnergyOptions& opts = {});

}  // namespace riesz
