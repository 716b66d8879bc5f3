#include "riesz/closed_energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"
#include "riesz/moebius.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_closed(const Shape& shape) {
  if (std::holds_alternative<Domain>(shape))
    throw Error(ErrorKind::InvalidParams, "closed-manifold energies need a curve or surface; use domain_energy");
}

PairGeometry geometry_at(const Shape& shape, int level) {
  const Resolution r = closed_resolution(shape, level);
  if (const auto* c = std::get_if<Curve>(&shape)) return PairGeometry(*c, r.outer);
  return PairGeometry(std::get<Surface>(shape), r.outer, r.rays);
}

// The reported level and the one it is compared with.
std::array<int, 2> levels(int level) {
  if (level < 0) throw Error(ErrorKind::InvalidParams, "level must be nonnegative");
  return {level, level > 0 ? level - 1 : level + 1};
}

PairPassResult pass_at(const Shape& shape, int level, PairPassRequest rq) {
  rq.inner_density = closed_resolution(shape, level).inner_density;
  return run_pair_pass(geometry_at(shape, level), rq);
}

std::array<PairPassResult, 2> two_passes(const Shape& shape, PairPassRequest rq, const EnergyOptions& opts) {
  rq.threads = opts.threads;
  const auto lv = levels(opts.level);
  return {pass_at(shape, lv[0], rq), pass_at(shape, lv[1], rq)};
}

std::vector<std::pair<int, double>> counterterm_list(const Shape& shape) {
  const BCoefficients b = b_coefficients(shape);
  std::vector<std::pair<int, double>> out;
  for (std::size_t k = 1; k < b.integrated.size(); ++k)
    if (b.integrated[k] != 0.0) out.emplace_back(static_cast<int>(k), k * b.integrated[k]);
  return out;
}

EnergyReport base_report(const Shape& shape, cplx z, Method m, int level) {
  EnergyReport r;
  r.shape_id = shape_id(shape);
  r.z = z;
  r.method = m;
  r.level = level;
  return r;
}

// Cutoff integral plus the jet counterterms: sum_j c_j eps^{z+j+1}/(z+j+1),
// c_j log eps when the exponent vanishes. c_j are the aggregated psi' jet.
std::vector<CutoffSample> corrected_samples(const PairPassResult& r, std::size_t iz, double z) {
  const TaylorJet& jet = r.profile.jet();
  std::vector<CutoffSample> s;
  for (std::size_t ie = 0; ie < r.eps.size(); ++ie) {
    const double e = r.eps[ie];
    double v = r.cutoff_near[iz][ie] + r.far[iz].real();
    for (int j = 0; j < jet.order(); ++j) {
      if (jet[j] == 0.0) continue;
      const double p = z + j + 1;
      v += std::abs(p) < 1e-12 ? jet[j] * std::log(e) : jet[j] * std::pow(e, p) / p;
    }
    s.push_back({e, v});
  }
  return s;
}

std::vector<CutoffSample> raw_samples(const PairPassResult& r, std::size_t iz) {
  std::vector<CutoffSample> s;
  for (std::size_t ie = 0; ie < r.eps.size(); ++ie)
    s.push_back({r.eps[ie], r.cutoff_near[iz][ie] + r.far[iz].real()});
  return s;
}

// Remainder after the jet counterterms starts at eps^{z + m + 4}.
LaurentFitOptions remainder_fit(int m) {
  LaurentFitOptions o;
  o.first_order = m + 4;
  o.stride = 2;
  return o;
}

// Constant of the remainder fit, with the change from dropping the widest sample
// as a stability estimate.
std::pair<double, double> fit_constant(const std::vector<CutoffSample>& s, double z, int m) {
  const LaurentFitOptions o = remainder_fit(m);
  const int k_max = o.first_order + 2;
  const double full = laurent_fit(s, z, k_max, o).constant.real();
  const std::vector<CutoffSample> tail(s.begin() + 1, s.end());
  const double drop = laurent_fit(tail, z, k_max, o).constant.real();
  return {full, std::abs(full - drop)};
}

struct SphereId {
  int n = 0;
  double r = 0.0;
};

// Round circles and spheres recognized from their builtin id.
std::optional<SphereId> round_sphere(const Shape& shape) {
  if (std::holds_alternative<Domain>(shape)) return std::nullopt;
  ShapeSpec spec;
  try {
    spec = parse_shape_spec(shape_id(shape));
  } catch (const Error&) {
    return std::nullopt;
  }
  const auto it = spec.params.find("r");
  const double r = it == spec.params.end() ? 1.0 : it->second;
  if (spec.name == "circle") return SphereId{1, r};
  if (spec.name == "sphere") return SphereId{2, r};
  return std::nullopt;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::counterterm_cutoff: return "counterterm-cutoff";
    case Method::profile_continuation: return "profile-continuation";
    case Method::closed_form: return "closed-form";
    case Method::volume_direct: return "volume-direct";
    case Method::boundary_integral: return "boundary-integral";
  }
  return "unknown";
}

Resolution closed_resolution(const Shape& shape, int level) {
  if (std::holds_alternative<Curve>(shape)) return {256 << level, 0, 12.0 * (1 << level)};
  if (const auto* s = std::get_if<Surface>(&shape)) {
    const double dens = 12.0 + 6.0 * level;
    if (s->topology() == Topology::torus) return {16 + 8 * level, 32 + 16 * level, dens};
    return {16 + 8 * level, 16 + 16 * level, dens};
  }
  throw Error(ErrorKind::InvalidParams, "resolution levels are defined for curves and surfaces");
}

std::vector<EnergyReport> closed_energies(const Shape& shape, std::span<const cplx> zs, Method method,
                                          const EnergyOptions& opts) {
  require_closed(shape);
  const auto t0 = Clock::now();
  const int m = shape_dimension(shape);
  std::vector<EnergyReport> out;
  if (zs.empty()) return out;

  if (method == Method::closed_form) {
    const auto sph = round_sphere(shape);
    if (!sph) throw Error(ErrorKind::InvalidParams, "closed form is available for round circles and spheres only");
    for (cplx z : zs) {
      EnergyReport r = base_report(shape, z, method, opts.level);
      r.value = std::pow(sph->r, 2.0 * m + z) * beta_sphere_closed_form(sph->n, z);
      r.runtime_seconds = seconds_since(t0);
      out.push_back(r);
    }
    return out;
  }

  PairPassRequest rq;
  for (cplx z : zs) rq.far.push_back({z, 0});
  switch (method) {
    case Method::direct:
      for (cplx z : zs) {
        if (!(z.real() > -m))
          throw Error(ErrorKind::ExponentNotConvergent, "direct quadrature needs Re z > -" + std::to_string(m));
        rq.direct.push_back({z, 0});
      }
      break;
    case Method::profile_continuation:
      rq.profile = true;
      break;
    case Method::counterterm_cutoff:
      rq.profile = true;
      for (cplx z : zs) {
        if (z.imag() != 0.0) throw Error(ErrorKind::InvalidParams, "counterterm-cutoff needs real z");
        rq.cutoff_z.push_back(z.real());
      }
      rq.eps = opts.eps;
      rq.eps_relative = true;
      break;
    default:
      throw Error(ErrorKind::InvalidParams, "method " + to_string(method) + " does not apply to closed manifolds");
  }
  const auto passes = two_passes(shape, rq, opts);
  const auto counterterms = counterterm_list(shape);

  for (std::size_t i = 0; i < zs.size(); ++i) {
    EnergyReport r = base_report(shape, zs[i], method, opts.level);
    cplx v[2];
    for (int p = 0; p < 2; ++p) {
      const PairPassResult& pr = passes[p];
      if (method == Method::direct) {
        v[p] = pr.direct_near[i] + pr.far[i];
      } else if (method == Method::profile_continuation) {
        const RegularizedValue fp = finite_part_profile(pr.profile, zs[i], rq.reg);
        v[p] = fp.finite_part + pr.far[i];
        if (p == 0) r.residue_at_z = fp.residue;
      } else {
        const auto [c, spread] = fit_constant(corrected_samples(pr, i, zs[i].real()), zs[i].real(), m);
        v[p] = c;
        if (p == 0) r.error_estimate = spread;
      }
    }
    if (method == Method::counterterm_cutoff) {
      r.counterterms = counterterms;
      if (negative_integer_index(zs[i]) > 0) r.residue_at_z = finite_part_profile(passes[0].profile, zs[i]).residue;
    }
    r.value = v[0];
    r.error_estimate += std::abs(v[0] - v[1]);
    out.push_back(r);
  }
  const double dt = seconds_since(t0);
  for (auto& r : out) r.runtime_seconds = dt;
  return out;
}

EnergyReport energy_direct(const Shape& shape, cplx z, const EnergyOptions& opts) {
  const cplx zs[] = {z};
  return closed_energies(shape, zs, Method::direct, opts).front();
}

EnergyReport energy_continuation(const Shape& shape, cplx z, const EnergyOptions& opts) {
  const cplx zs[] = {z};
  return closed_energies(shape, zs, Method::profile_continuation, opts).front();
}

EnergyReport energy_counterterm(const Shape& shape, double z, const EnergyOptions& opts) {
  const cplx zs[] = {z};
  return closed_energies(shape, zs, Method::counterterm_cutoff, opts).front();
}

std::vector<double> energy_cutoff(const Shape& shape, double z, std::span<const double> eps,
                                  const EnergyOptions& opts) {
  require_closed(shape);
  for (double e : eps)
    if (!(e > 0.0)) throw Error(ErrorKind::InvalidParams, "cutoff radius must be positive");
  PairPassRequest rq;
  rq.far = {{z, 0}};
  rq.cutoff_z = {z};
  rq.threads = opts.threads;
  // radii at or beyond the near radius fall to the near radius being shrunk
  const double top = *std::max_element(eps.begin(), eps.end());
  const double d0 = default_near_radius(shape);
  if (top >= d0) rq.d = 1.25 * top;
  rq.eps.assign(eps.begin(), eps.end());
  const auto r = pass_at(shape, opts.level, rq);
  std::vector<double> out;
  for (std::size_t ie = 0; ie < eps.size(); ++ie) out.push_back(r.cutoff_near[0][ie] + r.far[0].real());
  return out;
}

double energy_cutoff(const Shape& shape, double z, double eps, const EnergyOptions& opts) {
  const double e[] = {eps};
  return energy_cutoff(shape, z, e, opts).front();
}

EnergyReport energy_hadamard(const Shape& shape, double z, const EnergyOptions& opts) {
  const EnergyReport c = energy_counterterm(shape, z, opts);
  const EnergyReport p = energy_continuation(shape, z, opts);
  const double diff = std::abs(c.value - p.value);
  const double allowed =
      std::max(3.0 * std::hypot(c.error_estimate, p.error_estimate), opts.tol * std::max(1.0, std::abs(p.value)));
  if (diff > allowed)
    throw Error(ErrorKind::MethodsDisagree, "counterterm-cutoff " + std::to_string(c.value.real()) +
                                                " vs profile-continuation " + std::to_string(p.value.real()));
  EnergyReport r = c;
  r.error_estimate = std::max(c.error_estimate, diff);
  r.runtime_seconds = c.runtime_seconds + p.runtime_seconds;
  return r;
}

EnergyReport energy(const Shape& shape, cplx z, const EnergyOptions& opts) {
  require_closed(shape);
  if (z.real() > -shape_dimension(shape) + 0.5) return energy_direct(shape, z, opts);
  return energy_continuation(shape, z, opts);
}

std::vector<ResidueEntry> residues(const Shape& shape) {
  require_closed(shape);
  const CurvatureIntegrals ci = curvature_integrals(shape);
  const double e = ci.error_estimate;
  if (std::holds_alternative<Curve>(shape))
    return {{1, 2.0 * ci.measure, 2.0 * e}, {3, ci.integral_kappa_sq / 4.0, e / 4.0}};
  return {{2, 2.0 * kPi * ci.measure, 2.0 * kPi * e}, {4, kPi / 8.0 * ci.integral_umbilic_defect, kPi / 8.0 * e}};
}

ResidueEntry residue_from_cutoff(const Shape& shape, int k, const EnergyOptions& opts) {
  require_closed(shape);
  const int m = shape_dimension(shape);
  if (k < m || (k - m) % 2 != 0)
    throw Error(ErrorKind::InvalidParams, "no pole of this shape class at z = -" + std::to_string(k));
  PairPassRequest rq;
  const double z = -k;
  rq.far = {{z, 0}};
  rq.cutoff_z = {z};
  rq.eps = opts.eps;
  rq.eps_relative = true;
  const auto passes = two_passes(shape, rq, opts);
  LaurentFitOptions o;
  o.first_order = m;
  o.stride = 2;
  const int k_max = k + 4;
  double v[2];
  for (int p = 0; p < 2; ++p) v[p] = -laurent_fit(raw_samples(passes[p], 0), z, k_max, o).log_coeff.real();
  return {k, v[0], std::abs(v[0] - v[1])};
}

ParityAudit parity_audit(const Shape& shape, double z, const EnergyOptions& opts) {
  require_closed(shape);
  if (negative_integer_index(cplx(z), 1e-6) > 0)
    throw Error(ErrorKind::InvalidParams, "parity audit needs a non-integer exponent");
  const int m = shape_dimension(shape);
  PairPassRequest rq;
  rq.far = {{z, 0}};
  rq.cutoff_z = {z};
  rq.eps = opts.eps;
  rq.eps_relative = true;
  rq.threads = opts.threads;
  const auto r = pass_at(shape, opts.level, rq);
  LaurentFitOptions o;
  o.first_order = m;
  o.stride = 1;
  const auto fit = laurent_fit(raw_samples(r, 0), z, m + 4, o);
  const double eps0 = r.eps.front();

  ParityAudit a;
  a.z = z;
  a.leading_order = m;
  for (std::size_t i = 0; i < fit.orders.size(); ++i) {
    const int j = fit.orders[i];
    const double s = std::abs(fit.coeffs[i]) * std::pow(eps0, z + j);
    a.orders.push_back(j);
    a.scaled.push_back(s);
    a.forbidden.push_back((j - m) % 2 != 0);
    if (j == m) a.leading = s;
  }
  for (std::size_t i = 0; i < a.orders.size(); ++i)
    if (a.forbidden[i]) a.worst_ratio = std::max(a.worst_ratio, a.scaled[i] / a.leading);
  return a;
}

cplx beta_sphere_closed_form(int n, cplx z) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "sphere dimension must be positive");
  const int k = negative_integer_index(z);
  if (k > 0)
    for (const Pole& p : beta_sphere_poles(n, k + 2))
      if (p.k == k) throw Error(ErrorKind::PoleAt, "closed form has a pole at z = -" + std::to_string(k));
  return beta_sphere(n, z);
}

ScalingReport scaling_law_check(const Shape& shape, cplx z, double c, const EnergyOptions& opts) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParams, "scale factor must be positive");
  require_closed(shape);
  const int m = shape_dimension(shape);
  ScalingReport s;
  s.c = c;
  s.z = z;
  const EnergyReport base = energy(shape, z, opts);
  const EnergyReport scaled = energy(transform_shape(MoebiusMap::homothety(c), shape), z, opts);
  s.scaled = scaled.value;
  s.predicted = std::pow(c, 2.0 * m + z) * (base.value + std::log(c) * base.residue_at_z);
  s.defect = s.scaled - s.predicted;
  s.homothety_defect = s.predicted - base.value;
  s.error_estimate = std::hypot(base.error_estimate * std::pow(c, 2.0 * m + z.real()), scaled.error_estimate);
  return s;
}

}  // namespace riesz
