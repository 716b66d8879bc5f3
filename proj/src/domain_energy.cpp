#include "riesz/domain_energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"
#include "riesz/moebius.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- chords

// int_eps^l s^{b-1} ds, written to stay accurate when l is close to eps.
double power_integral(double b, double eps, double l) {
  const double x = std::log(l / eps);
  if (std::abs(b) < 1e-14) return x;
  return std::pow(eps, b) * std::expm1(b * x) / b;
}

// g(l) = int_eps^l s^{z+n-1} (l - s) ds; eps = 0 is the uncut form (needs z > -n).
double chord_weight(double z, int n, double eps, double l) {
  const double a = z + n;
  if (eps == 0.0) return std::pow(l, a + 1.0) / (a * (a + 1.0));
  if (l <= eps) return 0.0;
  return l * power_integral(a, eps, l) - power_integral(a + 1.0, eps, l);
}

// Chords of a planar convex domain in direction theta, from its boundary curve:
// <gamma(t), n> is monotone on the two arcs between the support points, so each
// end of a chord is a bracketed root.
class PlanarChords {
 public:
  PlanarChords(const Curve& c, double theta)
      : c_(c), u_{std::cos(theta), std::sin(theta), 0.0}, n_{-std::sin(theta), std::cos(theta), 0.0} {
    const int m = 256;
    int imax = 0, imin = 0;
    std::vector<double> h(m);
    for (int i = 0; i < m; ++i) {
      h[i] = dot(c.point(2 * kPi * i / m), n_);
      if (h[i] > h[imax]) imax = i;
      if (h[i] < h[imin]) imin = i;
    }
    t_max_ = refine_extremum(2 * kPi * imax / m, 2 * kPi / m);
    t_min_ = refine_extremum(2 * kPi * imin / m, 2 * kPi / m);
    p_max_ = dot(c.point(t_max_), n_);
    p_min_ = dot(c.point(t_min_), n_);
  }

  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }

  double length(double p) const {
    if (p <= p_min_ || p >= p_max_) return 0.0;
    double a = t_min_, b = t_max_;
    if (b < a) b += 2 * kPi;
    const double t1 = root(a, b, p);
    double a2 = t_max_, b2 = t_min_;
    if (b2 < a2) b2 += 2 * kPi;
    const double t2 = root(a2, b2, p);
    return std::abs(dot(c_.point(t2) - c_.point(t1), u_));
  }

 private:
  double h(double t) const { return dot(c_.point(t), n_); }

  // Stationary point of h near t0 (Newton on h' with a bracket of half-width w).
  double refine_extremum(double t0, double w) const {
    double lo = t0 - w, hi = t0 + w, t = t0;
    auto dh = [&](double s) {
      const auto j = c_.jet3(s);
      return std::pair{dot(j[1], n_), dot(j[2], n_)};
    };
    double flo = dh(lo).first;
    for (int it = 0; it < 100; ++it) {
      const auto [f, fp] = dh(t);
      if (f == 0.0) break;
      if ((f < 0) == (flo < 0)) {
        lo = t;
        flo = f;
      } else {
        hi = t;
      }
      double next = fp != 0.0 ? t - f / fp : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-15 * (1.0 + std::abs(t))) {
        t = next;
        break;
      }
      t = next;
    }
    return t;
  }

  // h(t) = p on [a, b] where h is monotone.
  double root(double a, double b, double p) const {
    double fa = h(a) - p;
    double t = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
      const auto j = c_.jet1(t);
      const double f = dot(j[0], n_) - p, fp = dot(j[1], n_);
      if (f == 0.0) return t;
      if ((f < 0) == (fa < 0)) {
        a = t;
        fa = f;
      } else {
        b = t;
      }
      double next = fp != 0.0 ? t - f / fp : 0.5 * (a + b);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - t) <= 4e-16 * (1.0 + std::abs(t)) || b - a < 1e-15) return next;
      t = next;
    }
    return t;
  }

  const Curve& c_;
  Vec3d u_, n_;
  double t_min_ = 0.0, t_max_ = 0.0, p_min_ = 0.0, p_max_ = 0.0;
};

// Chord directions in [0, pi) tangent to the boundary at strict local minima of
// the curvature; empty for curves of constant curvature.
std::vector<double> flat_directions(const Curve& c) {
  const int m = 1024;
  std::vector<double> k(m);
  for (int i = 0; i < m; ++i) k[i] = curvature_curve(c, 2 * kPi * i / m);
  const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
  std::vector<double> out;
  if (*hi - *lo < 1e-9 * *hi) return out;
  for (int i = 0; i < m; ++i) {
    const double prev = k[(i + m - 1) % m], next = k[(i + 1) % m];
    if (!(k[i] < prev && k[i] <= next)) continue;
    // golden section on the curvature within the neighbouring samples
    double a = 2 * kPi * (i - 1) / m, b = 2 * kPi * (i + 1) / m;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
      const double x1 = b - g * (b - a), x2 = a + g * (b - a);
      if (curvature_curve(c, x1) < curvature_curve(c, x2))
        b = x2;
      else
        a = x1;
    }
    const Vec3d nrm = c.planar_normal(0.5 * (a + b));
    double th = std::atan2(nrm.y, nrm.x) - 0.5 * kPi;
    th = std::fmod(th, kPi);
    if (th < 0.0) th += kPi;
    out.push_back(th);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double t : out)
    if (uniq.empty() || t - uniq.back() > 1e-9) uniq.push_back(t);
  if (uniq.size() > 1 && uniq.front() + kPi - uniq.back() < 1e-9) uniq.pop_back();
  return uniq;
}

bool has_chords(const Domain& d) {
  return d.ball().has_value() || (d.dim() == 2 && d.convex() && d.has_boundary_parameterization());
}

struct ChordResult {
  double value = 0.0;
  double error = 0.0;
};

// int over all oriented lines of g(chord length), restricted to chords longer than eps.
ChordResult chord_integral(const Domain& d, double z, double eps, double tol) {
  const int n = d.dim();
  if (const auto& b = d.ball()) {
    const double r = b->radius;
    if (2 * r <= eps) return {};
    const double rho_max = eps > 0.0 ? std::sqrt(r * r - 0.25 * eps * eps) : r;
    double err = 0.0;
    const double v = tanh_sinh(
        [&](double rho, double) {
          const double l = 2.0 * std::sqrt(std::max(0.0, (r - rho) * (r + rho)));
          return std::pow(rho, n - 2) * chord_weight(z, n, eps, l);
        },
        0.0, rho_max, tol, &err);
    const double c = sphere_area(n - 1) * sphere_area(n - 2);
    return {c * v, c * err + 1e-14 * std::abs(c * v)};
  }
  if (!has_chords(d)) throw Error(ErrorKind::InvalidParams, "chord integrals need a ball or a convex planar domain");

  const Curve& curve = d.boundary_curve();
  auto at_theta = [&](double theta) {
    const PlanarChords ch(curve, theta);
    double lo = ch.p_min(), hi = ch.p_max();
    if (eps > 0.0) {
      // chord length is concave in p: the set {l > eps} is an interval around the longest chord
      double a = lo, bb = hi;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = bb - g * (bb - a), x2 = a + g * (bb - a);
      double f1 = ch.length(x1), f2 = ch.length(x2);
      for (int it = 0; it < 80 && bb - a > 1e-13 * (hi - lo); ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (bb - a);
          f2 = ch.length(x2);
        } else {
          bb = x2;
          x2 = x1;
          f2 = f1;
          x1 = bb - g * (bb - a);
          f1 = ch.length(x1);
        }
      }
      const double pm = 0.5 * (a + bb);
      if (ch.length(pm) <= eps) return 0.0;
      auto cross = [&](double in, double out) {
        for (int it = 0; it < 200 && std::abs(out - in) > 1e-15 * (hi - lo); ++it) {
          const double mid = 0.5 * (in + out);
          (ch.length(mid) > eps ? in : out) = mid;
        }
        return 0.5 * (in + out);
      };
      lo = cross(pm, lo);
      hi = cross(pm, hi);
    }
    return tanh_sinh([&](double p, double) { return chord_weight(z, n, eps, ch.length(p)); }, lo, hi, tol);
  };
  // theta and theta + pi give the same chords. The support function is singular
  // in the directions tangent at curvature minima (flat points of q = 4 curves),
  // so theta is split there and each panel gets tanh-sinh.
  const std::vector<double> breaks = flat_directions(curve);
  if (breaks.empty()) {
    auto trapezoid = [&](int m) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += at_theta(kPi * i / m);
      return 2.0 * kPi / m * s;
    };
    const double coarse = trapezoid(32);
    double fine_extra = 0.0;
    for (int i = 0; i < 32; ++i) fine_extra += at_theta(kPi * (i + 0.5) / 32);
    const double fine = 0.5 * coarse + 2.0 * kPi / 64 * fine_extra;
    return {fine, std::abs(fine - coarse) + 1e-13 * std::abs(fine)};
  }
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double a = breaks[i], b = i + 1 < breaks.size() ? breaks[i + 1] : breaks.front() + kPi;
    double e = 0.0;
    total += tanh_sinh([&](double th, double) { return at_theta(th); }, a, b, 1e-11, &e);
    err += e;
  }
  return {2.0 * total, 2.0 * err + 1e-13 * std::abs(total)};
}

// ---------------------------------------------------------------- boundary route

void require_boundary_route(const Domain& d) {
  if (d.dim() != 2 && d.dim() != 3)
    throw Error(ErrorKind::UnsupportedDimension, "boundary integrals need n = 2 or 3");
  if (!d.has_boundary_parameterization())
    throw Error(ErrorKind::InvalidParams, "boundary integrals need a boundary parameterization");
}

PairPassResult boundary_pass(const Domain& d, int level, PairPassRequest rq) {
  const Shape b = d.dim() == 2 ? Shape(d.boundary_curve()) : Shape(d.boundary_surface());
  const Resolution r = closed_resolution(b, level);
  rq.inner_density = r.inner_density;
  if (d.dim() == 2) return run_pair_pass(PairGeometry(d.boundary_curve(), r.outer), rq);
  return run_pair_pass(PairGeometry(d.boundary_surface(), r.outer, r.rays), rq);
}

std::array<PairPassResult, 2> boundary_passes(const Domain& d, PairPassRequest rq, const EnergyOptions& opts) {
  require_boundary_route(d);
  if (opts.level < 0) throw Error(ErrorKind::InvalidParams, "level must be nonnegative");
  rq.weight = PairWeight::normal_dot;
  rq.threads = opts.threads;
  const int other = opts.level > 0 ? opts.level - 1 : opts.level + 1;
  return {boundary_pass(d, opts.level, rq), boundary_pass(d, other, rq)};
}

bool near_int(cplx z, double k) { return std::abs(z - cplx(k)) < 1e-12; }

DomainEnergyReport base_report(const Domain& d, cplx z, Method m, int level) {
  DomainEnergyReport r;
  r.domain_id = d.id();
  r.z = z;
  r.method = m;
  r.level = level;
  if (d.dim() == 2) r.euler_characteristic = d.euler_characteristic();
  if (d.dim() == 2 || d.dim() == 3 || d.ball()) r.residues = domain_residues(d);
  return r;
}

// Value and residue of the boundary route at one exponent, for both levels.
struct RouteValue {
  cplx value[2];
  cplx residue = 0.0;
};

RouteValue boundary_route(const Domain& d, cplx z, const EnergyOptions& opts) {
  const int n = d.dim();
  PairPassRequest rq;
  RouteValue out;
  if (near_int(z, -2.0) || near_int(z, -n)) {
    // prefactor pole: expand G around w = z + 2
    if (n == 3 && near_int(z, -2.0)) {
      rq.direct = {{0.0, 1}};
      rq.far = {{0.0, 1}};
      const auto p = boundary_passes(d, rq, opts);
      for (int i = 0; i < 2; ++i) out.value[i] = -(p[i].direct_near[0] + p[i].far[0]);
    } else if (n == 2) {
      rq.direct = {{0.0, 1}, {0.0, 2}};
      rq.far = {{0.0, 1}, {0.0, 2}};
      const auto p = boundary_passes(d, rq, opts);
      for (int i = 0; i < 2; ++i) out.value[i] = -0.5 * (p[i].direct_near[1] + p[i].far[1]);
      out.residue = -(p[0].direct_near[0] + p[0].far[0]);
    } else {  // n = 3, z = -3
      rq.direct = {{-1.0, 0}, {-1.0, 1}};
      rq.far = {{-1.0, 0}, {-1.0, 1}};
      const auto p = boundary_passes(d, rq, opts);
      for (int i = 0; i < 2; ++i) {
        const cplx g = p[i].direct_near[0] + p[i].far[0];
        out.value[i] = g + p[i].direct_near[1] + p[i].far[1];
        if (i == 0) out.residue = g;
      }
    }
    return out;
  }
  const cplx w = z + 2.0;
  rq.profile = true;
  rq.far = {{w, 0}};
  const auto p = boundary_passes(d, rq, opts);
  const cplx den = (z + 2.0) * (z + static_cast<double>(n));
  const cplx f = -1.0 / den;
  const cplx fp = (2.0 * z + static_cast<double>(n + 2)) / (den * den);
  for (int i = 0; i < 2; ++i) {
    const RegularizedValue g = finite_part_profile(p[i].profile, w, rq.reg);
    out.value[i] = f * (g.finite_part + p[i].far[0]) + fp * g.residue;
    if (i == 0) out.residue = f * g.residue;
  }
  return out;
}

DomainEnergyReport route_report(const Domain& d, cplx z, const EnergyOptions& opts) {
  const auto t0 = Clock::now();
  DomainEnergyReport r = base_report(d, z, Method::boundary_integral, opts.level);
  const RouteValue v = boundary_route(d, z, opts);
  r.value = v.value[0];
  r.residue_at_z = v.residue;
  r.error_estimate = std::abs(v.value[0] - v.value[1]);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

double ball_radius(const Domain& d) {
  if (!d.ball()) throw Error(ErrorKind::InvalidParams, "closed form needs a ball");
  return d.ball()->radius;
}

std::vector<std::pair<int, double>> residue_counterterms(const Domain& d) {
  std::vector<std::pair<int, double>> out;
  for (const ResidueEntry& e : domain_residues(d)) out.emplace_back(e.k, e.value);
  return out;
}

std::vector<CutoffSample> cutoff_samples(const Domain& d, double z, const std::vector<double>& eps) {
  const auto v = domain_energy_cutoff(d, z, eps);
  std::vector<CutoffSample> s;
  for (std::size_t i = 0; i < eps.size(); ++i) s.push_back({eps[i], v[i]});
  return s;
}

}  // namespace

// ---------------------------------------------------------------- energies

DomainEnergyReport domain_energy_direct(const Domain& d, cplx z, const EnergyOptions& opts) {
  const auto t0 = Clock::now();
  if (!(z.real() > -d.dim()))
    throw Error(ErrorKind::ExponentNotConvergent, "direct quadrature needs Re z > -" + std::to_string(d.dim()));
  if (z.imag() != 0.0) throw Error(ErrorKind::InvalidParams, "volume-direct quadrature takes real z");
  if (!has_chords(d)) throw Error(ErrorKind::InvalidParams, "volume-direct quadrature needs a ball or convex planar domain");
  DomainEnergyReport r = base_report(d, z, Method::volume_direct, opts.level);
  const ChordResult c = chord_integral(d, z.real(), 0.0, 1e-13);
  r.value = c.value;
  r.error_estimate = c.error;
  r.runtime_seconds = seconds_since(t0);
  return r;
}

DomainEnergyReport domain_energy_boundary(const Domain& d, cplx z, const EnergyOptions& opts) {
  require_boundary_route(d);
  if (near_int(z, -2.0) || near_int(z, -d.dim()))
    throw Error(ErrorKind::ExcludedExponent, "boundary formula excludes z = -2 and z = -n");
  return route_report(d, z, opts);
}

DomainEnergyReport domain_energy_closed_form(const Domain& d, cplx z) {
  const auto t0 = Clock::now();
  const double r = ball_radius(d);
  const int n = d.dim();
  DomainEnergyReport rep = base_report(d, z, Method::closed_form, 0);
  const int k = negative_integer_index(z);
  cplx res = 0.0;
  if (k > 0)
    for (const Pole& p : beta_ball_poles(n, k + 2))
      if (p.k == k) res = p.residue;
  if (res != 0.0) {
    const cplx fp = pole_removed_value([n](cplx w) { return beta_ball(n, w); }, k, res);
    rep.value = std::pow(r, 2.0 * n - k) * (fp + std::log(r) * res);
    rep.residue_at_z = std::pow(r, 2.0 * n - k) * res;
    rep.error_estimate = 1e-9 * std::abs(rep.value);
  } else {
    rep.value = std::pow(r, 2.0 * n + z) * beta_ball(n, z);
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

DomainEnergyReport domain_energy(const Domain& d, cplx z, const EnergyOptions& opts) {
  if (d.dim() == 4) {
    if (d.ball()) return domain_energy_closed_form(d, z);
    throw Error(ErrorKind::UnsupportedDimension, "4-dimensional domains other than balls are not supported");
  }
  if (d.has_boundary_parameterization()) return route_report(d, z, opts);
  if (z.real() > -d.dim() && has_chords(d)) return domain_energy_direct(d, z, opts);
  throw Error(ErrorKind::InvalidParams, "no energy method applies to this domain");
}

std::vector<double> domain_energy_cutoff(const Domain& d, double z, std::span<const double> eps, double tol) {
  std::vector<double> out;
  for (double e : eps) {
    if (!(e > 0.0)) throw Error(ErrorKind::InvalidParams, "cutoff radius must be positive");
    out.push_back(chord_integral(d, z, e, tol).value);
  }
  return out;
}

std::vector<double> domain_eps(const Domain& d, const EnergyOptions& opts) {
  double base = 0.0;
  if (d.has_boundary_parameterization())
    base = default_near_radius(Shape(d));
  else
    base = 0.8 * ball_radius(d);
  std::vector<double> e;
  for (double x : opts.eps) e.push_back(x * base);
  return e;
}

// ---------------------------------------------------------------- perimeter

double fractional_perimeter(const Domain& d, double z, const EnergyOptions& opts) {
  const int n = d.dim();
  if (!(z > -n - 1.0 && z < -n))
    throw Error(ErrorKind::ExponentOutOfRange, "fractional perimeter needs -n-1 < z < -n");
  return -domain_energy_boundary(d, z, opts).value.real();
}

PerimeterCrossCheck fractional_perimeter_disk_check(const Domain& disk, double z, const EnergyOptions& opts) {
  if (disk.dim() != 2 || !disk.ball()) throw Error(ErrorKind::InvalidParams, "the direct check needs a disk");
  PerimeterCrossCheck c;
  c.boundary = fractional_perimeter(disk, z, opts);
  const double R = disk.ball()->radius;
  // Exterior distances from x run to infinity; the part beyond T (measured from
  // x) is exactly 2 pi T^{z+2} / (-(z+2)) per point, so it is added in closed form.
  const double T = 8.0 * 2.0 * R;
  c.truncation_radius = T;
  const double a = z + 2.0;
  const double tail_per_point = 2.0 * kPi * std::pow(T, a) / (-a);
  c.tail = kPi * R * R * tail_per_point;
  const double inner = tanh_sinh(
      [&](double rho, double rc) {
        // R - rho from the complement near the rim, where the exit distance is tiny
        const double gap = rc > 0.0 ? rc : R - rho;
        const double k2 = gap * (R + rho);
        const double ang = tanh_sinh(
            [&](double phi, double) {
              const double c = std::cos(phi);
              const double root = std::sqrt(k2 + rho * rho * c * c);  // sqrt(R^2 - rho^2 sin^2)
              const double se = c > 0.0 ? k2 / (rho * c + root) : root - rho * c;
              return (std::pow(se, a) - std::pow(T, a)) / (-a);
            },
            0.0, kPi, 1e-12);
        return 2.0 * kPi * rho * 2.0 * ang;
      },
      0.0, R, 1e-11);
  c.direct = inner + c.tail;
  return c;
}

// ---------------------------------------------------------------- residues

std::vector<ResidueEntry> domain_residues(const Domain& d) {
  const CurvatureIntegrals ci = curvature_integrals(Shape(d));
  const double e = ci.error_estimate;
  switch (d.dim()) {
    case 2:
      return {{2, 2 * kPi * ci.enclosed_volume, 2 * kPi * e},
              {3, -2 * ci.measure, 2 * e},
              {5, ci.integral_kappa_sq / 12.0, e / 12.0}};
    case 3:
      return {{3, 4 * kPi * ci.enclosed_volume, 4 * kPi * e},
              {4, -kPi * ci.measure, kPi * e},
              {6, kPi / 24.0 * ci.integral_3H2_minus_K, kPi / 24.0 * e}};
    case 4:
      if (!d.ball()) throw Error(ErrorKind::UnsupportedDimension, "4-dimensional residues are for balls only");
      return domain_residues_dim4(ci.enclosed_volume, ci.measure, ci.integral_27H2_minus_4K);
    default:
      throw Error(ErrorKind::UnsupportedDimension, "domain residues need n = 2, 3 or a 4-ball");
  }
}

std::vector<ResidueEntry> domain_residues_dim4(double v4, double v3, double i27) {
  return {{4, 2 * kPi * kPi * v4, 0.0}, {5, -4.0 / 3.0 * kPi * v3, 0.0}, {7, kPi / 90.0 * i27, 0.0}};
}

ResidueEntry boundary_volume_residue(const Domain& d, const EnergyOptions& opts) {
  const int n = d.dim();
  PairPassRequest rq;
  const Kernel k = n == 2 ? Kernel{0.0, 1} : Kernel{2.0 - n, 0};
  rq.direct = {k};
  rq.far = {k};
  const auto p = boundary_passes(d, rq, opts);
  const double s = n == 2 ? -1.0 : 1.0 / (n - 2.0);
  double v[2];
  for (int i = 0; i < 2; ++i) v[i] = s * (p[i].direct_near[0] + p[i].far[0]).real();
  return {n, v[0], std::abs(v[0] - v[1])};
}

ResidueEntry domain_residue_from_cutoff(const Domain& d, int k, const EnergyOptions& opts) {
  const int n = d.dim();
  if (!(k == n || (k > n && (k - n) % 2 == 1)))
    throw Error(ErrorKind::InvalidParams, "no pole of a domain at z = -" + std::to_string(k));
  const auto s = cutoff_samples(d, -k, domain_eps(d, opts));
  LaurentFitOptions o;
  o.first_order = n;
  o.stride = 1;
  const int k_max = std::max(k, n + 3) + 2;
  const double full = -laurent_fit(s, -k, k_max, o).log_coeff.real();
  const std::vector<CutoffSample> tail(s.begin() + 1, s.end());
  const double drop = -laurent_fit(tail, -k, k_max, o).log_coeff.real();
  return {k, full, std::abs(full - drop)};
}

// ---------------------------------------------------------------- -2n energies

Minus2nReport regularized_minus2n_energy(const Domain& d, const EnergyOptions& opts) {
  const int n = d.dim();
  if (n == 4 && !d.ball()) throw Error(ErrorKind::UnsupportedDimension, "n = 4 needs a ball");
  if (n < 2 || n > 4) throw Error(ErrorKind::UnsupportedDimension, "regularized -2n energies need n = 2, 3, 4");
  const double z = -2.0 * n;
  Minus2nReport out;
  out.energy = domain_energy(d, z, opts);
  out.counterterms = residue_counterterms(d);
  const double v = out.energy.value.real();
  double allowed = std::max(3.0 * out.energy.error_estimate, opts.tol * std::max(1.0, std::abs(v)));

  if (has_chords(d)) {
    const auto eps = domain_eps(d, opts);
    auto s = cutoff_samples(d, z, eps);
    for (auto& smp : s)
      for (const auto& [k, R] : out.counterterms) {
        const double p = z + k;
        smp.value += std::abs(p) < 1e-12 ? R * std::log(smp.eps) : R * std::pow(smp.eps, p) / p;
      }
    LaurentFitOptions o;
    o.first_order = n + 5;
    o.stride = 2;
    out.cutoff_value = laurent_fit(s, z, n + 7, o).constant.real();
    if (std::abs(*out.cutoff_value - v) > allowed)
      throw Error(ErrorKind::MethodsDisagree, "cutoff " + std::to_string(*out.cutoff_value) + " vs " +
                                                  std::to_string(v));
  }
  if (n == 3 && d.has_boundary_parameterization()) {
    const cplx R = out.energy.residue_at_z;
    out.pole_removed = pole_removed_value(
                           [&](cplx w) { return domain_energy_boundary(d, w, opts).value; }, 2 * n, R)
                           .real();
    allowed = std::max(allowed, 1e-6 * std::max(1.0, std::abs(v)));
    if (std::abs(*out.pole_removed - v) > allowed)
      throw Error(ErrorKind::MethodsDisagree, "pole removal " + std::to_string(*out.pole_removed) + " vs " +
                                                  std::to_string(v));
  }
  return out;
}

DomainEnergyReport planar_energy(const Domain& d, const EnergyOptions& opts) {
  if (d.dim() != 2) throw Error(ErrorKind::UnsupportedDimension, "E(Omega) is defined for planar domains");
  DomainEnergyReport r = domain_energy(d, -4.0, opts);
  r.value += kPi * kPi / 4.0 * d.euler_characteristic();
  return r;
}

cplx beta_ball_closed_form(int n, cplx z) {
  if (n < 2) throw Error(ErrorKind::InvalidParams, "ball dimension must be at least 2");
  const int k = negative_integer_index(z);
  if (k > 0)
    for (const Pole& p : beta_ball_poles(n, k + 2))
      if (p.k == k) throw Error(ErrorKind::PoleAt, "closed form has a pole at z = -" + std::to_string(k));
  return beta_ball(n, z);
}

ScalingReport domain_scaling_law_check(const Domain& d, cplx z, double c, const EnergyOptions& opts) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParams, "scale factor must be positive");
  const int n = d.dim();
  ScalingReport s;
  s.c = c;
  s.z = z;
  const DomainEnergyReport base = domain_energy(d, z, opts);
  const Shape scaled_shape = transform_shape(MoebiusMap::homothety(c), Shape(d));
  const DomainEnergyReport scaled = domain_energy(std::get<Domain>(scaled_shape), z, opts);
  s.scaled = scaled.value;
  s.predicted = std::pow(c, 2.0 * n + z) * (base.value + std::log(c) * base.residue_at_z);
  s.defect = s.scaled - s.predicted;
  s.homothety_defect = s.predicted - base.value;
  s.error_estimate = std::hypot(base.error_estimate * std::pow(c, 2.0 * n + z.real()), scaled.error_estimate);
  return s;
}

ParityAudit domain_parity_audit(const Domain& d, double z, const EnergyOptions& opts) {
  if (negative_integer_index(cplx(z), 1e-6) > 0)
    throw Error(ErrorKind::InvalidParams, "parity audit needs a non-integer exponent");
  const int n = d.dim();
  const auto eps = domain_eps(d, opts);
  const auto s = cutoff_samples(d, z, eps);
  LaurentFitOptions o;
  o.first_order = n;
  o.stride = 1;
  const auto fit = laurent_fit(s, z, n + 5, o);
  ParityAudit a;
  a.z = z;
  a.leading_order = n;
  for (std::size_t i = 0; i < fit.orders.size(); ++i) {
    const int j = fit.orders[i];
    const double v = std::abs(fit.coeffs[i]) * std::pow(eps.front(), z + j);
    a.orders.push_back(j);
    a.scaled.push_back(v);
    a.forbidden.push_back(j == n + 2 || j == n + 4);
    if (j == n) a.leading = v;
  }
  for (std::size_t i = 0; i < a.orders.size(); ++i)
    if (a.forbidden[i]) a.worst_ratio = std::max(a.worst_ratio, a.scaled[i] / a.leading);
  return a;
}

}  // namespace riesz
