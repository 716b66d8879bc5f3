#include "riesz/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "riesz/closed_energy.hpp"
#include "riesz/domain_energy.hpp"
#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"
#include "riesz/moebius.hpp"
#include "riesz/regularize.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Collects "label value" fragments and the running verdict.
struct Verdict {
  bool pass = true;
  std::ostringstream os;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (os.tellp() > 0) os << "; ";
    os << what << (ok ? "" : " FAIL");
  }
  void note(const std::string& what) {
    if (os.tellp() > 0) os << "; ";
    os << what;
  }
};

std::string sci(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

struct Spec {
  const char* title;
  std::function<void(Verdict&, const EnergyOptions&)> run;
};

// --------------------------------------------------------------- criteria

void finite_part_engine(Verdict& v, const EnergyOptions&) {
  double worst = 0.0;
  for (double d : {0.5, 1.0, 2.0}) {
    for (double z : {-0.5, -2.5}) {
      const cplx fp = finite_part_jet(TaylorJet({1.0}), d, z).finite_part;
      worst = std::max(worst, std::abs(fp - std::pow(d, z + 1) / (z + 1)));
    }
    worst = std::max(worst, std::abs(finite_part_jet(TaylorJet({1.0}), d, -1.0).finite_part - std::log(d)));
  }
  v.check(worst < 1e-12, "max abs error " + sci(worst) + " (tol 1e-12)");
}

void residue_formula(Verdict& v, const EnergyOptions&) {
  struct Fn {
    const char* name;
    std::function<double(double)> f;
    std::function<double(int)> coeff;  // f^(i)(0) / i!
  };
  const std::vector<Fn> fns = {
      {"exp", [](double t) { return std::exp(t); }, [](int i) { return 1.0 / std::tgamma(i + 1.0); }},
      {"cos", [](double t) { return std::cos(t); },
       [](int i) { return i % 2 ? 0.0 : (i % 4 ? -1.0 : 1.0) / std::tgamma(i + 1.0); }},
      {"1/(1+t)", [](double t) { return 1.0 / (1.0 + t); }, [](int i) { return i % 2 ? -1.0 : 1.0; }},
  };
  double worst = 0.0;
  for (const Fn& fn : fns) {
    std::vector<double> c;
    for (int i = 0; i < 8; ++i) c.push_back(fn.coeff(i));
    // F(z) = int_0^1 t^z f(t) dt, continued below Re z = -1
    const PsiProfile p = PsiProfile::sample(TaylorJet(c), 1.0, fn.f, 1.0);
    for (int k = 1; k <= 3; ++k) {
      // symmetric difference quotient: h (F(-k+h) - F(-k-h)) / 2 = R + O(h^2), then Richardson
      auto quotient = [&](double h) {
        const cplx up = finite_part_profile(p, cplx(-k + h)).finite_part;
        const cplx dn = finite_part_profile(p, cplx(-k - h)).finite_part;
        return 0.5 * h * (up - dn).real();
      };
      const double h = 1e-3;
      const double r = (4.0 * quotient(h / 2) - quotient(h)) / 3.0;
      const double expect = fn.coeff(k - 1);
      worst = std::max(worst, std::abs(r - expect));
      worst = std::max(worst, std::abs(finite_part_profile(p, cplx(-k)).residue.real() - expect));
    }
  }
  v.check(worst < 1e-8, "max abs residue error " + sci(worst) + " (tol 1e-8)");
}

void circle_profile(Verdict& v, const EnergyOptions&) {
  const JetFit f = b_jet_numeric(make_circle(1.0), 0.0, 0.0, 5);
  const double e1 = rel(f.jet[1], 2.0), e3 = rel(f.jet[3], 1.0 / 12);
  v.check(e1 < 1e-4, "b1 " + sci(f.jet[1], 12) + " rel " + sci(e1));
  v.check(e3 < 1e-4, "b3 " + sci(f.jet[3], 12) + " rel " + sci(e3));
}

void circle_moebius_energy(Verdict& v, const EnergyOptions& o) {
  const Shape c = make_circle(1.0);
  const EnergyReport a = energy_counterterm(c, -2.0, o);
  const EnergyReport b = energy_continuation(c, -2.0, o);
  const double va = a.value.real(), vb = b.value.real();
  v.check(std::abs(va - 4.0) < 4e-4, "counterterm-cutoff " + sci(va, 10) + " (expected 4, tol 1e-4 rel)");
  v.check(std::abs(vb - 4.0) < 4e-4, "profile-continuation " + sci(vb, 10) + " (expected 4, tol 1e-4 rel)");
  v.note("methods differ by " + sci(std::abs(va - vb)));
}

void knot_residues(Verdict& v, const EnergyOptions& o) {
  const Shape e = make_ellipse(2.0, 1.0);
  const CurvatureIntegrals ci = curvature_integrals(e);
  const double r1 = residue_from_cutoff(e, 1, o).value, r3 = residue_from_cutoff(e, 3, o).value;
  v.check(rel(r1, 2 * ci.measure) < 1e-3, "R(-1) fit " + sci(r1, 10) + " vs 2L " + sci(2 * ci.measure, 10));
  v.check(rel(r3, ci.integral_kappa_sq / 4) < 1e-3,
          "R(-3) fit " + sci(r3, 10) + " vs int k^2 / 4 " + sci(ci.integral_kappa_sq / 4, 10));
}

void surface_residues(Verdict& v, const EnergyOptions& o) {
  const Shape t = make_torus(2.0, 0.5);
  const CurvatureIntegrals ci = curvature_integrals(t);
  const double a = 2 * kPi * ci.measure, b = kPi / 8 * ci.integral_umbilic_defect;
  const double r2 = residue_from_cutoff(t, 2, o).value, r4 = residue_from_cutoff(t, 4, o).value;
  v.check(rel(r2, a) < 1e-3, "R(-2) fit " + sci(r2, 10) + " vs 2 pi A " + sci(a, 10));
  v.check(rel(r4, b) < 1e-3, "R(-4) fit " + sci(r4, 10) + " vs (pi/8) int (k1-k2)^2 " + sci(b, 10));
}

// Counts poles at z = -1 .. -k_max of f by the scaling of f(-k+h) - f(-k-h):
// proportional to 1/h at a pole and to h at a regular point (zeros included).
int count_poles(const std::function<cplx(cplx)>& f, int k_max) {
  int count = 0;
  for (int k = 1; k <= k_max; ++k) {
    auto diff = [&](double h) { return std::abs(f(cplx(-k + h)) - f(cplx(-k - h))); };
    const double a = diff(1e-4), b = diff(5e-5);
    if (b > 1.5 * a) ++count;
  }
  return count;
}

void closed_forms(Verdict& v, const EnergyOptions& o) {
  // Calibration: one constant per family from direct quadrature at z0 = -0.5,
  // then five further exponents without refitting.
  const double z0 = -0.5;
  struct Case {
    const char* name;
    std::function<double(double)> literal;  // closed form before calibration
    std::function<std::vector<double>(const std::vector<double>&)> direct;
    std::vector<double> zs;
    double adopted;  // constant the library uses
  };
  auto closed_direct = [o](Shape s) {
    return [s, o](const std::vector<double>& zs) {
      std::vector<cplx> zc(zs.begin(), zs.end());
      std::vector<double> out;
      for (const auto& r : closed_energies(s, zc, Method::direct, o)) out.push_back(r.value.real());
      return out;
    };
  };
  auto domain_direct = [o](Domain d) {
    return [d, o](const std::vector<double>& zs) {
      std::vector<double> out;
      for (double z : zs) out.push_back(domain_energy_direct(d, z, o).value.real());
      return out;
    };
  };
  const std::vector<Case> cases = {
      {"S^1", [](double z) { return beta_sphere_literal(1, z).real(); }, closed_direct(make_circle(1.0)),
       {-0.75, -0.25, 0.5, 1.0, 2.0}, 0.5},
      {"S^2", [](double z) { return beta_sphere_literal(2, z).real(); }, closed_direct(make_sphere(1.0)),
       {-1.5, -1.0, -0.25, 0.5, 1.0}, 0.5},
      {"B^2", [](double z) { return beta_ball(2, z).real(); }, domain_direct(make_ball(2, 1.0)),
       {-1.5, -1.0, -0.25, 0.5, 1.0}, 1.0},
      {"B^3", [](double z) { return beta_ball(3, z).real(); }, domain_direct(make_ball(3, 1.0)),
       {-2.5, -2.0, -1.0, 0.5, 1.0}, 1.0},
  };
  for (const Case& c : cases) {
    const double cal = c.direct({z0}).front() / c.literal(z0);
    const std::vector<double> d = c.direct(c.zs);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, rel(cal * c.literal(c.zs[i]), d[i]));
    v.check(worst < 1e-6, std::string(c.name) + " calibration " + sci(cal, 12) + ", max rel " + sci(worst));
    v.check(rel(cal, c.adopted) < 1e-8, std::string(c.name) + " calibration matches the adopted constant " +
                                            sci(c.adopted));
  }
  for (int n : {2, 4, 6}) {
    const int got = count_poles([n](cplx z) { return beta_sphere(n, z); }, 40);
    v.check(got == n / 2, "S^" + std::to_string(n) + " poles " + std::to_string(got) + " (expected " +
                              std::to_string(n / 2) + ")");
  }
  for (int n : {3, 5, 7}) {
    const int got = count_poles([n](cplx z) { return beta_ball(n, z); }, 40);
    v.check(got == (n + 3) / 2, "B^" + std::to_string(n) + " poles " + std::to_string(got) + " (expected " +
                                    std::to_string((n + 3) / 2) + ")");
  }
}

void boundary_identity(Verdict& v, const EnergyOptions& o) {
  for (int n : {2, 3}) {
    const Domain d = make_ball(n, 1.0);
    double worst = 0.0;
    for (double z : {0.0, -0.5, -1.0})
      worst = std::max(worst, rel(domain_energy_boundary(d, z, o).value.real(),
                                  domain_energy_direct(d, z, o).value.real()));
    v.check(worst < 1e-6, "n=" + std::to_string(n) + " boundary vs volume max rel " + sci(worst));
  }
  const Domain disk = make_ball(2, 1.0);
  const PerimeterCrossCheck p = fractional_perimeter_disk_check(disk, -2.5, o);
  const double e = domain_energy(disk, -2.5, o).value.real();
  v.check(p.boundary > 0.0 && rel(-e, p.boundary) < 1e-12, "P(-2.5) " + sci(p.boundary, 12) + " = -E " + sci(e, 12));
  v.check(rel(p.direct, p.boundary) < 1e-5,
          "exterior integral " + sci(p.direct, 12) + " rel " + sci(rel(p.direct, p.boundary)));
}

void domain_residues_check(Verdict& v, const EnergyOptions& o) {
  struct Case {
    int n;
    std::vector<int> ks;
    std::vector<double> exact;
  };
  const std::vector<Case> cases = {{2, {2, 3, 5}, {2 * kPi * kPi, -4 * kPi, kPi / 6}},
                                   {3, {3, 4, 6}, {16 * kPi * kPi / 3, -4 * kPi * kPi, kPi * kPi / 3}}};
  for (const Case& c : cases) {
    const Domain d = make_ball(c.n, 1.0);
    const auto formula = domain_residues(d);
    for (std::size_t i = 0; i < c.ks.size(); ++i) {
      const double fit = domain_residue_from_cutoff(d, c.ks[i], o).value;
      const std::string tag = "n=" + std::to_string(c.n) + " R(-" + std::to_string(c.ks[i]) + ")";
      v.check(rel(formula[i].value, c.exact[i]) < 1e-10, tag + " formula " + sci(formula[i].value, 10));
      v.check(rel(fit, formula[i].value) < 1e-3, tag + " fit rel " + sci(rel(fit, formula[i].value)));
    }
  }
}

void moebius_invariance(Verdict& v, const EnergyOptions& o) {
  const Shape e = make_ellipse(2.0, 1.0);
  for (const MoebiusMap& T : {MoebiusMap::inversion({0, 3, 0}, 2.0), MoebiusMap::inversion({3.5, 1, 0}, 1.0)}) {
    const InvarianceReport r = invariance_check(e, -2.0, T, o);
    v.check(r.pass, "ellipse " + T.describe() + " defect " + sci(r.defect) + " tol " + sci(r.tolerance));
  }
  const InvarianceReport s =
      invariance_check(make_superellipse_domain(1.5, 1.0, 4.0), -4.0, MoebiusMap::inversion({0, 2.5, 0}, 2.0), o);
  v.check(s.pass, "superellipse domain defect " + sci(s.defect) + " tol " + sci(s.tolerance));
  const Shape el = make_ellipsoid(1.2, 1.0, 1.0);
  const InvarianceReport h = invariance_check(el, -4.0, MoebiusMap::homothety(2.0), o);
  const double measured = (h.image - h.original).real();
  const double expected = kPi * std::log(2.0) / 8 * curvature_integrals(el).integral_umbilic_defect;
  v.check(rel(measured, expected) < 1e-3,
          "ellipsoid homothety defect " + sci(measured, 10) + " vs " + sci(expected, 10));
}

void scaling_law(Verdict& v, const EnergyOptions& o) {
  const std::vector<std::pair<double, double>> grid = {{2.0, -1.5}, {0.5, -3.0}};
  for (const char* name : {"ellipse", "trefoil", "ellipsoid", "torus"}) {
    const Shape s = parse_shape(name);
    double worst = 0.0;
    for (auto [c, z] : grid) {
      const ScalingReport r = scaling_law_check(s, z, c, o);
      worst = std::max(worst, std::abs(r.defect) / std::abs(r.predicted));
    }
    v.check(worst < 1e-4, std::string(name) + " max rel " + sci(worst));
  }
  for (const char* name : {"disk", "ball(n=3)", "superellipse-domain"}) {
    const Domain d = std::get<Domain>(parse_shape(name));
    double worst = 0.0;
    for (auto [c, z] : grid) {
      const ScalingReport r = domain_scaling_law_check(d, z, c, o);
      worst = std::max(worst, std::abs(r.defect) / std::abs(r.predicted));
    }
    v.check(worst < 1e-4, std::string(name) + " max rel " + sci(worst));
  }
}

void parity_suite(Verdict& v, const EnergyOptions& o) {
  for (const char* name : {"circle", "ellipse", "trefoil", "sphere", "torus", "ellipsoid"}) {
    const Shape s = parse_shape(name);
    const ParityAudit a = parity_audit(s, -shape_dimension(s) - 0.5, o);
    v.check(a.worst_ratio < 1e-6, std::string(name) + " " + sci(a.worst_ratio));
  }
  for (const char* name : {"disk", "ball(n=3)", "ball(n=4)", "superellipse-domain"}) {
    const Domain d = std::get<Domain>(parse_shape(name));
    const ParityAudit a = domain_parity_audit(d, -d.dim() - 0.5, o);
    v.check(a.worst_ratio < 1e-6, std::string(name) + " " + sci(a.worst_ratio));
  }
}

const std::vector<Spec>& specs() {
  static const std::vector<Spec> table = {
      {"finite-part engine exactness", finite_part_engine},
      {"residue formula", residue_formula},
      {"circle profile jet", circle_profile},
      {"circle Moebius energy = 4", circle_moebius_energy},
      {"knot residues (ellipse)", knot_residues},
      {"surface residues (torus)", surface_residues},
      {"sphere/ball closed forms and pole counts", closed_forms},
      {"boundary-integral identity and perimeter sign", boundary_identity},
      {"domain residues", domain_residues_check},
      {"Moebius invariance", moebius_invariance},
      {"scaling law", scaling_law},
      {"parity suite", parity_suite},
  };
  return table;
}

}  // namespace

int acceptance_criterion_count() { return static_cast<int>(specs().size()); }

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > acceptance_criterion_count())
    throw Error(ErrorKind::InvalidParams, "no acceptance criterion " + std::to_string(id));
  const Spec& s = specs()[id - 1];
  EnergyOptions eo;
  eo.threads = opts.threads;
  CriterionResult r;
  r.id = id;
  r.title = s.title;
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    s.run(v, eo);
  } catch (const std::exception& e) {
    v.check(false, std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = v.pass;
  r.detail = v.os.str();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= acceptance_criterion_count(); ++id)
    if (opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end())
      out.push_back(run_criterion(id, opts));
  return out;
}

}  // namespace riesz
