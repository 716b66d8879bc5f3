#include "riesz/extrinsic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

PairGeometry geometry_of(const Shape& shape, int rays) {
  if (const auto* c = std::get_if<Curve>(&shape)) return PairGeometry(*c, 16);
  if (const auto* s = std::get_if<Surface>(&shape)) return PairGeometry(*s, 16, rays);
  throw Error(ErrorKind::InvalidParams, "extrinsic profiles need a closed curve or surface");
}

PairGeometry boundary_geometry(const Domain& d, int rays) {
  if (d.dim() == 2) return PairGeometry(d.boundary_curve(), 16);
  if (d.dim() == 3) return PairGeometry(d.boundary_surface(), 16, rays);
  throw Error(ErrorKind::UnsupportedDimension, "boundary profiles need n = 2 or 3");
}

std::array<double, 2> curvatures_at(const Shape& shape, double u, double v) {
  if (const auto* c = std::get_if<Curve>(&shape)) return {curvature_curve(*c, u), 0.0};
  if (const auto* s = std::get_if<Surface>(&shape)) return principal_curvatures(*s, u, v);
  throw Error(ErrorKind::InvalidParams, "curvature needs a closed curve or surface");
}

}  // namespace

double psi_numeric(const Shape& shape, double u, double v, double t, PairWeight weight, int rays) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParams, "psi radius must be nonnegative");
  if (t == 0.0) return 0.0;
  if (weight == PairWeight::normal_dot)
    if (const auto* c = std::get_if<Curve>(&shape); c && c->ambient_dim() != 2)
      throw Error(ErrorKind::InvalidParams, "normal weighting needs a planar curve");
  return ray_ball_measure(geometry_of(shape, rays), u, v, t, weight);
}

TaylorJet b_jet_analytic(const Shape& shape, double u, double v) {
  const auto k = curvatures_at(shape, u, v);
  if (std::holds_alternative<Curve>(shape))
    return TaylorJet({0.0, 2.0, 0.0, k[0] * k[0] / 12.0, 0.0}, Parity::odd);
  const double dk = k[0] - k[1];
  return TaylorJet({0.0, 0.0, kPi, 0.0, kPi * dk * dk / 32.0}, Parity::even);
}

double shape_diameter(const Shape& shape) {
  std::vector<Vec3d> pts;
  if (const auto* c = std::get_if<Curve>(&shape)) {
    for (int i = 0; i < 256; ++i) pts.push_back(c->point(2.0 * kPi * i / 256));
  } else if (const auto* s = std::get_if<Surface>(&shape)) {
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        const double u = 2.0 * kPi * i / 32;
        const double v = s->topology() == Topology::sphere ? kPi * (j + 0.5) / 32 : 2.0 * kPi * j / 32;
        pts.push_back(s->point(u, v));
      }
  } else {
    const Domain& d = std::get<Domain>(shape);
    if (d.ball()) return 2.0 * d.ball()->radius;
    if (d.dim() == 2) return shape_diameter(d.boundary_curve());
    return shape_diameter(d.boundary_surface());
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, norm(pts[i] - pts[j]));
  return best;
}

double default_near_radius(const Shape& shape) {
  double k = 0.0;
  if (const auto* c = std::get_if<Curve>(&shape))
    k = max_curvature(*c);
  else if (const auto* s = std::get_if<Surface>(&shape))
    k = max_curvature(*s);
  else {
    const Domain& d = std::get<Domain>(shape);
    k = d.dim() == 2 ? max_curvature(d.boundary_curve()) : max_curvature(d.boundary_surface());
  }
  return 0.8 / std::max(k, 1e-12);
}

JetFit b_jet_numeric(const Shape& shape, double u, double v, int order, bool parity) {
  if (order < 1 || order > 6) throw Error(ErrorKind::InvalidParams, "jet order must be in [1, 6]");
  const bool curve = std::holds_alternative<Curve>(shape);
  const PairGeometry g = geometry_of(shape, 64);
  JetFit fit;
  fit.t_lo = 1e-3 * shape_diameter(shape);
  fit.t_hi = 0.25 * default_near_radius(shape);
  if (!(fit.t_lo < fit.t_hi)) fit.t_lo = 1e-3 * fit.t_hi;

  std::vector<int> orders;
  for (int k = 1; k <= order; ++k) {
    const bool killed = curve ? k % 2 == 0 : k % 2 == 1;
    if (!parity || !killed) orders.push_back(k);
  }
  const int ns = 40;
  Eigen::MatrixXd A(ns, static_cast<int>(orders.size()));
  Eigen::VectorXd b(ns);
  for (int i = 0; i < ns; ++i) {
    const double t = fit.t_lo * std::pow(fit.t_hi / fit.t_lo, double(i) / (ns - 1));
    const double psi = ray_ball_measure(g, u, v, t, PairWeight::none);
    // rows scaled by the leading power so small radii are not drowned out
    const double row = std::pow(t, curve ? 1 : 2);
    for (std::size_t j = 0; j < orders.size(); ++j)
      A(i, static_cast<int>(j)) = std::pow(t / fit.t_hi, orders[j]) * std::pow(fit.t_hi, curve ? 1 : 2) / row;
    b(i) = psi / row;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv(0) / sv(sv.size() - 1);
  if (!std::isfinite(fit.condition) || fit.condition > 1e12)
    throw Error(ErrorKind::FitUnstable, "jet fit is ill-conditioned");
  const Eigen::VectorXd x = svd.solve(b);
  const double dof = std::max(1, ns - static_cast<int>(orders.size()));
  const double sigma2 = (A * x - b).squaredNorm() / dof;
  const Eigen::MatrixXd cov =
      sigma2 * (svd.matrixV() * sv.cwiseInverse().cwiseAbs2().asDiagonal() * svd.matrixV().transpose());

  std::vector<double> coeffs(order + 1, 0.0);
  fit.errors.assign(order + 1, 0.0);
  for (std::size_t j = 0; j < orders.size(); ++j) {
    const double scale = std::pow(fit.t_hi, (curve ? 1 : 2) - orders[j]);
    coeffs[orders[j]] = x(static_cast<int>(j)) * scale;
    fit.errors[orders[j]] = std::sqrt(std::max(0.0, cov(j, j))) * scale;
  }
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorKind::FitUnstable, "jet fit produced non-finite values");
  fit.jet = TaylorJet(coeffs, parity ? (curve ? Parity::odd : Parity::even) : Parity::none);
  return fit;
}

BCoefficients b_coefficients(const Shape& shape) {
  const CurvatureIntegrals ci = curvature_integrals(shape);
  BCoefficients out;
  if (std::holds_alternative<Curve>(shape)) {
    out.m = 1;
    out.integrated = {0.0, 2.0 * ci.measure, 0.0, ci.integral_kappa_sq / 12.0};
  } else if (std::holds_alternative<Surface>(shape)) {
    out.m = 2;
    out.integrated = {0.0, 0.0, kPi * ci.measure, 0.0, kPi * ci.integral_umbilic_defect / 32.0};
  } else {
    throw Error(ErrorKind::InvalidParams, "b coefficients are defined for closed curves and surfaces");
  }
  return out;
}

TaylorJet psi_domain_jet(const Domain& domain) {
  const int n = domain.dim();
  if (n != 2 && n != 3) throw Error(ErrorKind::UnsupportedDimension, "domain jet needs n = 2 or 3");
  const CurvatureIntegrals ci = curvature_integrals(Shape(domain));
  std::vector<double> c(n + 3, 0.0);
  c[n] = sphere_area(n - 1) / n * ci.enclosed_volume;
  c[n + 1] = -sphere_area(n - 2) / ((n + 1.0) * (n - 1.0)) * ci.measure;
  return TaylorJet(c);
}

TaylorJet psi_rho_jet(int n, double k1, double k2) {
  if (n == 2) return TaylorJet({0.0, 2.0, 0.0, -k1 * k1 / 4.0, 0.0}, Parity::odd);
  if (n == 3) {
    const double H = 0.5 * (k1 + k2), K = k1 * k2;
    return TaylorJet({0.0, 0.0, kPi, 0.0, -kPi * (3.0 * H * H - K) / 8.0}, Parity::even);
  }
  throw Error(ErrorKind::UnsupportedDimension, "weighted profile needs n = 2 or 3");
}

PsiProfile psi_rho_profile(const Domain& domain, double u, double v, double d,
                           const RegularizeOptions& reg) {
  const PairGeometry g = boundary_geometry(domain, 64);
  if (!(d > 0.0)) d = 0.8 / std::max(g.max_curvature(), 1e-12);
  return point_profile(g, u, v, PairWeight::normal_dot, d, reg);
}

}  // namespace riesz
