#include "riesz/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;

template <class T>
Vec3<T> unit_sphere(const T& u, const T& v) {
  using std::cos;
  using std::sin;
  return {sin(v) * cos(u), sin(v) * sin(u), cos(v)};
}

// sigma(a, b): inverse stereographic projection onto S^2 with sigma(0, 0) = e_z.
template <class T>
Vec3<T> stereo(const T& a, const T& b) {
  const T q = 1.0 + a * a + b * b;
  const T iq = 1.0 / q;
  return {2.0 * a * iq, 2.0 * b * iq, (2.0 - q) * iq};
}

template <class T>
Vec3<T> rotate(const Mat3& R, const Vec3<T>& s) {
  Vec3<T> r;
  for (int i = 0; i < 3; ++i) r[i] = R[0][i] * s.x + R[1][i] * s.y + R[2][i] * s.z;
  return r;
}

Vec3d apply_embedding(const SphereEmbedding& g, const Vec3d& s) { return g.f0(s); }
Vec3<Taylor2<1>> apply_embedding(const SphereEmbedding& g, const Vec3<Taylor2<1>>& s) {
  return g.f1(s);
}
Vec3<Taylor2<2>> apply_embedding(const SphereEmbedding& g, const Vec3<Taylor2<2>>& s) {
  return g.f2(s);
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

// ---------------------------------------------------------------- Curve

Curve::Curve(std::string id, int ambient_dim, CurveMap map)
    : id_(std::move(id)), ambient_dim_(ambient_dim), map_(std::move(map)) {
  if (ambient_dim_ != 2 && ambient_dim_ != 3)
    throw Error(ErrorKind::InvalidParams, "curve ambient dimension must be 2 or 3");
  if (ambient_dim_ == 2) {
    const Rule r = periodic_trapezoid(256, 2.0 * kPi);
    double area = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto j = jet1(r.nodes[i]);
      area += 0.5 * r.weights[i] * (j[0].x * j[1].y - j[0].y * j[1].x);
    }
    orientation_ = area >= 0.0 ? 1 : -1;
  }
}

std::array<Vec3d, 2> Curve::jet1(double theta) const {
  const auto p = map_.f1(Taylor1<1>::variable(theta));
  return {coef(p, 0), coef(p, 1)};
}

std::array<Vec3d, 4> Curve::jet3(double theta) const {
  const auto p = map_.f3(Taylor1<3>::variable(theta));
  return {coef(p, 0), coef(p, 1), 2.0 * coef(p, 2), 6.0 * coef(p, 3)};
}

double Curve::speed(double theta) const { return norm(jet1(theta)[1]); }

Vec3d Curve::planar_normal(double theta) const {
  const Vec3d t = jet1(theta)[1];
  return static_cast<double>(orientation_) * normalized(Vec3d{t.y, -t.x, 0.0});
}

double curvature_curve(const Curve& c, double theta) {
  const auto j = c.jet3(theta);
  const double s = norm(j[1]);
  if (!(s > 1e-12))
    throw Error(ErrorKind::DegenerateParameterization, "curve speed vanishes at theta = " +
                                                           std::to_string(theta));
  return norm(cross(j[1], j[2])) / (s * s * s);
}

// ---------------------------------------------------------------- Surface

Surface Surface::sphere_like(std::string id, SphereEmbedding g) {
  Surface s;
  s.id_ = std::move(id);
  s.topology_ = Topology::sphere;
  s.embedding_ = g;
  s.base_ = {[g](double u, double v) { return g.f0(unit_sphere(u, v)); },
             [g](const Taylor2<1>& u, const Taylor2<1>& v) { return g.f1(unit_sphere(u, v)); },
             [g](const Taylor2<2>& u, const Taylor2<2>& v) { return g.f2(unit_sphere(u, v)); }};
  s.fix_orientation();
  return s;
}

Surface Surface::torus_like(std::string id, SurfaceMap f) {
  Surface s;
  s.id_ = std::move(id);
  s.topology_ = Topology::torus;
  s.base_ = std::move(f);
  s.fix_orientation();
  return s;
}

double Surface::v_range() const { return topology_ == Topology::sphere ? kPi : 2.0 * kPi; }

Vec3d Surface::sphere_point(double u, double v) { return unit_sphere(u, v); }

Mat3 Surface::polar_frame(double u, double v) {
  const Vec3d p = sphere_point(u, v);
  const Vec3d a = std::abs(p.z) < 0.9 ? Vec3d{0, 0, 1} : Vec3d{1, 0, 0};
  const Vec3d e1 = normalized(a - dot(a, p) * p);
  return {e1, cross(p, e1), p};
}

double Surface::base_area_density(double u, double v) const {
  const auto X = base_.f1(Taylor2<1>::variable_u(u), Taylor2<1>::variable_v(v));
  return norm(cross(coef(X, 1), coef(X, 2)));
}

void Surface::fix_orientation() {
  // sign of (1/3) int <X, X_u x X_v> du dv in the base chart
  const Rule ru = periodic_trapezoid(64, 2.0 * kPi);
  const Rule rv = topology_ == Topology::sphere ? gauss_legendre(32, 0.0, kPi)
                                                : periodic_trapezoid(64, 2.0 * kPi);
  double vol = 0.0;
  for (std::size_t i = 0; i < ru.size(); ++i)
    for (std::size_t j = 0; j < rv.size(); ++j) {
      const auto X =
          base_.f1(Taylor2<1>::variable_u(ru.nodes[i]), Taylor2<1>::variable_v(rv.nodes[j]));
      vol += ru.weights[i] * rv.weights[j] * dot(coef(X, 0), cross(coef(X, 1), coef(X, 2)));
    }
  orientation_ = vol >= 0.0 ? 1 : -1;
}

Chart Surface::centered_chart(double u, double v) const {
  Chart c;
  if (topology_ == Topology::torus) {
    c.map = base_;
    c.u0 = u;
    c.v0 = v;
    c.orientation = orientation_;
    return c;
  }
  const Mat3 R = polar_frame(u, v);
  const SphereEmbedding g = embedding_;
  c.rotation = R;
  c.map = {[g, R](double a1, double b1) { return apply_embedding(g, rotate(R, stereo(a1, b1))); },
           [g, R](const Taylor2<1>& a1, const Taylor2<1>& b1) {
             return apply_embedding(g, rotate(R, stereo(a1, b1)));
           },
           [g, R](const Taylor2<2>& a1, const Taylor2<2>& b1) {
             return apply_embedding(g, rotate(R, stereo(a1, b1)));
           }};
  // The polar base chart and the stereographic charts induce opposite
  // orientations on S^2, so the outward sign flips between them.
  c.orientation = -orientation_;
  return c;
}

std::array<double, 2> Surface::stereographic_offset(const Chart& chart, const Vec3d& s) {
  const Mat3& R = chart.rotation;
  const double q1 = dot(R[0], s), q2 = dot(R[1], s), q3 = dot(R[2], s);
  const double den = 1.0 + q3;
  if (den < 1e-300) return {1e300, 1e300};
  return {q1 / den, q2 / den};
}

std::array<double, 2> Surface::chart_offset(const Chart& chart, double u, double v) const {
  if (topology_ == Topology::torus) return {wrap_angle(u - chart.u0), wrap_angle(v - chart.v0)};
  return stereographic_offset(chart, sphere_point(u, v));
}

SurfacePointGeometry chart_geometry(const Chart& chart) {
  const auto X =
      chart.map.f2(Taylor2<2>::variable_u(chart.u0), Taylor2<2>::variable_v(chart.v0));
  SurfacePointGeometry g;
  g.point = coef(X, 0);
  g.xu = coef(X, 1);
  g.xv = coef(X, 2);
  const Vec3d xuu = 2.0 * coef(X, 3), xuv = coef(X, 4), xvv = 2.0 * coef(X, 5);
  const double E = dot(g.xu, g.xu), F = dot(g.xu, g.xv), G = dot(g.xv, g.xv);
  const double det = E * G - F * F;
  if (!(det > 1e-24 * std::max(1.0, E * G)))
    throw Error(ErrorKind::DegenerateParameterization, "metric determinant vanishes");
  const Vec3d c = cross(g.xu, g.xv);
  g.area_density = norm(c);
  g.normal = static_cast<double>(chart.orientation) * (c / g.area_density);
  // second form against the inner normal, so convex shapes have positive curvatures
  const Vec3d inner = -g.normal;
  const double L = dot(xuu, inner), M = dot(xuv, inner), N = dot(xvv, inner);
  const double H = (E * N - 2.0 * F * M + G * L) / (2.0 * det);
  const double K = (L * N - M * M) / det;
  const double disc = std::sqrt(std::max(0.0, H * H - K));
  g.k1 = H + disc;
  g.k2 = H - disc;
  return g;
}

SurfacePointGeometry Surface::geometry(double u, double v) const {
  return chart_geometry(centered_chart(u, v));
}

std::array<double, 2> principal_curvatures(const Surface& s, double u, double v) {
  const auto g = s.geometry(u, v);
  return {g.k1, g.k2};
}

// ---------------------------------------------------------------- Domain

Domain::Domain(std::string id, int dim, std::optional<Curve> curve,
               std::optional<Surface> surface, std::function<double(const Vec3d&)> level,
               bool convex, std::optional<BallInfo> ball, int euler_characteristic)
    : id_(std::move(id)),
      dim_(dim),
      curve_(std::move(curve)),
      surface_(std::move(surface)),
      level_(std::move(level)),
      convex_(convex),
      ball_(ball),
      euler_characteristic_(euler_characteristic) {
  if (dim_ < 2 || dim_ > 4) throw Error(ErrorKind::UnsupportedDimension, "domain dimension");
  if (dim_ == 2 && (!curve_ || curve_->ambient_dim() != 2))
    throw Error(ErrorKind::InvalidParams, "planar domain needs a planar boundary curve");
  if (dim_ == 3 && !surface_)
    throw Error(ErrorKind::InvalidParams, "3-dimensional domain needs a boundary surface");
  if (dim_ == 4 && !ball_)
    throw Error(ErrorKind::UnsupportedDimension, "4-dimensional domains are limited to balls");
}

const Curve& Domain::boundary_curve() const {
  if (!curve_) throw Error(ErrorKind::UnsupportedDimension, id_ + " has no boundary curve");
  return *curve_;
}

const Surface& Domain::boundary_surface() const {
  if (!surface_) throw Error(ErrorKind::UnsupportedDimension, id_ + " has no boundary surface");
  return *surface_;
}

const std::string& shape_id(const Shape& s) {
  return std::visit([](const auto& x) -> const std::string& { return x.id(); }, s);
}

int shape_dimension(const Shape& s) {
  if (std::holds_alternative<Curve>(s)) return 1;
  if (std::holds_alternative<Surface>(s)) return 2;
  return std::get<Domain>(s).dim();
}

// ---------------------------------------------------------------- integrals

namespace {

constexpr double kIntegralTol = 1e-9;

double rel_change(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

double max_change(const CurvatureIntegrals& a, const CurvatureIntegrals& b) {
  const double s = std::max(std::abs(a.measure), 1e-300);
  double e = rel_change(a.measure, b.measure, s);
  // curvature integrals are compared on the scale of measure * curvature^2 ~ integral_gauss etc.
  const double cs = std::max({std::abs(a.integral_kappa_sq), std::abs(a.integral_3H2_minus_K),
                              std::abs(a.integral_gauss), 1e-300});
  e = std::max(e, rel_change(a.integral_kappa_sq, b.integral_kappa_sq, cs));
  e = std::max(e, rel_change(a.integral_umbilic_defect, b.integral_umbilic_defect, cs));
  e = std::max(e, rel_change(a.integral_3H2_minus_K, b.integral_3H2_minus_K, cs));
  e = std::max(e, rel_change(a.integral_gauss, b.integral_gauss, cs));
  e = std::max(e, rel_change(a.enclosed_volume, b.enclosed_volume,
                             std::max(std::abs(a.enclosed_volume), 1e-300)));
  return e;
}

CurvatureIntegrals curve_integrals_at(const Curve& c, int n) {
  CurvatureIntegrals r;
  const Rule rule = periodic_trapezoid(n, 2.0 * kPi);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto j = c.jet3(rule.nodes[i]);
    const double s = norm(j[1]);
    const double kappa = norm(cross(j[1], j[2])) / (s * s * s);
    const double w = rule.weights[i] * s;
    r.measure += w;
    r.integral_kappa_sq += w * kappa * kappa;
    if (c.ambient_dim() == 2)
      r.enclosed_volume +=
          0.5 * c.orientation() * rule.weights[i] * (j[0].x * j[1].y - j[0].y * j[1].x);
  }
  return r;
}

CurvatureIntegrals surface_integrals_at(const Surface& s, int nu) {
  CurvatureIntegrals r;
  const Rule ru = periodic_trapezoid(nu, 2.0 * kPi);
  const Rule rv = s.topology() == Topology::sphere ? gauss_legendre(nu / 2, 0.0, kPi)
                                                   : periodic_trapezoid(nu, 2.0 * kPi);
  for (std::size_t i = 0; i < ru.size(); ++i)
    for (std::size_t j = 0; j < rv.size(); ++j) {
      const double u = ru.nodes[i], v = rv.nodes[j];
      const auto g = s.geometry(u, v);
      const double w = ru.weights[i] * rv.weights[j] * s.base_area_density(u, v);
      const double H = 0.5 * (g.k1 + g.k2), K = g.k1 * g.k2;
      r.measure += w;
      r.integral_umbilic_defect += w * (g.k1 - g.k2) * (g.k1 - g.k2);
      r.integral_3H2_minus_K += w * (3.0 * H * H - K);
      r.integral_gauss += w * K;
      r.enclosed_volume += w * dot(g.point, g.normal) / 3.0;
    }
  return r;
}

template <class F>
CurvatureIntegrals doubled(F at, int n, int n_max) {
  CurvatureIntegrals a = at(n);
  for (;;) {
    CurvatureIntegrals b = at(2 * n);
    const double e = max_change(a, b);
    b.error_estimate = e;
    if (e < kIntegralTol) return b;
    n *= 2;
    if (n > n_max)
      throw Error(ErrorKind::QuadratureNotConverged,
                  "curvature integrals did not converge under grid doubling (change " +
                      std::to_string(e) + ")");
    a = b;
  }
}

}  // namespace

CurvatureIntegrals curvature_integrals(const Curve& c, int n) {
  return doubled([&](int k) { return curve_integrals_at(c, k); }, n, 1 << 16);
}

CurvatureIntegrals curvature_integrals(const Surface& s, int nu) {
  return doubled([&](int k) { return surface_integrals_at(s, k); }, nu, 1024);
}

CurvatureIntegrals curvature_integrals(const Shape& shape) {
  if (const auto* c = std::get_if<Curve>(&shape)) return curvature_integrals(*c);
  if (const auto* s = std::get_if<Surface>(&shape)) return curvature_integrals(*s);
  const Domain& d = std::get<Domain>(shape);
  if (d.dim() == 2) return curvature_integrals(d.boundary_curve());
  if (d.dim() == 3) return curvature_integrals(d.boundary_surface());
  // 4-ball of radius r: boundary S^3(r) with all principal curvatures 1/r,
  // so H = 1/r and K = sum_{i<j} k_i k_j = 3/r^2.
  const double r = d.ball()->radius;
  CurvatureIntegrals out;
  out.measure = sphere_area(3) * r * r * r;
  out.enclosed_volume = ball_volume(4) * r * r * r * r;
  out.integral_27H2_minus_4K = (27.0 - 12.0) / (r * r) * out.measure;
  return out;
}

double max_curvature(const Curve& c, int n) {
  const Rule rule = periodic_trapezoid(n, 2.0 * kPi);
  double m = 0.0;
  for (double t : rule.nodes) m = std::max(m, curvature_curve(c, t));
  return m;
}

double max_curvature(const Surface& s, int nu) {
  const Rule ru = periodic_trapezoid(nu, 2.0 * kPi);
  const Rule rv = s.topology() == Topology::sphere ? gauss_legendre(nu / 2, 0.0, kPi)
                                                   : periodic_trapezoid(nu, 2.0 * kPi);
  double m = 0.0;
  for (double u : ru.nodes)
    for (double v : rv.nodes) {
      const auto g = s.geometry(u, v);
      m = std::max({m, std::abs(g.k1), std::abs(g.k2)});
    }
  return m;
}

// ---------------------------------------------------------------- builtins

Curve make_circle(double r) {
  return Curve("circle(r=" + std::to_string(r) + ")", 2, make_curve_map([r](const auto& t) {
                 using std::cos;
                 using std::sin;
                 using T = std::decay_t<decltype(t)>;
                 return Vec3<T>{r * cos(t), r * sin(t), T(0.0)};
               }));
}

Curve make_ellipse(double a, double b) {
  return Curve("ellipse(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")", 2,
               make_curve_map([a, b](const auto& t) {
                 using std::cos;
                 using std::sin;
                 using T = std::decay_t<decltype(t)>;
                 return Vec3<T>{a * cos(t), b * sin(t), T(0.0)};
               }));
}

Curve make_trefoil(double scale) {
  return Curve("trefoil(scale=" + std::to_string(scale) + ")", 3,
               make_curve_map([scale](const auto& t) {
                 using std::cos;
                 using std::sin;
                 using T = std::decay_t<decltype(t)>;
                 return Vec3<T>{scale * (sin(t) + 2.0 * sin(2.0 * t)),
                                scale * (cos(t) - 2.0 * cos(2.0 * t)), -scale * sin(3.0 * t)};
               }));
}

Surface make_torus(double R, double r) {
  return Surface::torus_like("torus(R=" + std::to_string(R) + ",r=" + std::to_string(r) + ")",
                             make_surface_map([R, r](const auto& u, const auto& v) {
                               using std::cos;
                               using std::sin;
                               using T = std::decay_t<decltype(u)>;
                               const T rho = R + r * cos(v);
                               return Vec3<T>{rho * cos(u), rho * sin(u), r * sin(v)};
                             }));
}

Surface make_sphere(double r) {
  return Surface::sphere_like("sphere(r=" + std::to_string(r) + ")",
                              make_sphere_embedding([r](const auto& s) { return r * s; }));
}

Surface make_ellipsoid(double a, double b, double c) {
  return Surface::sphere_like(
      "ellipsoid(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ",c=" +
          std::to_string(c) + ")",
      make_sphere_embedding([a, b, c](const auto& s) {
        using V = std::decay_t<decltype(s)>;
        return V{a * s.x, b * s.y, c * s.z};
      }));
}

Domain make_ball(int n, double r) {
  const std::string id = "ball(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  auto level = [r](const Vec3d& p) { return norm(p) - r; };
  const BallInfo info{r, {0, 0, 0}};
  switch (n) {
    case 2:
      return Domain(id, 2, make_circle(r), std::nullopt, level, true, info, 1);
    case 3:
      return Domain(id, 3, std::nullopt, make_sphere(r), level, true, info, 2);
    case 4:
      return Domain(id, 4, std::nullopt, std::nullopt, level, true, info, 1);
    default:
      throw Error(ErrorKind::UnsupportedDimension, "ball dimension must be 2, 3 or 4");
  }
}

Domain make_superellipse_domain(double a, double b, double q) {
  // |x/a|^q + |y/b|^q <= 1 with even q, so the powers are polynomials and the boundary is analytic
  const std::string id = "superellipse-domain(a=" + std::to_string(a) + ",b=" +
                         std::to_string(b) + ",q=" + std::to_string(q) + ")";
  Curve boundary(id + ".boundary", 2, make_curve_map([a, b, q](const auto& t) {
                   using std::cos;
                   using std::pow;
                   using std::sin;
                   using T = std::decay_t<decltype(t)>;
                   const T c = cos(t), s = sin(t);
                   const T rad = pow(pow(c / a, q) + pow(s / b, q), -1.0 / q);
                   return Vec3<T>{rad * c, rad * s, T(0.0)};
                 }));
  auto level = [a, b, q](const Vec3d& p) {
    return std::pow(p.x / a, q) + std::pow(p.y / b, q) - 1.0;
  };
  return Domain(id, 2, std::move(boundary), std::nullopt, level, true, std::nullopt, 1);
}

}  // namespace riesz
