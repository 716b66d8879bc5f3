#include "doctest.h"

#include <cmath>
#include <numbers>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/shapes.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

Vec3d fd4(const std::function<Vec3d(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

double ellipse_kappa(double a, double b, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return a * b / std::pow(a * a * s * s + b * b * c * c, 1.5);
}

}  // namespace

TEST_CASE("curve curvature") {
  const Curve c = make_circle(1.5);
  for (double t : {0.0, 0.7, 2.0, 4.4}) CHECK(curvature_curve(c, t) == doctest::Approx(1 / 1.5).epsilon(1e-14));

  const Curve e = make_ellipse(2, 1);
  CHECK(curvature_curve(e, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  for (double t : {0.3, 1.1, 2.5, 5.0})
    CHECK(curvature_curve(e, t) == doctest::Approx(ellipse_kappa(2, 1, t)).epsilon(1e-13));

  const Curve seg("segment", 3, make_curve_map([](const auto& t) {
                    using T = std::decay_t<decltype(t)>;
                    return Vec3<T>{t, 2.0 * t, T(1.0)};
                  }));
  CHECK(curvature_curve(seg, 0.4) == doctest::Approx(0.0).epsilon(1e-15));

  const Curve degenerate("stall", 3, make_curve_map([](const auto& t) {
                           using T = std::decay_t<decltype(t)>;
                           return Vec3<T>{t * t * t, T(0.0), T(0.0)};
                         }));
  CHECK_THROWS_AS(curvature_curve(degenerate, 0.0), Error);
}

TEST_CASE("curves are closed and derivatives match finite differences") {
  for (const Curve& c : {make_circle(1), make_ellipse(2, 1), make_trefoil(1),
                         std::get<Domain>(parse_shape("superellipse-domain(a=1.5,b=1,q=4)"))
                             .boundary_curve()}) {
    CAPTURE(c.id());
    CHECK(distance(c.point(0.0), c.point(2 * pi)) < 1e-12);
    for (double t : {0.2, 1.3, 3.9}) {
      const auto j = c.jet3(t);
      const double h = 1e-3;
      CHECK(norm(j[1] - fd4([&](double s) { return c.point(s); }, t, h)) < 1e-9 * (1 + norm(j[1])));
      CHECK(norm(j[2] - fd4([&](double s) { return c.jet3(s)[1]; }, t, h)) < 1e-8 * (1 + norm(j[2])));
      CHECK(norm(j[3] - fd4([&](double s) { return c.jet3(s)[2]; }, t, h)) < 1e-7 * (1 + norm(j[3])));
    }
  }
}

TEST_CASE("surface principal curvatures") {
  const Surface s = make_sphere(1);
  for (auto [u, v] : {std::pair{0.0, 0.0}, {1.0, 0.3}, {2.0, pi / 2}, {4.0, pi}}) {
    const auto k = principal_curvatures(s, u, v);
    CHECK(k[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Surface t1 = make_torus(2, 1);
  auto k = principal_curvatures(t1, 0.3, 0.0);
  CHECK(k[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(k[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  const Surface t2 = make_torus(2, 0.5);
  k = principal_curvatures(t2, 1.0, 0.0);
  CHECK(k[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(k[1] == doctest::Approx(0.4).epsilon(1e-13));
  for (double v : {0.5, 2.0, pi, 4.0}) {
    k = principal_curvatures(t2, 0.7, v);
    const double kv = std::cos(v) / (2 + 0.5 * std::cos(v));
    CHECK(k[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(k[1] == doctest::Approx(kv).epsilon(1e-12));
  }

  // unit-radius cylinder patch
  const Surface cyl = Surface::torus_like(
      "cylinder", make_surface_map([](const auto& u, const auto& v) {
        using std::cos;
        using std::sin;
        using T = std::decay_t<decltype(u)>;
        return Vec3<T>{cos(u), sin(u), v + T(0.0)};
      }));
  k = principal_curvatures(cyl, 0.4, 0.2);
  CHECK(std::abs(k[0]) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(k[1]) < 1e-13);

  // ellipsoid Gauss curvature 1 / (a b c)^2 (x^2/a^4 + y^2/b^4 + z^2/c^4)^-2
  const double a = 1.2, b = 1.0, c = 0.7;
  const Surface el = make_ellipsoid(a, b, c);
  for (auto [u, v] : {std::pair{0.1, 0.05}, {1.0, 1.0}, {2.5, 2.2}, {5.0, 3.1}}) {
    const auto g = el.geometry(u, v);
    const Vec3d p = g.point;
    const double q = p.x * p.x / std::pow(a, 4) + p.y * p.y / std::pow(b, 4) + p.z * p.z / std::pow(c, 4);
    CHECK(g.k1 * g.k2 == doctest::Approx(1.0 / (a * a * b * b * c * c * q * q)).epsilon(1e-11));
    CHECK(g.k1 >= g.k2);
    CHECK(g.k2 > 0.0);
    // outward normal is parallel to the gradient of the quadric
    const Vec3d grad = normalized(Vec3d{p.x / (a * a), p.y / (b * b), p.z / (c * c)});
    CHECK(norm(g.normal - grad) < 1e-12);
  }
}

TEST_CASE("surface chart derivatives match finite differences") {
  for (const Surface& s : {make_torus(2, 0.5), make_ellipsoid(1.2, 1.0, 0.8)}) {
    CAPTURE(s.id());
    const Chart ch = s.centered_chart(0.9, 1.2);
    const auto g = chart_geometry(ch);
    const double h = 1e-3;
    const Vec3d xu = fd4([&](double x) { return ch.map.f0(x, ch.v0); }, ch.u0, h);
    const Vec3d xv = fd4([&](double x) { return ch.map.f0(ch.u0, x); }, ch.v0, h);
    CHECK(norm(g.xu - xu) < 1e-10);
    CHECK(norm(g.xv - xv) < 1e-10);
    CHECK(distance(g.point, s.point(0.9, 1.2)) < 1e-13);
    const auto off = s.chart_offset(ch, 0.9, 1.2);
    CHECK(std::abs(off[0]) < 1e-13);
    CHECK(std::abs(off[1]) < 1e-13);
  }
}

TEST_CASE("chart offsets locate points") {
  const Surface el = make_ellipsoid(1.2, 1.0, 0.8);
  const Chart ch = el.centered_chart(0.4, 0.1);
  const auto off = el.chart_offset(ch, 1.0, 0.3);
  CHECK(distance(ch.map.f0(off[0], off[1]), el.point(1.0, 0.3)) < 1e-13);

  const Surface t = make_torus(2, 0.5);
  const Chart tc = t.centered_chart(6.2, 0.1);
  const auto o2 = t.chart_offset(tc, 0.05, 6.25);
  CHECK(o2[0] == doctest::Approx(0.05 + 2 * pi - 6.2).epsilon(1e-13));
  CHECK(o2[1] == doctest::Approx(6.25 - 2 * pi - 0.1).epsilon(1e-13));
}

TEST_CASE("curvature integrals") {
  const double r = 1.7;
  auto ci = curvature_integrals(make_circle(r));
  CHECK(ci.measure == doctest::Approx(2 * pi * r).epsilon(1e-12));
  CHECK(ci.integral_kappa_sq == doctest::Approx(2 * pi / r).epsilon(1e-12));
  CHECK(ci.enclosed_volume == doctest::Approx(pi * r * r).epsilon(1e-12));

  // ellipse int kappa^2 ds by an independent 1-D integral
  const double expected = 4.0 * tanh_sinh(
                                    [](double t, double) {
                                      const double s = std::hypot(2 * std::sin(t), std::cos(t));
                                      const double k = ellipse_kappa(2, 1, t);
                                      return k * k * s;
                                    },
                                    0.0, pi / 2);
  ci = curvature_integrals(make_ellipse(2, 1));
  CHECK(ci.integral_kappa_sq == doctest::Approx(expected).epsilon(1e-11));
  CHECK(ci.enclosed_volume == doctest::Approx(2 * pi).epsilon(1e-12));

  ci = curvature_integrals(make_sphere(1.3));
  CHECK(ci.measure == doctest::Approx(4 * pi * 1.69).epsilon(1e-10));
  CHECK(std::abs(ci.integral_umbilic_defect) < 1e-10);
  CHECK(ci.integral_3H2_minus_K == doctest::Approx(8 * pi).epsilon(1e-10));
  CHECK(ci.integral_gauss == doctest::Approx(4 * pi).epsilon(1e-6));
  CHECK(ci.enclosed_volume == doctest::Approx(4 * pi / 3 * std::pow(1.3, 3)).epsilon(1e-10));

  ci = curvature_integrals(make_ellipsoid(1.2, 1.0, 1.0));
  CHECK(ci.integral_gauss == doctest::Approx(4 * pi).epsilon(1e-6));
  CHECK(ci.enclosed_volume == doctest::Approx(4 * pi / 3 * 1.2).epsilon(1e-10));
  CHECK(ci.integral_umbilic_defect > 0.0);

  const double R = 2.0, rr = 0.5;
  ci = curvature_integrals(make_torus(R, rr));
  CHECK(ci.measure == doctest::Approx(4 * pi * pi * R * rr).epsilon(1e-12));
  CHECK(std::abs(ci.integral_gauss) < 1e-6);
  // (k1 - k2) = R / (r (R + r cos v)), dA = r (R + r cos v) du dv
  CHECK(ci.integral_umbilic_defect ==
        doctest::Approx(4 * pi * pi * R * R / (rr * std::sqrt(R * R - rr * rr))).epsilon(1e-10));
  CHECK(ci.enclosed_volume == doctest::Approx(2 * pi * pi * R * rr * rr).epsilon(1e-10));

  const Shape b4 = parse_shape("ball(n=4,r=1)");
  ci = curvature_integrals(b4);
  CHECK(ci.integral_27H2_minus_4K == doctest::Approx(30 * pi * pi).epsilon(1e-14));
  CHECK(ci.enclosed_volume == doctest::Approx(pi * pi / 2).epsilon(1e-14));
}

TEST_CASE("domain normals point outward") {
  for (const char* spec : {"disk(r=1)", "superellipse-domain(a=1.5,b=1,q=4)", "ball(n=2,r=0.5)"}) {
    CAPTURE(spec);
    const Domain d = std::get<Domain>(parse_shape(spec));
    const Curve& c = d.boundary_curve();
    for (double t : {0.0, 1.0, 2.5, 4.0, 5.5}) {
      const Vec3d p = c.point(t), n = c.planar_normal(t);
      CHECK(d.level(p + 1e-4 * n) > 0.0);
      CHECK(d.level(p - 1e-4 * n) < 0.0);
    }
  }
  const Domain b = std::get<Domain>(parse_shape("ball(n=3,r=2)"));
  const Surface& s = b.boundary_surface();
  for (auto [u, v] : {std::pair{0.0, 0.01}, {2.0, 1.5}, {4.0, 3.0}}) {
    const auto g = s.geometry(u, v);
    CHECK(b.level(g.point + 1e-4 * g.normal) > 0.0);
    CHECK(b.level(g.point - 1e-4 * g.normal) < 0.0);
  }
  const Surface t = make_torus(2, 0.5);
  const auto g = t.geometry(0.0, 0.0);
  CHECK(norm(g.normal - Vec3d{1, 0, 0}) < 1e-14);
}

TEST_CASE("shape grammar") {
  auto spec = parse_shape_spec(" torus( R = 2 , r=0.5 ) ");
  CHECK(spec.name == "torus");
  CHECK(spec.params.at("R") == 2.0);
  CHECK(spec.params.at("r") == 0.5);

  const Shape e = parse_shape("ellipse(2,1)");
  CHECK(curvature_curve(std::get<Curve>(e), 0.0) == doctest::Approx(2.0));
  CHECK(std::holds_alternative<Surface>(parse_shape("sphere")));
  CHECK(shape_dimension(parse_shape("ball(n=3,r=1)")) == 3);
  CHECK(std::get<Domain>(parse_shape("ball(n=3,r=1)")).euler_characteristic() == 2);

  auto kind_of = [](const char* text) {
    try {
      parse_shape(text);
    } catch (const Error& err) {
      return err.kind();
    }
    return ErrorKind::MethodsDisagree;  // sentinel: nothing thrown
  };
  CHECK(kind_of("dodecahedron(r=1)") == ErrorKind::UnknownShape);
  CHECK(kind_of("circle(radius=1)") == ErrorKind::InvalidParams);
  CHECK(kind_of("circle(r=-1)") == ErrorKind::InvalidParams);
  CHECK(kind_of("circle(r=1") == ErrorKind::InvalidParams);
  CHECK(kind_of("torus(R=1,r=2)") == ErrorKind::InvalidParams);
  CHECK(kind_of("superellipse-domain(q=3)") == ErrorKind::InvalidParams);
  CHECK(kind_of("ball(n=5)") == ErrorKind::UnsupportedDimension);
  CHECK(kind_of("circle(1,2)") == ErrorKind::InvalidParams);
}
