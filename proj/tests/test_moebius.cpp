#include <cmath>

#include "doctest.h"
#include "riesz/errors.hpp"
#include "riesz/moebius.hpp"

using namespace riesz;

namespace {

const Curve& curve_of(const Shape& s) { return std::get<Curve>(s); }

}  // namespace

TEST_CASE("conformal identity of the unit inversion") {
  const MoebiusMap I = MoebiusMap::inversion({0, 0, 0});
  const Curve e = make_ellipse(2.0, 1.0);
  const Vec3d shift{3.0, 1.0, 0.5};
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      if (i == j) continue;
      const Vec3d x = e.point(0.9 * i) + shift, y = e.point(0.9 * j + 0.3) + shift;
      CHECK(norm(I(x) - I(y)) * norm(x) * norm(y) == doctest::Approx(norm(x - y)).epsilon(1e-12));
    }
}

TEST_CASE("volume element of the inversion") {
  const MoebiusMap I = MoebiusMap::inversion({0, 0, 0});
  const Shape c = transform_shape(MoebiusMap::translation({4.0, 0.5, 0.0}), make_ellipse(2.0, 1.0));
  const Shape ic = transform_shape(I, c);
  const double h = 1e-5;
  for (double t : {0.1, 1.3, 2.9, 4.4}) {
    const Vec3d x = curve_of(c).point(t);
    const double ds = norm(curve_of(c).point(t + h) - curve_of(c).point(t - h));
    const double di = norm(curve_of(ic).point(t + h) - curve_of(ic).point(t - h));
    CHECK(di / ds == doctest::Approx(1.0 / dot(x, x)).epsilon(1e-8));
    CHECK(I.scale_factor(x) == doctest::Approx(1.0 / dot(x, x)).epsilon(1e-14));
  }
  // surfaces: area element picks up |x|^{-4}
  const Shape s = transform_shape(MoebiusMap::translation({0.0, 0.0, 4.0}), make_torus(2.0, 0.5));
  const Shape is = transform_shape(I, s);
  const Surface& a = std::get<Surface>(s);
  const Surface& b = std::get<Surface>(is);
  for (auto [u, v] : {std::pair{0.3, 1.1}, std::pair{2.0, 4.0}}) {
    auto area = [&](const Surface& m) {
      const Vec3d du = (m.point(u + h, v) - m.point(u - h, v)) / (2 * h);
      const Vec3d dv = (m.point(u, v + h) - m.point(u, v - h)) / (2 * h);
      return norm(cross(du, dv));
    };
    const Vec3d x = a.point(u, v);
    CHECK(area(b) / area(a) == doctest::Approx(std::pow(dot(x, x), -2.0)).epsilon(1e-8));
  }
}

TEST_CASE("inversion is an involution") {
  const MoebiusMap I = MoebiusMap::inversion({4.0, 1.0, 0.0}, 1.5);
  const Shape e = make_ellipse(2.0, 1.0);
  const Shape back = transform_shape(I * I, e);
  for (double t : {0.0, 0.7, 2.2, 5.1}) {
    const Vec3d d = curve_of(back).point(t) - curve_of(e).point(t);
    CHECK(norm(d) < 1e-12);
  }
  const MoebiusMap T = MoebiusMap::translation({1, 2, 0}) * MoebiusMap::homothety(2.0);
  const Vec3d p{0.3, -0.2, 0.0};
  CHECK(norm(T.inverse()(T(p)) - p) < 1e-15);
  CHECK(T(p).x == doctest::Approx(1.6));
}

TEST_CASE("circles go to circles") {
  // the diameter on the x axis maps to (2.5, 0) and (2.75, 0)
  const Shape img = transform_shape(MoebiusMap::inversion({3.0, 0.0, 0.0}), make_circle(1.0));
  const Vec3d center{2.625, 0.0, 0.0};
  for (double t : {0.0, 0.5, 1.7, 3.0, 4.2})
    CHECK(norm(curve_of(img).point(t) - center) == doctest::Approx(0.125).epsilon(1e-12));
  for (double t : {0.2, 2.5}) CHECK(curvature_curve(curve_of(img), t) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("homothety scales length and total squared curvature") {
  const Shape e = make_ellipse(2.0, 1.0);
  const auto a = curvature_integrals(e);
  const auto b = curvature_integrals(transform_shape(MoebiusMap::homothety(3.0), e));
  CHECK(b.measure == doctest::Approx(3 * a.measure).epsilon(1e-13));
  CHECK(b.integral_kappa_sq == doctest::Approx(a.integral_kappa_sq / 3).epsilon(1e-12));
}

TEST_CASE("inversion centers must keep away from the shape") {
  const Shape c = make_circle(1.0);
  CHECK_THROWS_AS(transform_shape(MoebiusMap::inversion({1.2, 0.0, 0.0}), c), Error);
  CHECK_NOTHROW(transform_shape(MoebiusMap::inversion({2.0, 0.0, 0.0}), c));
  try {
    transform_shape(MoebiusMap::inversion({0.0, 0.0, 0.0}), make_ball(2, 1.0));
    FAIL("expected CenterTooClose");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CenterTooClose);
  }
  CHECK_THROWS_AS(MoebiusMap::homothety(0.0), Error);
  CHECK_THROWS_AS(MoebiusMap::inversion({0, 0, 0}, -1.0), Error);
  // planar domains stay in the plane
  CHECK_THROWS_AS(transform_shape(MoebiusMap::translation({0, 0, 1}), make_ball(2, 1.0)), Error);
}

TEST_CASE("invariance checks") {
  const Shape e = make_ellipse(2.0, 1.0);
  const auto t = invariance_check(e, -1.5, MoebiusMap::translation({0.5, -1.0, 0.0}));
  CHECK(t.pass);
  CHECK(t.defect < 1e-9 * std::abs(t.original));
  // homothety away from z = -2m: the prediction carries the change
  const auto h = invariance_check(e, -1.5, MoebiusMap::homothety(2.0));
  CHECK(h.has_prediction);
  CHECK(h.pass);
  CHECK(h.predicted_defect.real() == doctest::Approx((std::pow(2.0, 0.5) - 1) * h.original.real()).epsilon(1e-12));
  const auto d = invariance_check(make_ball(2, 1.0), -1.0, MoebiusMap::translation({2.0, 0.0, 0.0}));
  CHECK(d.pass);
  CHECK(d.original.real() == doctest::Approx(d.image.real()).epsilon(1e-9));
  CHECK(MoebiusMap::identity().describe() == "identity");
}
