#include "riesz/moebius.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "riesz/domain_energy.hpp"
#include "riesz/errors.hpp"
#include "riesz/extrinsic.hpp"

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec3d> sample_points(const Curve& c) {
  std::vector<Vec3d> pts;
  for (int i = 0; i < 512; ++i) pts.push_back(c.point(2.0 * kPi * i / 512));
  return pts;
}

std::vector<Vec3d> sample_points(const Surface& s) {
  std::vector<Vec3d> pts;
  const bool sphere = s.topology() == Topology::sphere;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < (sphere ? 32 : 64); ++j) {
      const double u = 2.0 * kPi * i / 64;
      const double v = sphere ? kPi * (j + 0.5) / 32 : 2.0 * kPi * j / 64;
      pts.push_back(s.point(u, v));
    }
  return pts;
}

double distance_to(const std::vector<Vec3d>& pts, const Vec3d& c) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3d& p : pts) best = std::min(best, norm(p - c));
  return best;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string fmt(const Vec3d& v) { return "(" + fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z) + ")"; }

MoebiusMap single(const MoebiusMap::Step& st) {
  switch (st.kind) {
    case MoebiusMap::Kind::translation: return MoebiusMap::translation(st.v);
    case MoebiusMap::Kind::homothety: return MoebiusMap::homothety(st.s);
    default: return MoebiusMap::inversion(st.v, st.s);
  }
}

Curve map_curve(const MoebiusMap& T, const Curve& c, const std::string& id, int ambient) {
  const CurveMap& f = c.map();
  CurveMap g{[T, f](double t) { return T.apply(f.f0(t)); },
             [T, f](const Taylor1<1>& t) { return T.apply(f.f1(t)); },
             [T, f](const Taylor1<3>& t) { return T.apply(f.f3(t)); }};
  return Curve(id, ambient, std::move(g));
}

Surface map_surface(const MoebiusMap& T, const Surface& s, const std::string& id) {
  if (s.topology() == Topology::sphere) {
    const SphereEmbedding& e = s.embedding();
    SphereEmbedding g{[T, e](const Vec3d& p) { return T.apply(e.f0(p)); },
                      [T, e](const Vec3<Taylor2<1>>& p) { return T.apply(e.f1(p)); },
                      [T, e](const Vec3<Taylor2<2>>& p) { return T.apply(e.f2(p)); }};
    return Surface::sphere_like(id, std::move(g));
  }
  const SurfaceMap& f = s.base_map();
  SurfaceMap g{[T, f](double u, double v) { return T.apply(f.f0(u, v)); },
               [T, f](const Taylor2<1>& u, const Taylor2<1>& v) { return T.apply(f.f1(u, v)); },
               [T, f](const Taylor2<2>& u, const Taylor2<2>& v) { return T.apply(f.f2(u, v)); }};
  return Surface::torus_like(id, std::move(g));
}

void check_center(const MoebiusMap::Step& st, const Shape& shape) {
  if (st.kind != MoebiusMap::Kind::inversion) return;
  std::vector<Vec3d> pts;
  if (const auto* c = std::get_if<Curve>(&shape)) {
    pts = sample_points(*c);
  } else if (const auto* s = std::get_if<Surface>(&shape)) {
    pts = sample_points(*s);
  } else {
    const Domain& d = std::get<Domain>(shape);
    if (!d.has_boundary_parameterization())
      throw Error(ErrorKind::UnsupportedDimension, "inversion of a domain needs a boundary parameterization");
    if (d.interior(st.v)) throw Error(ErrorKind::CenterTooClose, "inversion center lies inside the domain");
    pts = d.dim() == 2 ? sample_points(d.boundary_curve()) : sample_points(d.boundary_surface());
  }
  const double margin = 0.3 * shape_diameter(shape);
  if (distance_to(pts, st.v) < margin)
    throw Error(ErrorKind::CenterTooClose, "inversion center within 0.3 diameters of the shape");
}

Shape apply_step(const MoebiusMap::Step& st, const Shape& shape) {
  check_center(st, shape);
  const MoebiusMap T = single(st);
  const std::string id = T.describe() + "[" + shape_id(shape) + "]";
  if (const auto* c = std::get_if<Curve>(&shape))
    return map_curve(T, *c, id, c->ambient_dim() == 2 && T.keeps_plane() ? 2 : 3);
  if (const auto* s = std::get_if<Surface>(&shape)) return map_surface(T, *s, id);

  const Domain& d = std::get<Domain>(shape);
  if (d.dim() == 2 && !T.keeps_plane())
    throw Error(ErrorKind::InvalidParams, "planar domains need maps that keep the plane z = 0");
  std::optional<Curve> curve;
  std::optional<Surface> surface;
  if (d.dim() == 2) curve = map_curve(T, d.boundary_curve(), id + ".boundary", 2);
  if (d.dim() == 3) surface = map_surface(T, d.boundary_surface(), id + ".boundary");
  const MoebiusMap inv = T.inverse();
  auto level = [inv, f = d.level_function()](const Vec3d& p) { return f(inv(p)); };
  std::optional<BallInfo> ball;
  if (d.ball() && st.kind != MoebiusMap::Kind::inversion)
    ball = BallInfo{d.ball()->radius * (st.kind == MoebiusMap::Kind::homothety ? st.s : 1.0), T(d.ball()->center)};
  const bool convex = d.convex() && st.kind != MoebiusMap::Kind::inversion;
  return Domain(id, d.dim(), curve, surface, level, convex, ball, d.euler_characteristic());
}

// Overall ratio when T has no inversion.
std::optional<double> similarity_ratio(const MoebiusMap& T) {
  double c = 1.0;
  for (const auto& st : T.steps()) {
    if (st.kind == MoebiusMap::Kind::inversion) return std::nullopt;
    if (st.kind == MoebiusMap::Kind::homothety) c *= st.s;
  }
  return c;
}

struct Evaluated {
  cplx value, residue;
  double error;
};

Evaluated evaluate(const Shape& s, cplx z, const EnergyOptions& opts) {
  if (const auto* d = std::get_if<Domain>(&s)) {
    const auto r = domain_energy(*d, z, opts);
    return {r.value, r.residue_at_z, r.error_estimate};
  }
  const auto r = energy(s, z, opts);
  return {r.value, r.residue_at_z, r.error_estimate};
}

}  // namespace

MoebiusMap MoebiusMap::translation(const Vec3d& v) {
  MoebiusMap m;
  m.steps_.push_back({Kind::translation, v, 1.0});
  return m;
}

MoebiusMap MoebiusMap::homothety(double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParams, "homothety ratio must be positive");
  MoebiusMap m;
  m.steps_.push_back({Kind::homothety, {}, c});
  return m;
}

MoebiusMap MoebiusMap::inversion(const Vec3d& center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParams, "inversion radius must be positive");
  MoebiusMap m;
  m.steps_.push_back({Kind::inversion, center, radius});
  return m;
}

MoebiusMap operator*(const MoebiusMap& a, const MoebiusMap& b) {
  MoebiusMap m = b;
  m.steps_.insert(m.steps_.end(), a.steps_.begin(), a.steps_.end());
  return m;
}

MoebiusMap::Kind MoebiusMap::kind() const {
  if (steps_.empty()) return Kind::translation;
  if (steps_.size() == 1) return steps_.front().kind;
  return Kind::composition;
}

MoebiusMap MoebiusMap::inverse() const {
  MoebiusMap m;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    Step st = *it;
    if (st.kind == Kind::translation) st.v = -st.v;
    if (st.kind == Kind::homothety) st.s = 1.0 / st.s;
    m.steps_.push_back(st);
  }
  return m;
}

std::string MoebiusMap::describe() const {
  if (steps_.empty()) return "identity";
  std::string out;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (!out.empty()) out += "*";
    switch (it->kind) {
      case Kind::translation: out += "translate" + fmt(it->v); break;
      case Kind::homothety: out += "scale(" + fmt(it->s) + ")"; break;
      default: out += "invert(c=" + fmt(it->v) + ",r=" + fmt(it->s) + ")";
    }
  }
  return out;
}

double MoebiusMap::scale_factor(const Vec3d& p0) const {
  Vec3d p = p0;
  double f = 1.0;
  for (const Step& st : steps_) {
    if (st.kind == Kind::homothety) f *= st.s;
    if (st.kind == Kind::inversion) {
      const Vec3d q = p - st.v;
      f *= st.s * st.s / dot(q, q);
    }
    p = single(st)(p);
  }
  return f;
}

bool MoebiusMap::keeps_plane() const {
  for (const Step& st : steps_)
    if (st.kind != Kind::homothety && st.v.z != 0.0) return false;
  return true;
}

Shape transform_shape(const MoebiusMap& T, const Shape& shape) {
  Shape out = shape;
  for (const auto& st : T.steps()) out = apply_step(st, out);
  return out;
}

InvarianceReport invariance_check(const Shape& shape, cplx z, const MoebiusMap& T, const EnergyOptions& opts) {
  const Shape image = transform_shape(T, shape);
  const Evaluated a = evaluate(shape, z, opts);
  const Evaluated b = evaluate(image, z, opts);
  InvarianceReport r;
  r.original = a.value;
  r.image = b.value;
  r.defect = std::abs(b.value - a.value);
  r.error_estimate = std::hypot(a.error, b.error);
  r.tolerance = 3.0 * r.error_estimate;
  cplx expected = 0.0;
  if (const auto c = similarity_ratio(T)) {
    // exponent 2m + z for closed m-manifolds, 2n + z for domains
    const double k = 2.0 * shape_dimension(shape);
    r.has_prediction = true;
    r.predicted_defect = std::pow(*c, k + z) * (a.value + std::log(*c) * a.residue) - a.value;
    expected = r.predicted_defect;
  }
  r.pass = std::abs(b.value - a.value - expected) <= r.tolerance;
  return r;
}

}  // namespace riesz
