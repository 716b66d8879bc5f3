#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riesz/taylor.hpp"
#include "riesz/vec3.hpp"

namespace riesz {

// ---------------------------------------------------------------- curves

// 2 pi periodic map theta -> R^3, evaluated at three scalar types.
struct CurveMap {
  std::function<Vec3d(double)> f0;
  std::function<Vec3<Taylor1<1>>(const Taylor1<1>&)> f1;
  std::function<Vec3<Taylor1<3>>(const Taylor1<3>&)> f3;
};

template <class F>
CurveMap make_curve_map(F f) {
  return {[f](double t) { return f(t); },
          [f](const Taylor1<1>& t) { return f(t); },
          [f](const Taylor1<3>& t) { return f(t); }};
}

class Curve {
 public:
  Curve(std::string id, int ambient_dim, CurveMap map);

  const std::string& id() const { return id_; }
  int ambient_dim() const { return ambient_dim_; }
  const CurveMap& map() const { return map_; }

  Vec3d point(double theta) const { return map_.f0(theta); }
  // gamma and its first derivative
  std::array<Vec3d, 2> jet1(double theta) const;
  // gamma, gamma', gamma'', gamma'''
  std::array<Vec3d, 4> jet3(double theta) const;
  double speed(double theta) const;
  // +1 if the planar curve runs counterclockwise, -1 otherwise; +1 for space curves.
  int orientation() const { return orientation_; }
  // Outward normal of a planar boundary curve.
  Vec3d planar_normal(double theta) const;

 private:
  std::string id_;
  int ambient_dim_;
  CurveMap map_;
  int orientation_ = 1;
};

// ---------------------------------------------------------------- surfaces

// (u, v) -> R^3 at three scalar types.
struct SurfaceMap {
  std::function<Vec3d(double, double)> f0;
  std::function<Vec3<Taylor2<1>>(const Taylor2<1>&, const Taylor2<1>&)> f1;
  std::function<Vec3<Taylor2<2>>(const Taylor2<2>&, const Taylor2<2>&)> f2;
};

// Map from the unit sphere (as a subset of R^3) to R^3.
struct SphereEmbedding {
  std::function<Vec3d(const Vec3d&)> f0;
  std::function<Vec3<Taylor2<1>>(const Vec3<Taylor2<1>>&)> f1;
  std::function<Vec3<Taylor2<2>>(const Vec3<Taylor2<2>>&)> f2;
};

template <class F>
SurfaceMap make_surface_map(F f) {
  return {[f](double u, double v) { return f(u, v); },
          [f](const Taylor2<1>& u, const Taylor2<1>& v) { return f(u, v); },
          [f](const Taylor2<2>& u, const Taylor2<2>& v) { return f(u, v); }};
}

template <class F>
SphereEmbedding make_sphere_embedding(F f) {
  return {[f](const Vec3d& s) { return f(s); },
          [f](const Vec3<Taylor2<1>>& s) { return f(s); },
          [f](const Vec3<Taylor2<2>>& s) { return f(s); }};
}

enum class Topology { sphere, torus };

using Mat3 = std::array<Vec3d, 3>;  // columns

// A parameter patch together with the parameters of the point it is centred on.
// Sphere-like surfaces use stereographic charts from the antipode of the
// centre, chart(a, b) = g(R sigma(a, b)) with sigma(0, 0) = e_z; the torus uses
// its periodic base chart.
struct Chart {
  SurfaceMap map;
  double u0 = 0.0, v0 = 0.0;
  Mat3 rotation{};
  int orientation = 1;  // sign making (X_u x X_v) point outward
};

struct SurfacePointGeometry {
  Vec3d point, xu, xv;
  Vec3d normal;  // outward unit normal
  double area_density;  // sqrt(det g) in the chart that produced it
  double k1, k2;        // principal curvatures, k1 >= k2, positive on convex shapes
};

class Surface {
 public:
  static Surface sphere_like(std::string id, SphereEmbedding g);
  static Surface torus_like(std::string id, SurfaceMap f);

  const std::string& id() const { return id_; }
  Topology topology() const { return topology_; }
  // Base parameter rectangle: u in [0, 2 pi) periodic; v in [0, pi] (sphere) or [0, 2 pi) periodic.
  double v_range() const;
  const SphereEmbedding& embedding() const { return embedding_; }
  const SurfaceMap& base_map() const { return base_; }

  Vec3d point(double u, double v) const { return base_.f0(u, v); }
  // Unit sphere point for base parameters (sphere-like).
  static Vec3d sphere_point(double u, double v);
  // Proper rotation with third column sphere_point(u, v).
  static Mat3 polar_frame(double u, double v);
  // Chart that is regular around the base point (u, v) and has it at (u0, v0).
  Chart centered_chart(double u, double v) const;
  // Coordinates in `chart` of the point with base parameters (u, v), relative to (u0, v0).
  std::array<double, 2> chart_offset(const Chart& chart, double u, double v) const;
  // Same, from the unit-sphere point of a sphere-like surface.
  static std::array<double, 2> stereographic_offset(const Chart& chart, const Vec3d& s);

  SurfacePointGeometry geometry(double u, double v) const;
  // Base-chart area density sqrt(det g)(u, v).
  double base_area_density(double u, double v) const;
  int orientation() const { return orientation_; }

 private:
  Surface() = default;
  void fix_orientation();

  std::string id_;
  Topology topology_ = Topology::torus;
  SphereEmbedding embedding_;
  SurfaceMap base_;
  int orientation_ = 1;
};

// Geometry at a chart's centre point.
SurfacePointGeometry chart_geometry(const Chart& chart);

// ---------------------------------------------------------------- domains

struct BallInfo {
  double radius = 1.0;
  Vec3d center{};
};

class Domain {
 public:
  Domain(std::string id, int dim, std::optional<Curve> curve, std::optional<Surface> surface,
         std::function<double(const Vec3d&)> level, bool convex,
         std::optional<BallInfo> ball = std::nullopt, int euler_characteristic = 1);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  const Curve& boundary_curve() const;
  const Surface& boundary_surface() const;
  bool has_boundary_parameterization() const { return curve_ || surface_; }
  // Negative inside, positive outside.
  double level(const Vec3d& p) const { return level_(p); }
  const std::function<double(const Vec3d&)>& level_function() const { return level_; }
  bool interior(const Vec3d& p) const { return level_(p) < 0.0; }
  bool convex() const { return convex_; }
  const std::optional<BallInfo>& ball() const { return ball_; }
  int euler_characteristic() const { return euler_characteristic_; }

 private:
  std::string id_;
  int dim_;
  std::optional<Curve> curve_;
  std::optional<Surface> surface_;
  std::function<double(const Vec3d&)> level_;
  bool convex_;
  std::optional<BallInfo> ball_;
  int euler_characteristic_;
};

using Shape = std::variant<Curve, Surface, Domain>;

const std::string& shape_id(const Shape& s);
// Dimension m of a closed submanifold, or n of a domain.
int shape_dimension(const Shape& s);

// ---------------------------------------------------------------- accessors

double curvature_curve(const Curve& c, double theta);
std::array<double, 2> principal_curvatures(const Surface& s, double u, double v);

struct CurvatureIntegrals {
  double measure = 0.0;          // length of a curve or area of a surface (the boundary for domains)
  double enclosed_volume = 0.0;  // domains
  double integral_kappa_sq = 0.0;
  double integral_umbilic_defect = 0.0;  // (k1 - k2)^2
  double integral_3H2_minus_K = 0.0;
  double integral_27H2_minus_4K = 0.0;  // 4-ball only
  double integral_gauss = 0.0;
  double error_estimate = 0.0;  // largest grid-doubling change among the fields
};

CurvatureIntegrals curvature_integrals(const Shape& s);
CurvatureIntegrals curvature_integrals(const Curve& c, int n = 512);
CurvatureIntegrals curvature_integrals(const Surface& s, int nu = 96);

// Largest absolute curvature over a sampling grid.
double max_curvature(const Curve& c, int n = 512);
double max_curvature(const Surface& s, int nu = 64);

// ---------------------------------------------------------------- builtins

using ParamMap = std::map<std::string, double>;

struct ShapeSpec {
  std::string name;
  ParamMap params;
};

// Grammar: name '(' [key '=' number {',' key '=' number}] ')' ; name may be bare.
ShapeSpec parse_shape_spec(const std::string& text);
Shape builtin_shape(const std::string& name, const ParamMap& params);
Shape parse_shape(const std::string& text);

Curve make_circle(double r);
Curve make_ellipse(double a, double b);
Curve make_trefoil(double scale);
Surface make_torus(double R, double r);
Surface make_sphere(double r);
Surface make_ellipsoid(double a, double b, double c);
Domain make_ball(int n, double r);
Domain make_superellipse_domain(double a, double b, double q);

}  // namespace riesz
