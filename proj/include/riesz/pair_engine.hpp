#pragma once

// Pair integrals over a closed curve or surface, organised around polar ray
// fans. For each outer point x the rays (s, alpha) cover the shape exactly
// once; the part of each ray before its first crossing of |y - x| = d is the
// near region. The near region carries all the singular behaviour and is
// handled three ways (radial profile, cutoff, direct). Beyond it a smooth
// partition chi(r), 1 below d and 0 above d2, splits the rest: chi K along the
// rays of the band d < r < d2, and (1 - chi) K on a tensor grid, whose
// integrand is smooth. Polar rays alone resolve the far field poorly in angle.

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "riesz/regularize.hpp"
#include "riesz/shapes.hpp"

namespace riesz {

// r^w (log r)^log_power
struct Kernel {
  cplx w;
  int log_power = 0;
};

enum class PairWeight { none, normal_dot };

struct RayPoint {
  Vec3d p;
  Vec3d dp;          // derivative along the ray
  double jac = 0.0;  // volume density in (s, alpha)
  Vec3d normal_raw;  // outward-oriented, not normalized
};

struct RayFan {
  Vec3d x;
  Vec3d normal;         // outward unit normal at x (planar curves and surfaces)
  double weight = 0.0;  // outer quadrature weight times the volume density at x
  double k1 = 0.0, k2 = 0.0;  // curvature (curves: k1) or principal curvatures
  std::vector<double> alpha_weights;
  std::vector<double> s_end;
  std::function<RayPoint(double, std::size_t)> eval;
};

class PairGeometry {
 public:
  // Curves: `outer_n` trapezoid points. Surfaces: outer grid `outer_n` in u
  // (periodic) by outer_n (torus) or outer_n / 2 Gauss points (sphere-like),
  // and `rays` polar directions per point.
  PairGeometry(const Curve& c, int outer_n);
  PairGeometry(const Surface& s, int outer_n, int rays);

  struct Node {
    Vec3d p;
    Vec3d normal;  // outward unit normal (planar curves and surfaces)
    double w = 0.0;
  };
  // Tensor grid of the same family as the outer grid with spacing at most about h.
  std::vector<Node> grid(double h) const;
  int outer_n() const { return outer_n_; }

  int dim() const { return dim_; }
  std::size_t size() const { return count_; }
  RayFan fan(std::size_t i) const;
  // Fan at parameter (u, v) (curves: theta = u); weight is the volume density there.
  RayFan fan_at(double u, double v) const;
  double max_curvature() const { return kappa_max_; }
  bool planar_curve() const;

 private:
  std::variant<Curve, Surface> shape_;
  int dim_ = 1;
  int outer_n_ = 0;
  int rays_ = 2;
  std::size_t count_ = 0;
  double kappa_max_ = 0.0;
};

struct PairPassRequest {
  PairWeight weight = PairWeight::none;
  double d = 0.0;  // near radius; 0 picks 0.8 / max curvature
  double band = 2.0;  // d2 = band * d
  bool profile = false;
  std::vector<Kernel> far;
  std::vector<Kernel> direct;
  std::vector<double> cutoff_z;
  std::vector<double> eps;  // strictly decreasing, all below d
  bool eps_relative = false;  // eps given as fractions of the near radius
  RegularizeOptions reg;
  int far_panels = 3;   // band panels per ray
  int far_order = 16;
  double inner_density = 12.0;  // far-field tensor grid points per band width d2 - d
  int cutoff_order = 10;
  int direct_order = 10;
  int threads = 0;  // 0: default_thread_count()
};

struct PairPassResult {
  double d = 0.0;
  PsiProfile profile;  // aggregated derivative profile over [0, d] with its curvature jet
  std::vector<cplx> far;
  std::vector<cplx> direct_near;
  std::vector<std::vector<double>> cutoff_near;  // [cutoff_z][eps]: near part over |x - y| > eps
  std::vector<double> eps;  // absolute cutoff radii used
  double measure = 0.0;  // sum of outer weights
  double band_check = 0.0;  // relative mismatch of the chi-measure, polar vs tensor
};

PairPassResult run_pair_pass(const PairGeometry& g, const PairPassRequest& req);

// Jet of the derivative of the (weighted) extrinsic-ball profile at a point
// with the given curvatures; m = 1 curves, m = 2 surfaces.
TaylorJet psi_derivative_jet(int m, double k1, double k2, PairWeight weight);

// Derivative profile psi'_x over [0, d] at one point, with its curvature jet.
PsiProfile point_profile(const PairGeometry& g, double u, double v, PairWeight weight, double d,
                         const RegularizeOptions& reg = {});

// Measure of {y : |y - x| <= t} (weighted by <n_x, n_y> if asked) from the crossings
// of |y - x| = t along every ray of the fan at (u, v).
double ray_ball_measure(const PairGeometry& g, double u, double v, double t, PairWeight weight);

// Thread count from RIESZ_THREADS, else hardware concurrency; can be overridden.
int default_thread_count();
void set_default_thread_count(int n);

// Runs body(i) for i in [0, n) on `threads` workers; callers write to
// per-index slots so reductions stay in index order.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace riesz
