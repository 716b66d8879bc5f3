#include "riesz/pair_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<int> g_threads{0};

// Angular rule for rays u0 + s (m11 cos a + m12 sin a), v0 + s (m21 cos a + m22 sin a)
// leaving the periodic square [-pi, pi]^2: Gauss sectors between the four
// directions where the exit face changes (the kinks of s_end), with node counts
// proportional to sector width.
Rule sector_rule(int rays, double m11, double m12, double m21, double m22) {
  std::vector<double> kinks;
  for (double sg : {1.0, -1.0}) {
    // (m11 - sg m21) cos a + (m12 - sg m22) sin a = 0
    const double a = std::atan2(-(m11 - sg * m21), m12 - sg * m22);
    for (double b : {a, a + kPi}) kinks.push_back(std::remainder(b, 2.0 * kPi));
  }
  std::sort(kinks.begin(), kinks.end());
  Rule r;
  for (std::size_t k = 0; k < 4; ++k) {
    const double lo = kinks[k], hi = k + 1 < 4 ? kinks[k + 1] : kinks[0] + 2.0 * kPi;
    const int n = std::max(8, static_cast<int>(std::lround(rays * (hi - lo) / (2.0 * kPi))));
    r.append(gauss_legendre(n, lo, hi));
  }
  return r;
}

}  // namespace

int default_thread_count() {
  if (int n = g_threads.load(); n > 0) return n;
  if (const char* env = std::getenv("RIESZ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_thread_count(int n) { g_threads.store(std::max(0, n)); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- geometry

PairGeometry::PairGeometry(const Curve& c, int outer_n)
    : shape_(c), dim_(1), outer_n_(outer_n), rays_(2), count_(outer_n) {
  if (outer_n < 8) throw Error(ErrorKind::InvalidParams, "outer grid too small");
  kappa_max_ = riesz::max_curvature(c, std::max(outer_n, 512));
}

PairGeometry::PairGeometry(const Surface& s, int outer_n, int rays)
    : shape_(s), dim_(2), outer_n_(outer_n), rays_(rays) {
  if (outer_n < 8 || rays < 8) throw Error(ErrorKind::InvalidParams, "outer grid too small");
  count_ = s.topology() == Topology::sphere ? static_cast<std::size_t>(outer_n) * (outer_n / 2)
                                            : static_cast<std::size_t>(outer_n) * outer_n;
  kappa_max_ = riesz::max_curvature(s, 64);
}

std::vector<PairGeometry::Node> PairGeometry::grid(double h) const {
  // point counts from the longest coordinate line in each direction
  auto count = [h](double length) {
    const int n = static_cast<int>(std::ceil(length / h));
    return std::max(16, n + (n & 1));
  };
  std::vector<Node> out;
  if (const auto* c = std::get_if<Curve>(&shape_)) {
    double len = 0.0;
    for (int i = 0; i < 256; ++i) len = std::max(len, c->speed(2.0 * kPi * i / 256));
    const int n = count(2.0 * kPi * len);
    const double dt = 2.0 * kPi / n;
    const bool planar = c->ambient_dim() == 2;
    for (int i = 0; i < n; ++i) {
      const double th = dt * i;
      out.push_back({c->point(th), planar ? c->planar_normal(th) : Vec3d{}, dt * c->speed(th)});
    }
    return out;
  }
  const Surface& s = std::get<Surface>(shape_);
  const bool sphere = s.topology() == Topology::sphere;
  double lu = 0.0, lv = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const double u = 2.0 * kPi * i / 32, v = sphere ? kPi * (j + 0.5) / 32 : 2.0 * kPi * j / 32;
      const auto g = s.geometry(u, v);
      lu = std::max(lu, norm(g.xu));
      lv = std::max(lv, norm(g.xv));
    }
  const Rule ru = periodic_trapezoid(count(2.0 * kPi * lu), 2.0 * kPi);
  const Rule rv = sphere ? gauss_legendre(count(kPi * lv), 0.0, kPi)
                         : periodic_trapezoid(count(2.0 * kPi * lv), 2.0 * kPi);
  for (std::size_t i = 0; i < ru.size(); ++i)
    for (std::size_t j = 0; j < rv.size(); ++j) {
      const auto g = s.geometry(ru.nodes[i], rv.nodes[j]);
      out.push_back({g.point, g.normal,
                     ru.weights[i] * rv.weights[j] * s.base_area_density(ru.nodes[i], rv.nodes[j])});
    }
  return out;
}

bool PairGeometry::planar_curve() const {
  const auto* c = std::get_if<Curve>(&shape_);
  return c && c->ambient_dim() == 2;
}

RayFan PairGeometry::fan(std::size_t i) const {
  if (dim_ == 1) {
    const double h = 2.0 * kPi / outer_n_;
    RayFan f = fan_at(h * static_cast<double>(i), 0.0);
    f.weight *= h;
    return f;
  }
  const bool sphere = std::get<Surface>(shape_).topology() == Topology::sphere;
  const int nu = outer_n_, nv = sphere ? outer_n_ / 2 : outer_n_;
  const Rule ru = periodic_trapezoid(nu, 2.0 * kPi);
  const Rule rv = sphere ? gauss_legendre(nv, 0.0, kPi) : periodic_trapezoid(nv, 2.0 * kPi);
  const std::size_t iu = i / nv, iv = i % nv;
  RayFan f = fan_at(ru.nodes[iu], rv.nodes[iv]);
  f.weight *= ru.weights[iu] * rv.weights[iv];
  return f;
}

RayFan PairGeometry::fan_at(double u, double v) const {
  RayFan f;
  if (const auto* cp = std::get_if<Curve>(&shape_)) {
    const Curve c = *cp;
    const double th = u;
    const auto j = c.jet3(th);
    const double sp = norm(j[1]);
    f.x = j[0];
    f.weight = sp;
    f.k1 = norm(cross(j[1], j[2])) / (sp * sp * sp);
    f.normal = c.ambient_dim() == 2 ? c.planar_normal(th) : Vec3d{};
    f.alpha_weights = {1.0, 1.0};
    f.s_end = {kPi, kPi};
    const double orient = c.orientation();
    const bool planar = c.ambient_dim() == 2;
    f.eval = [c, th, orient, planar](double s, std::size_t ray) {
      const double sigma = ray == 0 ? 1.0 : -1.0;
      const auto q = c.map().f1(Taylor1<1>::variable(th + sigma * s));
      RayPoint r;
      r.p = coef(q, 0);
      const Vec3d d1 = coef(q, 1);
      r.dp = sigma * d1;
      r.jac = norm(d1);
      r.normal_raw = planar ? orient * Vec3d{d1.y, -d1.x, 0.0} : Vec3d{};
      return r;
    };
    return f;
  }

  const Surface s = std::get<Surface>(shape_);
  const bool sphere = s.topology() == Topology::sphere;
  const auto g = s.geometry(u, v);
  f.x = g.point;
  f.normal = g.normal;
  f.k1 = g.k1;
  f.k2 = g.k2;
  f.weight = s.base_area_density(u, v);

  // Torus rays run along metric-orthonormal directions at x so the near region
  // is round in the angle variable: (du, dv) = s M (cos a, sin a), M^T G M = I.
  double m11 = 1.0, m12 = 0.0, m22 = 1.0, detm = 1.0;
  if (!sphere) {
    const double E = dot(g.xu, g.xu), F = dot(g.xu, g.xv), G = dot(g.xv, g.xv);
    const double det = E * G - F * F;
    m11 = 1.0 / std::sqrt(E);
    m12 = -F / std::sqrt(E * det);
    m22 = std::sqrt(E / det);
    detm = 1.0 / std::sqrt(det);
  }
  const Rule ra = sphere ? periodic_trapezoid(rays_, 2.0 * kPi) : sector_rule(rays_, m11, m12, 0.0, m22);
  f.alpha_weights = ra.weights;
  f.s_end.resize(ra.size());
  std::vector<double> ca(ra.size()), sa(ra.size());
  for (std::size_t k = 0; k < ra.size(); ++k) {
    const double c = std::cos(ra.nodes[k]), sn = std::sin(ra.nodes[k]);
    ca[k] = sphere ? c : m11 * c + m12 * sn;  // du/ds
    sa[k] = sphere ? sn : m22 * sn;           // dv/ds
    f.s_end[k] = sphere ? kPi : kPi / std::max(std::abs(ca[k]), std::abs(sa[k]));
  }

  std::function<RayPoint(double, std::size_t)> raw;
  if (sphere) {
    const Mat3 R = Surface::polar_frame(u, v);
    const auto emb = s.embedding();
    const std::vector<double> alphas = ra.nodes;
    raw = [emb, R, alphas](double beta, std::size_t k) {
      using T = Taylor2<1>;
      const T B = T::variable_u(beta), A = T::variable_v(alphas[k]);
      const T sb = sin(B);
      const T c1 = sb * cos(A), c2 = sb * sin(A), c3 = cos(B);
      Vec3<T> sp;
      for (int a = 0; a < 3; ++a) sp[a] = R[0][a] * c1 + R[1][a] * c2 + R[2][a] * c3;
      const auto X = emb.f1(sp);
      RayPoint r;
      r.p = coef(X, 0);
      r.dp = coef(X, 1);
      r.normal_raw = cross(r.dp, coef(X, 2));
      r.jac = norm(r.normal_raw);
      return r;
    };
  } else {
    const auto map = s.base_map();
    raw = [map, u, v, ca, sa, detm](double t, std::size_t k) {
      using T = Taylor2<1>;
      const auto X = map.f1(T::variable_u(u + t * ca[k]), T::variable_v(v + t * sa[k]));
      RayPoint r;
      r.p = coef(X, 0);
      const Vec3d xu = coef(X, 1), xv = coef(X, 2);
      r.dp = ca[k] * xu + sa[k] * xv;
      r.normal_raw = cross(xu, xv);
      r.jac = t * detm * norm(r.normal_raw);
      return r;
    };
  }
  // orient the ray normals against the outward normal at x
  const RayPoint probe = raw(1e-4, 0);
  const double sigma = dot(probe.normal_raw, f.normal) >= 0.0 ? 1.0 : -1.0;
  f.eval = [raw, sigma](double t, std::size_t k) {
    RayPoint r = raw(t, k);
    r.normal_raw = sigma * r.normal_raw;
    return r;
  };
  return f;
}

TaylorJet psi_derivative_jet(int m, double k1, double k2, PairWeight weight) {
  if (m == 1) {
    const double k = k1;
    if (weight == PairWeight::none) return TaylorJet({2.0, 0.0, k * k / 4.0, 0.0}, Parity::even);
    return TaylorJet({2.0, 0.0, -0.75 * k * k, 0.0}, Parity::even);
  }
  if (weight == PairWeight::none)
    return TaylorJet({0.0, 2.0 * kPi, 0.0, kPi * (k1 - k2) * (k1 - k2) / 8.0, 0.0}, Parity::odd);
  const double H = 0.5 * (k1 + k2), K = k1 * k2;
  return TaylorJet({0.0, 2.0 * kPi, 0.0, -kPi * (3.0 * H * H - K) / 2.0, 0.0}, Parity::odd);
}

// ---------------------------------------------------------------- pass

namespace {

struct NearRadiusTooLarge {};

struct Sample {
  RayPoint q;
  double r = 0.0;
  double dr = 0.0;
};

Sample sample(const RayFan& f, std::size_t k, double s) {
  Sample out;
  out.q = f.eval(s, k);
  const Vec3d diff = out.q.p - f.x;
  out.r = norm(diff);
  out.dr = out.r > 0.0 ? dot(diff, out.q.dp) / out.r : norm(out.q.dp);
  return out;
}

// First s in [lo, hi] with r(s) = t, assuming r(lo) < t <= r(hi) and r increasing.
std::pair<double, Sample> solve_radius(const RayFan& f, std::size_t k, double t, double lo,
                                       double hi, double guess) {
  double s = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  Sample cur;
  for (int it = 0; it < 200; ++it) {
    cur = sample(f, k, s);
    const double g = cur.r - t;
    if (std::abs(g) <= 2e-16 * t) break;
    if (g < 0.0)
      lo = s;
    else
      hi = s;
    if (hi - lo <= 1e-16 * hi) break;
    double sn = cur.dr > 0.0 ? s - g / cur.dr : 0.5 * (lo + hi);
    if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
    const bool done = std::abs(sn - s) <= 1e-12 * s;  // converging quadratically
    s = sn;
    if (done) {
      cur = sample(f, k, s);
      break;
    }
  }
  return {s, cur};
}

// s*(d) on ray k by marching, verifying that r increases along the way.
double near_limit(const RayFan& f, std::size_t k, double d) {
  const double send = f.s_end[k];
  const int steps = 96;
  const double h = send / steps;
  double prev_s = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double s = h * i;
    const Sample sm = sample(f, k, s);
    if (!(sm.dr > 0.0)) throw NearRadiusTooLarge{};
    if (sm.r >= d) return solve_radius(f, k, d, prev_s, s, prev_s + h * 0.5).first;
    prev_s = s;
  }
  throw NearRadiusTooLarge{};
}

cplx kernel_value(const Kernel& K, double lr) {
  cplx v = K.w.imag() == 0.0 ? cplx(std::exp(K.w.real() * lr)) : std::exp(K.w * lr);
  for (int j = 0; j < K.log_power; ++j) v *= lr;
  return v;
}

// integral over [0, a] of s^p (log c + log s)^k ds
cplx leading_piece(cplx p, double a, double logc, int k) {
  // I_j = int_0^a s^p log^j s ds
  std::vector<cplx> I(k + 1);
  const double la = std::log(a);
  const cplx ap = std::exp((p + 1.0) * la);
  I[0] = ap / (p + 1.0);
  for (int j = 1; j <= k; ++j) I[j] = ap * std::pow(la, j) / (p + 1.0) - double(j) / (p + 1.0) * I[j - 1];
  cplx sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += binom * std::pow(logc, k - j) * I[j];
    binom = binom * (k - j) / (j + 1);
  }
  return sum;
}

// Partition of unity in r: 1 below d, 0 above d2, smooth in between.
double band_weight(double r, double d, double d2) {
  if (r <= d) return 1.0;
  if (r >= d2) return 0.0;
  const double x = (r - d) / (d2 - d);
  const double a = std::exp(-1.0 / (1.0 - x)), b = std::exp(-1.0 / x);
  return a / (a + b);
}

struct FanOut {
  std::vector<double> profile;
  std::vector<cplx> far, direct;
  std::vector<double> cut;  // [iz * neps + ie]
  std::array<double, 5> jet{};
  double weight = 0.0;
  double band_measure = 0.0;  // polar measure of r < d2 weighted by chi
  Vec3d x, normal;
};

struct TensorOut {
  std::vector<cplx> far;
  double chi_measure = 0.0;
};

// (1 - chi) K over the tensor grid for one outer point
TensorOut tensor_row(const FanOut& o, const std::vector<PairGeometry::Node>& inner,
                     const PairPassRequest& req, double d, double d2) {
  TensorOut t;
  t.far.assign(req.far.size(), 0.0);
  const bool weighted = req.weight == PairWeight::normal_dot;
  for (const auto& y : inner) {
    const double r = norm(y.p - o.x);
    const double c = band_weight(r, d, d2);
    t.chi_measure += o.weight * y.w * c;
    if (c == 1.0) continue;
    const double lr = std::log(r);
    const double base = o.weight * y.w * (1.0 - c) * (weighted ? dot(o.normal, y.normal) : 1.0);
    for (std::size_t iz = 0; iz < req.far.size(); ++iz) t.far[iz] += base * kernel_value(req.far[iz], lr);
  }
  return t;
}

FanOut process_fan(const RayFan& f, int m, const PairPassRequest& req,
                   const std::vector<double>& eps, double d, double d2, const RadialGrid& grid) {
  const bool weighted = req.weight == PairWeight::normal_dot;
  FanOut out;
  out.weight = f.weight;
  out.x = f.x;
  out.normal = f.normal;
  {
    const TaylorJet j = psi_derivative_jet(m, f.k1, f.k2, req.weight);
    for (int i = 0; i < j.order() && i < 5; ++i) out.jet[i] = f.weight * j[i];
  }
  const std::size_t nrays = f.alpha_weights.size();
  const std::size_t nt = grid.nodes.size();
  const std::size_t nz = req.cutoff_z.size(), ne = eps.size();
  out.profile.assign(req.profile ? nt : 0, 0.0);
  out.far.assign(req.far.size(), 0.0);
  out.direct.assign(req.direct.size(), 0.0);
  out.cut.assign(nz * ne, 0.0);

  auto rho = [&](const RayPoint& q) {
    if (!weighted) return 1.0;
    return dot(f.normal, q.normal_raw) / norm(q.normal_raw);
  };

  std::vector<double> seg(ne);
  for (std::size_t k = 0; k < nrays; ++k) {
    const double aw = f.alpha_weights[k];
    const double s2 = near_limit(f, k, d2);
    const double sd = solve_radius(f, k, d, 0.0, s2, s2 * d / d2).first;

    if (req.profile) {
      double s_prev = 0.0, t_prev = 0.0;
      for (std::size_t it = 0; it < nt; ++it) {
        const double t = grid.nodes[it];
        const double guess = t_prev > 0.0 ? s_prev * t / t_prev : sd * t / d;
        const auto [s, sm] = solve_radius(f, k, t, s_prev, sd, guess);
        if (!(sm.dr > 0.0)) throw NearRadiusTooLarge{};
        out.profile[it] += f.weight * aw * rho(sm.q) * sm.q.jac / sm.dr;
        s_prev = s;
        t_prev = t;
      }
    }

    if (!req.direct.empty()) {
      const int panels = 30;
      const double s0 = std::ldexp(sd, -panels);
      for (int j = 0; j < panels; ++j) {
        const Rule r = gauss_legendre(req.direct_order, std::ldexp(sd, -j - 1), std::ldexp(sd, -j));
        for (std::size_t n = 0; n < r.size(); ++n) {
          const Sample sm = sample(f, k, r.nodes[n]);
          const double lr = std::log(sm.r);
          const double base = f.weight * aw * r.weights[n] * rho(sm.q) * sm.q.jac;
          for (std::size_t iz = 0; iz < req.direct.size(); ++iz)
            out.direct[iz] += base * kernel_value(req.direct[iz], lr);
        }
      }
      // leading behaviour r ~ c s, jac ~ A s^{m-1} on [0, s0]
      const Sample sm = sample(f, k, s0);
      const double c = sm.r / s0;
      const double A = sm.q.jac / std::pow(s0, m - 1);
      for (std::size_t iz = 0; iz < req.direct.size(); ++iz) {
        const Kernel& K = req.direct[iz];
        const cplx cw = K.w.imag() == 0.0 ? cplx(std::pow(c, K.w.real())) : std::pow(cplx(c), K.w);
        out.direct[iz] += f.weight * aw * rho(sm.q) * A * cw *
                          leading_piece(K.w + double(m - 1), s0, std::log(c), K.log_power);
      }
    }

    if (ne > 0) {
      std::vector<double> se(ne);
      double hi = sd;
      for (std::size_t ie = 0; ie < ne; ++ie) {
        const double guess = ie == 0 ? sd * eps[0] / d : se[ie - 1] * eps[ie] / eps[ie - 1];
        se[ie] = solve_radius(f, k, eps[ie], 0.0, hi, guess).first;
        hi = se[ie];
      }
      std::fill(seg.begin(), seg.end(), 0.0);
      std::vector<double> acc(nz, 0.0);
      auto integrate = [&](double a, double b, std::size_t slot) {
        const Rule r = gauss_legendre(req.cutoff_order, a, b);
        for (std::size_t n = 0; n < r.size(); ++n) {
          const Sample sm = sample(f, k, r.nodes[n]);
          const double lr = std::log(sm.r);
          const double base = f.weight * aw * r.weights[n] * rho(sm.q) * sm.q.jac;
          for (std::size_t iz = 0; iz < nz; ++iz)
            out.cut[iz * ne + slot] += base * std::exp(req.cutoff_z[iz] * lr);
        }
      };
      // [s(eps_0), s(d)] in ratio-2 panels, then one panel per schedule gap
      double a = se[0];
      while (a < sd) {
        const double b = std::min(sd, 2.0 * a);
        integrate(a, b, 0);
        a = b;
      }
      for (std::size_t ie = 1; ie < ne; ++ie) integrate(se[ie], se[ie - 1], ie);
    }

    if (!req.far.empty()) {
      const Rule rn = gauss_legendre(12, 0.0, sd);
      for (std::size_t n = 0; n < rn.size(); ++n)
        out.band_measure += f.weight * aw * rn.weights[n] * sample(f, k, rn.nodes[n]).q.jac;
      // transition band d < r < d2, weighted by the partition chi(r)
      const int P = req.far_panels;
      for (int p = 0; p < P; ++p) {
        const Rule r = gauss_legendre(req.far_order, sd + (s2 - sd) * p / P, sd + (s2 - sd) * (p + 1) / P);
        for (std::size_t n = 0; n < r.size(); ++n) {
          const Sample sm = sample(f, k, r.nodes[n]);
          const double c = band_weight(sm.r, d, d2);
          if (c == 0.0) continue;
          const double lr = std::log(sm.r);
          const double base = f.weight * aw * r.weights[n] * c * rho(sm.q) * sm.q.jac;
          out.band_measure += f.weight * aw * r.weights[n] * c * sm.q.jac;
          for (std::size_t iz = 0; iz < req.far.size(); ++iz)
            out.far[iz] += base * kernel_value(req.far[iz], lr);
        }
      }
    }
  }
  // cumulative: cut[z][ie] = near integral over |x - y| > eps_ie
  for (std::size_t iz = 0; iz < nz; ++iz)
    for (std::size_t ie = 1; ie < ne; ++ie) out.cut[iz * ne + ie] += out.cut[iz * ne + ie - 1];
  return out;
}

}  // namespace

PairPassResult run_pair_pass(const PairGeometry& geo, const PairPassRequest& req) {
  if (req.weight == PairWeight::normal_dot && geo.dim() == 1 && !geo.planar_curve())
    throw Error(ErrorKind::InvalidParams, "normal weighting needs a planar curve");
  for (std::size_t i = 1; i < req.eps.size(); ++i)
    if (!(req.eps[i] < req.eps[i - 1]))
      throw Error(ErrorKind::InvalidParams, "cutoff schedule must be decreasing");

  if (!(req.band > 1.0)) throw Error(ErrorKind::InvalidParams, "band ratio must exceed 1");
  double d = req.d > 0.0 ? req.d : 0.8 / std::max(geo.max_curvature(), 1e-12);
  const bool automatic = !(req.d > 0.0);
  const int threads = req.threads > 0 ? req.threads : default_thread_count();

  for (int attempt = 0;; ++attempt) {
    std::vector<double> eps = req.eps;
    if (req.eps_relative)
      for (double& e : eps) e *= d;
    if (!eps.empty() && !(eps.front() < d))
      throw Error(ErrorKind::InvalidParams, "cutoff radii must lie below the near radius " +
                                                std::to_string(d));
    const double d2 = req.band * d;
    try {
      const RadialGrid grid = RadialGrid::make(d, req.reg);
      std::vector<FanOut> outs(geo.size());
      parallel_for(geo.size(), threads,
                   [&](std::size_t i) { outs[i] = process_fan(geo.fan(i), geo.dim(), req, eps, d, d2, grid); });
      std::vector<TensorOut> rows;
      if (!req.far.empty()) {
        const auto inner = geo.grid((d2 - d) / req.inner_density);
        rows.resize(outs.size());
        parallel_for(outs.size(), threads,
                     [&](std::size_t i) { rows[i] = tensor_row(outs[i], inner, req, d, d2); });
      }

      PairPassResult res;
      res.d = d;
      res.eps = eps;
      res.far.assign(req.far.size(), 0.0);
      res.direct_near.assign(req.direct.size(), 0.0);
      res.cutoff_near.assign(req.cutoff_z.size(), std::vector<double>(eps.size(), 0.0));
      std::vector<double> prof(req.profile ? grid.nodes.size() : 0, 0.0);
      std::array<double, 5> jet{};
      for (const FanOut& o : outs) {
        res.measure += o.weight;
        for (std::size_t i = 0; i < prof.size(); ++i) prof[i] += o.profile[i];
        for (std::size_t i = 0; i < res.far.size(); ++i) res.far[i] += o.far[i];
        for (std::size_t i = 0; i < res.direct_near.size(); ++i) res.direct_near[i] += o.direct[i];
        for (std::size_t iz = 0; iz < req.cutoff_z.size(); ++iz)
          for (std::size_t ie = 0; ie < eps.size(); ++ie)
            res.cutoff_near[iz][ie] += o.cut[iz * eps.size() + ie];
        for (int i = 0; i < 5; ++i) jet[i] += o.jet[i];
      }
      if (!rows.empty()) {
        double polar = 0.0, tensor = 0.0;
        for (std::size_t i = 0; i < outs.size(); ++i) {
          polar += outs[i].band_measure;
          tensor += rows[i].chi_measure;
          for (std::size_t j = 0; j < res.far.size(); ++j) res.far[j] += rows[i].far[j];
        }
        // another part of the shape inside r < d2 that the rays never reach
        res.band_check = std::abs(polar - tensor) / polar;
        if (res.band_check > 1e-3) throw NearRadiusTooLarge{};
      }
      const int order = geo.dim() == 1 ? 4 : 5;
      TaylorJet tj(std::vector<double>(jet.begin(), jet.begin() + order),
                   geo.dim() == 1 ? Parity::even : Parity::odd);
      if (req.profile) res.profile = PsiProfile(tj, grid, prof, d);
      return res;
    } catch (const NearRadiusTooLarge&) {
      if (!automatic || attempt >= 6)
        throw Error(ErrorKind::QuadratureNotConverged,
                    "distance is not monotone along rays within the near radius " +
                        std::to_string(d));
      d *= 0.75;
    }
  }
}

PsiProfile point_profile(const PairGeometry& g, double u, double v, PairWeight weight, double d,
                         const RegularizeOptions& reg) {
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidParams, "near radius must be positive");
  RayFan f = g.fan_at(u, v);
  f.weight = 1.0;
  PairPassRequest req;
  req.weight = weight;
  req.profile = true;
  req.reg = reg;
  const RadialGrid grid = RadialGrid::make(d, reg);
  try {
    const FanOut o = process_fan(f, g.dim(), req, {}, d, 1.5 * d, grid);
    return PsiProfile(psi_derivative_jet(g.dim(), f.k1, f.k2, weight), grid, o.profile, d);
  } catch (const NearRadiusTooLarge&) {
    throw Error(ErrorKind::QuadratureNotConverged,
                "distance is not monotone along rays within radius " + std::to_string(d));
  }
}

double ray_ball_measure(const PairGeometry& g, double u, double v, double t, PairWeight weight) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParams, "radius must be nonnegative");
  const RayFan f = g.fan_at(u, v);
  const bool weighted = weight == PairWeight::normal_dot;
  auto value = [&](const RayPoint& q) {
    return q.jac * (weighted ? dot(f.normal, q.normal_raw) / norm(q.normal_raw) : 1.0);
  };
  // r(s) - t changes sign between samples; refine by bisection
  auto crossing = [&](std::size_t k, double a, double b) {
    double ga = sample(f, k, a).r - t;
    for (int it = 0; it < 80 && b - a > 1e-15 * b; ++it) {
      const double c = 0.5 * (a + b);
      const double gc = sample(f, k, c).r - t;
      if ((gc > 0.0) == (ga > 0.0)) {
        a = c;
        ga = gc;
      } else {
        b = c;
      }
    }
    return 0.5 * (a + b);
  };
  const int samples = 256;
  double total = 0.0;
  for (std::size_t k = 0; k < f.alpha_weights.size(); ++k) {
    const double send = f.s_end[k];
    const double h = send / samples;
    std::vector<double> breaks{0.0};
    bool inside = true;  // r(0) = 0 <= t
    double prev = 0.0;
    for (int i = 1; i <= samples; ++i) {
      const double s = h * i;
      const bool in = sample(f, k, s).r <= t;
      if (in != inside) {
        breaks.push_back(crossing(k, prev, s));
        inside = in;
      }
      prev = s;
    }
    breaks.push_back(send);
    // intervals [breaks[2j], breaks[2j + 1]] lie inside the ball
    for (std::size_t j = 0; j + 1 < breaks.size(); j += 2) {
      const double a = breaks[j], b = breaks[j + 1];
      const int panels = std::max(1, static_cast<int>(std::ceil(8.0 * (b - a) / send)));
      for (int p = 0; p < panels; ++p) {
        const Rule r = gauss_legendre(16, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels);
        for (std::size_t n = 0; n < r.size(); ++n)
          total += f.alpha_weights[k] * r.weights[n] * value(f.eval(r.nodes[n], k));
      }
    }
  }
  return total;
}

}  // namespace riesz
