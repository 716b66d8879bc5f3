#include "riesz/regularize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

TaylorJet::TaylorJet(std::vector<double> coeffs, Parity parity)
    : coeffs_(std::move(coeffs)), parity_(parity) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidParams, "jet needs at least one coefficient");
  for (int i = 0; i < order(); ++i)
    if (forbids(i)) coeffs_[i] = 0.0;
}

bool TaylorJet::forbids(int i) const {
  if (parity_ == Parity::even) return i % 2 == 1;
  if (parity_ == Parity::odd) return i % 2 == 0;
  return false;
}

int TaylorJet::next_free_order() const {
  int i = order();
  while (forbids(i)) ++i;
  return i;
}

double TaylorJet::eval(double t) const {
  double s = 0.0;
  for (int i = order() - 1; i >= 0; --i) s = s * t + coeffs_[i];
  return s;
}

TaylorJet TaylorJet::derivative() const {
  if (order() == 1) return TaylorJet({0.0}, Parity::none);
  std::vector<double> c(order() - 1);
  for (int i = 1; i < order(); ++i) c[i - 1] = i * coeffs_[i];
  Parity p = Parity::none;
  if (parity_ == Parity::even) p = Parity::odd;
  if (parity_ == Parity::odd) p = Parity::even;
  return TaylorJet(std::move(c), p);
}

TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = a[i] + b[i];
  return TaylorJet(std::move(c), a.parity() == b.parity() ? a.parity() : Parity::none);
}

TaylorJet operator*(double s, const TaylorJet& a) {
  std::vector<double> c = a.coeffs();
  for (double& x : c) x *= s;
  return TaylorJet(std::move(c), a.parity());
}

RadialGrid RadialGrid::make(double d, const RegularizeOptions& opts) {
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidParams, "smoothness radius must be positive");
  RadialGrid g;
  g.d = d;
  g.tau = std::ldexp(d, -opts.dyadic_levels);
  g.panel_order = opts.gauss_order;
  std::vector<double> br = dyadic_breaks(g.tau, d);
  br.erase(br.begin());  // start at tau; [0, tau] is handled by the small-t model
  Rule r = composite_gauss(br, opts.gauss_order);
  g.nodes = std::move(r.nodes);
  g.weights = std::move(r.weights);
  return g;
}

PsiProfile::PsiProfile(TaylorJet jet, RadialGrid grid, std::vector<double> values, double t_max,
                       Tail tail)
    : jet_(std::move(jet)),
      grid_(std::move(grid)),
      values_(std::move(values)),
      t_max_(t_max),
      tail_(std::move(tail)) {
  if (values_.size() != grid_.nodes.size())
    throw Error(ErrorKind::InvalidParams, "profile samples do not match the radial grid");
}

PsiProfile PsiProfile::sample(TaylorJet jet, double d, const std::function<double(double)>& phi,
                              double t_max, Tail tail, const RegularizeOptions& opts) {
  RadialGrid g = RadialGrid::make(d, opts);
  std::vector<double> v(g.nodes.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi(g.nodes[i]);
  return PsiProfile(std::move(jet), std::move(g), std::move(v), t_max, std::move(tail));
}

PsiProfile combine(double a, const PsiProfile& p, double b, const PsiProfile& q) {
  if (p.grid_.nodes != q.grid_.nodes)
    throw Error(ErrorKind::InvalidParams, "profiles live on different radial grids");
  std::vector<double> v(p.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * p.values_[i] + b * q.values_[i];
  PsiProfile::Tail tail;
  if (p.tail_ || q.tail_) {
    tail = [a, b, pt = p.tail_, qt = q.tail_](cplx z) {
      cplx s = 0.0;
      if (pt) s += a * pt(z);
      if (qt) s += b * qt(z);
      return s;
    };
  }
  return PsiProfile(a * p.jet_ + b * q.jet_, p.grid_, std::move(v), std::max(p.t_max_, q.t_max_),
                    std::move(tail));
}

namespace {

bool has_log_term(cplx residue, cplx finite_part, double tol) {
  return std::abs(residue) > tol * std::max(1.0, std::abs(finite_part));
}

}  // namespace

RegularizedValue finite_part_jet(const TaylorJet& jet, double d, cplx z,
                                 const RegularizeOptions& opts) {
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidParams, "d must be positive");
  RegularizedValue r{z, 0.0, 0.0, false, {}};
  const double logd = std::log(d);
  for (int j = 0; j < jet.order(); ++j) {
    if (jet[j] == 0.0) continue;
    const cplx e = z + static_cast<double>(j + 1);
    if (std::abs(e) < 1e-12) {
      r.finite_part += jet[j] * logd;
      r.residue = jet[j];
    } else {
      r.finite_part += jet[j] * std::exp(e * logd) / e;
    }
  }
  r.has_log = has_log_term(r.residue, r.finite_part, opts.residue_tol);
  return r;
}

RegularizedValue finite_part_profile(const PsiProfile& profile, cplx z,
                                     const RegularizeOptions& opts) {
  const TaylorJet& jet = profile.jet();
  const int q = jet.next_free_order();
  if (!(z.real() + q > -1.0))
    throw Error(ErrorKind::InsufficientJetOrder,
                "jet of order " + std::to_string(jet.order()) + " cannot regularize Re z = " +
                    std::to_string(z.real()));
  const RadialGrid& g = profile.grid();
  const auto& v = profile.values();
  RegularizedValue r = finite_part_jet(jet, g.d, z, opts);

  cplx rem = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double t = g.nodes[i];
    rem += g.weights[i] * std::exp(z * std::log(t)) * (v[i] - jet.eval(t));
  }
  // [0, tau]: remainder modelled by a few leading powers fitted on the first panel.
  const int step = jet.parity() == Parity::none ? 1 : 2;
  const int m = std::min<int>(g.panel_order, static_cast<int>(g.nodes.size()));
  const int terms = std::min(opts.small_t_terms, m - 1);
  Eigen::MatrixXd B(m, terms);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double t = g.nodes[i], s = t / g.tau;
    for (int c = 0; c < terms; ++c) B(i, c) = std::pow(s, q + c * step);
    y(i) = (v[i] - jet.eval(t)) / std::pow(g.tau, q);
  }
  const Eigen::VectorXd a = B.colPivHouseholderQr().solve(y);
  for (int c = 0; c < terms; ++c) {
    const int p = q + c * step;
    const cplx e = z + static_cast<double>(p + 1);
    rem += a(c) * std::pow(g.tau, q - p) * std::exp(e * std::log(g.tau)) / e;
  }
  r.finite_part += rem + profile.tail(z);
  r.has_log = has_log_term(r.residue, r.finite_part, opts.residue_tol);
  return r;
}

std::vector<double> eps_schedule(double eps0, double ratio, int count) {
  std::vector<double> e(count);
  for (int i = 0; i < count; ++i) e[i] = eps0 * std::pow(ratio, i);
  return e;
}

cplx LaurentSeries::coefficient(int j) const {
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] == j) return coeffs[i];
  return 0.0;
}

LaurentSeries laurent_fit(std::span<const CutoffSample> samples, cplx z, int k_max,
                          const LaurentFitOptions& opts) {
  LaurentSeries out;
  out.z = z;
  int log_order = 0;
  for (int j = opts.first_order; j <= k_max; j += opts.stride) {
    if (std::abs(z + static_cast<double>(j)) < 1e-12) {
      out.has_log = true;
      log_order = j;
    } else {
      out.orders.push_back(j);
    }
  }
  const int cols = static_cast<int>(out.orders.size()) + 1 + (out.has_log ? 1 : 0);
  const int rows = static_cast<int>(samples.size());
  if (rows < cols + 2)
    throw Error(ErrorKind::InvalidParams, "laurent_fit needs at least " +
                                              std::to_string(cols + 2) + " samples");
  (void)log_order;

  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd y(rows);
  for (int i = 0; i < rows; ++i) {
    const double eps = samples[i].eps, le = std::log(eps);
    int c = 0;
    for (int j : out.orders) A(i, c++) = std::exp((z + static_cast<double>(j)) * le);
    if (out.has_log) A(i, c++) = le;
    A(i, c++) = 1.0;
    y(i) = samples[i].value;
    if (opts.row_scaling) {
      const double s = std::max(A.row(i).cwiseAbs().maxCoeff(), std::abs(y(i)));
      if (s > 0.0) {
        A.row(i) /= s;
        y(i) /= s;
      }
    }
  }
  Eigen::VectorXd colscale(cols);
  for (int c = 0; c < cols; ++c) {
    colscale(c) = A.col(c).norm();
    if (colscale(c) == 0.0) colscale(c) = 1.0;
    A.col(c) /= colscale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  out.diagnostics.condition_number = cond;
  if (cond > opts.max_condition)
    throw Error(ErrorKind::IllConditionedFit,
                "condition number " + std::to_string(cond) + "; widen the eps range");
  Eigen::VectorXcd x = svd.solve(y);
  out.diagnostics.residual_norm = (A * x - y).norm();
  x = x.cwiseQuotient(colscale.cast<cplx>());

  int c = 0;
  for (std::size_t i = 0; i < out.orders.size(); ++i) out.coeffs.push_back(x(c++));
  if (out.has_log) out.log_coeff = x(c++);
  out.constant = x(c++);
  return out;
}

namespace {

// Richardson in h^2 through the given samples (Neville at h = 0).
cplx extrapolate_h2(const std::vector<double>& h, std::vector<cplx> v) {
  const std::size_t n = h.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      const double a = h[i - level] * h[i - level], b = h[i] * h[i];
      v[i] = (a * v[i] - b * v[i - 1]) / (a - b);
      if (i == level) break;
    }
  return v[n - 1];
}

}  // namespace

cplx pole_removed_value(const std::function<cplx(cplx)>& continuation, int k, cplx residue,
                        const PoleRemovalOptions& opts) {
  const auto& h = opts.steps;
  if (h.size() < 2) throw Error(ErrorKind::InvalidParams, "need at least two steps");
  std::vector<cplx> even, odd;
  const double zk = -static_cast<double>(k);
  for (double s : h) {
    const cplx fp = continuation(zk + s), fm = continuation(zk - s);
    even.push_back(0.5 * (fp + fm));
    odd.push_back(0.5 * s * (fp - fm));
  }
  const cplx value = extrapolate_h2(h, even);
  const cplx res = extrapolate_h2(h, odd);
  std::vector<double> h2(h.begin(), h.end() - 1);
  const cplx coarse = extrapolate_h2(h2, std::vector<cplx>(even.begin(), even.end() - 1));

  const double scale = std::max({1.0, std::abs(value), std::abs(residue)});
  if (std::abs(res - residue) > opts.residue_tol * scale)
    throw Error(ErrorKind::NonSimplePole, "estimated residue differs from the supplied one");
  if (std::abs(value - coarse) > opts.convergence_tol * scale)
    throw Error(ErrorKind::NonSimplePole, "Richardson extrapolation does not settle");
  return value;
}

}  // namespace riesz
