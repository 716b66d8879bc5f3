#include "riesz/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "riesz/errors.hpp"

namespace riesz {

void Rule::append(const Rule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

Rule compute_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule r = n == 1 ? Rule{{0.0}, {2.0}} : compute_gauss_legendre(n);
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

Rule gauss_legendre(int n, double a, double b) {
  const Rule& ref = gauss_legendre(n);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * ref.nodes[i];
    r.weights[i] = half * ref.weights[i];
  }
  return r;
}

Rule composite_gauss(std::span<const double> breaks, int n) {
  Rule r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) r.append(gauss_legendre(n, breaks[i], breaks[i + 1]));
  return r;
}

std::vector<double> graded_breaks(double a, double b, double first, double ratio, double cap) {
  std::vector<double> br{a};
  double w = first;
  while (br.back() + w < b - 0.25 * std::min(w, cap)) {
    br.push_back(br.back() + w);
    w = std::min(w * ratio, cap);
  }
  br.push_back(b);
  return br;
}

std::vector<double> dyadic_breaks(double tau, double d) {
  std::vector<double> br{0.0};
  double t = tau;
  while (t < d * (1.0 - 1e-12)) {
    br.push_back(t);
    t *= 2.0;
  }
  br.push_back(d);
  return br;
}

Rule periodic_trapezoid(int n, double period) {
  Rule r;
  r.nodes.resize(n);
  r.weights.assign(n, period / n);
  for (int i = 0; i < n; ++i) r.nodes[i] = period * i / n;
  return r;
}

double tanh_sinh(const std::function<double(double, double)>& f, double a, double b, double tol,
                 double* error) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double err = 0.0, l1 = 0.0;
  auto g = [&f](double x, double xc) { return f(x, xc); };
  const double value = integrator.integrate(g, a, b, tol, &err, &l1);
  if (error) *error = err;
  return value;
}

}  // namespace riesz
