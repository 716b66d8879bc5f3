#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace riesz {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const Rule& other);
};

// n-point Gauss-Legendre on [-1, 1]; tables are cached.
const Rule& gauss_legendre(int n);

// Gauss-Legendre mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre over consecutive breakpoints.
Rule composite_gauss(std::span<const double> breaks, int n);

// Panels [a, a*q], [a*q, a*q^2], ... refining geometrically toward a; last panel ends at b.
// Widths grow by `ratio` starting from `first`, capped at `cap`.
std::vector<double> graded_breaks(double a, double b, double first, double ratio, double cap);

// Breakpoints 0, tau, 2 tau, 4 tau, ..., d (the last gap may be shorter).
std::vector<double> dyadic_breaks(double tau, double d);

// n-point periodic trapezoid on [0, period).
Rule periodic_trapezoid(int n, double period);

// Tanh-sinh integral of f over [a, b] with endpoint singularities allowed.
// f receives (x, distance-to-nearest-endpoint with sign of the side) as boost does.
double tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 double tol = 1e-14, double* error = nullptr);

}  // namespace riesz
