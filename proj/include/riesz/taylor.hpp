#pragma once

// Truncated Taylor arithmetic used to get exact derivatives of parameterizations
// (and of their Moebius images) from a single generic definition.

#include <array>
#include <cmath>

namespace riesz {

// Univariate, c[k] = f^(k)(t0) / k!.
template <int N>
struct Taylor1 {
  static constexpr int order = N;
  static constexpr int size = N + 1;
  std::array<double, N + 1> c{};

  Taylor1() = default;
  Taylor1(double v) { c[0] = v; }  // NOLINT: implicit constants are intended

  static Taylor1 variable(double t0) {
    Taylor1 r(t0);
    if constexpr (N >= 1) r.c[1] = 1.0;
    return r;
  }

  double value() const { return c[0]; }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  friend Taylor1 operator*(const Taylor1& a, const Taylor1& b) {
    Taylor1 r;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

// Bivariate in (u, v), order 1 or 2. Layout: 1, u, v, uu, uv, vv with the
// u^2 and v^2 slots holding f_uu/2 and f_vv/2.
template <int N>
struct Taylor2 {
  static_assert(N == 1 || N == 2);
  static constexpr int order = N;
  static constexpr int size = N == 1 ? 3 : 6;
  std::array<double, size> c{};

  Taylor2() = default;
  Taylor2(double v) { c[0] = v; }  // NOLINT

  static Taylor2 variable_u(double u0) {
    Taylor2 r(u0);
    r.c[1] = 1.0;
    return r;
  }
  static Taylor2 variable_v(double v0) {
    Taylor2 r(v0);
    r.c[2] = 1.0;
    return r;
  }

  double value() const { return c[0]; }
  double du() const { return c[1]; }
  double dv() const { return c[2]; }
  double duu() const { return 2.0 * c[3]; }
  double duv() const { return c[4]; }
  double dvv() const { return 2.0 * c[5]; }

  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    r.c[0] = a.c[0] * b.c[0];
    r.c[1] = a.c[0] * b.c[1] + a.c[1] * b.c[0];
    r.c[2] = a.c[0] * b.c[2] + a.c[2] * b.c[0];
    if constexpr (N == 2) {
      r.c[3] = a.c[0] * b.c[3] + a.c[3] * b.c[0] + a.c[1] * b.c[1];
      r.c[4] = a.c[0] * b.c[4] + a.c[4] * b.c[0] + a.c[1] * b.c[2] + a.c[2] * b.c[1];
      r.c[5] = a.c[0] * b.c[5] + a.c[5] * b.c[0] + a.c[2] * b.c[2];
    }
    return r;
  }
};

template <class T>
struct is_taylor : std::false_type {};
template <int N>
struct is_taylor<Taylor1<N>> : std::true_type {};
template <int N>
struct is_taylor<Taylor2<N>> : std::true_type {};

template <class T>
concept TaylorType = is_taylor<T>::value;

template <TaylorType T>
T operator+(T a, const T& b) {
  for (int i = 0; i < T::size; ++i) a.c[i] += b.c[i];
  return a;
}
template <TaylorType T>
T operator-(T a, const T& b) {
  for (int i = 0; i < T::size; ++i) a.c[i] -= b.c[i];
  return a;
}
template <TaylorType T>
T operator-(T a) {
  for (auto& x : a.c) x = -x;
  return a;
}
template <TaylorType T>
T operator+(T a, double b) {
  a.c[0] += b;
  return a;
}
template <TaylorType T>
T operator+(double b, T a) {
  a.c[0] += b;
  return a;
}
template <TaylorType T>
T operator-(T a, double b) {
  a.c[0] -= b;
  return a;
}
template <TaylorType T>
T operator-(double b, const T& a) {
  return b + (-a);
}
template <TaylorType T>
T operator*(T a, double b) {
  for (auto& x : a.c) x *= b;
  return a;
}
template <TaylorType T>
T operator*(double b, T a) {
  for (auto& x : a.c) x *= b;
  return a;
}
template <TaylorType T>
T operator/(T a, double b) {
  for (auto& x : a.c) x /= b;
  return a;
}
template <TaylorType T>
T& operator+=(T& a, const T& b) {
  return a = a + b;
}
template <TaylorType T>
T& operator-=(T& a, const T& b) {
  return a = a - b;
}
template <TaylorType T>
T& operator*=(T& a, const T& b) {
  return a = a * b;
}

// f(x) from the derivatives f(x0), f'(x0), ... up to T::order.
template <TaylorType T>
T compose(const T& x, const std::array<double, T::order + 1>& f) {
  T delta = x;
  delta.c[0] = 0.0;
  T result(f[0]);
  T power = delta;
  double fact = 1.0;
  for (int k = 1; k <= T::order; ++k) {
    fact *= k;
    result = result + power * (f[k] / fact);
    if (k < T::order) power = power * delta;
  }
  return result;
}

template <TaylorType T>
T sin(const T& x) {
  const double s = std::sin(x.c[0]), c = std::cos(x.c[0]);
  std::array<double, T::order + 1> f{};
  const double cyc[4] = {s, c, -s, -c};
  for (int k = 0; k <= T::order; ++k) f[k] = cyc[k % 4];
  return compose(x, f);
}
template <TaylorType T>
T cos(const T& x) {
  const double s = std::sin(x.c[0]), c = std::cos(x.c[0]);
  std::array<double, T::order + 1> f{};
  const double cyc[4] = {c, -s, -c, s};
  for (int k = 0; k <= T::order; ++k) f[k] = cyc[k % 4];
  return compose(x, f);
}
template <TaylorType T>
T exp(const T& x) {
  std::array<double, T::order + 1> f{};
  f.fill(std::exp(x.c[0]));
  return compose(x, f);
}
template <TaylorType T>
T log(const T& x) {
  const double a = x.c[0];
  std::array<double, T::order + 1> f{};
  f[0] = std::log(a);
  double d = 1.0 / a;
  for (int k = 1; k <= T::order; ++k) {
    f[k] = d;
    d *= -static_cast<double>(k) / a;
  }
  return compose(x, f);
}
// x^p for real p; requires x > 0 unless p is a nonnegative integer.
template <TaylorType T>
T pow(const T& x, double p) {
  const double a = x.c[0];
  std::array<double, T::order + 1> f{};
  double coef = 1.0;
  for (int k = 0; k <= T::order; ++k) {
    f[k] = coef * std::pow(a, p - k);
    coef *= (p - k);
  }
  return compose(x, f);
}
template <TaylorType T>
T sqrt(const T& x) {
  return pow(x, 0.5);
}
template <TaylorType T>
T inverse(const T& x) {
  return pow(x, -1.0);
}
template <TaylorType T>
T operator/(const T& a, const T& b) {
  return a * inverse(b);
}
template <TaylorType T>
T operator/(double a, const T& b) {
  return a * inverse(b);
}

inline double value_of(double x) { return x; }
template <TaylorType T>
double value_of(const T& x) {
  return x.c[0];
}

}  // namespace riesz
