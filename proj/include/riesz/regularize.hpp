#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "riesz/special.hpp"

namespace riesz {

enum class Parity { even, odd, none };

// coeffs[i] = phi^(i)(0) / i!. Coefficients forbidden by the parity are zeroed.
class TaylorJet {
 public:
  TaylorJet() = default;
  explicit TaylorJet(std::vector<double> coeffs, Parity parity = Parity::none);

  int order() const { return static_cast<int>(coeffs_.size()); }
  Parity parity() const { return parity_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double operator[](int i) const { return i >= 0 && i < order() ? coeffs_[i] : 0.0; }

  bool forbids(int i) const;
  // Smallest index >= order() whose coefficient is not forced to vanish.
  int next_free_order() const;

  double eval(double t) const;
  TaylorJet derivative() const;

  friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b);
  friend TaylorJet operator*(double s, const TaylorJet& a);

 private:
  std::vector<double> coeffs_;
  Parity parity_ = Parity::none;
};

struct FitDiagnostics {
  double condition_number = 0.0;
  double residual_norm = 0.0;
};

struct RegularizedValue {
  cplx z;
  cplx finite_part;
  cplx residue;
  bool has_log = false;
  FitDiagnostics diagnostics;
};

struct RegularizeOptions {
  double residue_tol = 1e-7;  // relative to max(1, |finite part|)
  int gauss_order = 12;
  int dyadic_levels = 6;  // remainder is integrated by quadrature on [d 2^-levels, d]
  int small_t_terms = 3;  // powers fitted to the remainder below d 2^-levels
};

// Quadrature nodes on [tau, d] at which profile samples are stored.
struct RadialGrid {
  double d = 0.0;
  double tau = 0.0;
  int panel_order = 0;
  std::vector<double> nodes, weights;

  static RadialGrid make(double d, const RegularizeOptions& opts = {});
};

// A radial function phi on (0, infinity): Taylor jet at 0, samples on the
// radial grid of [0, d], and a caller-supplied convergent remainder
// tail(z) = integral over (0, infinity) of t^z (phi - phi restricted to [0, d]).
class PsiProfile {
 public:
  using Tail = std::function<cplx(cplx)>;

  PsiProfile() = default;
  PsiProfile(TaylorJet jet, RadialGrid grid, std::vector<double> values, double t_max,
             Tail tail = {});

  static PsiProfile sample(TaylorJet jet, double d, const std::function<double(double)>& phi,
                           double t_max, Tail tail = {}, const RegularizeOptions& opts = {});

  double d() const { return grid_.d; }
  double t_max() const { return t_max_; }
  const TaylorJet& jet() const { return jet_; }
  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  cplx tail(cplx z) const { return tail_ ? tail_(z) : cplx(0.0); }

  // Pointwise combination; both profiles must share the grid.
  friend PsiProfile combine(double a, const PsiProfile& p, double b, const PsiProfile& q);

 private:
  TaylorJet jet_;
  RadialGrid grid_;
  std::vector<double> values_;
  double t_max_ = 0.0;
  Tail tail_;
};

RegularizedValue finite_part_jet(const TaylorJet& jet, double d, cplx z,
                                 const RegularizeOptions& opts = {});

RegularizedValue finite_part_profile(const PsiProfile& profile, cplx z,
                                     const RegularizeOptions& opts = {});

struct CutoffSample {
  double eps;
  cplx value;
};

struct LaurentFitOptions {
  int first_order = 1;  // basis exponents z + j for j = first_order, first_order + stride, ...
  int stride = 1;
  double max_condition = 1e13;
  bool row_scaling = true;
};

struct LaurentSeries {
  cplx z;
  std::vector<int> orders;
  std::vector<cplx> coeffs;  // coefficient of eps^{z + orders[i]}
  cplx log_coeff = 0.0;      // b in b log(eps); equals minus the residue
  cplx constant = 0.0;       // numerical finite part
  bool has_log = false;
  FitDiagnostics diagnostics;

  cplx coefficient(int j) const;
};

// Geometric schedule eps_i = eps0 r^i.
std::vector<double> eps_schedule(double eps0, double ratio = 0.7071067811865476, int count = 12);

LaurentSeries laurent_fit(std::span<const CutoffSample> samples, cplx z, int k_max,
                          const LaurentFitOptions& opts = {});

struct PoleRemovalOptions {
  std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};
  double residue_tol = 1e-6;
  double convergence_tol = 1e-6;
};

// lim_{z -> -k} (F(z) - residue/(z + k)) from symmetric evaluations and Richardson in h^2.
cplx pole_removed_value(const std::function<cplx(cplx)>& continuation, int k, cplx residue,
                        const PoleRemovalOptions& opts = {});

}  // namespace riesz
