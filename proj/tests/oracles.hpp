#pragma once

// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

// Ridders' extrapolation of central differences (Numerical Recipes dfridr).
template <class F>
auto ridders_derivative(F&& f, double x, double h0, double* err_out = nullptr) {
  using T = decltype(f(x));
  constexpr int kTab = 12;
  constexpr double kCon = 1.4;
  constexpr double kCon2 = kCon * kCon;
  T a[kTab][kTab];
  double hh = h0;
  a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
  double err = 1e300;
  T ans = a[0][0];
  for (int i = 1; i < kTab; ++i) {
    hh /= kCon;
    a[0][i] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double errt =
          std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        ans = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (err_out) *err_out = err;
  return ans;
}

// Composite Gauss-Legendre, 5 nodes per panel.
inline double composite_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                       int panels) {
  static const std::array<double, 5> x = {0.0, 0.5384693101056831, 0.9061798459386640,
                                          -0.5384693101056831, -0.9061798459386640};
  static const std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                          0.2369268850561891, 0.4786286704993665,
                                          0.2369268850561891};
  const double step = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * step;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(mid + 0.5 * step * x[i]);
    acc += 0.5 * step * s;
  }
  return acc;
}

// Direct dark-soliton formulas with cosh/sinh, phase set aside.
struct SolitonDirect {
  double A;
  double a() const { return A * A; }
  double h(double z) const { return 2.0 / (std::numbers::sqrt2 * std::cosh(a() * z) + 1.0); }
  double theta_integrand(double y) const {
    const double hv = h(y);
    return a() / 4.0 * (3.0 * hv * hv - 2.0 * hv) / (1.0 - hv);
  }
  double theta(double x) const {
    return composite_gauss_legendre([this](double y) { return theta_integrand(y); }, 0.0, x, 10000);
  }
};

}  // namespace oracle
