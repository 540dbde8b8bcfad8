#pragma once

#include <vector>

#include "dnls/field.hpp"

namespace dnls {

/// Smooth cutoff chi and the Littlewood-Paley symbols built from it.
///
/// chi = 1 on [-1, 1], chi = 0 outside (-2, 2), and on 1 < |xi| < 2 it is the
/// C-infinity transition g(2-|xi|) / (g(2-|xi|) + g(|xi|-1)) with
/// g(t) = exp(-1/t) for t > 0. phi(xi) = chi(xi) - chi(2 xi) and
/// phi_N(xi) = phi(xi / N). Stateless; safe to share.
class CutoffFamily {
 public:
  static double chi(double xi);
  static double phi(double xi);
  /// phi(xi / N) for any dyadic N (homogeneous block symbol).
  static double homogeneous(double xi, Dyadic n);
  /// chi(xi) for N = 1, phi(xi / N) for N >= 2.
  static double inhomogeneous(double xi, Dyadic n);
  /// sum_{K <= N} of inhomogeneous blocks = chi(xi / N).
  static double inhomogeneous_up_to(double xi, Dyadic n);
};

enum class LpKind { inhomogeneous, homogeneous };

/// Dyadic N = 1, 2, ..., up to the last block that can touch |xi| <= xi_max.
std::vector<Dyadic> inhomogeneous_dyadic_range(const Grid& grid);
/// Homogeneous N from just below xi_min / 2 up to 2 xi_max; blocks outside
/// this range are identically zero on the grid.
std::vector<Dyadic> homogeneous_dyadic_range(const Grid& grid);

/// Applies symbol(xi, j) to the FFT coefficients of a physical-side field and
/// returns the physical-side result.
template <class Symbol>
ComplexField apply_symbol(const ComplexField& f, Symbol&& symbol) {
  ComplexField hat = f.to_fourier();
  const auto xi = f.grid().wavenumbers();
  auto v = hat.values();
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= symbol(xi[j], j);
  return hat.to_physical();
}

/// Spectral derivative (i xi)^order. The Nyquist mode is zeroed for odd orders.
ComplexField derivative(const ComplexField& f, int order);

/// J^s = (1 + xi^2)^{s/2}.
ComplexField bessel_multiplier(const ComplexField& f, double s);

ComplexField lp_project(const ComplexField& f, Dyadic n, LpKind kind);

/// Multiplier 1/(i xi) off the zero mode; zero mode and Nyquist set to zero.
ComplexField anti_derivative(const ComplexField& f);

/// 2/3 rule: zeroes every mode with |xi| > (2/3) xi_max. Returns the same side
/// it was given.
ComplexField dealias(const ComplexField& f);

/// Rectangle-rule L2 norm, dx * sum |f_j|^2, square-rooted.
double l2_norm(const ComplexField& f);
/// Same norm evaluated from the FFT coefficients (L / n^2) * sum |f_hat|^2.
double fourier_l2_norm(const ComplexField& f_hat);
/// Rectangle-rule integral of a physical-side field.
cplx integrate(const ComplexField& f);
cplx mean_value(const ComplexField& f);

}  // namespace dnls
