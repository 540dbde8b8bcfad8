#include "dnls/spectral.hpp"

#include <cmath>

#include "dnls/errors.hpp"

namespace dnls {

namespace {

double transition_g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

void require_physical(const ComplexField& f, const char* op) {
  if (f.side() != Side::physical) {
    throw PreconditionError(std::string(op) + " requires a physical-side field");
  }
}

}  // namespace

double CutoffFamily::chi(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = transition_g(2.0 - a);
  const double down = transition_g(a - 1.0);
  return up / (up + down);
}

double CutoffFamily::phi(double xi) { return chi(xi) - chi(2.0 * xi); }

double CutoffFamily::homogeneous(double xi, Dyadic n) { return phi(std::ldexp(xi, -n.exponent)); }

double CutoffFamily::inhomogeneous(double xi, Dyadic n) {
  if (n.exponent < 0) throw PreconditionError("inhomogeneous blocks require N >= 1");
  return n.exponent == 0 ? chi(xi) : homogeneous(xi, n);
}

double CutoffFamily::inhomogeneous_up_to(double xi, Dyadic n) {
  return chi(std::ldexp(xi, -n.exponent));
}

std::vector<Dyadic> inhomogeneous_dyadic_range(const Grid& grid) {
  const int top = static_cast<int>(std::floor(std::log2(2.0 * grid.xi_max())));
  std::vector<Dyadic> out;
  for (int k = 0; k <= std::max(top, 0); ++k) out.push_back(Dyadic{k});
  return out;
}

std::vector<Dyadic> homogeneous_dyadic_range(const Grid& grid) {
  const int bottom = static_cast<int>(std::floor(std::log2(0.5 * grid.xi_min())));
  const int top = static_cast<int>(std::floor(std::log2(2.0 * grid.xi_max())));
  std::vector<Dyadic> out;
  for (int k = bottom; k <= top; ++k) out.push_back(Dyadic{k});
  return out;
}

ComplexField derivative(const ComplexField& f, int order) {
  require_physical(f, "derivative");
  if (order < 0) throw PreconditionError("derivative order must be nonnegative");
  if (order == 0) return f;
  const std::size_t nyq = f.grid().nyquist_index();
  const bool odd = (order % 2) == 1;
  return apply_symbol(f, [&](double xi, std::size_t j) -> cplx {
    if (odd && j == nyq) return 0.0;
    cplx m = 1.0;
    for (int k = 0; k < order; ++k) m *= cplx(0.0, xi);
    return m;
  });
}

ComplexField bessel_multiplier(const ComplexField& f, double s) {
  require_physical(f, "bessel_multiplier");
  if (s == 0.0) return f;
  return apply_symbol(f, [&](double xi, std::size_t) -> cplx {
    return std::pow(1.0 + xi * xi, 0.5 * s);
  });
}

ComplexField lp_project(const ComplexField& f, Dyadic n, LpKind kind) {
  require_physical(f, "lp_project");
  if (kind == LpKind::inhomogeneous) {
    if (n.exponent < 0) throw PreconditionError("inhomogeneous lp_project requires N >= 1");
    return apply_symbol(f, [&](double xi, std::size_t) -> cplx {
      return CutoffFamily::inhomogeneous(xi, n);
    });
  }
  return apply_symbol(f, [&](double xi, std::size_t) -> cplx {
    return CutoffFamily::homogeneous(xi, n);
  });
}

ComplexField anti_derivative(const ComplexField& f) {
  require_physical(f, "anti_derivative");
  const std::size_t nyq = f.grid().nyquist_index();
  return apply_symbol(f, [&](double xi, std::size_t j) -> cplx {
    if (j == 0 || j == nyq) return 0.0;
    return cplx(0.0, -1.0 / xi);
  });
}

ComplexField dealias(const ComplexField& f) {
  const double cut = (2.0 / 3.0) * f.grid().xi_max();
  ComplexField hat = f.to_fourier();
  const auto xi = f.grid().wavenumbers();
  auto v = hat.values();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::abs(xi[j]) > cut) v[j] = 0.0;
  }
  return f.side() == Side::fourier ? hat : hat.to_physical();
}

double l2_norm(const ComplexField& f) {
  require_physical(f, "l2_norm");
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.grid().spacing());
}

double fourier_l2_norm(const ComplexField& f_hat) {
  if (f_hat.side() != Side::fourier) {
    throw PreconditionError("fourier_l2_norm requires a Fourier-side field");
  }
  double acc = 0.0;
  for (const auto& v : f_hat.values()) acc += std::norm(v);
  const double n = static_cast<double>(f_hat.size());
  return std::sqrt(acc * f_hat.grid().box_length() / (n * n));
}

cplx integrate(const ComplexField& f) {
  require_physical(f, "integrate");
  cplx acc = 0.0;
  for (const auto& v : f.values()) acc += v;
  return acc * f.grid().spacing();
}

cplx mean_value(const ComplexField& f) {
  require_physical(f, "mean_value");
  return integrate(f) / f.grid().box_length();
}

}  // namespace dnls
