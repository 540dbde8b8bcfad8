#include "dnls/functionals.hpp"

#include <cmath>
#include <string>

#include "dnls/errors.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

namespace {

double weight_factor(const Grid& g) {
  const double n = static_cast<double>(g.size());
  return g.box_length() / (n * n);
}

}  // namespace

double mass(const ComplexField& u) {
  const double n = l2_norm(u);
  return n * n;
}

EnergyParts energy_parts(const ComplexField& u, double lambda, double mu) {
  const ComplexField ux = derivative(u, 1);
  double kin = 0.0;
  double cub = 0.0;
  double sex = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double m = std::norm(u[j]);
    kin += std::norm(ux[j]);
    cub += m * std::imag(u[j] * std::conj(ux[j]));
    sex += m * m * m;
  }
  const double dx = u.grid().spacing();
  EnergyParts p;
  p.kinetic = kin * dx;
  p.cubic = 0.5 * (lambda + mu) * cub * dx;
  p.sextic = (lambda + mu) * mu / 6.0 * sex * dx;
  return p;
}

double energy(const ComplexField& u, double lambda, double mu) {
  return energy_parts(u, lambda, mu).total();
}

double momentum(const ComplexField& u, double mu) {
  const ComplexField ux = derivative(u, 1);
  double first = 0.0;
  double quartic = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    first += std::imag(u[j] * std::conj(ux[j]));
    const double m = std::norm(u[j]);
    quartic += m * m;
  }
  const double dx = u.grid().spacing();
  return 0.5 * first * dx + 0.25 * mu * quartic * dx;
}

ConservedTriple conserved_triple(const ComplexField& u, double lambda, double mu) {
  ConservedTriple c;
  c.mass = mass(u);
  c.energy = energy(u, lambda, mu);
  c.momentum = momentum(u, mu);
  c.lambda = lambda;
  c.mu = mu;
  c.momentum_is_conserved = lambda == 2.0 * mu;
  return c;
}

FrequencyEnvelope::FrequencyEnvelope(std::map<int, double> omega_by_exponent, double growth)
    : omega_(std::move(omega_by_exponent)), growth_(growth) {
  if (!(growth >= 1.0)) throw PreconditionError("envelope growth factor must be >= 1");
  if (omega_.empty()) throw PreconditionError("envelope needs at least one weight");
  int prev_key = 0;
  double prev = 0.0;
  bool first = true;
  for (const auto& [k, w] : omega_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw PreconditionError("envelope weight at N = 2^" + std::to_string(k) +
                              " must be positive and finite");
    }
    if (!first) {
      if (k != prev_key + 1) {
        throw PreconditionError("envelope exponents must be contiguous; gap after 2^" +
                                std::to_string(prev_key));
      }
      if (w < prev || w > growth * prev) {
        throw PreconditionError("envelope violates omega_N <= omega_2N <= growth * omega_N at N = 2^" +
                                std::to_string(prev_key));
      }
    }
    prev_key = k;
    prev = w;
    first = false;
  }
}

FrequencyEnvelope FrequencyEnvelope::flat() { return FrequencyEnvelope({{0, 1.0}}, 1.0); }

double FrequencyEnvelope::operator()(Dyadic n) const {
  if (n.exponent <= omega_.begin()->first) return omega_.begin()->second;
  if (n.exponent >= omega_.rbegin()->first) return omega_.rbegin()->second;
  return omega_.at(n.exponent);
}

double sobolev_norm(const ComplexField& u, double s, const std::optional<FrequencyEnvelope>& envelope,
                    NormMethod method) {
  if (u.side() != Side::physical) throw PreconditionError("sobolev_norm requires a physical field");
  const ComplexField hat = u.to_fourier();
  const auto xi = u.grid().wavenumbers();
  if (method == NormMethod::multiplier) {
    if (envelope) {
      throw PreconditionError("frequency envelopes require the lp_sum method");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) acc += std::pow(1.0 + xi[j] * xi[j], s) * std::norm(hat[j]);
    return std::sqrt(acc * weight_factor(u.grid()));
  }
  double acc = 0.0;
  for (Dyadic n : inhomogeneous_dyadic_range(u.grid())) {
    double block = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double phi = CutoffFamily::inhomogeneous(xi[j], n);
      if (phi != 0.0) block += phi * phi * std::norm(hat[j]);
    }
    const double w = envelope ? (*envelope)(n) : 1.0;
    acc += w * w * std::pow(n.value(), 2.0 * s) * block;
  }
  return std::sqrt(acc * weight_factor(u.grid()));
}

double zhidkov_norm(const ComplexField& f, double s) {
  return f.max_abs() + sobolev_norm(derivative(f, 1), s - 1.0);
}

double zhidkov_norm(const Background& bg, double t, const GridPtr& grid, double s) {
  const BackgroundSample smp = bg.sample(t, *grid);
  double sup = 0.0;
  for (const auto& v : smp.psi) sup = std::max(sup, std::abs(v));
  return sup + sobolev_norm(ComplexField(grid, smp.psi_x), s - 1.0);
}

double low_freq_weight(Dyadic n, double theta, double delta) {
  const double v = n.value();
  return std::max(std::pow(v, -1.0 + 2.0 * delta), std::pow(v, 2.0 * theta));
}

WeightedNorm weighted_low_freq_detail(const ComplexField& w, double theta, double delta) {
  if (w.side() != Side::physical) {
    throw PreconditionError("weighted_low_freq_norm requires a physical field");
  }
  const ComplexField hat = w.to_fourier();
  const auto xi = w.grid().wavenumbers();
  double acc = 0.0;
  for (Dyadic n : homogeneous_dyadic_range(w.grid())) {
    double block = 0.0;
    for (std::size_t j = 1; j < xi.size(); ++j) {
      const double phi = CutoffFamily::homogeneous(xi[j], n);
      if (phi != 0.0) block += phi * phi * std::norm(hat[j]);
    }
    acc += low_freq_weight(n, theta, delta) * block;
  }
  WeightedNorm out;
  out.norm = std::sqrt(acc * weight_factor(w.grid()));
  out.mean_mode = hat[0] / static_cast<double>(w.size());
  return out;
}

double weighted_low_freq_norm(const ComplexField& w, double theta, double delta) {
  return weighted_low_freq_detail(w, theta, delta).norm;
}

double box_embedding_constant(const Grid& grid, double s) {
  double acc = 0.0;
  for (double xi : grid.wavenumbers()) acc += std::pow(1.0 + xi * xi, -s);
  return std::sqrt(acc / grid.box_length());
}

}  // namespace dnls
