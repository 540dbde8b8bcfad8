#include "dnls/wellposedness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnls/errors.hpp"
#include "dnls/functionals.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

double resonance_omega3(double xi1, double xi2, double xi3) {
  const double s = xi1 + xi2 + xi3;
  return s * s - xi1 * xi1 + xi2 * xi2 - xi3 * xi3;
}

double resonance_omega3_factored(double xi1, double xi2, double xi3) {
  return 2.0 * (xi1 + xi2) * (xi2 + xi3);
}

double resonance_omega4(double xi1, double xi2, double xi3, double xi4) {
  return xi1 * xi1 - xi2 * xi2 + xi3 * xi3 - xi4 * xi4;
}

double resonance_omega4_constrained(double xi1, double xi2, double xi3, double xi4) {
  const double scale = std::max({std::abs(xi1), std::abs(xi2), std::abs(xi3), std::abs(xi4), 1.0});
  if (std::abs(xi1 - xi2 + xi3 - xi4) > 1e-12 * scale) {
    throw PreconditionError("frequencies are off the surface xi1 - xi2 + xi3 - xi4 = 0");
  }
  return -2.0 * (xi1 - xi4) * (xi3 - xi4);
}

bool Comparability::similar_to(double a, double b) const {
  a = std::abs(a);
  b = std::abs(b);
  return std::max(a, b) <= similar * std::min(a, b);
}

bool Comparability::much_greater_than(double a, double b) const {
  return std::abs(a) >= much_greater * std::abs(b);
}

bool in_first_resonance_regime(double xi1, double xi2, double xi3, double xi4,
                               const Comparability& c) {
  if (!c.similar_to(xi1, xi2) || xi1 == 0.0) return false;
  const double a2 = std::abs(xi2), a3 = std::abs(xi3), a4 = std::abs(xi4);
  return (a2 >= a3 && c.much_greater_than(a3, a4) && a3 > 0.0) ||
         (a2 >= a4 && c.much_greater_than(a4, a3) && a4 > 0.0);
}

bool in_second_resonance_regime(double xi1, double xi2, double xi3, double xi4,
                                const Comparability& c) {
  if (!c.similar_to(xi1, xi3) || xi1 == 0.0) return false;
  const double a1 = std::abs(xi1), a2 = std::abs(xi2), a3 = std::abs(xi3), a4 = std::abs(xi4);
  return (a3 >= a2 && c.much_greater_than(a2, a4) && a2 > 0.0) ||
         (a3 >= a4 && c.much_greater_than(a4, a2) && a4 > 0.0) ||
         c.much_greater_than(a1, std::max(a2, a4));
}

ModifiedEnergyConfig with_default_coefficients(ModifiedEnergyConfig cfg, double lambda) {
  cfg.c1 = lambda;
  cfg.c2 = lambda;
  cfg.c3 = 2.0 * lambda;
  return cfg;
}

void validate_modified_energy_config(const ModifiedEnergyConfig& cfg, const Grid& grid) {
  std::vector<std::string> v;
  if (!(cfg.s > 0.75 && cfg.s < 1.0)) v.push_back("s must satisfy 3/4 < s < 1");
  if (!(cfg.theta > 0.25 && cfg.theta < cfg.s / 2.0 - 0.125)) {
    v.push_back("theta must satisfy 1/4 < theta < s/2 - 1/8");
  }
  if (!(cfg.delta > 0.0)) v.push_back("delta must be positive");
  const auto range = inhomogeneous_dyadic_range(grid);
  if (cfg.n0.exponent < 0 || cfg.n0.exponent > range.back().exponent) {
    v.push_back("N0 = 2^" + std::to_string(cfg.n0.exponent) + " lies outside the grid range [1, 2^" +
                std::to_string(range.back().exponent) + "]");
  }
  for (double c : {cfg.c1, cfg.c2, cfg.c3}) {
    if (!std::isfinite(c)) v.push_back("correction coefficients must be finite");
  }
  if (!(cfg.comparability.similar >= 1.0) || !(cfg.comparability.much_greater > 1.0)) {
    v.push_back("comparability factors must be >= 1 (similar) and > 1 (much greater)");
  }
  if (!v.empty()) throw ConfigError(std::move(v));
}

namespace {

// Fourier-side helpers on a fixed grid.
struct Spectra {
  GridPtr grid;
  std::span<const double> xi;
  std::size_t nyq;

  ComplexField physical(const ComplexField& hat, const std::function<cplx(double, std::size_t)>& sym) const {
    ComplexField h(grid, Side::fourier);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = sym(xi[j], j) * hat[j];
    return h.to_physical();
  }
};

cplx inverse_derivative_symbol(double xi, std::size_t j, std::size_t nyq) {
  if (j == 0 || j == nyq) return 0.0;
  return cplx(0.0, -1.0 / xi);
}

// Sum over dyadic M with 1/N1 <= M <= N1^{2/3} of phi(xi / M).
double m_band_symbol(double xi, int e1) {
  const int lo = -e1;
  const int hi = static_cast<int>(std::floor((2.0 / 3.0) * e1 + 1e-12));
  double acc = 0.0;
  for (int m = lo; m <= hi; ++m) acc += CutoffFamily::homogeneous(xi, Dyadic{m});
  return acc;
}

double block_energy(const ComplexField& w_hat, Dyadic n) {
  const auto xi = w_hat.grid().wavenumbers();
  double acc = 0.0;
  for (std::size_t j = 1; j < xi.size(); ++j) {
    const double p = CutoffFamily::homogeneous(xi[j], n);
    if (p != 0.0) acc += p * p * std::norm(w_hat[j]);
  }
  const double nn = static_cast<double>(w_hat.size());
  return acc * w_hat.grid().box_length() / (nn * nn);
}

double real_i_integral(const ComplexField& a, const ComplexField& b, const ComplexField& c) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j] * c[j];
  return std::real(cplx(0.0, 1.0) * acc * a.grid().spacing());
}

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!a.grid().same_layout(b.grid())) throw PreconditionError("fields live on different grids");
}

}  // namespace

EnergyBlocks modified_energy_blocks(const ComplexField& u1, const ComplexField& u2,
                                    const Background& bg, double t, Dyadic n,
                                    const ModifiedEnergyConfig& cfg) {
  require_same_grid(u1, u2);
  EnergyBlocks out;
  if (n.exponent <= cfg.n0.exponent) return out;

  const GridPtr grid = u1.grid_ptr();
  const Spectra sp{grid, grid->wavenumbers(), grid->nyquist_index()};
  const ComplexField w = u1 - u2;
  const ComplexField w_hat = w.to_fourier();
  const ComplexField wbar_hat = w.conj().to_fourier();
  const ComplexField u1_hat = u1.to_fourier();
  const ComplexField u2_hat = u2.to_fourier();
  const ComplexField u2bar_hat = u2.conj().to_fourier();
  const ComplexField rbar_hat = bg.decaying_remainder(t, grid).conj().to_fourier();

  const double ratio_gg = cfg.comparability.much_greater;
  const double ratio_sim = cfg.comparability.similar;
  const int top = inhomogeneous_dyadic_range(*grid).back().exponent;

  for (int e1 = std::max(0, n.exponent - 1); e1 <= std::min(top, n.exponent + 1); ++e1) {
    const Dyadic n1{e1};
    const ComplexField a = sp.physical(wbar_hat, [&](double xi, std::size_t j) {
      const double p = CutoffFamily::inhomogeneous(xi, n);
      return p * p * CutoffFamily::inhomogeneous(xi, n1) * inverse_derivative_symbol(xi, j, sp.nyq);
    });
    for (int e3 = 0; e3 <= top; ++e3) {
      const double v1 = n1.value(), v3 = Dyadic{e3}.value();
      if (std::max(v1, v3) > ratio_sim * std::min(v1, v3)) continue;
      // Largest dyadic K with min(N1, N3) >= ratio_gg * K.
      const double kmax = std::min(v1, v3) / ratio_gg;
      if (kmax < 1.0) continue;
      const Dyadic k{static_cast<int>(std::floor(std::log2(kmax) + 1e-12))};
      const Dyadic n3{e3};
      const ComplexField b = sp.physical(u2_hat, [&](double xi, std::size_t j) -> cplx {
        if (j == sp.nyq) return 0.0;
        return cplx(0.0, xi) * CutoffFamily::inhomogeneous(xi, n3);
      });
      auto low = [&](const ComplexField& hat) {
        return sp.physical(hat, [&](double xi, std::size_t) -> cplx {
          return CutoffFamily::inhomogeneous_up_to(xi, k);
        });
      };
      const ComplexField w_low = low(w_hat);
      auto corrector = [&](const ComplexField& f, const ComplexField& g) {
        return sp.physical(pointwise_product(f, g).to_fourier(), [&](double xi, std::size_t j) {
          return m_band_symbol(xi, e1) * inverse_derivative_symbol(xi, j, sp.nyq);
        });
      };
      const ComplexField c1 = corrector(low(wbar_hat), low(u1_hat));
      const ComplexField c2 = corrector(w_low, low(u2bar_hat));
      ComplexField c3 = corrector(w_low, low(rbar_hat));
      for (auto& v : c3.values()) v = std::real(v);
      out.e1 += real_i_integral(a, b, c1);
      out.e2 += real_i_integral(a, b, c2);
      out.e3 += real_i_integral(a, b, c3);
    }
  }
  return out;
}

double modified_energy_total(const ComplexField& u1, const ComplexField& u2, const Background& bg,
                             double t, const ModifiedEnergyConfig& cfg) {
  require_same_grid(u1, u2);
  const ComplexField w_hat = (u1 - u2).to_fourier();
  const bool corrected = cfg.c1 != 0.0 || cfg.c2 != 0.0 || cfg.c3 != 0.0;
  double total = 0.0;
  for (Dyadic n : homogeneous_dyadic_range(u1.grid())) {
    double e = block_energy(w_hat, n);
    if (corrected && n.exponent > cfg.n0.exponent) {
      const EnergyBlocks b = modified_energy_blocks(u1, u2, bg, t, n, cfg);
      e += cfg.c1 * b.e1 + cfg.c2 * b.e2 + cfg.c3 * b.e3;
    }
    total += low_freq_weight(n, cfg.theta, cfg.delta) * std::abs(e);
  }
  return total;
}

Dyadic proposition_n0(double k, double s, double theta) {
  const double gap = s - theta - 0.5;
  if (!(gap > 0.0)) throw PreconditionError("N0 formula needs s - theta - 1/2 > 0");
  if (!(k >= 0.0) || !std::isfinite(k)) throw PreconditionError("norm bound must be finite");
  const double raw = 8.0 * std::pow(k, 2.0 / gap);
  const int e = raw <= 2.0 ? 1 : static_cast<int>(std::ceil(std::log2(raw) - 1e-12));
  return Dyadic{std::max(e, 1)};
}

double sup_J_psi(const Background& bg, const GridPtr& grid, const std::vector<double>& times) {
  double out = 0.0;
  const std::size_t nyq = grid->nyquist_index();
  for (double t : times) {
    ComplexField j = bessel_multiplier(bg.decaying_remainder(t, grid), 1.0);
    j += bg.ramp(t, grid);
    j += apply_symbol(bg.ramp_x(t, grid), [&](double xi, std::size_t idx) -> cplx {
      if (idx == 0 || idx == nyq) return 0.0;
      return std::expm1(0.5 * std::log1p(xi * xi)) / cplx(0.0, xi);
    });
    out = std::max(out, j.max_abs());
  }
  return out;
}

double coercivity_margin(const ComplexField& u1, const ComplexField& u2, const Background& bg,
                         double t, const ModifiedEnergyConfig& cfg) {
  const double norm = weighted_low_freq_norm(u1 - u2, cfg.theta, cfg.delta);
  const double sq = norm * norm;
  if (sq == 0.0) return 0.0;
  return std::abs(modified_energy_total(u1, u2, bg, t, cfg) - sq) / sq;
}

DifferenceReport coercivity_check(const std::vector<FieldPair>& instances, const Background& bg,
                                  const ModifiedEnergyConfig& cfg) {
  if (instances.empty()) throw PreconditionError("coercivity_check needs at least one instance");
  validate_modified_energy_config(cfg, instances.front().first.grid());
  if (!(cfg.theta > 1.0 - cfg.s && cfg.theta < cfg.s - 0.5)) {
    throw ConfigError(std::string("coercivity requires 1 - s < theta < s - 1/2"));
  }
  DifferenceReport r;
  for (const auto& [u1, u2] : instances) {
    r.margins.push_back(coercivity_margin(u1, u2, bg, 0.0, cfg));
  }
  r.coercivity_margin = *std::max_element(r.margins.begin(), r.margins.end());
  r.pass = r.coercivity_margin <= 0.25;
  return r;
}

std::vector<FieldPair> random_admissible_pairs(const GridPtr& grid, double s, double h_s_norm,
                                               int count, CounterRng& rng) {
  std::vector<FieldPair> out;
  for (int k = 0; k < count; ++k) {
    const double cut = rng.uniform(0.25, 0.6) * grid->xi_max();
    ComplexField a = random_band_field(grid, rng, cut, rng.uniform(0.5, 1.5));
    ComplexField b = random_band_field(grid, rng, cut, rng.uniform(0.5, 1.5));
    a *= h_s_norm / sobolev_norm(a, s);
    b *= h_s_norm / sobolev_norm(b, s);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

double difference_norm(const ComplexField& w, const DifferenceNormSpec& spec) {
  switch (spec.kind) {
    case DifferenceNorm::h_s_minus_1: return sobolev_norm(w, spec.s - 1.0);
    case DifferenceNorm::h_s_minus_half: return sobolev_norm(w, spec.s - 0.5);
    case DifferenceNorm::theta_weighted: return weighted_low_freq_norm(w, spec.theta, spec.delta);
  }
  return 0.0;
}

DifferenceReport difference_experiment(const ComplexField& u01, const ComplexField& u02,
                                       const Background& bg, const SimConfig& cfg,
                                       const DifferenceNormSpec& norm) {
  require_same_grid(u01, u02);
  const ComplexField w0 = u01 - u02;
  if (std::abs(mean_value(w0)) > 1e-12 * std::max(1.0, w0.max_abs())) {
    throw PreconditionError("initial difference must be mean-free");
  }
  SimConfig run = cfg;
  if (run.amp_bound <= 0.0) {
    run.amp_bound = std::max(u01.max_abs(), u02.max_abs()) + bg.sup_abs();
  }
  const Trajectory t1 = evolve(u01, bg, run);
  const Trajectory t2 = evolve(u02, bg, run);
  DifferenceReport r;
  r.times = t1.times;
  for (std::size_t k = 0; k < t1.snapshots.size(); ++k) {
    r.diff_norm_series.push_back(difference_norm(t1.snapshots[k] - t2.snapshots[k], norm));
  }
  const double first = r.diff_norm_series.front();
  r.lipschitz_ratio = first > 0.0 ? r.diff_norm_series.back() / first : 0.0;
  r.pass = std::isfinite(r.lipschitz_ratio);
  return r;
}

double convergence_order(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2) throw PreconditionError("convergence_order needs at least 2 points");
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const auto [h, e] = errors[k];
    if (!(h > 0.0) || !(e > 0.0)) {
      throw PreconditionError("convergence_order needs positive step sizes and errors");
    }
    if (k > 0 && !(h < errors[k - 1].first)) {
      throw PreconditionError("convergence_order needs strictly decreasing step sizes");
    }
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(errors.size());
  for (const auto& [h, e] : errors) {
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dnls
