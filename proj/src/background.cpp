#include "dnls/background.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dnls/errors.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

namespace {

using std::numbers::sqrt2;

// Gauss-Legendre 8-point rule on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                            0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                              0.2223810344533744705443560, 0.1012285362903762591525314};

// A = 1 profile h1(u) and two derivatives, in terms of q = exp(-|u|) so that
// nothing overflows for large |u|.
struct ProfileH {
  double h, dh, d2h;
};

ProfileH scaled_h(double u) {
  const double q = std::exp(-std::abs(u));
  const double q2 = q * q;
  const double e = sqrt2 * (1.0 + q2) + 2.0 * q;
  const double sgn = u < 0.0 ? -1.0 : 1.0;
  ProfileH p{};
  p.h = 4.0 * q / e;
  p.dh = -4.0 * sqrt2 * sgn * q * (1.0 - q2) / (e * e);
  p.d2h = -4.0 * sqrt2 * q * (1.0 + q2) / (e * e) +
          16.0 * q * (1.0 - q2) * (1.0 - q2) / (e * e * e);
  return p;
}

// (1/4)(3h^2 - 2h)/(1 - h), the scaled phase integrand.
double scaled_phase_density(double u) {
  const double h = scaled_h(u).h;
  return 0.25 * (3.0 * h * h - 2.0 * h) / (1.0 - h);
}

double gauss_legendre_8(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    acc += kGlWeights[i] * (scaled_phase_density(mid - half * kGlNodes[i]) +
                            scaled_phase_density(mid + half * kGlNodes[i]));
  }
  return acc * half;
}

double adaptive_phase_integral(double lo, double hi, double abs_tol) {
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      scaled_phase_density, lo, hi, 15, 1e-13, &err);
  if (!(err <= abs_tol) || !std::isfinite(value)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "phase quadrature on [%g, %g] did not converge: error estimate %.3g > %.3g", lo,
                  hi, err, abs_tol);
    throw NumericalError(msg);
  }
  return value;
}

struct SolitonPoint {
  cplx psi, psi_z, psi_zz;
};

SolitonPoint soliton_point(double amplitude, const SolitonPhase& phase, double z) {
  const double a = amplitude * amplitude;
  const double u = a * z;
  const ProfileH p = scaled_h(u);
  const double h = p.h;
  const double dh = a * p.dh;
  const double d2h = a * a * p.d2h;
  const double one_minus_h = 1.0 - h;
  const double rho = std::sqrt(one_minus_h);
  const double drho = -dh / (2.0 * rho);
  const double d2rho = -d2h / (2.0 * rho) - dh * dh / (4.0 * rho * one_minus_h);
  const double theta = phase.scaled(u);
  const double dtheta = 0.25 * a * (3.0 * h * h - 2.0 * h) / one_minus_h;
  const double d2theta = 0.25 * a * dh * (-3.0 * h * h + 6.0 * h - 2.0) / (one_minus_h * one_minus_h);
  const cplx carrier = amplitude * std::polar(1.0, theta);
  const cplx i(0.0, 1.0);
  SolitonPoint out;
  out.psi = carrier * rho;
  out.psi_z = carrier * (drho + i * dtheta * rho);
  out.psi_zz = carrier * (d2rho + 2.0 * i * dtheta * drho + i * d2theta * rho - dtheta * dtheta * rho);
  return out;
}

double smooth_step(double s) { return 0.5 * (1.0 + std::tanh(s)); }
double smooth_step_dx(double s) {
  const double c = std::cosh(s);
  return 0.5 / (c * c);
}

double sobolev_multiplier_norm(const ComplexField& f, double s) {
  const ComplexField hat = f.to_fourier();
  const auto xi = f.grid().wavenumbers();
  double acc = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    acc += std::pow(1.0 + xi[j] * xi[j], s) * std::norm(hat[j]);
  }
  const double n = static_cast<double>(f.size());
  return std::sqrt(acc * f.grid().box_length() / (n * n));
}

}  // namespace

double soliton_h(double amplitude, double x) {
  return scaled_h(amplitude * amplitude * x).h;
}

double soliton_theta(double amplitude, double x) {
  if (!(amplitude > 0.0)) throw PreconditionError("soliton amplitude must be positive");
  const double u = amplitude * amplitude * x;
  // Beyond |u| = 60 the integrand is below 1e-25, far under the tolerance.
  const double upper = std::min(std::abs(u), 60.0);
  if (upper == 0.0) return 0.0;
  const double value = adaptive_phase_integral(0.0, upper, 1e-12);
  return u < 0.0 ? -value : value;
}

SolitonPhase::SolitonPhase() {
  const auto panels = static_cast<std::size_t>(kTableEnd / kPanel);
  cumulative_.assign(panels + 1, 0.0);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = static_cast<double>(k) * kPanel;
    cumulative_[k + 1] = cumulative_[k] + adaptive_phase_integral(lo, lo + kPanel, 1e-14);
  }
  limit_ = cumulative_.back();
}

double SolitonPhase::scaled(double u) const {
  const double v = std::abs(u);
  double value = limit_;
  if (v < kTableEnd) {
    const auto k = static_cast<std::size_t>(v / kPanel);
    const double lo = static_cast<double>(k) * kPanel;
    value = cumulative_[k] + (v > lo ? gauss_legendre_8(lo, v) : 0.0);
  }
  return u < 0.0 ? -value : value;
}

std::string to_string(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::constant: return "constant";
    case BackgroundKind::dark_soliton: return "dark_soliton";
    case BackgroundKind::custom: return "custom";
  }
  return "unknown";
}

BackgroundKind Background::kind() const noexcept {
  switch (profile_.index()) {
    case 0: return BackgroundKind::constant;
    case 1: return BackgroundKind::dark_soliton;
    default: return BackgroundKind::custom;
  }
}

cplx Background::constant_value() const {
  if (const auto* c = std::get_if<Constant>(&profile_)) return c->value;
  throw PreconditionError("background is not constant");
}

double Background::amplitude() const {
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) return d->amplitude;
  throw PreconditionError("background is not a dark soliton");
}

double Background::travelling_coordinate(double t, double x) const {
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return x + 2.0 * d->amplitude * d->amplitude * t;
  }
  return x;
}

const Background::Tabulated& Background::tabulated_on(const Grid& grid) const {
  const auto& tab = std::get<Tabulated>(profile_);
  if (!tab.grid->same_layout(grid)) {
    throw PreconditionError("tabulated background sampled on a different grid");
  }
  return tab;
}

namespace {
[[noreturn]] void no_pointwise() {
  throw PreconditionError("tabulated backgrounds have no pointwise evaluator; use sample()");
}
}  // namespace

cplx Background::psi(double t, double x) const {
  if (const auto* c = std::get_if<Constant>(&profile_)) return c->value;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return soliton_point(d->amplitude, *d->phase, travelling_coordinate(t, x)).psi;
  }
  no_pointwise();
}

cplx Background::psi_x(double t, double x) const {
  if (std::holds_alternative<Constant>(profile_)) return 0.0;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return soliton_point(d->amplitude, *d->phase, travelling_coordinate(t, x)).psi_z;
  }
  no_pointwise();
}

cplx Background::psi_xx(double t, double x) const {
  if (std::holds_alternative<Constant>(profile_)) return 0.0;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return soliton_point(d->amplitude, *d->phase, travelling_coordinate(t, x)).psi_zz;
  }
  no_pointwise();
}

cplx Background::psi_t(double t, double x) const {
  if (std::holds_alternative<Constant>(profile_)) return 0.0;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    const double a = d->amplitude * d->amplitude;
    return 2.0 * a * soliton_point(d->amplitude, *d->phase, travelling_coordinate(t, x)).psi_z;
  }
  no_pointwise();
}

BackgroundSample Background::sample(double t, const Grid& grid) const {
  const std::size_t n = grid.size();
  if (std::holds_alternative<Tabulated>(profile_)) return tabulated_on(grid).table;
  BackgroundSample s;
  s.psi.assign(n, 0.0);
  s.psi_x.assign(n, 0.0);
  s.psi_xx.assign(n, 0.0);
  s.psi_t.assign(n, 0.0);
  if (const auto* c = std::get_if<Constant>(&profile_)) {
    std::fill(s.psi.begin(), s.psi.end(), c->value);
    return s;
  }
  const auto& d = std::get<DarkSoliton>(profile_);
  const double speed = 2.0 * d.amplitude * d.amplitude;
  const auto x = grid.x();
  for (std::size_t j = 0; j < n; ++j) {
    const SolitonPoint p = soliton_point(d.amplitude, *d.phase, x[j] + speed * t);
    s.psi[j] = p.psi;
    s.psi_x[j] = p.psi_z;
    s.psi_xx[j] = p.psi_zz;
    s.psi_t[j] = speed * p.psi_z;
  }
  return s;
}

cplx Background::limit_left() const {
  if (const auto* c = std::get_if<Constant>(&profile_)) return c->value;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return d->amplitude * std::polar(1.0, -d->phase->scaled_limit());
  }
  return std::get<Tabulated>(profile_).table.psi.front();
}

cplx Background::limit_right() const {
  if (const auto* c = std::get_if<Constant>(&profile_)) return c->value;
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
    return d->amplitude * std::polar(1.0, d->phase->scaled_limit());
  }
  return std::get<Tabulated>(profile_).table.psi.back();
}

double Background::sup_abs() const {
  if (const auto* c = std::get_if<Constant>(&profile_)) return std::abs(c->value);
  if (const auto* d = std::get_if<DarkSoliton>(&profile_)) return d->amplitude;
  double m = 0.0;
  for (const auto& v : std::get<Tabulated>(profile_).table.psi) m = std::max(m, std::abs(v));
  return m;
}

ComplexField Background::ramp(double t, const GridPtr& grid) const {
  ComplexField out(grid);
  const cplx left = limit_left();
  const cplx right = limit_right();
  const auto x = grid->x();
  for (std::size_t j = 0; j < x.size(); ++j) {
    double s = 0.0;
    if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
      s = 0.5 * d->amplitude * d->amplitude * travelling_coordinate(t, x[j]);
    } else if (std::holds_alternative<Tabulated>(profile_)) {
      s = 32.0 * (x[j] - grid->center()) / grid->box_length();
    }
    out[j] = left + (right - left) * smooth_step(s);
  }
  return out;
}

ComplexField Background::ramp_x(double t, const GridPtr& grid) const {
  ComplexField out(grid);
  const cplx jump = limit_right() - limit_left();
  if (std::holds_alternative<Constant>(profile_)) return out;
  const auto x = grid->x();
  for (std::size_t j = 0; j < x.size(); ++j) {
    double s = 0.0;
    double ds = 0.0;
    if (const auto* d = std::get_if<DarkSoliton>(&profile_)) {
      ds = 0.5 * d->amplitude * d->amplitude;
      s = ds * travelling_coordinate(t, x[j]);
    } else {
      ds = 32.0 / grid->box_length();
      s = ds * (x[j] - grid->center());
    }
    out[j] = jump * ds * smooth_step_dx(s);
  }
  return out;
}

ComplexField Background::decaying_remainder(double t, const GridPtr& grid) const {
  const BackgroundSample s = sample(t, *grid);
  ComplexField out(grid, s.psi);
  out -= ramp(t, grid);
  return out;
}

Background make_constant_background(cplx c) { return Background(Background::Constant{c}); }

Background make_dark_soliton(double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw PreconditionError("dark soliton amplitude must be positive");
  }
  static const auto shared_phase = std::make_shared<const SolitonPhase>();
  return Background(Background::DarkSoliton{amplitude, shared_phase});
}

Background make_tabulated_background(GridPtr grid, BackgroundSample table) {
  const std::size_t n = grid->size();
  if (table.psi.size() != n || table.psi_x.size() != n || table.psi_xx.size() != n ||
      table.psi_t.size() != n) {
    throw PreconditionError("tabulated background tables must match the grid size");
  }
  return Background(Background::Tabulated{std::move(grid), std::move(table)});
}

ComplexField defect_from_sample(const BackgroundSample& s, const GridPtr& grid, double lambda,
                                double mu) {
  ComplexField out(grid);
  const cplx i(0.0, 1.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const cplx p = s.psi[j];
    const cplx px = s.psi_x[j];
    out[j] = i * s.psi_t[j] + s.psi_xx[j] - i * lambda * std::norm(p) * px -
             i * mu * p * p * std::conj(px);
  }
  return out;
}

ComplexField compute_defect_Psi(const Background& bg, double t, const GridPtr& grid,
                                double lambda, double mu) {
  return defect_from_sample(bg.sample(t, *grid), grid, lambda, mu);
}

HypothesisReport audit_hypotheses(const Background& bg, double s, double epsilon,
                                  const GridPtr& grid, const std::vector<double>& t_samples,
                                  double lambda, double mu, const HypothesisCaps& caps) {
  if (!(epsilon > 0.0)) throw PreconditionError("audit_hypotheses requires epsilon > 0");
  if (!(s >= 0.0)) throw PreconditionError("audit_hypotheses requires s >= 0");
  if (t_samples.empty()) throw PreconditionError("audit_hypotheses requires at least one time");

  HypothesisReport r;
  r.s = s;
  r.epsilon = epsilon;
  const double sigma = s + 1.0 + epsilon;
  const std::size_t nyq = grid->nyquist_index();
  const double dx = grid->spacing();
  const cplx i(0.0, 1.0);
  double edge = 0.0;

  for (double t : t_samples) {
    const BackgroundSample smp = bg.sample(t, *grid);
    const ComplexField remainder = bg.decaying_remainder(t, grid);
    const ComplexField ramp = bg.ramp(t, grid);
    const ComplexField ramp_x = bg.ramp_x(t, grid);

    ComplexField j_psi = bessel_multiplier(remainder, sigma);
    j_psi += ramp;
    j_psi += apply_symbol(ramp_x, [&](double xi, std::size_t j) -> cplx {
      if (j == 0 || j == nyq) return 0.0;
      return std::expm1(0.5 * sigma * std::log1p(xi * xi)) / cplx(0.0, xi);
    });
    r.sup_J_psi = std::max(r.sup_J_psi, j_psi.max_abs());

    double dt_max = 0.0;
    double l1 = 0.0;
    ComplexField schrod(grid);
    for (std::size_t j = 0; j < smp.psi.size(); ++j) {
      dt_max = std::max(dt_max, std::abs(smp.psi_t[j]));
      l1 += std::abs(smp.psi_x[j]);
      schrod[j] = i * smp.psi_t[j] + smp.psi_xx[j];
    }
    r.sup_dt_psi = std::max(r.sup_dt_psi, dt_max);
    r.dx_psi_L1 = std::max(r.dx_psi_L1, l1 * dx);
    r.schrod_defect_L2 = std::max(r.schrod_defect_L2, l2_norm(schrod));

    const ComplexField defect = defect_from_sample(smp, grid, lambda, mu);
    r.psi_defect_sobolev = std::max(r.psi_defect_sobolev, sobolev_multiplier_norm(defect, s + epsilon));

    const std::size_t last = smp.psi.size() - 1;
    edge = std::max({edge, std::abs(remainder[0]), std::abs(remainder[last]),
                     std::abs(smp.psi_x[0]), std::abs(smp.psi_x[last]), std::abs(defect[0]),
                     std::abs(defect[last])});
  }

  auto ok = [](double v, double cap) { return std::isfinite(v) && v >= 0.0 && v <= cap; };
  r.pass_J_psi = ok(r.sup_J_psi, caps.sup_J_psi);
  r.pass_dt_psi = ok(r.sup_dt_psi, caps.sup_dt_psi);
  r.pass_psi_defect = ok(r.psi_defect_sobolev, caps.psi_defect_sobolev);
  r.pass_dx_psi_L1 = ok(r.dx_psi_L1, caps.dx_psi_L1);
  r.pass_schrod_defect = ok(r.schrod_defect_L2, caps.schrod_defect_L2);
  r.edge_decay_ok = edge <= caps.edge_tolerance;
  if (!r.edge_decay_ok) {
    r.caveats.push_back("box truncation: decaying parts reach " + std::to_string(edge) +
                        " at the box edges; enlarge box_length");
  }
  r.caveats.push_back("sup over the real line estimated by grid maxima on the box and t_samples");
  return r;
}

std::vector<double> default_time_samples(double t_end, int count) {
  if (count < 1) throw PreconditionError("need at least one time sample");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(count == 1 ? 0.0 : t_end * static_cast<double>(k) / (count - 1));
  }
  return out;
}

}  // namespace dnls
