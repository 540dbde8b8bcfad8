#include "dnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnls/spectral.hpp"

namespace dnls {

namespace {

const cplx kI(0.0, 1.0);

void require_physical(const ComplexField& f, const char* op) {
  if (f.side() != Side::physical) {
    throw PreconditionError(std::string(op) + " requires a physical-side field");
  }
}

// Physical u and u_x from Fourier coefficients.
void physical_and_derivative(const ComplexField& hat, ComplexField& u, ComplexField& ux) {
  const Grid& g = hat.grid();
  const auto xi = g.wavenumbers();
  const std::size_t nyq = g.nyquist_index();
  ComplexField dhat(hat.grid_ptr(), Side::fourier);
  for (std::size_t j = 0; j < hat.size(); ++j) {
    dhat[j] = j == nyq ? cplx(0.0) : kI * xi[j] * hat[j];
  }
  u = hat.to_physical();
  ux = dhat.to_physical();
}

void truncate_two_thirds(ComplexField& hat) {
  const double cut = (2.0 / 3.0) * hat.grid().xi_max();
  const auto xi = hat.grid().wavenumbers();
  for (std::size_t j = 0; j < hat.size(); ++j) {
    if (std::abs(xi[j]) > cut) hat[j] = 0.0;
  }
}

// Nonlinear right-hand side of the perturbation equation, Fourier side in and out.
class StageRhs {
 public:
  StageRhs(const GridPtr& grid, const Background& bg, double lambda, double mu, bool dealias)
      : grid_(grid), bg_(bg), lambda_(lambda), mu_(mu), dealias_(dealias),
        constant_(bg.kind() == BackgroundKind::constant),
        u_(grid), ux_(grid) {
    if (constant_) {
      const cplx c = bg.constant_value();
      const std::size_t n = grid->size();
      fixed_.psi.assign(n, c);
      fixed_.psi_x.assign(n, 0.0);
      fixed_.psi_xx.assign(n, 0.0);
      fixed_.psi_t.assign(n, 0.0);
    }
  }

  ComplexField operator()(const ComplexField& hat, double t) {
    physical_and_derivative(hat, u_, ux_);
    const BackgroundSample sampled = constant_ ? BackgroundSample{} : bg_.sample(t, *grid_);
    const BackgroundSample& s = constant_ ? fixed_ : sampled;
    ComplexField out(grid_);
    const bool has_defect = !constant_;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const cplx a = u_[j];
      const cplx ax = ux_[j];
      const cplx p = s.psi[j];
      const cplx px = s.psi_x[j];
      const double re = 2.0 * std::real(a * std::conj(p));
      const double aa = std::norm(a);
      const cplx lam = aa * (ax + px) + re * (ax + px) + std::norm(p) * ax;
      const cplx mu = a * a * std::conj(ax + px) + 2.0 * a * p * std::conj(ax + px) +
                      p * p * std::conj(ax);
      out[j] = lambda_ * lam + mu_ * mu;
      if (has_defect) {
        const cplx defect = kI * s.psi_t[j] + s.psi_xx[j] - kI * lambda_ * std::norm(p) * px -
                            kI * mu_ * p * p * std::conj(px);
        out[j] += kI * defect;
      }
    }
    ComplexField out_hat = out.to_fourier();
    if (dealias_) truncate_two_thirds(out_hat);
    return out_hat;
  }

 private:
  GridPtr grid_;
  const Background& bg_;
  double lambda_, mu_;
  bool dealias_;
  bool constant_;
  BackgroundSample fixed_;
  ComplexField u_, ux_;
};

// out = e .* a (+ scale * b)
ComplexField propagate(const std::vector<cplx>& e, const ComplexField& a) {
  ComplexField out = a;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= e[j];
  return out;
}

void axpy(ComplexField& y, double h, const ComplexField& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += h * x[j];
}

std::vector<cplx> linear_factor(const Grid& g, double tau) {
  const auto xi = g.wavenumbers();
  std::vector<cplx> e(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) e[j] = std::polar(1.0, -xi[j] * xi[j] * tau);
  return e;
}

ComplexField if_rk4_hat(const ComplexField& hat, double t, double h, StageRhs& rhs,
                        const std::vector<cplx>& e_half, const std::vector<cplx>& e_full) {
  const ComplexField k1 = rhs(hat, t);
  ComplexField y = hat;
  axpy(y, 0.5 * h, k1);
  const ComplexField k2 = rhs(propagate(e_half, y), t + 0.5 * h);
  ComplexField y3 = propagate(e_half, hat);
  axpy(y3, 0.5 * h, k2);
  const ComplexField k3 = rhs(y3, t + 0.5 * h);
  ComplexField y4 = propagate(e_full, hat);
  axpy(y4, h, propagate(e_half, k3));
  const ComplexField k4 = rhs(y4, t + h);

  ComplexField out = propagate(e_full, hat);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += h / 6.0 * (e_full[j] * k1[j] + 2.0 * e_half[j] * (k2[j] + k3[j]) + k4[j]);
  }
  return out;
}

double resolve_amp_bound(const SimConfig& cfg, const ComplexField& u0, const Background& bg) {
  return cfg.amp_bound > 0.0 ? cfg.amp_bound : u0.max_abs() + bg.sup_abs();
}

}  // namespace

BlowUpError::BlowUpError(double t, NormRecord last, std::shared_ptr<const Trajectory> partial)
    : NumericalError("blow-up: non-finite values at t = " + std::to_string(t) +
                     " (last finite L2 = " + std::to_string(last.l2) +
                     ", sup = " + std::to_string(last.sup) + ")"),
      t_(t), last_(last), partial_(std::move(partial)) {}

double cfl_dt_limit(const SimConfig& cfg, const Grid& grid, double amp_bound) {
  const double c = std::max(std::abs(cfg.lambda), std::abs(cfg.mu));
  return cfg.cfl_safety / (c * amp_bound * amp_bound * grid.xi_max() + 1.0);
}

StepPlan plan_steps(const SimConfig& cfg) {
  StepPlan p;
  p.steps = std::max<long long>(1, std::llround(cfg.t_end / cfg.dt));
  p.dt = cfg.t_end / static_cast<double>(p.steps);
  return p;
}

void validate_sim_config(const SimConfig& cfg, const Grid& grid, double amp_bound) {
  std::vector<std::string> v;
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) v.push_back("dt must be positive");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) v.push_back("t_end must be positive");
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) v.push_back("cfl_safety must be in (0, 1]");
  if (cfg.record_every < 1) v.push_back("record_every must be a positive integer");
  if (!std::isfinite(cfg.lambda) || !std::isfinite(cfg.mu)) v.push_back("lambda and mu must be finite");
  if (v.empty()) {
    const double dt = plan_steps(cfg).dt;
    const double limit = cfl_dt_limit(cfg, grid, amp_bound);
    if (dt > limit) {
      v.push_back("dt = " + std::to_string(dt) + " exceeds the CFL limit " + std::to_string(limit) +
                  " for amp_bound = " + std::to_string(amp_bound));
    }
  }
  if (!v.empty()) throw ConfigError(std::move(v));
}

NormRecord norm_record(const ComplexField& u) {
  NormRecord r;
  r.l2 = l2_norm(u);
  r.h1 = sobolev_norm(u, 1.0);
  r.sup = u.max_abs();
  return r;
}

ComplexField rhs_full(const ComplexField& v, double lambda, double mu, bool dealias) {
  require_physical(v, "rhs_full");
  const ComplexField hat = v.to_fourier();
  ComplexField u(v.grid_ptr()), ux(v.grid_ptr());
  physical_and_derivative(hat, u, ux);
  ComplexField nl(v.grid_ptr());
  for (std::size_t j = 0; j < nl.size(); ++j) {
    nl[j] = lambda * std::norm(v[j]) * ux[j] + mu * v[j] * v[j] * std::conj(ux[j]);
  }
  ComplexField nl_hat = nl.to_fourier();
  if (dealias) truncate_two_thirds(nl_hat);
  const auto xi = v.grid().wavenumbers();
  for (std::size_t j = 0; j < nl_hat.size(); ++j) nl_hat[j] += -kI * xi[j] * xi[j] * hat[j];
  return nl_hat.to_physical();
}

std::array<ComplexField, 10> perturbation_terms(const ComplexField& u, const BackgroundSample& s,
                                                const GridPtr& grid) {
  require_physical(u, "perturbation_terms");
  const ComplexField ux = derivative(u, 1);
  std::array<ComplexField, 10> t{ComplexField(grid), ComplexField(grid), ComplexField(grid),
                                 ComplexField(grid), ComplexField(grid), ComplexField(grid),
                                 ComplexField(grid), ComplexField(grid), ComplexField(grid),
                                 ComplexField(grid)};
  for (std::size_t j = 0; j < u.size(); ++j) {
    const cplx a = u[j], ax = ux[j], p = s.psi[j], px = s.psi_x[j];
    const double re = std::real(a * std::conj(p));
    t[0][j] = std::norm(a) * ax;
    t[1][j] = std::norm(a) * px;
    t[2][j] = 2.0 * ax * re;
    t[3][j] = 2.0 * px * re;
    t[4][j] = std::norm(p) * ax;
    t[5][j] = a * a * std::conj(ax);
    t[6][j] = a * a * std::conj(px);
    t[7][j] = 2.0 * a * p * std::conj(ax);
    t[8][j] = 2.0 * a * p * std::conj(px);
    t[9][j] = p * p * std::conj(ax);
  }
  return t;
}

ComplexField rhs_perturbation(const ComplexField& u, const Background& bg, double t, double lambda,
                              double mu, bool dealias) {
  require_physical(u, "rhs_perturbation");
  StageRhs rhs(u.grid_ptr(), bg, lambda, mu, dealias);
  const ComplexField hat = u.to_fourier();
  ComplexField out = rhs(hat, t);
  const auto xi = u.grid().wavenumbers();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += -kI * xi[j] * xi[j] * hat[j];
  return out.to_physical();
}

ComplexField gauge_forward(const ComplexField& v, double delta) {
  require_physical(v, "gauge_forward");
  if (delta == 0.0) return v;
  const double peak = v.max_abs();
  const double edge = std::max(std::abs(v[0]), std::abs(v[v.size() - 1]));
  if (edge > 1e-8 + 1e-6 * peak) {
    throw PreconditionError(
        "gauge_forward needs data decaying at the box edges (edge modulus " + std::to_string(edge) +
        "); the integral of |v|^2 from the left edge is not defined for non-decaying v");
  }
  ComplexField dens(v.grid_ptr());
  for (std::size_t j = 0; j < v.size(); ++j) dens[j] = std::norm(v[j]);
  const double m = std::real(mean_value(dens));
  for (auto& d : dens.values()) d -= m;
  const ComplexField prim = anti_derivative(dens);
  const auto x = v.grid().x();
  const double x0 = v.grid().left_edge();
  const double g0 = std::real(prim[0]);
  ComplexField out(v.grid_ptr());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double cumulative = m * (x[j] - x0) + std::real(prim[j]) - g0;
    out[j] = v[j] * std::polar(1.0, delta * cumulative);
  }
  return out;
}

GaugeResidual gauge_residual(const Trajectory& traj, double lambda, double mu, double delta) {
  const std::size_t k = traj.snapshots.size();
  if (k < 5 || traj.times.size() != k) {
    throw PreconditionError("gauge_residual needs at least 5 snapshots");
  }
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t j = 1; j < k; ++j) {
    if (std::abs(traj.times[j] - traj.times[j - 1] - h) > 1e-9 * std::abs(h)) {
      throw PreconditionError("gauge_residual needs equispaced snapshots");
    }
  }
  GaugeResidual r;
  r.cubic_coefficient = lambda + 2.0 * delta;
  r.conjugate_coefficient = mu + 2.0 * delta;
  r.quintic_coefficient = 0.5 * delta * (lambda - 3.0 * mu - 2.0 * delta);
  r.cubic_term_evaluated = r.cubic_coefficient != 0.0;

  std::vector<ComplexField> theta;
  theta.reserve(k);
  for (const auto& v : traj.snapshots) theta.push_back(gauge_forward(v, delta));

  for (std::size_t n = 2; n + 2 < k; ++n) {
    const ComplexField& th = theta[n];
    const ComplexField thx = derivative(th, 1);
    const ComplexField thxx = derivative(th, 2);
    ComplexField res(th.grid_ptr());
    for (std::size_t j = 0; j < th.size(); ++j) {
      const cplx dt = (theta[n - 2][j] - 8.0 * theta[n - 1][j] + 8.0 * theta[n + 1][j] -
                       theta[n + 2][j]) /
                      (12.0 * h);
      cplx rhs = 0.0;
      const double m = std::norm(th[j]);
      if (r.cubic_term_evaluated) rhs += kI * r.cubic_coefficient * m * thx[j];
      if (r.conjugate_coefficient != 0.0) {
        rhs += kI * r.conjugate_coefficient * th[j] * th[j] * std::conj(thx[j]);
      }
      if (r.quintic_coefficient != 0.0) rhs += r.quintic_coefficient * m * m * th[j];
      res[j] = kI * dt + thxx[j] - rhs;
    }
    r.max_residual = std::max(r.max_residual, l2_norm(res));
  }
  return r;
}

ComplexField step_if_rk4(const ComplexField& u, double t, double dt, const Background& bg,
                         const SimConfig& cfg) {
  require_physical(u, "step_if_rk4");
  if (dt == 0.0) return u;
  StageRhs rhs(u.grid_ptr(), bg, cfg.lambda, cfg.mu, cfg.dealias);
  const auto e_half = linear_factor(u.grid(), 0.5 * dt);
  const auto e_full = linear_factor(u.grid(), dt);
  ComplexField out = if_rk4_hat(u.to_fourier(), t, dt, rhs, e_half, e_full).to_physical();
  if (!out.all_finite()) throw BlowUpError(t + dt, norm_record(u));
  return out;
}

Trajectory evolve(const ComplexField& u0, const Background& bg, const SimConfig& cfg) {
  require_physical(u0, "evolve");
  validate_sim_config(cfg, u0.grid(), resolve_amp_bound(cfg, u0, bg));
  const StepPlan plan = plan_steps(cfg);
  const GridPtr grid = u0.grid_ptr();

  auto traj = std::make_shared<Trajectory>();
  traj->grid = grid;
  auto record = [&](double t, const ComplexField& u) {
    traj->times.push_back(t);
    traj->snapshots.push_back(u);
    traj->conserved.push_back(conserved_triple(u, cfg.lambda, cfg.mu));
    traj->norms.push_back(norm_record(u));
  };
  record(0.0, u0);

  StageRhs rhs(grid, bg, cfg.lambda, cfg.mu, cfg.dealias);
  const auto e_half = linear_factor(*grid, 0.5 * plan.dt);
  const auto e_full = linear_factor(*grid, plan.dt);
  ComplexField hat = u0.to_fourier();
  for (long long n = 0; n < plan.steps; ++n) {
    const double t = static_cast<double>(n) * plan.dt;
    hat = if_rk4_hat(hat, t, plan.dt, rhs, e_half, e_full);
    if (!hat.all_finite()) {
      throw BlowUpError(t + plan.dt, traj->norms.back(), traj);
    }
    if ((n + 1) % cfg.record_every == 0) {
      const ComplexField u = hat.to_physical();
      const NormRecord nr = norm_record(u);
      if (!std::isfinite(nr.h1)) throw BlowUpError(t + plan.dt, traj->norms.back(), traj);
      record(static_cast<double>(n + 1) * plan.dt, u);
    }
  }
  return std::move(*traj);
}

ComplexField reverse_state(const ComplexField& u) {
  require_physical(u, "reverse_state");
  const std::size_t n = u.size();
  ComplexField out(u.grid_ptr());
  for (std::size_t j = 0; j < n; ++j) out[j] = std::conj(u[(n - j) % n]);
  return out;
}

}  // namespace dnls
