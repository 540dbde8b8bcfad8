#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dnls/background.hpp"
#include "dnls/errors.hpp"
#include "dnls/field.hpp"
#include "dnls/functionals.hpp"

namespace dnls {

struct SimConfig {
  double lambda = 0.0;
  double mu = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  double cfl_safety = 0.5;
  int record_every = 1;
  /// A-priori amplitude cap used by the CFL bound; <= 0 means
  /// max|u0| + sup|psi| at run start.
  double amp_bound = 0.0;
};

/// cfl_safety / (max(|lambda|, |mu|) * amp^2 * xi_max + 1).
double cfl_dt_limit(const SimConfig& cfg, const Grid& grid, double amp_bound);

/// Range checks plus the CFL bound; throws ConfigError listing every violation.
void validate_sim_config(const SimConfig& cfg, const Grid& grid, double amp_bound);

/// Number of steps and the step actually used: n = round(t_end / dt),
/// dt_eff = t_end / n.
struct StepPlan {
  long long steps = 0;
  double dt = 0.0;
};
StepPlan plan_steps(const SimConfig& cfg);

struct NormRecord {
  double l2 = 0.0;
  double h1 = 0.0;
  double sup = 0.0;
};

NormRecord norm_record(const ComplexField& u);

struct Trajectory {
  GridPtr grid;
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<ConservedTriple> conserved;
  std::vector<NormRecord> norms;
};

/// Non-finite values after a step. Carries the time, the last finite norms and
/// (from evolve) the trajectory recorded so far.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(double t, NormRecord last, std::shared_ptr<const Trajectory> partial = nullptr);
  double time() const noexcept { return t_; }
  const NormRecord& last_norms() const noexcept { return last_; }
  const std::shared_ptr<const Trajectory>& partial() const noexcept { return partial_; }

 private:
  double t_;
  NormRecord last_;
  std::shared_ptr<const Trajectory> partial_;
};

/// d_t v = i v_xx + lambda |v|^2 v_x + mu v^2 conj(v_x).
/// With `dealias` the nonlinear part is 2/3-truncated.
ComplexField rhs_full(const ComplexField& v, double lambda, double mu, bool dealias = false);

/// The ten raw products of F(u, psi), without the coupling constants:
/// [0..4] |u|^2 u', |u|^2 psi', 2 u' Re(u conj psi), 2 psi' Re(u conj psi), |psi|^2 u'
/// [5..9] u^2 conj(u'), u^2 conj(psi'), 2 u psi conj(u'), 2 u psi conj(psi'), psi^2 conj(u')
std::array<ComplexField, 10> perturbation_terms(const ComplexField& u, const BackgroundSample& bg,
                                                const GridPtr& grid);

/// d_t u = i u_xx + lambda (T0 + ... + T4) + mu (T5 + ... + T9) + i Psi.
ComplexField rhs_perturbation(const ComplexField& u, const Background& bg, double t, double lambda,
                              double mu, bool dealias = false);

/// theta = v exp(i delta int_{left edge}^x |v|^2). Refuses (PreconditionError)
/// fields that do not decay at the box edges.
ComplexField gauge_forward(const ComplexField& v, double delta);

struct GaugeResidual {
  double max_residual = 0.0;
  /// Coefficients of i|theta|^2 theta_x, i theta^2 conj(theta_x), |theta|^4 theta.
  double cubic_coefficient = 0.0;
  double conjugate_coefficient = 0.0;
  double quintic_coefficient = 0.0;
  /// False when the coefficient is exactly zero and the term was skipped.
  bool cubic_term_evaluated = true;
};

/// Residual of
///   i theta_t + theta_xx = i(lambda + 2 delta)|theta|^2 theta_x
///     + i(mu + 2 delta) theta^2 conj(theta_x) + (delta/2)(lambda - 3 mu - 2 delta)|theta|^4 theta
/// on theta = gauge_forward(v(t), delta), with theta_t by 5-point central
/// differences. L2 max over interior snapshots. Needs >= 5 equispaced snapshots.
GaugeResidual gauge_residual(const Trajectory& traj, double lambda, double mu, double delta);

/// One integrating-factor RK4 step on the Fourier side.
/// Throws BlowUpError on non-finite output.
ComplexField step_if_rk4(const ComplexField& u, double t, double dt, const Background& bg,
                         const SimConfig& cfg);

/// Fixed-step march from t = 0 to t_end recording every record_every steps.
Trajectory evolve(const ComplexField& u0, const Background& bg, const SimConfig& cfg);

/// conj(u(2c - x)) on the grid (c the box centre): the time-reversal map of
/// the equation.
ComplexField reverse_state(const ComplexField& u);

}  // namespace dnls
