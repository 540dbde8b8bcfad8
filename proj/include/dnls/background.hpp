#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dnls/field.hpp"

namespace dnls {

/// h(x) = 2 / (sqrt(2) cosh(A^2 x) + 1), evaluated without overflow for large |x|.
double soliton_h(double amplitude, double x);

/// theta(x) = (A^2/4) int_0^x (3h^2 - 2h)/(1 - h) dy by adaptive Gauss-Kronrod
/// quadrature, absolute tolerance 1e-12. Throws NumericalError if the error
/// estimate does not meet the tolerance.
double soliton_theta(double amplitude, double x);

/// Cached phase of the dark soliton.
///
/// theta(x) = Theta(A^2 x) with Theta(u) = (1/4) int_0^u f(h1(y)) dy and h1 the
/// A = 1 profile, so one table in the scaled variable serves every amplitude.
/// Panel sums come from adaptive Gauss-Kronrod; the remainder inside a panel is
/// an 8-point Gauss-Legendre rule (the integrand is analytic in a strip of
/// half-width 3*pi/4, so the rule is exact to rounding on 1/8-wide panels).
class SolitonPhase {
 public:
  SolitonPhase();

  /// Theta(u), odd in u.
  double scaled(double u) const;
  /// Theta(+infinity).
  double scaled_limit() const noexcept { return limit_; }

 private:
  static constexpr double kPanel = 0.125;
  static constexpr double kTableEnd = 50.0;
  std::vector<double> cumulative_;
  double limit_ = 0.0;
};

/// Nodal samples of a background and its derivatives at one time.
struct BackgroundSample {
  std::vector<cplx> psi, psi_x, psi_xx, psi_t;
};

enum class BackgroundKind { constant, dark_soliton, custom };

std::string to_string(BackgroundKind kind);

/// Analytic background psi(t, x) around which v = u + psi is decomposed.
///
/// Constant and dark-soliton backgrounds have closed-form evaluators at any
/// (t, x). A custom background is a time-independent table on one grid with
/// user-supplied derivative tables; it can only be sampled on that grid.
class Background {
 public:
  BackgroundKind kind() const noexcept;
  /// Constant value (constant kind) or amplitude A (dark soliton).
  cplx constant_value() const;
  double amplitude() const;

  cplx psi(double t, double x) const;
  cplx psi_x(double t, double x) const;
  cplx psi_xx(double t, double x) const;
  cplx psi_t(double t, double x) const;

  BackgroundSample sample(double t, const Grid& grid) const;

  /// Limits of psi as x -> -inf and x -> +inf.
  cplx limit_left() const;
  cplx limit_right() const;
  /// sup |psi| over space-time.
  double sup_abs() const;

  /// Smooth edge-matched ramp psi_- + (psi_+ - psi_-) (1 + tanh(A^2 z / 2)) / 2
  /// (z the travelling coordinate) and its x-derivative. The ramp carries the
  /// non-decaying part of psi; psi - ramp decays at both box edges.
  ComplexField ramp(double t, const GridPtr& grid) const;
  ComplexField ramp_x(double t, const GridPtr& grid) const;
  ComplexField decaying_remainder(double t, const GridPtr& grid) const;

  /// Travelling coordinate x + 2A^2 t for the soliton, x otherwise.
  double travelling_coordinate(double t, double x) const;

  struct Constant {
    cplx value;
  };
  struct DarkSoliton {
    double amplitude;
    std::shared_ptr<const SolitonPhase> phase;
  };
  struct Tabulated {
    GridPtr grid;
    BackgroundSample table;
  };

  explicit Background(Constant c) : profile_(c) {}
  explicit Background(DarkSoliton d) : profile_(std::move(d)) {}
  explicit Background(Tabulated t) : profile_(std::move(t)) {}

 private:
  const Tabulated& tabulated_on(const Grid& grid) const;

  std::variant<Constant, DarkSoliton, Tabulated> profile_;
};

Background make_constant_background(cplx c);
/// A > 0, otherwise PreconditionError.
Background make_dark_soliton(double amplitude);
/// Tables must all have grid->size() entries.
Background make_tabulated_background(GridPtr grid, BackgroundSample table);

/// Psi = i psi_t + psi_xx - i lambda |psi|^2 psi_x - i mu psi^2 conj(psi_x),
/// evaluated pointwise from analytic derivatives (no FFT of psi).
ComplexField compute_defect_Psi(const Background& bg, double t, const GridPtr& grid,
                                double lambda, double mu);
ComplexField defect_from_sample(const BackgroundSample& s, const GridPtr& grid, double lambda,
                                double mu);

struct HypothesisCaps {
  double sup_J_psi = 1e8;
  double sup_dt_psi = 1e8;
  double psi_defect_sobolev = 1e8;
  double dx_psi_L1 = 1e8;
  double schrod_defect_L2 = 1e8;
  /// Remainder / derivative magnitude at the box edges above which a
  /// truncation caveat is attached.
  double edge_tolerance = 1e-10;
};

struct HypothesisReport {
  double s = 0.0;
  double epsilon = 0.0;
  double sup_J_psi = 0.0;
  double sup_dt_psi = 0.0;
  double psi_defect_sobolev = 0.0;
  double dx_psi_L1 = 0.0;
  double schrod_defect_L2 = 0.0;
  bool pass_J_psi = false;
  bool pass_dt_psi = false;
  bool pass_psi_defect = false;
  bool pass_dx_psi_L1 = false;
  bool pass_schrod_defect = false;
  bool edge_decay_ok = false;
  std::vector<std::string> caveats;

  bool all_pass() const {
    return pass_J_psi && pass_dt_psi && pass_psi_defect && pass_dx_psi_L1 && pass_schrod_defect;
  }
};

/// Finite-box surrogate for the background hypotheses. Every quantity is a
/// sup over t_samples of: grid max |J^{s+1+eps} psi|, grid max |psi_t|,
/// ||Psi||_{H^{s+eps}}, ||psi_x||_{L1}, ||(i d_t + d_x^2) psi||_{L2}.
///
/// J^sigma psi is split as J^sigma(psi - ramp) + ramp + m(D) ramp_x with
/// m(xi) = (<xi>^sigma - 1)/(i xi); both FFT inputs decay, so the
/// non-periodic phase of psi never enters a transform.
HypothesisReport audit_hypotheses(const Background& bg, double s, double epsilon,
                                  const GridPtr& grid, const std::vector<double>& t_samples,
                                  double lambda, double mu, const HypothesisCaps& caps = {});

/// `count` equispaced times on [0, t_end].
std::vector<double> default_time_samples(double t_end, int count = 9);

}  // namespace dnls
