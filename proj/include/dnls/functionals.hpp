#pragma once

#include <map>
#include <optional>

#include "dnls/background.hpp"
#include "dnls/field.hpp"

namespace dnls {

/// M[v] = int |v|^2, rectangle rule.
double mass(const ComplexField& u);

struct EnergyParts {
  double kinetic = 0.0;  // int |v'|^2
  double cubic = 0.0;    // ((lambda+mu)/2) Im int |v|^2 v conj(v')
  double sextic = 0.0;   // ((lambda+mu) mu / 6) int |v|^6
  double total() const { return kinetic + cubic + sextic; }
};

EnergyParts energy_parts(const ComplexField& u, double lambda, double mu);
double energy(const ComplexField& u, double lambda, double mu);

/// P[v] = (1/2) Im int v conj(v') + (mu/4) int |v|^4.
double momentum(const ComplexField& u, double mu);

struct ConservedTriple {
  double mass = 0.0;
  double energy = 0.0;
  double momentum = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  /// Momentum is a conserved quantity only when lambda = 2 mu.
  bool momentum_is_conserved = false;
};

ConservedTriple conserved_triple(const ComplexField& u, double lambda, double mu);

/// Dyadic weights omega_N with omega_N <= omega_{2N} <= growth * omega_N.
///
/// Stored on a contiguous exponent range and extended by constants outside it,
/// which keeps the admissibility condition.
class FrequencyEnvelope {
 public:
  /// Throws PreconditionError listing the first offending pair.
  FrequencyEnvelope(std::map<int, double> omega_by_exponent, double growth);

  /// Constant envelope omega_N = 1.
  static FrequencyEnvelope flat();

  double operator()(Dyadic n) const;
  double growth() const noexcept { return growth_; }

 private:
  std::map<int, double> omega_;
  double growth_;
};

enum class NormMethod { multiplier, lp_sum };

/// multiplier: (sum <xi>^{2s} |u_hat|^2 L/n^2)^{1/2}.
/// lp_sum: (sum_N omega_N^2 N^{2s} ||P_N u||^2)^{1/2} over inhomogeneous blocks.
/// An envelope is only meaningful for lp_sum; multiplier + envelope throws
/// PreconditionError.
double sobolev_norm(const ComplexField& u, double s,
                    const std::optional<FrequencyEnvelope>& envelope = std::nullopt,
                    NormMethod method = NormMethod::multiplier);

/// ||f||_{L^inf} + ||f'||_{H^{s-1}} for a periodic-compatible f.
double zhidkov_norm(const ComplexField& f, double s);
/// Same norm for a background at time t, using its analytic derivative.
double zhidkov_norm(const Background& bg, double t, const GridPtr& grid, double s);

struct WeightedNorm {
  double norm = 0.0;
  /// Mean (xi = 0) coefficient, excluded from the norm and reported here.
  cplx mean_mode = 0.0;
};

/// (sum_N max(N^{-1+2 delta}, N^{2 theta}) ||dotP_N w||^2)^{1/2} over the
/// homogeneous blocks that meet the grid.
double weighted_low_freq_norm(const ComplexField& w, double theta, double delta);
WeightedNorm weighted_low_freq_detail(const ComplexField& w, double theta, double delta);

/// max(N^{-1+2 delta}, N^{2 theta}).
double low_freq_weight(Dyadic n, double theta, double delta);

/// Sup-norm embedding constant on the box: ||f||_inf <= C ||f||_{H^s} for
/// trigonometric polynomials on the grid, C = ((1/L) sum_k <xi_k>^{-2s})^{1/2}.
double box_embedding_constant(const Grid& grid, double s);

}  // namespace dnls
