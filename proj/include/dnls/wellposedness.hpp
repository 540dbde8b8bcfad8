#pragma once

#include <utility>
#include <vector>

#include "dnls/background.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/field.hpp"
#include "dnls/random.hpp"

namespace dnls {

/// (xi1 + xi2 + xi3)^2 - xi1^2 + xi2^2 - xi3^2, expanded form.
double resonance_omega3(double xi1, double xi2, double xi3);
/// 2 (xi1 + xi2)(xi2 + xi3).
double resonance_omega3_factored(double xi1, double xi2, double xi3);

/// xi1^2 - xi2^2 + xi3^2 - xi4^2.
double resonance_omega4(double xi1, double xi2, double xi3, double xi4);
/// On xi1 - xi2 + xi3 - xi4 = 0 the quartic function factors as
/// -2 (xi1 - xi4)(xi3 - xi4). Throws PreconditionError off the surface
/// (relative tolerance 1e-12).
double resonance_omega4_constrained(double xi1, double xi2, double xi3, double xi4);

/// Dyadic comparability used throughout: a ~ b iff max/min <= 2,
/// a >> b iff a >= 8 b.
struct Comparability {
  double similar = 2.0;
  double much_greater = 8.0;
  bool similar_to(double a, double b) const;
  bool much_greater_than(double a, double b) const;
};

/// |xi1| ~ |xi2| >= |xi3| >> |xi4| or |xi1| ~ |xi2| >= |xi4| >> |xi3|.
bool in_first_resonance_regime(double xi1, double xi2, double xi3, double xi4,
                               const Comparability& c = {});
/// |xi1| ~ |xi3| with |xi3| >= |xi2| >> |xi4|, |xi3| >= |xi4| >> |xi2| or
/// |xi1| >> |xi2| v |xi4|.
bool in_second_resonance_regime(double xi1, double xi2, double xi3, double xi4,
                                const Comparability& c = {});

struct ModifiedEnergyConfig {
  double s = 0.9;
  double theta = 0.3;
  double delta = 0.05;
  Dyadic n0{3};
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  Comparability comparability{};
};

/// Default correction coefficients for couplings (lambda, mu): (lambda, lambda, 2 lambda).
/// A heuristic; only their boundedness matters for coercivity.
ModifiedEnergyConfig with_default_coefficients(ModifiedEnergyConfig cfg, double lambda);

/// 3/4 < s < 1, 1/4 < theta < s/2 - 1/8, delta > 0, N0 >= 1 inside the
/// grid's dyadic range. ConfigError lists violations.
void validate_modified_energy_config(const ModifiedEnergyConfig& cfg, const Grid& grid);

struct EnergyBlocks {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
};

/// The three correction integrals at frequency N:
///   Re i int d^{-1} P_N^2 P_{N1} conj(w) . d P_{N3} u2 . C_j
/// summed over N1 ~ N3 >> N2 v N4 and 1/N1 <= M <= N1^{2/3}, with
///   C1 = d^{-1} dotP_M(P_{N2} conj(w) P_{N4} u1)
///   C2 = d^{-1} dotP_M(P_{N2} w P_{N4} conj(u2))
///   C3 = Re d^{-1} dotP_M(P_{N2} w P_{N4} conj(r)),  r = decaying part of psi.
/// Zero for N <= N0.
EnergyBlocks modified_energy_blocks(const ComplexField& u1, const ComplexField& u2,
                                    const Background& bg, double t, Dyadic n,
                                    const ModifiedEnergyConfig& cfg);

/// E^theta = sum_N max(N^{-1+2 delta}, N^{2 theta}) |E_N|.
double modified_energy_total(const ComplexField& u1, const ComplexField& u2, const Background& bg,
                             double t, const ModifiedEnergyConfig& cfg);

/// 8 K^{2/(s - theta - 1/2)} rounded up to a dyadic, at least 2, where
/// K = ||u1||_{H^s} + ||u2||_{H^s} + ||J psi||_inf.
Dyadic proposition_n0(double k, double s, double theta);

/// ||J_x psi||_inf from the ramp split, max over the given times.
double sup_J_psi(const Background& bg, const GridPtr& grid, const std::vector<double>& times);

struct DifferenceReport {
  std::vector<double> times;
  std::vector<double> diff_norm_series;
  double lipschitz_ratio = 0.0;
  /// Coercivity margins |E^theta - ||w||^2| / ||w||^2, one per instance.
  std::vector<double> margins;
  double coercivity_margin = 0.0;
  bool pass = false;
};

/// |E^theta - ||w||^2_{theta,delta}| / ||w||^2_{theta,delta} for one pair.
double coercivity_margin(const ComplexField& u1, const ComplexField& u2, const Background& bg,
                         double t, const ModifiedEnergyConfig& cfg);

using FieldPair = std::pair<ComplexField, ComplexField>;

/// Margins for every instance; pass iff all <= 0.25. Requires in addition
/// 1 - s < theta < s - 1/2 (ConfigError otherwise).
DifferenceReport coercivity_check(const std::vector<FieldPair>& instances, const Background& bg,
                                  const ModifiedEnergyConfig& cfg);

/// Random band-limited pairs with ||u_j||_{H^s} = h_s_norm each and a
/// mean-free difference.
std::vector<FieldPair> random_admissible_pairs(const GridPtr& grid, double s, double h_s_norm,
                                               int count, CounterRng& rng);

enum class DifferenceNorm { h_s_minus_1, h_s_minus_half, theta_weighted };

struct DifferenceNormSpec {
  DifferenceNorm kind = DifferenceNorm::h_s_minus_1;
  double s = 0.9;
  double theta = 0.3;
  double delta = 0.05;
};

double difference_norm(const ComplexField& w, const DifferenceNormSpec& spec);

/// Evolves both data and records the chosen norm of u1 - u2 at every
/// snapshot; lipschitz_ratio = last / first. The initial difference must be
/// mean-free.
DifferenceReport difference_experiment(const ComplexField& u01, const ComplexField& u02,
                                       const Background& bg, const SimConfig& cfg,
                                       const DifferenceNormSpec& norm);

/// Least-squares slope of log(err) against log(h). >= 2 points, h strictly
/// decreasing, all entries positive; PreconditionError otherwise.
double convergence_order(const std::vector<std::pair<double, double>>& errors);

}  // namespace dnls
