#include <algorithm>
#include <cmath>
#include <limits>

#include "dnls/errors.hpp"
#include "dnls/functionals.hpp"
#include "dnls/random.hpp"
#include "dnls/spectral.hpp"
#include "dnls/wellposedness.hpp"
#include "doctest.h"
#include "energy_oracle.hpp"

using namespace dnls;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("omega3 factored and expanded forms agree") {
  CHECK(resonance_omega3(1, -1, 5) == 0.0);
  CHECK(resonance_omega3_factored(1, -1, 5) == 0.0);
  CHECK(resonance_omega3(1, 1, 1) == 8.0);
  CHECK(resonance_omega3_factored(1, 1, 1) == 8.0);
  CHECK(resonance_omega3(3, -1, 1) == 0.0);
  CounterRng rng(11);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double a = rng.uniform(-50, 50), b = rng.uniform(-50, 50), c = rng.uniform(-50, 50);
    const double scale = std::max({a * a, b * b, c * c, 1.0});
    worst = std::max(worst, std::abs(resonance_omega3(a, b, c) - resonance_omega3_factored(a, b, c)) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("omega4 and its constrained factorisation") {
  CHECK(resonance_omega4(3, 3, -2, -2) == 0.0);
  CHECK(resonance_omega4(2, 1, 0, 1) == 2.0);
  CHECK(resonance_omega4_constrained(2, 1, 0, 1) == 2.0);
  CHECK_THROWS_AS(resonance_omega4_constrained(2, 1, 0, 2), PreconditionError);
  CounterRng rng(5);
  for (int k = 0; k < 10000; ++k) {
    const double a = rng.uniform(-30, 30), b = rng.uniform(-30, 30), c = rng.uniform(-30, 30);
    const double d = a - b + c;
    CHECK(std::abs(resonance_omega4(a, b, c, d) - resonance_omega4_constrained(a, b, c, d)) <=
          1e-12 * std::max({a * a, b * b, c * c, d * d, 1.0}));
  }
}

TEST_CASE("comparability conventions") {
  const Comparability c;
  CHECK(c.similar_to(2, 4));
  CHECK(c.similar_to(-4, 2));
  CHECK_FALSE(c.similar_to(2, 4.01));
  CHECK(c.much_greater_than(8, 1));
  CHECK_FALSE(c.much_greater_than(7.99, 1));
}

TEST_CASE("resonance lower bounds on the regimes") {
  // Worst cases of the factorised form inside each regime:
  // first, |xi3| >> |xi4|: (3/4)|xi1| * (7/8)|xi3|
  // first, |xi4| >> |xi3|: |xi1 - xi4| = |xi2 - xi3| >= (7/16)|xi1|, times (7/8)|xi4|  -> 49/64
  // second: (3/4)|xi1| * (7/16)|xi1| on the two chained branches, 49/32 on the last  -> 21/32
  const double bound1 = 2.0 * (7.0 / 16.0) * 0.875;
  const double bound2 = 2.0 * 0.875 * 0.375;
  CounterRng rng(99);
  auto draw = [&](double hi) {
    const double mag = std::exp(rng.uniform(std::log(1e-3), std::log(hi)));
    return rng.uniform() < 0.5 ? -mag : mag;
  };
  double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
  int hits1 = 0, hits2 = 0;
  for (int k = 0; k < 400000; ++k) {
    const double x1 = draw(1e3), x3 = draw(1e3), x4 = draw(1e3);
    const double x2 = x1 + x3 - x4;
    const double om = std::abs(resonance_omega4_constrained(x1, x2, x3, x4));
    if (in_first_resonance_regime(x1, x2, x3, x4)) {
      ++hits1;
      min1 = std::min(min1, om / (std::abs(x1) * std::max(std::abs(x3), std::abs(x4))));
    }
    if (in_second_resonance_regime(x1, x2, x3, x4)) {
      ++hits2;
      min2 = std::min(min2, om / (x1 * x1));
    }
  }
  MESSAGE("first regime: " << hits1 << " samples, min ratio " << min1);
  MESSAGE("second regime: " << hits2 << " samples, min ratio " << min2);
  CHECK(hits1 > 1000);
  CHECK(hits2 > 1000);
  CHECK(min1 >= bound1 * (1 - 1e-12));
  CHECK(min2 >= bound2 * (1 - 1e-12));
  CHECK(min1 > 0.0);
  // example quadruple (2,1,0,1): |Omega| = 2 = |xi1| (|xi3| v |xi4|)
  CHECK(std::abs(resonance_omega4_constrained(2, 1, 0, 1)) >= 2.0 * 1.0);
}

TEST_CASE("config validation") {
  auto g = make_grid(64, 16.0);
  ModifiedEnergyConfig cfg;
  CHECK_NOTHROW(validate_modified_energy_config(cfg, *g));
  cfg.s = 1.2;
  cfg.theta = 0.1;
  cfg.delta = 0.0;
  cfg.n0 = Dyadic{40};
  try {
    validate_modified_energy_config(cfg, *g);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 4);
  }
  const auto d = with_default_coefficients(ModifiedEnergyConfig{}, 2.0);
  CHECK(d.c1 == 2.0);
  CHECK(d.c2 == 2.0);
  CHECK(d.c3 == 4.0);
}

TEST_CASE("blocks vanish on the trivial branches") {
  auto g = make_grid(64, 16.0);
  CounterRng rng(3);
  const auto bg = make_dark_soliton(1.0);
  const auto u1 = random_band_field(g, rng, 8.0, 0.5);
  const auto u2 = random_band_field(g, rng, 8.0, 0.5);
  ModifiedEnergyConfig cfg;
  cfg.n0 = Dyadic{0};
  for (int e = 1; e <= 4; ++e) {
    const auto same = modified_energy_blocks(u1, u1, bg, 0.0, Dyadic{e}, cfg);
    CHECK(same.e1 == 0.0);
    CHECK(same.e2 == 0.0);
    CHECK(same.e3 == 0.0);
    const auto zero2 = modified_energy_blocks(u1, ComplexField(g), bg, 0.0, Dyadic{e}, cfg);
    CHECK(zero2.e1 == 0.0);
    CHECK(zero2.e2 == 0.0);
  }
  cfg.n0 = Dyadic{3};
  const auto low = modified_energy_blocks(u1, u2, bg, 0.0, Dyadic{3}, cfg);
  CHECK(low.e1 == 0.0);
  CHECK(low.e2 == 0.0);
  CHECK(low.e3 == 0.0);
}

TEST_CASE("blocks match the naive shell summation") {
  for (std::size_t n : {64u, 128u}) {
    auto g = make_grid(n, 16.0, 1.0);
    CounterRng rng(n);
    const auto bg = make_dark_soliton(1.0);
    const auto u1 = random_band_field(g, rng, 0.7 * g->xi_max(), 0.3);
    const auto u2 = random_band_field(g, rng, 0.7 * g->xi_max(), 0.3);
    ModifiedEnergyConfig cfg;
    cfg.n0 = Dyadic{0};
    int nonzero = 0;
    for (Dyadic d : inhomogeneous_dyadic_range(*g)) {
      if (d.exponent < 1) continue;
      const auto fast = modified_energy_blocks(u1, u2, bg, 0.3, d, cfg);
      const auto slow = oracle::naive_blocks(u1, u2, bg, 0.3, d, cfg.comparability);
      const double scale = std::max({std::abs(slow.e1), std::abs(slow.e2), std::abs(slow.e3), 1e-300});
      CHECK(std::abs(fast.e1 - slow.e1) <= 1e-10 * std::max(1.0, scale));
      CHECK(std::abs(fast.e2 - slow.e2) <= 1e-10 * std::max(1.0, scale));
      CHECK(std::abs(fast.e3 - slow.e3) <= 1e-10 * std::max(1.0, scale));
      if (slow.e1 != 0.0 && slow.e3 != 0.0) ++nonzero;
    }
    CHECK(nonzero >= 2);  // the comparison is not vacuous
  }
}

TEST_CASE("E^theta without corrections is the squared weighted norm") {
  auto g = make_grid(128, 20.0);
  CounterRng rng(8);
  const auto bg = make_dark_soliton(1.0);
  for (int k = 0; k < 5; ++k) {
    const auto u1 = random_band_field(g, rng, 10.0, 0.4);
    const auto u2 = random_band_field(g, rng, 10.0, 0.4);
    ModifiedEnergyConfig cfg;
    const double w = weighted_low_freq_norm(u1 - u2, cfg.theta, cfg.delta);
    CHECK(rel(modified_energy_total(u1, u2, bg, 0.0, cfg), w * w) <= 1e-12);
    CHECK(coercivity_margin(u1, u2, bg, 0.0, cfg) <= 1e-12);
  }
  ModifiedEnergyConfig cfg = with_default_coefficients({}, 2.0);
  const auto u = random_band_field(g, rng, 10.0, 0.4);
  CHECK(modified_energy_total(u, u, bg, 0.0, cfg) == 0.0);
}

TEST_CASE("proposition N0") {
  CHECK(proposition_n0(0.0, 0.9, 0.3).exponent == 1);
  CHECK(proposition_n0(1.0, 0.9, 0.3).exponent == 3);      // 8
  CHECK(proposition_n0(std::pow(2.0, 0.05), 0.9, 0.3).exponent == 4);  // 8 * 2^1
  CHECK_THROWS_AS(proposition_n0(1.0, 0.7, 0.3), PreconditionError);
}

TEST_CASE("coercivity check") {
  auto g = make_grid(128, 40.0);
  CounterRng rng(21);
  const auto bg = make_dark_soliton(0.3);
  auto pairs = random_admissible_pairs(g, 0.9, 0.2, 10, rng);
  for (const auto& [a, b] : pairs) {
    CHECK(sobolev_norm(a, 0.9) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(mean_value(a - b)) <= 1e-14);
  }
  ModifiedEnergyConfig zero;
  const auto r0 = coercivity_check(pairs, bg, zero);
  CHECK(r0.pass);
  CHECK(r0.coercivity_margin <= 1e-12);

  const ModifiedEnergyConfig cfg = with_default_coefficients({}, 2.0);
  const auto r = coercivity_check(pairs, bg, cfg);
  CHECK(r.margins.size() == pairs.size());
  CHECK(r.pass);
  CHECK(r.coercivity_margin > 0.0);

  ModifiedEnergyConfig bad = cfg;
  bad.s = 0.78;  // theta = 0.3 is then above s - 1/2
  bad.theta = 0.3;
  CHECK_THROWS_AS(coercivity_check(pairs, bg, bad), ConfigError);
}

TEST_CASE("difference experiment") {
  auto g = make_grid(128, 40.0);
  CounterRng rng(4);
  const auto bg = make_constant_background(0.0);
  const auto u = random_band_field(g, rng, 3.0, 1.0);
  SimConfig sim;
  sim.lambda = 2;
  sim.mu = 1;
  sim.dt = 1e-3;
  sim.t_end = 0.05;
  sim.record_every = 10;
  const auto same = difference_experiment(u, u, bg, sim, {});
  CHECK(same.diff_norm_series.size() == same.times.size());
  for (double v : same.diff_norm_series) CHECK(v == 0.0);

  auto v = u;
  for (auto& x : v.values()) x += 0.1;
  CHECK_THROWS_AS(difference_experiment(u, v, bg, sim, {}), PreconditionError);

  const auto w = random_band_field(g, rng, 3.0, 1.0);
  const auto rep = difference_experiment(u, u + 1e-3 * w, bg, sim, {});
  CHECK(rep.lipschitz_ratio > 0.5);
  CHECK(rep.lipschitz_ratio < 2.0);
  CHECK(rel(rep.diff_norm_series.front(), sobolev_norm(1e-3 * w, -0.1)) <= 1e-10);
}

TEST_CASE("convergence order") {
  CHECK(convergence_order({{0.1, 1e-4}, {0.05, 6.25e-6}}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(convergence_order({{0.1, 3e-3}, {0.05, 3e-3}, {0.025, 3e-3}}) == doctest::Approx(0.0));
  CounterRng rng(1);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 6; ++k) {
    const double h = 0.1 / std::pow(2.0, k);
    pts.emplace_back(h, 2.5 * std::pow(h, 4) * std::exp(0.05 * rng.normal()));
  }
  CHECK(std::abs(convergence_order(pts) - 4.0) <= 0.1);
  CHECK_THROWS_AS(convergence_order({{0.1, 1e-4}}), PreconditionError);
  CHECK_THROWS_AS(convergence_order({{0.1, 1e-4}, {0.05, 0.0}}), PreconditionError);
  CHECK_THROWS_AS(convergence_order({{0.05, 1e-4}, {0.1, 1e-5}}), PreconditionError);
}
