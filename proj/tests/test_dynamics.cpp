#include <cmath>
#include <limits>
#include <numbers>

#include "dnls/dynamics.hpp"
#include "dnls/random.hpp"
#include "dnls/spectral.hpp"
#include "doctest.h"

using namespace dnls;
using std::numbers::pi;

namespace {

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

ComplexField plane_wave(const GridPtr& g, cplx c, double k, double phase = 0.0) {
  return ComplexField::from_function(g, [=](double x) { return c * std::polar(1.0, k * x - phase); });
}

SimConfig sim(double lambda, double mu, double dt, double t_end, int record_every = 1) {
  SimConfig c;
  c.lambda = lambda;
  c.mu = mu;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = record_every;
  return c;
}

const Background kZero = make_constant_background(0.0);

}  // namespace

TEST_CASE("rhs_full examples") {
  auto g = make_grid(64, 2 * pi, 0.0);
  CHECK(rhs_full(ComplexField(g), 2.0, 1.0).max_abs() == 0.0);
  for (auto [lambda, mu] : {std::pair{2.0, 1.0}, {1.0, 1.0}, {-1.5, 0.5}}) {
    const cplx c(0.3, -0.4);
    const double k = 3.0;
    const double omega = k * k - (lambda - mu) * std::norm(c) * k;
    const auto v = plane_wave(g, c, k);
    CHECK(max_diff(rhs_full(v, lambda, mu), cplx(0.0, -omega) * v) <= 1e-10);
  }
  CounterRng rng(1);
  auto v = random_band_field(g, rng, 10.0, 1.0);
  const auto lin = derivative(v, 2);
  CHECK(max_diff(rhs_full(v, 0.0, 0.0), cplx(0, 1) * lin) <= 1e-12 * lin.max_abs());
}

TEST_CASE("divergence form when lambda = 2 mu") {
  auto g = make_grid(128, 2 * pi, 0.0);
  CounterRng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const double mu = rng.uniform(-2.0, 2.0);
    // Band limit so that |v|^2 v is resolved on the grid.
    auto v = random_band_field(g, rng, g->xi_max() / 4, 0.0);
    auto vx = derivative(v, 1);
    ComplexField lhs(g), cube(g);
    for (std::size_t j = 0; j < g->size(); ++j) {
      lhs[j] = 2 * mu * std::norm(v[j]) * vx[j] + mu * v[j] * v[j] * std::conj(vx[j]);
      cube[j] = std::norm(v[j]) * v[j];
    }
    const auto rhs = mu * derivative(cube, 1);
    CHECK(max_diff(lhs, rhs) <= 1e-10 * std::max(1.0, lhs.max_abs()));
  }
}

TEST_CASE("perturbation form reduces to the full equation") {
  auto g = make_grid(256, 30.0, 0.0);
  CounterRng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_schwartz_field(g, rng, 2, 5.0, 3.0, rng.uniform(0.1, 2.0));
    const double lambda = rng.uniform(-3, 3), mu = rng.uniform(-3, 3);
    const auto a = rhs_perturbation(u, kZero, 0.0, lambda, mu);
    const auto b = rhs_full(u, lambda, mu);
    worst = std::max(worst, max_diff(a, b) / b.max_abs());
  }
  CHECK(worst <= 1e-12);

  // A nonzero constant background: u + c is still periodic.
  const cplx c(0.4, 0.3);
  const auto bg = make_constant_background(c);
  const auto u = random_schwartz_field(g, rng, 2, 5.0, 3.0, 1.0);
  ComplexField v = u;
  for (auto& x : v.values()) x += c;
  const auto a = rhs_perturbation(u, bg, 0.7, 2.0, 1.0);
  const auto b = rhs_full(v, 2.0, 1.0);
  CHECK(max_diff(a, b) <= 1e-12 * b.max_abs());
}

TEST_CASE("individual F-terms") {
  auto g = make_grid(128, 20.0, 0.0);
  CounterRng rng(4);
  const auto u = random_schwartz_field(g, rng, 2, 4.0, 2.0, 1.0);
  const auto bg = make_constant_background(cplx(0.8, -0.2));
  const auto s = bg.sample(0.0, *g);
  const auto terms = perturbation_terms(u, s, g);
  for (int k : {1, 3, 6, 8}) CHECK(terms[k].max_abs() == 0.0);
  for (int k : {0, 2, 4, 5, 7, 9}) CHECK(terms[k].max_abs() > 0.0);

  // Reassembly against rhs_perturbation for the soliton background.
  const auto sol = make_dark_soliton(1.0);
  auto gs = make_grid(512, 60.0, 0.0);
  const auto us = random_schwartz_field(gs, rng, 2, 4.0, 2.0, 0.5);
  const double t = 0.2, lambda = 1.3, mu = 0.6;
  const auto ss = sol.sample(t, *gs);
  const auto ts = perturbation_terms(us, ss, gs);
  ComplexField assembled = cplx(0, 1) * derivative(us, 2);
  for (int k = 0; k < 5; ++k) assembled += lambda * ts[k];
  for (int k = 5; k < 10; ++k) assembled += mu * ts[k];
  assembled += cplx(0, 1) * compute_defect_Psi(sol, t, gs, lambda, mu);
  const auto direct = rhs_perturbation(us, sol, t, lambda, mu);
  CHECK(max_diff(assembled, direct) <= 1e-11 * direct.max_abs());
}

TEST_CASE("zero perturbation around the exact soliton") {
  auto g = make_grid(4096, 80.0, 0.0);
  const auto sol = make_dark_soliton(1.0);
  for (double t : {0.0, 0.5}) {
    const auto r = rhs_perturbation(ComplexField(g), sol, t, 2.0, 1.0);
    CHECK(l2_norm(r) <= 1e-8);
  }
  CHECK(l2_norm(rhs_perturbation(ComplexField(g), sol, 0.0, 1.0, 1.0)) > 0.01);
}

TEST_CASE("gauge transform") {
  auto g = make_grid(512, 40.0, 0.0);
  CounterRng rng(5);
  const auto v = random_schwartz_field(g, rng, 3, 5.0, 2.0, 1.5);
  CHECK(max_diff(gauge_forward(v, 0.0), v) == 0.0);
  for (double delta : {-1.0, 0.3, 2.5}) {
    const auto th = gauge_forward(v, delta);
    double mod = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) mod = std::max(mod, std::abs(std::abs(th[j]) - std::abs(v[j])));
    CHECK(mod <= 1e-12);
    CHECK(max_diff(gauge_forward(th, -delta), v) <= 1e-10);
  }
  // The phase is delta times the running mass; for e^{-x^2} that is
  // sqrt(pi/8) (1 + erf(sqrt(2) x)).
  const double delta = 0.7;
  const auto gauss = ComplexField::from_function(g, [](double x) -> cplx { return std::exp(-x * x); });
  const auto th = gauge_forward(gauss, delta);
  double worst = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double x = g->x()[j];
    const double run = std::sqrt(pi / 8) * (1 + std::erf(std::sqrt(2.0) * x));
    worst = std::max(worst, std::abs(th[j] - gauss[j] * std::polar(1.0, delta * run)));
  }
  CHECK(worst <= 1e-12);

  ComplexField flat(g);
  for (auto& x : flat.values()) x = 1.0;
  CHECK_THROWS_AS(gauge_forward(flat, 0.5), PreconditionError);
}

TEST_CASE("integrating factor step") {
  auto g = make_grid(128, 20.0, 0.0);
  CounterRng rng(6);
  const auto u = random_schwartz_field(g, rng, 3, 4.0, 3.0, 1.0);
  SimConfig cfg = sim(0.0, 0.0, 0.1, 1.0);
  CHECK(max_diff(step_if_rk4(u, 0.0, 0.0, kZero, cfg), u) == 0.0);
  for (double dt : {1e-3, 0.37, 5.0}) {
    const auto stepped = step_if_rk4(u, 0.0, dt, kZero, cfg);
    const auto expect = apply_symbol(u, [&](double xi, std::size_t) {
      return std::polar(1.0, -xi * xi * dt);
    });
    CHECK(max_diff(stepped, expect) <= 1e-13);
  }
  ComplexField bad = u;
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step_if_rk4(bad, 0.0, 1e-3, kZero, cfg), BlowUpError);
}

TEST_CASE("plane wave phase after T = 1") {
  auto g = make_grid(64, 2 * pi, 0.0);
  const cplx c = 0.5;
  const double k = 3.0, lambda = 2.0, mu = 1.0;
  const double omega = k * k - (lambda - mu) * std::norm(c) * k;
  const auto traj = evolve(plane_wave(g, c, k), kZero, sim(lambda, mu, 1e-3, 1.0, 1000));
  REQUIRE(traj.snapshots.size() == 2);
  const auto exact = plane_wave(g, c, k, omega * 1.0);
  CHECK(max_diff(traj.snapshots.back(), exact) <= 1e-8);
}

TEST_CASE("evolve bookkeeping and errors") {
  auto g = make_grid(128, 30.0, 0.0);
  CounterRng rng(7);
  const auto u = random_schwartz_field(g, rng, 2, 4.0, 2.0, 1.0);
  const auto traj = evolve(u, kZero, sim(0.0, 0.0, 0.01, 1.0, 7));
  CHECK(traj.snapshots.size() == 100 / 7 + 1);
  for (std::size_t j = 1; j < traj.times.size(); ++j) CHECK(traj.times[j] > traj.times[j - 1]);
  for (const auto& n : traj.norms) CHECK(std::abs(n.l2 - traj.norms[0].l2) <= 1e-12);

  // CFL violation
  CHECK_THROWS_AS(evolve(u, kZero, sim(2.0, 1.0, 0.5, 1.0)), ConfigError);
  SimConfig bad = sim(0.0, 0.0, -1.0, 1.0);
  CHECK_THROWS_AS(evolve(u, kZero, bad), ConfigError);

  // Blow-up carries the partial trajectory.
  SimConfig wild = sim(2.0, 1.0, 0.01, 1.0);
  wild.amp_bound = 1e-3;  // lies about the amplitude to get past the CFL check
  const auto big = random_schwartz_field(g, rng, 2, 2.0, 5.0, 60.0);
  bool caught = false;
  try {
    (void)evolve(big, kZero, wild);
  } catch (const BlowUpError& e) {
    caught = true;
    REQUIRE(e.partial());
    CHECK(e.partial()->snapshots.size() >= 1);
    CHECK(e.time() > 0.0);
  }
  CHECK(caught);
}

TEST_CASE("time reversal") {
  auto g = make_grid(256, 30.0, 0.0);
  CounterRng rng(8);
  const auto u0 = random_schwartz_field(g, rng, 2, 3.0, 1.5, 0.5);
  CHECK(max_diff(reverse_state(reverse_state(u0)), u0) == 0.0);
  const SimConfig cfg = sim(2.0, 1.0, 1e-3, 0.5, 500);
  const auto fwd = evolve(u0, kZero, cfg);
  const auto back = evolve(reverse_state(fwd.snapshots.back()), kZero, cfg);
  CHECK(max_diff(reverse_state(back.snapshots.back()), u0) <= 1e-6);
}

TEST_CASE("gauge residual") {
  auto g = make_grid(1024, 40.0, 0.0);
  CounterRng rng(9);
  const auto v0 = random_schwartz_field(g, rng, 2, 3.0, 1.0, 0.5);
  SimConfig cfg = sim(2.0, 1.0, 1e-4, 0.02, 20);
  cfg.dealias = false;
  const auto traj = evolve(v0, kZero, cfg);
  const auto r = gauge_residual(traj, 2.0, 1.0, -1.0);
  CHECK_FALSE(r.cubic_term_evaluated);
  CHECK(r.cubic_coefficient == 0.0);
  CHECK(r.conjugate_coefficient == -1.0);
  CHECK(r.quintic_coefficient == doctest::Approx(-0.5 * (2.0 - 3.0 + 2.0)));
  MESSAGE("gauge residual " << r.max_residual);
  CHECK(r.max_residual <= 1e-4);
  // A wrong quintic coefficient is visible above the floor.
  const auto wrong = gauge_residual(traj, 2.0, 1.0, -0.9);
  CHECK(wrong.max_residual > 0.0);

  const auto lin = evolve(v0, kZero, sim(0.0, 0.0, 1e-4, 0.02, 20));
  CHECK(gauge_residual(lin, 0.0, 0.0, 0.0).max_residual <= 1e-6);

  Trajectory short_traj = traj;
  short_traj.snapshots.erase(short_traj.snapshots.begin() + 4, short_traj.snapshots.end());
  short_traj.times.resize(4);
  CHECK_THROWS_AS(gauge_residual(short_traj, 2.0, 1.0, -1.0), PreconditionError);
}

TEST_CASE("fourth-order convergence") {
  auto g = make_grid(256, 30.0, 0.0);
  CounterRng rng(10);
  const auto u0 = random_schwartz_field(g, rng, 2, 3.0, 1.0, 0.4);
  auto final_state = [&](double dt) {
    return evolve(u0, kZero, sim(2.0, 1.0, dt, 1.0, static_cast<int>(std::lround(1.0 / dt))))
        .snapshots.back();
  };
  const auto ref = final_state(2.5e-3 / 16);
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) err.push_back(l2_norm(final_state(dt) - ref));
  const double p1 = std::log2(err[0] / err[1]);
  const double p2 = std::log2(err[1] / err[2]);
  MESSAGE("observed orders " << p1 << " " << p2 << " errors " << err[0] << " " << err[2]);
  CHECK(p1 >= 3.8);
  CHECK(p2 >= 3.8);
}

TEST_CASE("conservation with no background") {
  auto g = make_grid(1024, 50.0, 0.0);
  const auto u0 = ComplexField::from_function(g, [](double x) -> cplx { return std::exp(-x * x); });
  for (auto [lambda, mu] : {std::pair{2.0, 1.0}, {1.0, 1.0}}) {
    const auto traj = evolve(u0, kZero, sim(lambda, mu, 1e-3, 1.0, 100));
    const auto& a = traj.conserved.front();
    const auto& b = traj.conserved.back();
    const double dm = std::abs(b.mass - a.mass) / std::abs(a.mass);
    const double de = std::abs(b.energy - a.energy) / std::abs(a.energy);
    const double dp = std::abs(b.momentum - a.momentum) / std::abs(a.momentum);
    MESSAGE("lambda " << lambda << " mu " << mu << " drifts " << dm << " " << de << " " << dp);
    CHECK(dm <= 1e-8);
    CHECK(de <= 1e-8);
    if (a.momentum_is_conserved) CHECK(dp <= 1e-8);
  }
}

TEST_CASE("soliton propagation, short horizon") {
  auto g = make_grid(2048, 80.0, 0.0);
  const auto sol = make_dark_soliton(1.0);
  const auto traj = evolve(ComplexField(g), sol, sim(2.0, 1.0, 2.5e-4, 0.1, 40));
  for (const auto& n : traj.norms) CHECK(n.h1 <= 1e-6);
}
