#pragma once

#include <cstdint>

#include "dnls/field.hpp"

namespace dnls {

/// Counter-based generator: the k-th draw is the SplitMix64 finaliser applied
/// to seed_key + k * 0x9E3779B97F4A7C15. Streams are reproducible across
/// platforms and can be forked by key without shared state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one draw per call, the sine branch discarded).
  double normal();

  /// Independent generator derived deterministically from this one's key.
  CounterRng fork(std::uint64_t stream) const;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Sum of `bumps` Gaussian wave packets a * exp(-(x-x0)^2 / w^2) * exp(i k x)
/// with random complex amplitude, centre within `spread` of the box centre,
/// width in [0.7, 1.5] and carrier |k| <= max_wavenumber. Normalised so that
/// the L2 norm equals `l2_target` (if > 0).
ComplexField random_schwartz_field(const GridPtr& grid, CounterRng& rng, int bumps,
                                   double spread, double max_wavenumber, double l2_target);

/// Random Fourier series with Gaussian coefficients damped by <xi>^{-decay}
/// and zero outside |xi| <= xi_cut; the zero mode is removed.
ComplexField random_band_field(const GridPtr& grid, CounterRng& rng, double xi_cut, double decay);

}  // namespace dnls
