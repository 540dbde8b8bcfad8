#include "dnls/random.hpp"

#include <cmath>
#include <numbers>

#include "dnls/spectral.hpp"

namespace dnls {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalise(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix_finalise(seed + kGolden * (stream + 1))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return splitmix_finalise(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::fork(std::uint64_t stream) const { return CounterRng(key_, stream); }

ComplexField random_schwartz_field(const GridPtr& grid, CounterRng& rng, int bumps,
                                   double spread, double max_wavenumber, double l2_target) {
  ComplexField out(grid);
  const auto x = grid->x();
  for (int b = 0; b < bumps; ++b) {
    const cplx amp(rng.normal(), rng.normal());
    const double x0 = grid->center() + rng.uniform(-spread, spread);
    const double width = rng.uniform(0.7, 1.5);
    const double k = rng.uniform(-max_wavenumber, max_wavenumber);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = (x[j] - x0) / width;
      out[j] += amp * std::exp(-d * d) * std::polar(1.0, k * x[j]);
    }
  }
  if (l2_target > 0.0) {
    const double n = l2_norm(out);
    if (n > 0.0) out *= l2_target / n;
  }
  return out;
}

ComplexField random_band_field(const GridPtr& grid, CounterRng& rng, double xi_cut, double decay) {
  ComplexField hat(grid, Side::fourier);
  const auto xi = grid->wavenumbers();
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const cplx g(rng.normal(), rng.normal());
    if (j == 0 || std::abs(xi[j]) > xi_cut || j == grid->nyquist_index()) continue;
    hat[j] = g * std::pow(1.0 + xi[j] * xi[j], -0.5 * decay);
  }
  return hat.to_physical();
}

}  // namespace dnls
