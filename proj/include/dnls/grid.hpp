#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;

/// A power of two 2^exponent. Homogeneous Littlewood-Paley blocks use any
/// integer exponent, inhomogeneous blocks use exponent >= 0.
struct Dyadic {
  int exponent = 0;

  double value() const;
  static Dyadic from_value(double n);  // throws PreconditionError if not 2^k

  friend bool operator==(Dyadic, Dyadic) = default;
  friend auto operator<=>(Dyadic, Dyadic) = default;
};

class FftPlans;

/// Uniform periodic grid on [center - L/2, center + L/2).
///
/// Wavenumbers are stored in FFT order: index j < n/2 holds 2*pi*j/L and index
/// j >= n/2 holds 2*pi*(j - n)/L, so index n/2 is the single Nyquist mode
/// -pi*n/L. Transforms are unnormalised forward, 1/n-normalised inverse.
class Grid {
 public:
  Grid(std::size_t n_points, double box_length, double center);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  std::size_t size() const noexcept { return n_; }
  double box_length() const noexcept { return length_; }
  double center() const noexcept { return center_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  double left_edge() const noexcept { return center_ - 0.5 * length_; }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> wavenumbers() const noexcept { return xi_; }
  /// Wavenumbers sorted ascending, -n/2 ... n/2-1 in units of 2*pi/L.
  std::vector<double> sorted_wavenumbers() const;

  std::size_t nyquist_index() const noexcept { return n_ / 2; }
  /// |xi| of the Nyquist mode, pi*n/L.
  double xi_max() const noexcept;
  /// Smallest nonzero |xi|, 2*pi/L.
  double xi_min() const noexcept;

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  bool same_layout(const Grid& other) const noexcept;

 private:
  std::size_t n_;
  double length_;
  double center_;
  std::vector<double> x_;
  std::vector<double> xi_;
  std::unique_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// n_points must be a power of two >= 8 and box_length > 0; otherwise
/// ConfigError.
GridPtr make_grid(std::size_t n_points, double box_length, double center = 0.0);

}  // namespace dnls
