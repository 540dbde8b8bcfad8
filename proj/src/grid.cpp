#include "dnls/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "dnls/errors.hpp"

namespace dnls {

namespace {

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

double Dyadic::value() const { return std::ldexp(1.0, exponent); }

Dyadic Dyadic::from_value(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw PreconditionError("dyadic value must be positive and finite");
  }
  int e = 0;
  const double m = std::frexp(n, &e);
  if (m != 0.5) {
    throw PreconditionError("value " + std::to_string(n) + " is not a power of two");
  }
  return Dyadic{e - 1};
}

class FftPlans {
 public:
  explicit FftPlans(std::size_t n) {
    std::vector<cplx> a(n), b(n);
    const std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    inverse_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    forward_inplace_ =
        fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    inverse_inplace_ =
        fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    const std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_destroy_plan(forward_inplace_);
    fftw_destroy_plan(inverse_inplace_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void run(bool forward, const cplx* in, cplx* out) const {
    // New-array execution must match the in-place/out-of-place shape of the plan.
    const fftw_plan p = in == out ? (forward ? forward_inplace_ : inverse_inplace_)
                                  : (forward ? forward_ : inverse_);
    fftw_execute_dft(p, as_fftw(in), as_fftw(out));
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
  fftw_plan forward_inplace_ = nullptr;
  fftw_plan inverse_inplace_ = nullptr;
};

Grid::Grid(std::size_t n_points, double box_length, double center)
    : n_(n_points), length_(box_length), center_(center), x_(n_points), xi_(n_points) {
  const double dx = spacing();
  const double k0 = 2.0 * std::numbers::pi / length_;
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    x_[j] = left_edge() + static_cast<double>(j) * dx;
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n_);
    xi_[j] = k0 * static_cast<double>(m);
  }
  plans_ = std::make_unique<FftPlans>(n_);
}

Grid::~Grid() = default;

std::vector<double> Grid::sorted_wavenumbers() const {
  std::vector<double> s = xi_;
  std::sort(s.begin(), s.end());
  return s;
}

double Grid::xi_max() const noexcept {
  return std::numbers::pi * static_cast<double>(n_) / length_;
}

double Grid::xi_min() const noexcept { return 2.0 * std::numbers::pi / length_; }

void Grid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  plans_->run(true, in.data(), out.data());
}

void Grid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  plans_->run(false, in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= scale;
}

bool Grid::same_layout(const Grid& other) const noexcept {
  return n_ == other.n_ && length_ == other.length_ && center_ == other.center_;
}

GridPtr make_grid(std::size_t n_points, double box_length, double center) {
  std::vector<std::string> errors;
  if (n_points < 8 || !std::has_single_bit(n_points)) {
    errors.push_back("n_points must be a power of two >= 8 (got " + std::to_string(n_points) + ")");
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    errors.push_back("box_length must be positive (got " + std::to_string(box_length) + ")");
  }
  if (!std::isfinite(center)) errors.push_back("center must be finite");
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return std::make_shared<const Grid>(n_points, box_length, center);
}

}  // namespace dnls
