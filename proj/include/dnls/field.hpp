#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dnls/grid.hpp"

namespace dnls {

enum class Side { physical, fourier };

/// Complex samples on a Grid, either nodal values or FFT coefficients.
class ComplexField {
 public:
  explicit ComplexField(GridPtr grid, Side side = Side::physical);
  ComplexField(GridPtr grid, std::vector<cplx> values, Side side = Side::physical);

  /// Samples f(x_j) on the grid nodes.
  static ComplexField from_function(GridPtr grid, const std::function<cplx(double)>& f);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  Side side() const noexcept { return side_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx& operator[](std::size_t j) { return values_[j]; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }

  ComplexField to_fourier() const;
  ComplexField to_physical() const;

  ComplexField conj() const;
  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cplx scale);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }
  friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }

 private:
  void require_compatible(const ComplexField& other) const;

  GridPtr grid_;
  std::vector<cplx> values_;
  Side side_;
};

/// Pointwise product of two physical-side fields.
ComplexField pointwise_product(const ComplexField& a, const ComplexField& b);

}  // namespace dnls
