#include "dnls/field.hpp"

#include <algorithm>
#include <cmath>

#include "dnls/errors.hpp"

namespace dnls {

ComplexField::ComplexField(GridPtr grid, Side side)
    : grid_(std::move(grid)), values_(grid_->size()), side_(side) {}

ComplexField::ComplexField(GridPtr grid, std::vector<cplx> values, Side side)
    : grid_(std::move(grid)), values_(std::move(values)), side_(side) {
  if (values_.size() != grid_->size()) {
    throw PreconditionError("field length does not match grid size");
  }
}

ComplexField ComplexField::from_function(GridPtr grid, const std::function<cplx(double)>& f) {
  ComplexField out(grid);
  const auto x = grid->x();
  for (std::size_t j = 0; j < x.size(); ++j) out.values_[j] = f(x[j]);
  return out;
}

ComplexField ComplexField::to_fourier() const {
  if (side_ == Side::fourier) return *this;
  ComplexField out(grid_, Side::fourier);
  grid_->forward(values_, out.values_);
  return out;
}

ComplexField ComplexField::to_physical() const {
  if (side_ == Side::physical) return *this;
  ComplexField out(grid_, Side::physical);
  grid_->inverse(values_, out.values_);
  return out;
}

ComplexField ComplexField::conj() const {
  if (side_ != Side::physical) throw PreconditionError("conj() requires a physical-side field");
  ComplexField out = *this;
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

bool ComplexField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double ComplexField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

void ComplexField::require_compatible(const ComplexField& other) const {
  if (grid_ != other.grid_ && !grid_->same_layout(*other.grid_)) {
    throw PreconditionError("fields live on different grids");
  }
  if (side_ != other.side_) throw PreconditionError("fields are on different sides");
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

ComplexField pointwise_product(const ComplexField& a, const ComplexField& b) {
  if (a.side() != Side::physical || b.side() != Side::physical) {
    throw PreconditionError("pointwise_product requires physical-side fields");
  }
  if (a.size() != b.size()) throw PreconditionError("fields live on different grids");
  ComplexField out(a.grid_ptr());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace dnls
