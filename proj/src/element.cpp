#include "opalg/element.hpp"

#include <algorithm>

namespace opalg {

namespace {

void require_same_dim(const Element& a, const Element& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("element dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

Element Element::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  Element e(dim);
  e.coords_[index] = 1;
  return e;
}

bool Element::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Scalar& c) { return sgn(c) == 0; });
}

Element& Element::operator+=(const Element& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Element& Element::operator*=(const Scalar& factor) {
  for (auto& c : coords_) c *= factor;
  return *this;
}

Element& Element::add_scaled(const Scalar& factor, const Element& other) {
  require_same_dim(*this, other);
  if (sgn(factor) == 0) return *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(other.coords_[i]) != 0) coords_[i] += factor * other.coords_[i];
  }
  return *this;
}

std::string to_string(const Element& element) {
  std::string out = "(";
  for (std::size_t i = 0; i < element.dim(); ++i) {
    if (i) out += ", ";
    out += to_string(element[i]);
  }
  return out + ")";
}

}  // namespace opalg
