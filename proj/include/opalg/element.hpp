#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opalg/scalar.hpp"

namespace opalg {

/// Coordinate vector of an algebra element relative to the algebra's ordered
/// basis.
class Element {
 public:
  Element() = default;
  explicit Element(std::size_t dim) : coords_(dim) {}
  explicit Element(std::vector<Scalar> coords) : coords_(std::move(coords)) {}

  static Element basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return coords_.size(); }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  Scalar& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Scalar> coords() const { return coords_; }

  bool is_zero() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(const Scalar& factor);
  /// this += factor * other
  Element& add_scaled(const Scalar& factor, const Element& other);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& s, Element a) { return a *= s; }
  friend Element operator-(Element a) { return a *= Scalar(-1); }
  friend bool operator==(const Element& a, const Element& b) = default;

 private:
  std::vector<Scalar> coords_;
};

/// "(1, -1/2, 0)"
std::string to_string(const Element& element);

}  // namespace opalg
