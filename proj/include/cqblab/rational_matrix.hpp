#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <vector>

// Boost 1.74's mixed rational/integer operator== recurses forever under
// C++20 rewritten comparisons; exact non-template overloads win resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
}  // namespace boost

namespace cqblab {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Small dense square matrix with exact rational entries. Only what the
// matrix realizations of the classical algebras need.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim) {}

  static RationalMatrix unit(int dim, int row, int col);

  int dim() const { return dim_; }

  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * dim_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * dim_ + j]; }

  RationalMatrix operator+(const RationalMatrix& other) const;
  RationalMatrix operator-(const RationalMatrix& other) const;
  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalMatrix operator*(const Rational& s) const;
  RationalMatrix operator/(const Rational& s) const;
  bool operator==(const RationalMatrix& other) const = default;

  RationalMatrix transpose() const;
  Rational trace() const;
  bool is_zero() const;
  bool is_diagonal() const;

 private:
  int dim_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix bracket(const RationalMatrix& x, const RationalMatrix& y);

// tr(XY) without forming the product.
Rational trace_form(const RationalMatrix& x, const RationalMatrix& y);

}  // namespace cqblab
