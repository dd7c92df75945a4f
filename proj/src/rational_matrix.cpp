#include "cqblab/rational_matrix.hpp"

#include <stdexcept>

namespace cqblab {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

RationalMatrix RationalMatrix::unit(int dim, int row, int col) {
  RationalMatrix m(dim);
  m(row, col) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& other) const {
  RationalMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& other) const {
  RationalMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("RationalMatrix: dimension mismatch");
  RationalMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < dim_; ++j) {
        const Rational& b = other(k, j);
        if (b != 0) out(i, j) += a * b;
      }
    }
  return out;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
  RationalMatrix out(*this);
  for (auto& v : out.data_) v *= s;
  return out;
}

RationalMatrix RationalMatrix::operator/(const Rational& s) const {
  RationalMatrix out(*this);
  for (auto& v : out.data_) v /= s;
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Rational RationalMatrix::trace() const {
  Rational t = 0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool RationalMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

bool RationalMatrix::is_diagonal() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

RationalMatrix bracket(const RationalMatrix& x, const RationalMatrix& y) { return x * y - y * x; }

Rational trace_form(const RationalMatrix& x, const RationalMatrix& y) {
  Rational t = 0;
  for (int i = 0; i < x.dim(); ++i)
    for (int k = 0; k < x.dim(); ++k) {
      if (x(i, k) == 0 || y(k, i) == 0) continue;
      t += x(i, k) * y(k, i);
    }
  return t;
}

}  // namespace cqblab
