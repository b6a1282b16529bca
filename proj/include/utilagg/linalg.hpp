#pragma once

/// @file linalg.hpp
/// Dense exact linear algebra over Rational.
///
/// Two elimination routes are kept on purpose: `solve` runs fraction-free
/// (Bareiss) elimination on an integer-scaled copy of the system, while
/// `rref`, `null_space` and `inverse` use Gauss-Jordan over rationals.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "utilagg/error.hpp"
#include "utilagg/rational.hpp"

namespace utilagg {

using Vector = std::vector<Rational>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) throw DomainError("ragged matrix rows");
      for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }
  static Matrix from_columns(const std::vector<Vector>& cols) { return from_rows(cols).transposed(); }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const { return Vector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }
  Vector col(std::size_t c) const {
    Vector v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// Columns listed in `idx`, in that order.
  Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < idx.size(); ++k) m(r, k) = (*this)(r, idx[k]);
    return m;
  }
  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t c = 0; c < cols_; ++c) m(k, c) = (*this)(idx[k], c);
    return m;
  }

  Vector operator*(std::span<const Rational> x) const {
    if (x.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    Vector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) y[r] += (*this)(r, c) * x[c];
    return y;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DomainError("dot product dimension mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form (Gauss-Jordan, first nonzero pivot per column).
inline Echelon rref(Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    Rational inv = Rational(1) / m(r, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(i, k) -= f * m(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Basis of {x : m x = 0}, one vector per free column, each with a 1 in its
/// free coordinate.
inline std::vector<Vector> null_space(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector x(m.cols());
    x[f] = Rational(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

inline Matrix inverse(const Matrix& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) throw DomainError("inverse of a non-square matrix");
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      aug(r, c) = b(r, c);
      aug(r, n + c) = r == c ? Rational(1) : Rational(0);
    }
  Echelon e = rref(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

/// Solves m x = rhs exactly by fraction-free elimination. Free variables are
/// set to 0; returns nullopt when the system is inconsistent.
inline std::optional<Vector> solve(const Matrix& m, std::span<const Rational> rhs) {
  if (rhs.size() != m.rows()) throw DomainError("right-hand side dimension mismatch");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t width = cols + 1;

  // Integer-scale each augmented row by the lcm of its denominators.
  std::vector<mpz_class> a(rows * width);
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * width + c]; };
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).raw().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), rhs[r].raw().get_den_mpz_t());
    for (std::size_t c = 0; c < width; ++c) {
      const mpq_class& q = c < cols ? m(r, c).raw() : rhs[r].raw();
      at(r, c) = q.get_num() * (l / q.get_den());
    }
  }

  mpz_class prev = 1;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t k = 0; k < width; ++k) std::swap(at(p, k), at(r, k));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < width; ++k) {
        mpz_class t = at(r, c) * at(i, k) - at(i, c) * at(r, k);
        mpz_divexact(at(i, k).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (at(i, cols) != 0) return std::nullopt;

  Vector x(cols);
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t c = pivots[k];
    mpq_class acc(at(k, cols));
    for (std::size_t j = c + 1; j < cols; ++j)
      if (at(k, j) != 0) acc -= mpq_class(at(k, j)) * x[j].raw();
    acc /= mpq_class(at(k, c));
    x[c] = Rational(std::move(acc));
  }
  return x;
}

}  // namespace utilagg
