#pragma once

/// @file rational.hpp
/// Exact rational scalar behind all numeric data in the library.
///
/// Backed by GMP's mpq_class, which keeps values canonical (gcd(|p|, q) = 1,
/// q > 0) after every operation. Text form is always "p/q", including
/// integers ("3/1"), so serialized files never depend on formatting choices.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "utilagg/error.hpp"

namespace utilagg {

class Rational {
 public:
  Rational() = default;
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : value_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw ParseError("zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "p/q" or "p" (optional leading '-'). Rejects q = 0 and anything
  /// that is not plain decimal digits.
  static Rational parse(std::string_view text) {
    auto digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      num = text.substr(0, slash);
      den = text.substr(slash + 1);
    }
    std::string_view num_digits = num;
    if (!num_digits.empty() && num_digits.front() == '-') num_digits.remove_prefix(1);
    if (!digits(num_digits) || !digits(den))
      throw ParseError("malformed rational \"" + std::string(text) + "\"");
    mpz_class p(std::string(num), 10);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    mpq_class v(p, q);
    v.canonicalize();
    return Rational(std::move(v));
  }

  const mpq_class& raw() const noexcept { return value_; }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const noexcept { return sgn(value_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  std::string str() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// 2^(-m).
inline Rational dyadic_unit(unsigned m) {
  mpz_class den = 1;
  den <<= m;
  return Rational(mpq_class(mpz_class(1), den));
}

/// Returns m when r = 2^(-m) for some m >= 0.
inline std::optional<unsigned> dyadic_exponent(const Rational& r) {
  if (r.sign() <= 0 || r.numerator() != 1) return std::nullopt;
  mpz_class d = r.denominator();
  unsigned m = 0;
  while (d > 1) {
    if (mpz_odd_p(d.get_mpz_t())) return std::nullopt;
    d >>= 1;
    ++m;
  }
  return m;
}

/// Square root when r is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r.sign() < 0) return std::nullopt;
  mpz_class p = r.numerator(), q = r.denominator();
  if (!mpz_perfect_square_p(p.get_mpz_t()) || !mpz_perfect_square_p(q.get_mpz_t())) return std::nullopt;
  mpz_class sp, sq;
  mpz_sqrt(sp.get_mpz_t(), p.get_mpz_t());
  mpz_sqrt(sq.get_mpz_t(), q.get_mpz_t());
  return Rational(mpq_class(sp, sq));
}

struct RationalHash {
  std::size_t operator()(const Rational& r) const noexcept {
    std::size_t h = mpz_get_ui(r.raw().get_num_mpz_t()) * 0x9E3779B97F4A7C15ULL;
    h ^= mpz_get_ui(r.raw().get_den_mpz_t()) + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
    if (r.sign() < 0) h = ~h;
    return h;
  }
};

}  // namespace utilagg
