#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "utilagg/error.hpp"
#include "utilagg/rational.hpp"

namespace utilagg {

/// Index of a state within its StateSpace (canonical state order).
using State = std::size_t;

/// A real-valued function on a finite state space, stored by state index.
class UtilityTable {
 public:
  UtilityTable() = default;
  explicit UtilityTable(std::vector<Rational> values) : values_(std::move(values)) {}

  static UtilityTable constant(std::size_t size, const Rational& c) {
    return UtilityTable(std::vector<Rational>(size, c));
  }

  template <class F>
  static UtilityTable generate(std::size_t size, F&& f) {
    std::vector<Rational> v;
    v.reserve(size);
    for (State s = 0; s < size; ++s) v.push_back(f(s));
    return UtilityTable(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const Rational& operator[](State s) const { return values_[s]; }
  const Rational& at(State s) const {
    if (s >= values_.size()) throw DomainError("state index out of range");
    return values_[s];
  }
  std::span<const Rational> values() const noexcept { return values_; }

  bool is_constant() const {
    for (const auto& v : values_)
      if (v != values_.front()) return false;
    return true;
  }

  /// alpha * u + beta.
  UtilityTable affine(const Rational& alpha, const Rational& beta) const {
    std::vector<Rational> v;
    v.reserve(values_.size());
    for (const auto& x : values_) v.push_back(alpha * x + beta);
    return UtilityTable(std::move(v));
  }

  friend UtilityTable operator+(const UtilityTable& a, const UtilityTable& b) {
    require_same_size(a, b);
    std::vector<Rational> v;
    v.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(a.values_[i] + b.values_[i]);
    return UtilityTable(std::move(v));
  }
  friend UtilityTable operator-(const UtilityTable& a, const UtilityTable& b) {
    require_same_size(a, b);
    std::vector<Rational> v;
    v.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(a.values_[i] - b.values_[i]);
    return UtilityTable(std::move(v));
  }
  friend UtilityTable operator*(const Rational& c, const UtilityTable& a) { return a.affine(c, Rational(0)); }

  friend bool operator==(const UtilityTable&, const UtilityTable&) = default;

 private:
  static void require_same_size(const UtilityTable& a, const UtilityTable& b) {
    if (a.size() != b.size()) throw DomainError("utility tables defined on different spaces");
  }
  std::vector<Rational> values_;
};

/// Sum of a_i * u_i + b, evaluated pointwise.
inline UtilityTable linear_combination(std::span<const UtilityTable> tables, std::span<const Rational> weights,
                                       const Rational& constant) {
  if (tables.size() != weights.size()) throw DomainError("weight count differs from table count");
  std::size_t size = tables.empty() ? 0 : tables.front().size();
  std::vector<Rational> v(size, constant);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].size() != size) throw DomainError("utility tables defined on different spaces");
    for (std::size_t s = 0; s < size; ++s) v[s] += weights[i] * tables[i][s];
  }
  return UtilityTable(std::move(v));
}

/// Coefficients (a_1..a_n, b) of an aggregation identity v = sum a_i u_i + b.
struct Weights {
  std::vector<Rational> a;
  Rational b;

  UtilityTable apply(std::span<const UtilityTable> tables) const { return linear_combination(tables, a, b); }
  friend bool operator==(const Weights&, const Weights&) = default;
};

}  // namespace utilagg
