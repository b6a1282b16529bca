#pragma once

/// @file alt.hpp
/// Alt systems: axiom checks (consistency, crossover), representation by a
/// utility table, and reconstruction of a cardinal scale from a dyadic
/// standard sequence.
///
/// Continuity of the system (closedness in X^4) is not checked; on a finite
/// grid it holds vacuously. The grid-richness precondition of
/// reconstruct_alt_utility stands in for the existence side of the
/// representation theorem: only its uniqueness content is computed here.
///
/// Endpoint states (minimum or maximum of the scale) are bracketed by the
/// same rule as interior states rather than by a separate branch.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "utilagg/alt_system.hpp"
#include "utilagg/core.hpp"

namespace utilagg {

/// Exhaustive scans run while |X|^k stays within exhaustive_limit^4;
/// larger instances are checked on `samples` random tuples.
struct ScanOptions {
  std::size_t exhaustive_limit = 16;
  std::uint64_t samples = std::uint64_t{1} << 18;
  std::uint64_t seed = 0x5eed;
};

template <class Witness>
struct ScanVerdict : Verdict<Witness> {
  std::uint64_t checked = 0;
  std::uint64_t total = 0;
  bool exhaustive() const noexcept { return checked == total; }
};

namespace detail {

inline std::uint64_t power_saturating(std::uint64_t base, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

/// Calls `visit(tuple)` on every k-tuple of states (lexicographic) or on a
/// random sample; stops at the first tuple for which it returns false.
template <std::size_t K, class Visit>
ScanVerdict<std::array<State, K>> scan_tuples(std::size_t states, const ScanOptions& opt, Visit&& visit) {
  ScanVerdict<std::array<State, K>> out;
  out.total = power_saturating(states, K);
  const std::uint64_t budget = power_saturating(opt.exhaustive_limit, 4);
  std::array<State, K> t{};
  if (states == 0) return out;
  if (out.total <= budget) {
    for (std::uint64_t c = 0; c < out.total; ++c) {
      std::uint64_t rest = c;
      for (std::size_t i = K; i-- > 0;) {
        t[i] = rest % states;
        rest /= states;
      }
      ++out.checked;
      if (!visit(t)) {
        out.witness = t;
        return out;
      }
    }
    return out;
  }
  std::mt19937_64 rng(opt.seed);
  for (std::uint64_t c = 0; c < opt.samples; ++c) {
    for (auto& x : t) x = rng() % states;
    ++out.checked;
    if (!visit(t)) {
      out.witness = t;
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Completeness and transitivity of >= on pairs, over 6-tuples
/// (x,y, z,w, p,q). Exhaustive only for very small spaces.
inline ScanVerdict<std::array<State, 6>> check_alt_weak_order(const AltSystem& a, const ScanOptions& opt = {}) {
  return detail::scan_tuples<6>(a.size(), opt, [&](const std::array<State, 6>& t) {
    auto [x, y, z, w, p, q] = t;
    if (!a.ge(x, y, z, w) && !a.ge(z, w, x, y)) return false;
    if (a.ge(x, y, z, w) && a.ge(z, w, p, q) && !a.ge(x, y, p, q)) return false;
    return true;
  });
}

/// [x,y] >= [y,y] <=> [x,z] >= [y,z]. Witness (x, y, z).
inline ScanVerdict<std::array<State, 3>> check_consistency(const AltSystem& a, const ScanOptions& opt = {}) {
  return detail::scan_tuples<3>(a.size(), opt, [&](const std::array<State, 3>& t) {
    auto [x, y, z] = t;
    return a.ge(x, y, y, y) == a.ge(x, z, y, z);
  });
}

/// [x,y] = [z,w] <=> [x,z] = [y,w]. Witness (x, y, z, w).
inline ScanVerdict<std::array<State, 4>> check_crossover(const AltSystem& a, const ScanOptions& opt = {}) {
  return detail::scan_tuples<4>(a.size(), opt, [&](const std::array<State, 4>& t) {
    auto [x, y, z, w] = t;
    return a.eq(x, y, z, w) == a.eq(x, z, y, w);
  });
}

/// [x,y] >= [z,w] <=> u(x)-u(y) >= u(z)-u(w) for every quadruple.
///
/// When `a` is generated by a table g the check is exact and quadratic:
/// u represents a iff u-differences are a strictly increasing function of
/// g-differences. Oracle systems fall back to the quadruple scan.
inline ScanVerdict<std::array<State, 4>> alt_represents(const UtilityTable& u, const AltSystem& a,
                                                        const ScanOptions& opt = {}) {
  if (u.size() != a.size()) throw DomainError("table and alt system defined on different spaces");
  const std::size_t m = u.size();
  if (const UtilityTable* g = a.utility()) {
    ScanVerdict<std::array<State, 4>> out;
    out.total = out.checked = detail::power_saturating(m, 4);
    // g-difference -> (u-difference, one pair realizing it)
    std::map<Rational, std::pair<Rational, StatePair>> by_g;
    for (State x = 0; x < m; ++x)
      for (State y = 0; y < m; ++y) {
        Rational dg = (*g)[x] - (*g)[y];
        Rational du = u[x] - u[y];
        auto [it, fresh] = by_g.try_emplace(dg, du, StatePair{x, y});
        if (!fresh && it->second.first != du) {
          out.witness = std::array<State, 4>{x, y, it->second.second.first, it->second.second.second};
          return out;
        }
      }
    for (auto it = by_g.begin(); std::next(it) != by_g.end(); ++it) {
      auto hi = std::next(it);
      if (!(hi->second.first > it->second.first)) {
        const auto& [x, y] = hi->second.second;
        const auto& [z, w] = it->second.second;
        out.witness = std::array<State, 4>{x, y, z, w};
        return out;
      }
    }
    return out;
  }
  return detail::scan_tuples<4>(m, opt, [&](const std::array<State, 4>& t) {
    auto [x, y, z, w] = t;
    return a.ge(x, y, z, w) == (u[x] - u[y] >= u[z] - u[w]);
  });
}

// ---------------------------------------------------------------------------
// Standard sequences

/// Dyadic chain z^s of states with equal Alt increments between neighbours.
struct StandardSequence {
  State z0;
  State z1;
  unsigned depth = 0;
  /// value s -> state z^s, covering every multiple of 2^-depth in [0,1]
  /// and extended beyond it while the next equal step exists.
  std::map<Rational, State> points;
};

struct AltReconstruction {
  UtilityTable utility;        // u(z0) = 0, u(z1) = 1
  StandardSequence sequence;
  bool exact = true;           // every state indifferent to some z^s
  Rational bracket_width;      // 0 when exact, else 2^-depth
  std::vector<bool> exact_states;
};

/// Thrown when the grid lacks a state the construction needs.
class MissingStateError : public DomainError {
 public:
  explicit MissingStateError(const Rational& value)
      : DomainError("no state z^s with s = " + value.str() + " in the grid"), value_(value) {}
  const Rational& value() const noexcept { return value_; }

 private:
  Rational value_;
};

/// Rebuilds the normalized Alt utility (u(z0) = 0, u(z1) = 1) from
/// comparisons alone. Each state z gets the largest sequence value r with
/// z weakly above z^r; the value is exact when z ~ z^r and bracketed in
/// (r, r + 2^-depth) otherwise.
inline AltReconstruction reconstruct_alt_utility(const AltSystem& a, State z0, State z1, unsigned depth) {
  const std::size_t m = a.size();
  if (z0 >= m || z1 >= m) throw DomainError("anchor state out of range");
  if (depth > 24) throw DomainError("standard sequence depth above 24");
  auto weakly_above = [&](State x, State y) { return a.ge(x, y, y, y); };
  if (a.eq(z1, z0, z0, z0)) throw DomainError("z1 ~ z0: the anchors are indifferent");
  if (!a.gt(z1, z0, z0, z0)) throw DomainError("z1 is not strictly better than z0");

  StandardSequence seq{z0, z1, depth, {}};
  seq.points.emplace(Rational(0), z0);
  seq.points.emplace(Rational(1), z1);
  for (unsigned k = 1; k <= depth; ++k) {
    const Rational unit = dyadic_unit(k);
    for (long l = 1; l < (1L << k); l += 2) {
      State lo = seq.points.at(unit * Rational(l - 1));
      State hi = seq.points.at(unit * Rational(l + 1));
      std::optional<State> mid;
      for (State s = 0; s < m && !mid; ++s)
        if (a.eq(hi, s, s, lo)) mid = s;
      if (!mid) throw MissingStateError(unit * Rational(l));
      seq.points.emplace(unit * Rational(l), *mid);
    }
  }
  const Rational step = dyadic_unit(depth);
  const State unit_top = seq.points.at(step);
  for (Rational r = Rational(1);;) {  // upward: [s, z^r] = [z^step, z^0]
    State cur = seq.points.at(r);
    std::optional<State> next;
    for (State s = 0; s < m && !next; ++s)
      if (a.eq(s, cur, unit_top, z0)) next = s;
    if (!next) break;
    r += step;
    seq.points.emplace(r, *next);
  }
  for (Rational r = Rational(0);;) {  // downward: [z^r, s] = [z^step, z^0]
    State cur = seq.points.at(r);
    std::optional<State> next;
    for (State s = 0; s < m && !next; ++s)
      if (a.eq(cur, s, unit_top, z0)) next = s;
    if (!next) break;
    r -= step;
    seq.points.emplace(r, *next);
  }
  for (auto it = seq.points.begin(); std::next(it) != seq.points.end(); ++it)
    if (!a.eq(std::next(it)->second, it->second, unit_top, z0))
      throw DomainError("standard sequence not equally spaced between s = " + it->first.str() + " and s = " +
                        std::next(it)->first.str());

  AltReconstruction out;
  out.sequence = seq;
  out.exact_states.assign(m, false);
  std::vector<Rational> values(m);
  for (State z = 0; z < m; ++z) {
    auto below = seq.points.end();
    for (auto it = seq.points.begin(); it != seq.points.end(); ++it)
      if (weakly_above(z, it->second)) below = it;
    if (below == seq.points.end())
      throw DomainError("state " + std::to_string(z) + " lies below the standard sequence");
    values[z] = below->first;
    if (weakly_above(below->second, z)) {
      out.exact_states[z] = true;
    } else {
      if (std::next(below) == seq.points.end())
        throw DomainError("state " + std::to_string(z) + " lies above the standard sequence");
      out.exact = false;
    }
  }
  out.utility = UtilityTable(std::move(values));
  out.bracket_width = out.exact ? Rational(0) : step;
  return out;
}

}  // namespace utilagg
