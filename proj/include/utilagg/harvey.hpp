#pragma once

/// @file harvey.hpp
/// Weighted-sum aggregation of Alt utilities: axiom (I), the difference map
/// V(x,y) = F(U(x,y)), its functional equations, slope extraction and the
/// constant term.
///
/// Intervals of the continuum are replaced by finite grids. The map needs
/// every grid value between a range's endpoints to be realized; that
/// richness is taken as a precondition, and semi-separability guarantees
/// that every difference vector in J = prod J_i occurs.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "utilagg/core.hpp"
#include "utilagg/linalg.hpp"

namespace utilagg {

namespace detail {

inline Vector u_vector(const Profile& p, State x) {
  Vector c;
  c.reserve(p.n());
  for (const auto& u : p.agents) c.push_back(u[x]);
  return c;
}

inline Vector difference(const Vector& a, const Vector& b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline std::string format_vector(const Vector& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + c[i].str();
  return s + ")";
}

}  // namespace detail

/// Equal u_i-differences for every i imply equal v-differences. Witness
/// (x, y, z, w) with U(x,y) = U(z,w) and V(x,y) != V(z,w); (z, w) is the
/// earlier pair in state order.
inline Verdict<std::array<State, 4>> check_axiom_I(const Profile& p) {
  p.validate(p.ethical.size());
  const std::size_t m = p.ethical.size();
  std::map<Vector, std::pair<Rational, StatePair>> seen;
  for (State x = 0; x < m; ++x)
    for (State y = 0; y < m; ++y) {
      Vector c = detail::difference(detail::u_vector(p, x), detail::u_vector(p, y));
      Rational dv = p.ethical[x] - p.ethical[y];
      auto [it, fresh] = seen.try_emplace(std::move(c), dv, StatePair{x, y});
      if (!fresh && it->second.first != dv)
        return Verdict<std::array<State, 4>>::fail({x, y, it->second.second.first, it->second.second.second});
    }
  return Verdict<std::array<State, 4>>::ok();
}

/// F on every realized difference vector c = U(x,y), with V(x,y) = F(c).
class DifferenceMap {
 public:
  DifferenceMap(std::size_t n, std::map<Vector, Rational> table, std::vector<Vector> points)
      : n_(n), table_(std::move(table)), points_(std::move(points)) {
    ranges_.resize(n_);
    for (const auto& pt : points_)
      for (std::size_t i = 0; i < n_; ++i) ranges_[i].insert(pt[i]);
    diffs_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (const auto& a : ranges_[i])
        for (const auto& b : ranges_[i]) diffs_[i].insert(a - b);
  }

  std::size_t n() const noexcept { return n_; }
  const std::map<Vector, Rational>& table() const noexcept { return table_; }
  /// Distinct realized utility vectors u(x), ascending.
  const std::vector<Vector>& points() const noexcept { return points_; }
  /// I_i = u_i(X).
  const std::set<Rational>& range(std::size_t i) const { return ranges_.at(i); }
  /// J_i = I_i - I_i.
  const std::set<Rational>& differences(std::size_t i) const { return diffs_.at(i); }

  std::optional<Rational> value(const Vector& c) const {
    auto it = table_.find(c);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  Rational at(const Vector& c) const {
    auto v = value(c);
    if (!v) throw DomainError("difference vector " + detail::format_vector(c) + " is not realized");
    return *v;
  }

  /// F_i(c) = F(c e_i).
  Rational component(std::size_t i, const Rational& c) const {
    Vector e(n_);
    e.at(i) = c;
    return at(e);
  }

  /// Overwrites one realized entry; used to probe the checks.
  void set_value(const Vector& c, const Rational& v) {
    auto it = table_.find(c);
    if (it == table_.end()) throw DomainError("difference vector " + detail::format_vector(c) + " is not realized");
    it->second = v;
  }

 private:
  std::size_t n_;
  std::map<Vector, Rational> table_;
  std::vector<Vector> points_;
  std::vector<std::set<Rational>> ranges_;
  std::vector<std::set<Rational>> diffs_;
};

/// Tabulates F. Throws HypothesisError("semi-separability") when the agents'
/// orders are not semi-separable and HypothesisError("axiom (I)") naming the
/// two conflicting pairs when F is not well defined.
inline DifferenceMap build_difference_map(const Profile& p, const SemiSeparabilityOptions& opt = {}) {
  p.validate(p.ethical.size());
  const std::size_t m = p.ethical.size();
  {
    std::vector<WeakOrder> orders;
    for (const auto& u : p.agents) orders.push_back(WeakOrder::by_utility(u));
    auto ss = check_semi_separable(orders, opt);
    if (!ss.pass()) {
      std::string prof;
      for (std::size_t i = 0; i < ss.witness->size(); ++i) prof += (i ? "," : "") + std::to_string((*ss.witness)[i]);
      throw HypothesisError("semi-separability", "no state matches the profile (" + prof + ")");
    }
  }
  std::map<Vector, std::pair<Rational, StatePair>> seen;
  std::set<Vector> pts;
  std::vector<Vector> uvec(m);
  for (State x = 0; x < m; ++x) {
    uvec[x] = detail::u_vector(p, x);
    pts.insert(uvec[x]);
  }
  for (State x = 0; x < m; ++x)
    for (State y = 0; y < m; ++y) {
      Rational dv = p.ethical[x] - p.ethical[y];
      auto [it, fresh] = seen.try_emplace(detail::difference(uvec[x], uvec[y]), dv, StatePair{x, y});
      if (!fresh && it->second.first != dv)
        throw HypothesisError("axiom (I)", "pairs (" + std::to_string(x) + "," + std::to_string(y) + ") and (" +
                                               std::to_string(it->second.second.first) + "," +
                                               std::to_string(it->second.second.second) +
                                               ") share U but differ in V");
    }
  std::map<Vector, Rational> table;
  for (auto& [c, entry] : seen) table.emplace(c, entry.first);
  return DifferenceMap(p.n(), std::move(table), std::vector<Vector>(pts.begin(), pts.end()));
}

struct ChainOptions {
  /// Exhaustive over all |I|^3 triples up to this many, sampled beyond.
  std::uint64_t exhaustive_budget = std::uint64_t{1} << 22;
  std::uint64_t samples = std::uint64_t{1} << 20;
  std::uint64_t seed = 0x5eed;
};

struct ChainVerdict : Verdict<std::array<Vector, 3>> {
  std::uint64_t checked = 0;
  std::uint64_t total = 0;
  bool exhaustive() const noexcept { return checked == total; }
};

/// F(c' - c) + F(c'' - c') = F(c'' - c) for c, c', c'' in I = u(X).
/// Witness (c, c', c'').
inline ChainVerdict verify_chain_rule(const DifferenceMap& dm, const ChainOptions& opt = {}) {
  const auto& pts = dm.points();
  const std::size_t k = pts.size();
  std::vector<Rational> g(k * k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) g[p * k + q] = dm.at(detail::difference(pts[q], pts[p]));
  ChainVerdict out;
  const std::uint64_t kk = k;
  out.total = kk * kk * kk;
  auto test = [&](std::size_t p, std::size_t q, std::size_t r) {
    ++out.checked;
    if (g[p * k + q] + g[q * k + r] == g[p * k + r]) return true;
    out.witness = std::array<Vector, 3>{pts[p], pts[q], pts[r]};
    return false;
  };
  if (out.total <= opt.exhaustive_budget) {
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = 0; q < k; ++q)
        for (std::size_t r = 0; r < k; ++r)
          if (!test(p, q, r)) return out;
    return out;
  }
  std::mt19937_64 rng(opt.seed);
  for (std::uint64_t s = 0; s < opt.samples; ++s)
    if (!test(rng() % k, rng() % k, rng() % k)) return out;
  return out;
}

/// F_i(0) = 0, F_i(-c) = -F_i(c) and F_i(c) + F_i(c') = F_i(c + c') on J_i.
/// Witness (c, c'); the first two identities report (0, 0) and (c, -c).
inline Verdict<std::pair<Rational, Rational>> verify_component_additivity(const DifferenceMap& dm, std::size_t i) {
  using V = Verdict<std::pair<Rational, Rational>>;
  const auto& J = dm.differences(i);
  std::map<Rational, Rational> f;
  for (const auto& c : J) f.emplace(c, dm.component(i, c));
  if (!f.at(Rational(0)).is_zero()) return V::fail({Rational(0), Rational(0)});
  for (const auto& [c, fc] : f)
    if (f.at(-c) != -fc) return V::fail({c, -c});
  for (const auto& [c, fc] : f)
    for (const auto& [d, fd] : f) {
      auto it = f.find(c + d);
      if (it != f.end() && fc + fd != it->second) return V::fail({c, d});
    }
  return V::ok();
}

/// F(c) = sum_i F_i(c_i) on every realized c. Witness c.
inline Verdict<Vector> verify_additive_decomposition(const DifferenceMap& dm) {
  for (const auto& [c, fc] : dm.table()) {
    Rational sum;
    for (std::size_t i = 0; i < dm.n(); ++i) sum += dm.component(i, c[i]);
    if (sum != fc) return Verdict<Vector>::fail(c);
  }
  return Verdict<Vector>::ok();
}

struct Slopes {
  std::vector<Rational> a;
  std::vector<bool> constant_agent;  // J_i = {0}: slope fixed at 1
};

/// a_i = F_i(h_i) / h_i for the smallest positive h_i in J_i, verified
/// against every c in J_i. Throws DomainError if F_i is not linear and
/// HypothesisError("Pareto") on a nonpositive slope.
inline Slopes extract_slopes(const DifferenceMap& dm) {
  Slopes s;
  for (std::size_t i = 0; i < dm.n(); ++i) {
    const auto& J = dm.differences(i);
    auto h = J.upper_bound(Rational(0));
    if (h == J.end()) {
      s.a.emplace_back(1);
      s.constant_agent.push_back(true);
      continue;
    }
    Rational a = dm.component(i, *h) / *h;
    for (const auto& c : J)
      if (dm.component(i, c) != a * c)
        throw DomainError("F_" + std::to_string(i + 1) + " is not linear: F(" + c.str() + ") = " +
                          dm.component(i, c).str() + " but slope " + a.str() + " predicts " + (a * c).str());
    if (a.sign() <= 0)
      throw HypothesisError("Pareto", "agent " + std::to_string(i + 1) + " has nonpositive slope " + a.str());
    s.a.push_back(std::move(a));
    s.constant_agent.push_back(false);
  }
  return s;
}

/// b = v(x*) - sum a_i u_i(x*) at the first state, then v = sum a_i u_i + b
/// is checked at every state.
inline Rational recover_constant(const Profile& p, std::span<const Rational> a) {
  p.validate(p.ethical.size());
  if (a.size() != p.n()) throw DomainError("weight count differs from agent count");
  Rational b = p.ethical[0];
  for (std::size_t i = 0; i < p.n(); ++i) b -= a[i] * p.agents[i][0];
  Weights w{std::vector<Rational>(a.begin(), a.end()), b};
  UtilityTable fitted = w.apply(p.agents);
  for (State s = 0; s < fitted.size(); ++s)
    if (fitted[s] != p.ethical[s])
      throw Error("recovered identity fails at state " + std::to_string(s) + ": " + fitted[s].str() +
                  " != " + p.ethical[s].str());
  return b;
}

struct HarveyReport {
  Weights weights;
  std::vector<bool> constant_agent;
  std::uint64_t chain_triples_checked = 0;
  bool chain_exhaustive = true;
};

/// Axiom (I), semi-separability, the difference map with its chain-rule
/// and additivity checks, slopes, then the constant. Throws HypothesisError
/// naming the first failed step.
inline HarveyReport recover_harvey(const Profile& p, const SemiSeparabilityOptions& ss = {},
                                   const ChainOptions& chain = {}) {
  if (auto ax = check_axiom_I(p); !ax.pass()) {
    const auto& w = *ax.witness;
    throw HypothesisError("axiom (I)", "[" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "] and [" +
                                           std::to_string(w[2]) + "," + std::to_string(w[3]) +
                                           "] are equal for every agent but not ethically");
  }
  DifferenceMap dm = build_difference_map(p, ss);
  auto cr = verify_chain_rule(dm, chain);
  if (!cr.pass())
    throw HypothesisError("chain rule", "fails at c = " + detail::format_vector((*cr.witness)[0]) + ", c' = " +
                                            detail::format_vector((*cr.witness)[1]) + ", c'' = " +
                                            detail::format_vector((*cr.witness)[2]));
  for (std::size_t i = 0; i < dm.n(); ++i)
    if (auto ca = verify_component_additivity(dm, i); !ca.pass())
      throw HypothesisError("component additivity", "F_" + std::to_string(i + 1) + " fails at c = " +
                                                        ca.witness->first.str() + ", c' = " +
                                                        ca.witness->second.str());
  if (auto ad = verify_additive_decomposition(dm); !ad.pass())
    throw HypothesisError("additive decomposition", "fails at c = " + detail::format_vector(*ad.witness));
  Slopes s = extract_slopes(dm);
  HarveyReport r;
  r.weights.b = recover_constant(p, s.a);
  r.weights.a = std::move(s.a);
  r.constant_agent = std::move(s.constant_agent);
  r.chain_triples_checked = cr.checked;
  r.chain_exhaustive = cr.exhaustive();
  return r;
}

/// The Alt profile of a society, falling back to its base tables.
inline Profile alt_profile(const Society& soc) {
  if (soc.alt()) return *soc.alt();
  if (auto b = soc.base_profile()) return *b;
  throw DomainError("society has no Alt utility tables");
}

}  // namespace utilagg
