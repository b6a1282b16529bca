#pragma once

/// @file harsanyi.hpp
/// Weighted-sum aggregation of NM utilities: the span test, exact weight
/// recovery, Pareto witness lotteries and positive reweighting of a
/// dependent profile.
///
/// Everything works on a Profile (u_1..u_n, v) over all states of X. Row 0
/// of the span matrix is the constant function 1.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "utilagg/core.hpp"
#include "utilagg/linalg.hpp"

namespace utilagg {

/// Matrix A with rows (1, u_1, ..., u_n) over the states, target beta = v,
/// and a basis of {eta : A eta = 0}.
struct SpanProblem {
  Matrix a;
  Vector beta;
  std::vector<Vector> null_vectors;

  static SpanProblem build(const Profile& p) {
    p.validate(p.ethical.size());
    const std::size_t m = p.ethical.size();
    std::vector<Vector> rows;
    rows.emplace_back(m, Rational(1));
    for (const auto& u : p.agents) rows.emplace_back(u.values().begin(), u.values().end());
    SpanProblem sp;
    sp.a = Matrix::from_rows(rows);
    sp.beta.assign(p.ethical.values().begin(), p.ethical.values().end());
    sp.null_vectors = null_space(sp.a);
    return sp;
  }
};

/// Coefficients c with f0 = sum c_k fs[k], or nullopt when f0 is outside
/// the span.
inline std::optional<Vector> express_in_span(std::span<const Rational> f0, const std::vector<Vector>& fs) {
  if (fs.empty()) throw DomainError("express_in_span needs at least one vector");
  for (const auto& f : fs)
    if (f.size() != f0.size()) throw DomainError("vectors of different dimension");
  return solve(Matrix::from_columns(fs), f0);
}

struct LotteryWitnessPair {
  SimpleLottery p;
  SimpleLottery q;
  Vector eta;
  Rational lambda;
};

namespace detail {

/// P = 1/m + lambda eta, Q = 1/m - lambda eta with
/// lambda = 1 / (2 m max|eta_j|). Requires sum eta = 0 and eta != 0.
inline LotteryWitnessPair perturbed_uniform_pair(const Vector& eta) {
  const std::size_t m = eta.size();
  Rational peak;
  for (const auto& e : eta) peak = std::max(peak, abs(e));
  if (peak.is_zero()) throw DomainError("zero perturbation vector");
  const Rational centre(1, static_cast<long>(m));
  const Rational lambda = Rational(1) / (Rational(2 * static_cast<long>(m)) * peak);
  std::map<State, Rational> pp, qq;
  for (State j = 0; j < m; ++j) {
    pp[j] = centre + lambda * eta[j];
    qq[j] = centre - lambda * eta[j];
  }
  return {SimpleLottery::make(pp), SimpleLottery::make(qq), eta, lambda};
}

}  // namespace detail

/// Unanimous indifference over lotteries implies ethical indifference.
/// On finite X this holds iff v lies in span(1, u_1..u_n). On failure the
/// witness (P, Q) has E_P[u_i] = E_Q[u_i] for all i but E_P[v] != E_Q[v].
inline Verdict<LotteryWitnessPair> check_axiom_i(const Profile& p) {
  SpanProblem sp = SpanProblem::build(p);
  for (const auto& eta : sp.null_vectors) {
    if (dot(sp.beta, eta).is_zero()) continue;
    LotteryWitnessPair w = detail::perturbed_uniform_pair(eta);
    for (const auto& u : p.agents)
      if (expectation(w.p, u) != expectation(w.q, u)) throw Error("internal: axiom (i) witness separates an agent");
    if (expectation(w.p, p.ethical) == expectation(w.q, p.ethical))
      throw Error("internal: axiom (i) witness does not separate v");
    return Verdict<LotteryWitnessPair>::fail(std::move(w));
  }
  return Verdict<LotteryWitnessPair>::ok();
}

/// Greedy maximal independent subset M of (u_1..u_n) over the constant
/// function, scanning agents by index. Every other agent j is written as
/// u_j = c_0^j + sum_{i in M} c_i^j u_i.
struct DependencyBasis {
  std::vector<std::size_t> members;  // M, ascending 0-based agent indices
  /// j -> (c_0^j, c_{M[0]}^j, c_{M[1]}^j, ...)
  std::map<std::size_t, Vector> expressions;

  bool contains(std::size_t i) const { return std::binary_search(members.begin(), members.end(), i); }
};

namespace detail {

/// Basis with the given members, or nullopt when (1, u_M) is dependent or
/// fails to span the other agents.
inline std::optional<DependencyBasis> basis_with_members(std::span<const UtilityTable> agents,
                                                         std::vector<std::size_t> members) {
  DependencyBasis basis;
  const std::size_t m = agents.front().size();
  std::vector<Vector> span_rows{Vector(m, Rational(1))};
  for (auto i : members) {
    if (express_in_span(agents[i].values(), span_rows)) return std::nullopt;
    span_rows.emplace_back(agents[i].values().begin(), agents[i].values().end());
  }
  basis.members = std::move(members);
  for (std::size_t j = 0; j < agents.size(); ++j) {
    if (basis.contains(j)) continue;
    auto c = express_in_span(agents[j].values(), span_rows);
    if (!c) return std::nullopt;
    basis.expressions.emplace(j, std::move(*c));
  }
  return basis;
}

}  // namespace detail

inline DependencyBasis select_dependency_basis(std::span<const UtilityTable> agents) {
  DependencyBasis basis;
  if (agents.empty()) return basis;
  const std::size_t m = agents.front().size();
  std::vector<Vector> span_rows{Vector(m, Rational(1))};
  auto as_vector = [](const UtilityTable& u) { return Vector(u.values().begin(), u.values().end()); };
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].size() != m) throw DomainError("utility tables defined on different spaces");
    if (!express_in_span(agents[i].values(), span_rows)) {
      basis.members.push_back(i);
      span_rows.push_back(as_vector(agents[i]));
    }
  }
  for (std::size_t j = 0; j < agents.size(); ++j) {
    if (basis.contains(j)) continue;
    auto c = express_in_span(agents[j].values(), span_rows);
    if (!c) throw Error("internal: dependent agent left the span");
    basis.expressions.emplace(j, std::move(*c));
  }
  for (const auto& [j, c] : basis.expressions) {
    UtilityTable sum = UtilityTable::constant(m, c[0]);
    for (std::size_t k = 0; k < basis.members.size(); ++k) sum = sum + c[k + 1] * agents[basis.members[k]];
    if (sum != agents[j]) throw Error("internal: dependency identity fails");
  }
  return basis;
}

struct WeightReport {
  bool recovered = false;
  Weights weights;                  // canonical: zero on agents outside the basis
  bool unique = false;              // (1, u_1..u_n) linearly independent
  std::optional<Weights> positive_variant;
  std::optional<State> residual_state;  // first state where the interpolated identity fails
  std::optional<LotteryWitnessPair> witness;
  DependencyBasis basis;
};

/// Reweighting that moves weight onto the agents outside M so every
/// coefficient is positive. nullopt when some basis agent's canonical
/// weight is not positive, which the basis makes unavoidable.
inline std::optional<Weights> positive_reweighting(const Profile& p, const WeightReport& report,
                                                   const DependencyBasis& basis) {
  if (!report.recovered) return std::nullopt;
  const std::size_t n = p.n();
  const auto& M = basis.members;

  // Canonical form relative to `basis`: fold every non-basis weight into
  // the basis via its dependency identity.
  Weights canon{std::vector<Rational>(n), report.weights.b};
  for (std::size_t k = 0; k < M.size(); ++k) canon.a[M[k]] = report.weights.a[M[k]];
  for (const auto& [j, c] : basis.expressions) {
    const Rational& aj = report.weights.a[j];
    canon.b += aj * c[0];
    for (std::size_t k = 0; k < M.size(); ++k) canon.a[M[k]] += aj * c[k + 1];
  }
  for (auto i : M)
    if (canon.a[i].sign() <= 0) return std::nullopt;

  Rational eps(1);
  if (!M.empty()) {
    Rational min_a = canon.a[M.front()];
    Rational max_row;
    for (std::size_t k = 0; k < M.size(); ++k) {
      min_a = std::min(min_a, canon.a[M[k]]);
      Rational row;
      for (const auto& [j, c] : basis.expressions) row += abs(c[k + 1]);
      max_row = std::max(max_row, row);
    }
    eps = min_a / (Rational(2) * (Rational(1) + max_row));
  }
  Weights out = canon;
  for (const auto& [j, c] : basis.expressions) {
    out.a[j] = eps;
    out.b -= eps * c[0];
    for (std::size_t k = 0; k < M.size(); ++k) out.a[M[k]] -= eps * c[k + 1];
  }
  for (const auto& a : out.a)
    if (a.sign() <= 0) throw Error("internal: reweighting produced a nonpositive weight");
  if (out.apply(p.agents) != p.ethical) throw Error("internal: reweighted identity fails");
  return out;
}

/// Exact (a, b) with v = sum a_i u_i + b. Unique when the profile is
/// independent; otherwise the canonical solution puts zero weight on every
/// agent outside the dependency basis.
inline WeightReport recover_weights(const Profile& p) {
  p.validate(p.ethical.size());
  WeightReport r;
  r.basis = select_dependency_basis(p.agents);
  r.unique = r.basis.members.size() == p.n();
  const std::size_t m = p.ethical.size();

  std::vector<Vector> cols{Vector(m, Rational(1))};
  for (auto i : r.basis.members) cols.emplace_back(p.agents[i].values().begin(), p.agents[i].values().end());
  auto sol = express_in_span(p.ethical.values(), cols);
  if (!sol) {
    // Interpolate on a regular submatrix, then report where it breaks.
    Echelon e = rref(Matrix::from_rows(cols));
    Matrix b = Matrix::from_rows(cols).select_columns(e.pivots).transposed();
    Vector rhs;
    for (auto s : e.pivots) rhs.push_back(p.ethical[s]);
    auto c = solve(b, rhs);
    if (!c) throw Error("internal: regular submatrix system inconsistent");
    for (State s = 0; s < m && !r.residual_state; ++s) {
      Rational val = (*c)[0];
      for (std::size_t k = 0; k < r.basis.members.size(); ++k) val += (*c)[k + 1] * p.agents[r.basis.members[k]][s];
      if (val != p.ethical[s]) r.residual_state = s;
    }
    auto w = check_axiom_i(p);
    if (w.pass()) throw Error("internal: span test and axiom (i) disagree");
    r.witness = std::move(w.witness);
    return r;
  }
  r.recovered = true;
  r.weights.a.assign(p.n(), Rational(0));
  r.weights.b = (*sol)[0];
  for (std::size_t k = 0; k < r.basis.members.size(); ++k) r.weights.a[r.basis.members[k]] = (*sol)[k + 1];
  if (r.weights.apply(p.agents) != p.ethical) throw Error("internal: recovered identity fails");
  r.positive_variant = positive_reweighting(p, r, r.basis);
  // The greedy basis may carry a nonpositive weight that another basis of
  // the same size avoids; try the remaining ones in lexicographic order.
  const std::size_t k = r.basis.members.size(), n = p.n();
  if (!r.positive_variant && !r.unique && n <= 12) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) members.push_back(i);
      if (members == r.basis.members) continue;
      if (auto alt = detail::basis_with_members(p.agents, members))
        r.positive_variant = positive_reweighting(p, r, *alt);
    } while (!r.positive_variant && std::prev_permutation(pick.begin(), pick.end()));
  }
  return r;
}

/// (P, Q) with E_P[u_i] > E_Q[u_i] and E_P[u_j] = E_Q[u_j] for j != i.
/// Built from A eta = e_{i+1} on a regular (n+1)x(n+1) submatrix of A, so
/// the constant row forces sum eta = 0 and both lotteries are valid.
inline LotteryWitnessPair witness_lotteries_for_sign(const Profile& p, std::size_t agent) {
  p.validate(p.ethical.size());
  if (agent >= p.n()) throw DomainError("agent index out of range");
  SpanProblem sp = SpanProblem::build(p);
  Echelon e = rref(sp.a);
  if (e.pivots.size() != p.n() + 1)
    throw HypothesisError("linear independence", "(1, u_1..u_n) is dependent, no regular submatrix exists");
  Matrix b = sp.a.select_columns(e.pivots);
  Vector unit(p.n() + 1);
  unit[agent + 1] = Rational(1);
  Vector eta_b = inverse(b) * unit;
  Vector eta(sp.a.cols());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) eta[e.pivots[k]] = eta_b[k];
  LotteryWitnessPair w = detail::perturbed_uniform_pair(eta);
  for (std::size_t j = 0; j < p.n(); ++j) {
    Rational d = expectation(w.p, p.agents[j]) - expectation(w.q, p.agents[j]);
    if (j == agent ? d.sign() <= 0 : !d.is_zero()) throw Error("internal: sign witness has wrong expectations");
  }
  return w;
}

/// The NM profile of a society, falling back to its base tables.
inline Profile lottery_profile(const Society& soc) {
  if (soc.nm()) return *soc.nm();
  if (auto b = soc.base_profile()) return *b;
  throw DomainError("society has no NM utility tables");
}

inline Verdict<LotteryWitnessPair> check_axiom_i(const Society& soc) { return check_axiom_i(lottery_profile(soc)); }
inline WeightReport recover_weights(const Society& soc) { return recover_weights(lottery_profile(soc)); }

}  // namespace utilagg
