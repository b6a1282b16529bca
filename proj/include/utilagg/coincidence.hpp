#pragma once

/// @file coincidence.hpp
/// Coincidence of NM and Alt utilities: the grid version of the
/// two-profile affine-coincidence argument, the normalization that feeds
/// it, the end-to-end pipeline over a society with both profiles, and the
/// square-root and simplex fixtures.
///
/// Continuity and connectedness cannot be told apart from arbitrary tables
/// on a finite grid, so only the algebraic content is verified. Dyadic
/// chains are built at the grid's own step instead of in the limit.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "utilagg/core.hpp"
#include "utilagg/harsanyi.hpp"
#include "utilagg/harvey.hpp"
#include "utilagg/nm.hpp"

namespace utilagg {

struct HypothesisResult {
  std::string name;
  bool pass = true;
  bool blocking = true;  // a failure stops the constructive steps
  std::string detail;
};

/// States z^0..z^L with driver u_i = b_i + l d and every other agent at its
/// minimum, and w^0..w^(L-1) which also raise the partner j by d. In the
/// driver profile z^(l+1) and w^l are ethically indifferent.
struct StandardChain {
  std::string driver;  // "alt" or "nm": the profile whose u_i is uniform
  std::size_t agent = 0;
  std::size_t partner = 0;
  Rational step;
  std::vector<State> z;
  std::vector<State> w;
  /// Other profile's u_i(z^(l+1)) - u_i(z^l).
  std::vector<Rational> increments;
  /// Other profile's u_j(w^0) - u_j(z^0).
  Rational partner_gap;
};

struct AgentVerdict {
  enum class Kind { coincide, violation, constant, unresolved };
  Kind kind = Kind::unresolved;
  std::optional<Affine> affine;  // u*_i = alpha u_i + beta
  std::optional<StandardChain> chain;
  std::optional<std::size_t> unequal_step;  // first l with increment l != increment 0
  std::optional<StatePair> ethical_mismatch;  // (z^(l+1), w^l): indifferent in one profile only
  std::string detail;
};

inline const char* to_string(AgentVerdict::Kind k) {
  switch (k) {
    case AgentVerdict::Kind::coincide: return "COINCIDE";
    case AgentVerdict::Kind::violation: return "VIOLATION";
    case AgentVerdict::Kind::constant: return "CONSTANT";
    case AgentVerdict::Kind::unresolved: return "UNRESOLVED";
  }
  return "?";
}

struct AffineReport {
  std::vector<HypothesisResult> hypotheses;
  std::vector<AgentVerdict> agents;  // empty when a blocking hypothesis fails

  bool blocked() const {
    return std::any_of(hypotheses.begin(), hypotheses.end(), [](const auto& h) { return h.blocking && !h.pass; });
  }
  const HypothesisResult* first_blocking_failure() const {
    for (const auto& h : hypotheses)
      if (h.blocking && !h.pass) return &h;
    return nullptr;
  }
};

namespace detail {

inline bool same_order(const UtilityTable& a, const UtilityTable& b, StatePair* where = nullptr) {
  for (State x = 0; x < a.size(); ++x)
    for (State y = 0; y < a.size(); ++y)
      if ((a[x] >= a[y]) != (b[x] >= b[y])) {
        if (where) *where = {x, y};
        return false;
      }
  return true;
}

inline std::size_t count_nonconstant(const std::vector<UtilityTable>& agents) {
  return static_cast<std::size_t>(
      std::count_if(agents.begin(), agents.end(), [](const UtilityTable& u) { return !u.is_constant(); }));
}

inline std::optional<StandardChain> build_chain(const Profile& drv, const Profile& other, std::size_t i,
                                                const std::string& driver_name) {
  const std::size_t n = drv.n();
  std::set<Rational> vals(drv.agents[i].values().begin(), drv.agents[i].values().end());
  std::vector<Rational> sorted(vals.begin(), vals.end());
  if (sorted.size() < 2) return std::nullopt;
  const Rational d = sorted[1] - sorted[0];
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k] - sorted[k - 1] != d) return std::nullopt;

  Vector base(n);
  std::vector<std::set<Rational>> ranges(n);
  for (std::size_t k = 0; k < n; ++k) {
    ranges[k].insert(drv.agents[k].values().begin(), drv.agents[k].values().end());
    base[k] = *ranges[k].begin();
  }
  std::optional<std::size_t> partner;
  for (std::size_t j = 0; j < n && !partner; ++j)
    if (j != i && ranges[j].size() > 1 && ranges[j].contains(base[j] + d)) partner = j;
  if (!partner) return std::nullopt;

  std::map<Vector, State> where;
  for (State s = 0; s < drv.ethical.size(); ++s) where.emplace(u_vector(drv, s), s);
  auto locate = [&](const Vector& c) -> std::optional<State> {
    auto it = where.find(c);
    if (it == where.end()) return std::nullopt;
    return it->second;
  };

  StandardChain ch;
  ch.driver = driver_name;
  ch.agent = i;
  ch.partner = *partner;
  ch.step = d;
  for (std::size_t l = 0; l < sorted.size(); ++l) {
    Vector c = base;
    c[i] = sorted[l];
    auto z = locate(c);
    if (!z) return std::nullopt;
    ch.z.push_back(*z);
    if (l + 1 < sorted.size()) {
      c[*partner] += d;
      auto w = locate(c);
      if (!w) return std::nullopt;
      ch.w.push_back(*w);
    }
  }
  const auto& oi = other.agents[i];
  for (std::size_t l = 0; l + 1 < ch.z.size(); ++l) ch.increments.push_back(oi[ch.z[l + 1]] - oi[ch.z[l]]);
  const auto& oj = other.agents[*partner];
  ch.partner_gap = oj[ch.w[0]] - oj[ch.z[0]];
  return ch;
}

inline std::string state_list(const std::vector<State>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + std::to_string(xs[k]);
  return s;
}

}  // namespace detail

/// Per-agent affine coincidence of u* with u, for normalized profiles
/// (v = sum u_i, v* = sum u*_i). Hypotheses are checked and reported
/// individually; the per-agent verdicts are computed only when none of the
/// blocking ones fails.
inline AffineReport proposition1_check(const Profile& u, const Profile& us) {
  u.validate(u.ethical.size());
  us.validate(u.ethical.size());
  if (u.n() != us.n()) throw DomainError("profiles have different agent counts");
  const std::size_t n = u.n();
  const std::size_t m = u.ethical.size();
  AffineReport rep;
  auto add = [&](std::string name, bool pass, bool blocking, std::string detail = {}) {
    rep.hypotheses.push_back({std::move(name), pass, blocking, std::move(detail)});
  };

  auto normalized = [](const Profile& p) {
    Weights ones{std::vector<Rational>(p.n(), Rational(1)), Rational(0)};
    return ones.apply(p.agents) == p.ethical;
  };
  add("normalized alt profile", normalized(u), true, "v must equal the sum of the u_i");
  add("normalized NM profile", normalized(us), true, "v* must equal the sum of the u*_i");
  for (std::size_t i = 0; i < n; ++i) {
    StatePair at{};
    bool ok = detail::same_order(u.agents[i], us.agents[i], &at);
    add("same order (agent " + std::to_string(i + 1) + ")", ok, true,
        ok ? "" : "states " + std::to_string(at.first) + "," + std::to_string(at.second) + " compare differently");
  }
  {
    StatePair at{};
    bool ok = detail::same_order(u.ethical, us.ethical, &at);
    add("same order (ethical)", ok, false,
        ok ? "" : "states " + std::to_string(at.first) + "," + std::to_string(at.second) + " compare differently");
  }
  {
    std::set<Vector> realized;
    for (State s = 0; s < m; ++s) realized.insert(detail::u_vector(u, s));
    std::uint64_t product = 1;
    for (const auto& a : u.agents) {
      std::set<Rational> r(a.values().begin(), a.values().end());
      product *= r.size();
      if (product > m) break;
    }
    bool ok = product == realized.size();
    add("range product", ok, true,
        ok ? "" : std::to_string(realized.size()) + " realized utility vectors, range product needs more");
  }
  const std::size_t nonconstant = detail::count_nonconstant(u.agents);
  add("two nonconstant agents", nonconstant >= 2, true,
      nonconstant >= 2 ? "" : "needs two nonconstant agents, found " + std::to_string(nonconstant));
  if (rep.blocked()) return rep;

  for (std::size_t i = 0; i < n; ++i) {
    AgentVerdict av;
    if (u.agents[i].is_constant()) {
      av.kind = AgentVerdict::Kind::constant;
      av.affine = Affine{Rational(1), us.agents[i][0] - u.agents[i][0]};
      rep.agents.push_back(std::move(av));
      continue;
    }
    auto ch = detail::build_chain(u, us, i, "alt");
    if (!ch) ch = detail::build_chain(us, u, i, "nm");
    if (!ch) {
      av.kind = AgentVerdict::Kind::unresolved;
      av.detail = "no uniform chain with a partner step in either profile";
      rep.agents.push_back(std::move(av));
      continue;
    }
    const auto& inc = ch->increments;
    for (std::size_t l = 1; l < inc.size() && !av.unequal_step; ++l)
      if (inc[l] != inc[0]) av.unequal_step = l;
    if (!av.unequal_step) {
      av.affine = affine_relation(u.agents[i], us.agents[i]);
      if (av.affine) {
        av.kind = AgentVerdict::Kind::coincide;
      } else {
        av.kind = AgentVerdict::Kind::violation;
        av.detail = "equal chain increments but no affine map between the tables";
      }
    } else {
      av.kind = AgentVerdict::Kind::violation;
      for (std::size_t l = 0; l < inc.size() && !av.ethical_mismatch; ++l)
        if (inc[l] != ch->partner_gap) av.ethical_mismatch = StatePair{ch->z[l + 1], ch->w[l]};
      av.detail = "increment " + inc[*av.unequal_step].str() + " at step " + std::to_string(*av.unequal_step) +
                  " differs from " + inc[0].str() + " at step 0";
    }
    av.chain = std::move(ch);
    rep.agents.push_back(std::move(av));
  }
  return rep;
}

/// Both profiles rescaled so v = sum u_i and v* = sum u*_i.
struct Normalization {
  Profile alt;
  Profile nm;
  Weights alt_weights;  // v = sum a_i u_i + b
  Weights nm_weights;   // v* = sum a*_i u*_i + b*, with a*_i = 1 on constant agents
};

/// Weighted-sum recovery on both profiles, then rescaling. Throws
/// HypothesisError when a recovery fails or an NM weight is not positive.
inline Normalization normalize_for_theorem3(const Profile& alt, const Profile& nm,
                                            const SemiSeparabilityOptions& ss = {}, const ChainOptions& chain = {}) {
  if (alt.n() != nm.n()) throw DomainError("profiles have different agent counts");
  const std::size_t n = nm.n();
  WeightReport wr = recover_weights(nm);
  if (!wr.recovered)
    throw HypothesisError("axiom (i)", "v* is outside span(1, u*_1..u*_n); identity fails at state " +
                                           std::to_string(wr.residual_state.value_or(0)));
  Weights ws = wr.weights;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ui = nm.agents[i];
    if (ui.is_constant()) {
      ws.b += (ws.a[i] - Rational(1)) * ui[0];
      ws.a[i] = Rational(1);
      continue;
    }
    if (ws.a[i].sign() > 0) continue;
    // x better than y for agent i only: Pareto demands v*(x) > v*(y).
    for (State x = 0; x < ui.size(); ++x)
      for (State y = 0; y < ui.size(); ++y) {
        if (!(ui[x] > ui[y])) continue;
        bool others_equal = true;
        for (std::size_t k = 0; k < n && others_equal; ++k)
          if (k != i && nm.agents[k][x] != nm.agents[k][y]) others_equal = false;
        if (others_equal && !(nm.ethical[x] > nm.ethical[y]))
          throw HypothesisError("Pareto", "state " + std::to_string(x) + " is better than " + std::to_string(y) +
                                              " for agent " + std::to_string(i + 1) +
                                              " only, yet not ethically better");
      }
    throw HypothesisError("positive NM weights",
                          "agent " + std::to_string(i + 1) + " has NM weight " + ws.a[i].str());
  }
  HarveyReport hr = recover_harvey(alt, ss, chain);

  Normalization out;
  out.alt_weights = hr.weights;
  out.nm_weights = ws;
  for (std::size_t i = 0; i < n; ++i) {
    out.alt.agents.push_back(alt.agents[i].affine(hr.weights.a[i], Rational(0)));
    out.nm.agents.push_back(nm.agents[i].affine(ws.a[i], Rational(0)));
  }
  out.alt.ethical = alt.ethical.affine(Rational(1), -hr.weights.b);
  out.nm.ethical = nm.ethical.affine(Rational(1), -ws.b);
  Weights ones{std::vector<Rational>(n, Rational(1)), Rational(0)};
  if (ones.apply(out.alt.agents) != out.alt.ethical || ones.apply(out.nm.agents) != out.nm.ethical)
    throw Error("internal: normalized identity fails");
  return out;
}

struct Theorem3Options {
  SemiSeparabilityOptions semi_separability;
  ChainOptions chain;
  unsigned extension_depth = 1;  // pairwise Dirac mixtures at this dyadic depth
};

struct Theorem3Report {
  std::vector<HypothesisResult> hypotheses;
  std::optional<Normalization> normalization;
  std::optional<AffineReport> proposition;
  /// Per agent in original coordinates: u*_i = alpha u_i + beta.
  std::vector<AgentVerdict> verdicts;

  const HypothesisResult* first_blocking_failure() const {
    for (const auto& h : hypotheses)
      if (h.blocking && !h.pass) return &h;
    return proposition ? proposition->first_blocking_failure() : nullptr;
  }
  bool all_coincide() const {
    if (first_blocking_failure() || verdicts.empty()) return false;
    return std::all_of(verdicts.begin(), verdicts.end(), [](const AgentVerdict& v) {
      return v.kind == AgentVerdict::Kind::coincide || v.kind == AgentVerdict::Kind::constant;
    });
  }
};

/// Every checkable hypothesis of the coincidence theorem, then
/// normalization and the per-agent coincidence check. Matching and
/// probabilistic-extension failures are reported without stopping the run.
inline Theorem3Report theorem3_pipeline(const Society& soc, const Theorem3Options& opt = {}) {
  if (!soc.nm() || !soc.alt()) throw DomainError("the coincidence pipeline needs both NM and Alt profiles");
  const Profile& nm = *soc.nm();
  const Profile& alt = *soc.alt();
  const auto& sp = soc.space();
  const std::size_t n = soc.n();
  Theorem3Report rep;
  auto add = [&](std::string name, bool pass, bool blocking, std::string detail = {}) {
    rep.hypotheses.push_back({std::move(name), pass, blocking, std::move(detail)});
  };
  auto pair_detail = [&](const std::optional<StatePair>& w) {
    return w ? "(" + sp.id(w->first) + ") vs (" + sp.id(w->second) + ")" : std::string();
  };

  {
    auto v = check_semi_separable(soc, opt.semi_separability);
    std::string d;
    if (!v.pass()) {
      d = "no state matches the profile";
      for (std::size_t i = 0; i < v.witness->size(); ++i) d += (i ? ", (" : " (") + sp.id((*v.witness)[i]) + ")";
    }
    add("semi-separability", v.pass(), true, d);
  }
  {
    auto v = check_pareto_criterion(soc);
    add("Pareto", v.pass(), true, v.pass() ? "" : pair_detail(v.witness) + " Pareto-dominates but is not better");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto v = matches(soc.individual(i), AltSystem::by_utility(alt.agents[i]));
    add("matching (" + soc.name(i) + ")", v.pass(), false, pair_detail(v.witness));
  }
  {
    auto v = matches(soc.ethical(), AltSystem::by_utility(alt.ethical));
    add("matching (ethical)", v.pass(), false, pair_detail(v.witness));
  }
  {
    auto lotteries = dirac_and_pairwise_lotteries(sp.size(), opt.extension_depth);
    auto extension = [&](const UtilityTable& u, const WeakOrder& base, const std::string& who) {
      std::vector<Rational> e;
      e.reserve(lotteries.size());
      for (const auto& p : lotteries) e.push_back(expectation(p, u));
      auto v = check_probabilistic_extension(lotteries, WeakOrder::by_utility(UtilityTable(std::move(e))), base);
      add("probabilistic extension (" + who + ")", v.pass(), false, pair_detail(v.witness));
    };
    for (std::size_t i = 0; i < n; ++i) extension(nm.agents[i], soc.individual(i), soc.name(i));
    extension(nm.ethical, soc.ethical(), "ethical");
  }
  {
    auto v = check_axiom_i(nm);
    add("axiom (i)", v.pass(), true, v.pass() ? "" : "v* is outside span(1, u*_1..u*_n)");
  }
  {
    auto v = check_axiom_I(alt);
    std::string d;
    if (!v.pass()) {
      const auto& w = *v.witness;
      d = "[" + sp.id(w[0]) + " ; " + sp.id(w[1]) + "] vs [" + sp.id(w[2]) + " ; " + sp.id(w[3]) + "]";
    }
    add("axiom (I)", v.pass(), true, d);
  }
  {
    std::size_t nontrivial = 0;
    for (const auto& w : soc.individuals()) nontrivial += w.is_trivial() ? 0 : 1;
    add("two nonconstant agents", nontrivial >= 2, true,
        nontrivial >= 2 ? "" : "needs two nonconstant agents, found " + std::to_string(nontrivial));
  }
  if (rep.first_blocking_failure()) return rep;

  try {
    rep.normalization = normalize_for_theorem3(alt, nm, opt.semi_separability, opt.chain);
  } catch (const HypothesisError& e) {
    add(e.hypothesis(), false, true, e.what());
    return rep;
  }
  const Normalization& norm = *rep.normalization;
  rep.proposition = proposition1_check(norm.alt, norm.nm);
  if (rep.proposition->blocked()) return rep;

  for (std::size_t i = 0; i < n; ++i) {
    AgentVerdict v = rep.proposition->agents[i];
    if (v.affine) {
      // a*_i u*_i = alpha (a_i u_i) + beta
      const Rational& ai = norm.alt_weights.a[i];
      const Rational& si = norm.nm_weights.a[i];
      Affine back{v.affine->alpha * ai / si, v.affine->beta / si};
      if (v.kind == AgentVerdict::Kind::constant) back = Affine{Rational(1), nm.agents[i][0] - alt.agents[i][0]};
      if (alt.agents[i].affine(back.alpha, back.beta) != nm.agents[i])
        throw Error("internal: affine verdict does not map back to the original tables");
      v.affine = back;
    }
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fixtures

struct SqrtFixture {
  Society society;
  /// ((x1^(k+1), x2 low), (x1^k, x2 high)) for k = 0..kmax-1: ethically
  /// indifferent under v*.
  std::vector<StatePair> chain;
  /// u_1(x1^(k+1)) - u_1(x1^k) for k = 0..kmax-1, read from the tables.
  std::vector<Rational> increments;
};

/// X = {(k eps)^2 : k = 0..kmax} x {0, eps}. NM tables u*_1 = sqrt(x1),
/// u*_2 = x2; Alt tables u_1 = x1, u_2 = x2; both ethical tables are sums.
/// The base orders are the NM ones. With `degenerate` agent 2 is
/// indifferent between all states in both profiles.
inline SqrtFixture sqrt_fixture(std::size_t kmax, const Rational& eps, bool degenerate = false) {
  if (kmax < 2) throw DomainError("sqrt fixture needs kmax >= 2");
  if (eps.sign() <= 0) throw DomainError("sqrt fixture needs eps > 0");
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  std::vector<Rational> u1s, u2s, u1, u2;
  const Rational x2[2] = {Rational(0), eps};
  for (std::size_t k = 0; k <= kmax; ++k) {
    Rational root = eps * Rational(static_cast<long>(k));
    Rational x1 = root * root;
    for (const auto& b : x2) {
      ids.push_back(x1.str() + "," + b.str());
      coords.push_back({x1, b});
      u1s.push_back(root);
      u1.push_back(x1);
      u2s.push_back(degenerate ? Rational(0) : b);
      u2.push_back(degenerate ? Rational(0) : b);
    }
  }
  Profile nm{{UtilityTable(u1s), UtilityTable(u2s)}, UtilityTable(u1s) + UtilityTable(u2s)};
  Profile alt{{UtilityTable(u1), UtilityTable(u2)}, UtilityTable(u1) + UtilityTable(u2)};
  Society soc = Society::from_profile(StateSpace::explicit_list(std::move(ids), std::move(coords)), nm);
  soc.with_nm(nm).with_alt(alt);
  SqrtFixture f{std::move(soc), {}, {}};
  for (std::size_t k = 0; k < kmax; ++k) {
    f.chain.push_back({2 * (k + 1), 2 * k + 1});
    f.increments.push_back(alt.agents[0][2 * (k + 1)] - alt.agents[0][2 * k]);
  }
  return f;
}

/// Points x = (x1, 1 - x1) with x1 = (k r)^2, k = 0..1/r. NM tables
/// u*_1 = x1^2, u*_2 = 1 - x2^2, v* = 2 x1; Alt tables u_1 = sqrt(x1),
/// u_2 = x1, v = u_1 + u_2. Base orders are the NM ones.
inline Society simplex_counterexample(const Rational& resolution) {
  if (resolution.sign() <= 0 || resolution > Rational(1) || !dyadic_exponent(resolution))
    throw DomainError("simplex resolution must be 2^-m");
  const Rational count = Rational(1) / resolution;
  if (!count.is_integer()) throw DomainError("simplex resolution must be 2^-m");
  const long kmax = count.numerator().get_si();
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  std::vector<Rational> u1s, u2s, vs, u1, u2;
  for (long k = 0; k <= kmax; ++k) {
    Rational root = resolution * Rational(k);
    Rational x1 = root * root;
    Rational x2 = Rational(1) - x1;
    ids.push_back(x1.str() + "," + x2.str());
    coords.push_back({x1, x2});
    u1s.push_back(x1 * x1);
    u2s.push_back(Rational(1) - x2 * x2);
    vs.push_back(Rational(2) * x1);
    u1.push_back(root);
    u2.push_back(x1);
  }
  Profile nm{{UtilityTable(u1s), UtilityTable(u2s)}, UtilityTable(vs)};
  Profile alt{{UtilityTable(u1), UtilityTable(u2)}, UtilityTable(u1) + UtilityTable(u2)};
  Society soc = Society::from_profile(StateSpace::explicit_list(std::move(ids), std::move(coords)), nm);
  soc.with_nm(nm).with_alt(alt);
  return soc;
}

}  // namespace utilagg
