#pragma once

/// @file core.hpp
/// Finite state spaces, simple lotteries, weak orders, societies and the
/// society-level axioms (Pareto, semi-separability, probabilistic
/// extension, matching).
///
/// Every check returns a Verdict: PASS, or the first violating witness in
/// lexicographic state order.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "utilagg/alt_system.hpp"
#include "utilagg/error.hpp"
#include "utilagg/rational.hpp"
#include "utilagg/utility_table.hpp"

namespace utilagg {

// ---------------------------------------------------------------------------
// Verdicts

template <class Witness>
struct Verdict {
  std::optional<Witness> witness;

  bool pass() const noexcept { return !witness.has_value(); }
  explicit operator bool() const noexcept { return pass(); }

  static Verdict ok() { return {}; }
  static Verdict fail(Witness w) { return Verdict{std::move(w)}; }
};

struct StatePair {
  State first;
  State second;
  friend bool operator==(const StatePair&, const StatePair&) = default;
};

// ---------------------------------------------------------------------------
// State spaces

/// One axis of a product grid: min, min + h, ..., max with
/// h = 2^(-depth) * (max - min).
struct GridDimension {
  Rational min;
  Rational max;
  Rational resolution;
  unsigned depth = 0;

  static GridDimension make(const Rational& min, const Rational& max, const Rational& resolution) {
    if (!(min < max)) throw DomainError("grid dimension needs min < max");
    if (resolution.sign() <= 0) throw DomainError("grid resolution must be positive");
    auto m = dyadic_exponent(resolution / (max - min));
    if (!m) throw DomainError("grid resolution " + resolution.str() + " is not a dyadic fraction of " +
                              (max - min).str());
    return GridDimension{min, max, resolution, *m};
  }

  std::size_t points() const { return (std::size_t{1} << depth) + 1; }
  Rational point(std::size_t k) const { return min + resolution * Rational(static_cast<long>(k)); }
};

class StateSpace {
 public:
  enum class Kind { explicit_list, product_grid };

  /// States in the given order. `coords`, when nonempty, attaches a
  /// coordinate vector to every state.
  static StateSpace explicit_list(std::vector<std::string> ids, std::vector<std::vector<Rational>> coords = {}) {
    if (ids.empty()) throw DomainError("state space must be nonempty");
    if (!coords.empty() && coords.size() != ids.size())
      throw DomainError("coordinate count differs from state count");
    StateSpace sp;
    sp.kind_ = Kind::explicit_list;
    sp.ids_ = std::move(ids);
    sp.coords_ = std::move(coords);
    sp.index_ids();
    return sp;
  }

  /// Full Cartesian product of the dimensions, first dimension slowest.
  /// State ids are the comma-joined coordinates.
  static StateSpace product_grid(std::vector<GridDimension> dims) {
    if (dims.empty()) throw DomainError("product grid needs at least one dimension");
    StateSpace sp;
    sp.kind_ = Kind::product_grid;
    std::size_t total = 1;
    for (const auto& d : dims) {
      if (total > (std::size_t{1} << 24) / d.points()) throw CapacityError("product grid too large");
      total *= d.points();
    }
    std::vector<std::size_t> k(dims.size(), 0);
    for (std::size_t s = 0; s < total; ++s) {
      std::vector<Rational> c;
      std::string id;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        c.push_back(dims[i].point(k[i]));
        if (i) id += ',';
        id += c.back().str();
      }
      sp.ids_.push_back(std::move(id));
      sp.coords_.push_back(std::move(c));
      for (std::size_t i = dims.size(); i-- > 0;) {
        if (++k[i] < dims[i].points()) break;
        k[i] = 0;
      }
    }
    sp.dims_ = std::move(dims);
    sp.index_ids();
    return sp;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(State s) const { return ids_.at(s); }
  std::span<const std::string> ids() const noexcept { return ids_; }
  bool has_coords() const noexcept { return !coords_.empty(); }
  const std::vector<Rational>& coords(State s) const { return coords_.at(s); }
  std::span<const GridDimension> dims() const noexcept { return dims_; }

  std::optional<State> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  State require(const std::string& id) const {
    auto s = find(id);
    if (!s) throw DomainError("unknown state \"" + id + "\"");
    return *s;
  }

  /// Table whose value at each state is f(coords(state)).
  template <class F>
  UtilityTable tabulate(F&& f) const {
    if (!has_coords()) throw DomainError("state space has no coordinates");
    return UtilityTable::generate(size(), [&](State s) { return f(coords_[s]); });
  }

 private:
  void index_ids() {
    for (State s = 0; s < ids_.size(); ++s)
      if (!index_.emplace(ids_[s], s).second) throw DomainError("duplicate state id \"" + ids_[s] + "\"");
  }

  Kind kind_ = Kind::explicit_list;
  std::vector<std::string> ids_;
  std::vector<std::vector<Rational>> coords_;
  std::vector<GridDimension> dims_;
  std::unordered_map<std::string, State> index_;
};

// ---------------------------------------------------------------------------
// Lotteries

/// Finite-support probability measure on states; zero entries are pruned
/// and probabilities sum to exactly 1.
class SimpleLottery {
 public:
  static SimpleLottery make(const std::map<State, Rational>& probabilities) {
    SimpleLottery p;
    Rational total;
    for (const auto& [s, q] : probabilities) {
      if (q.sign() < 0) throw DomainError("negative probability " + q.str());
      if (q.is_zero()) continue;
      p.support_.emplace(s, q);
      total += q;
    }
    if (total != Rational(1)) throw DomainError("probabilities sum to " + total.str() + ", not 1");
    return p;
  }
  static SimpleLottery dirac(State s) {
    SimpleLottery p;
    p.support_.emplace(s, Rational(1));
    return p;
  }

  const std::map<State, Rational>& support() const noexcept { return support_; }
  Rational probability(State s) const {
    auto it = support_.find(s);
    return it == support_.end() ? Rational(0) : it->second;
  }
  bool is_dirac() const noexcept { return support_.size() == 1; }

  friend bool operator==(const SimpleLottery&, const SimpleLottery&) = default;
  friend bool operator<(const SimpleLottery& a, const SimpleLottery& b) { return a.support_ < b.support_; }

 private:
  std::map<State, Rational> support_;
};

/// (1 - t) P + t Q.
inline SimpleLottery mix(const SimpleLottery& p, const SimpleLottery& q, const Rational& t) {
  if (t.sign() < 0 || t > Rational(1)) throw DomainError("mixture weight " + t.str() + " outside [0,1]");
  std::map<State, Rational> out;
  Rational keep = Rational(1) - t;
  for (const auto& [s, pr] : p.support()) out[s] += keep * pr;
  for (const auto& [s, pr] : q.support()) out[s] += t * pr;
  return SimpleLottery::make(out);
}

inline Rational expectation(const SimpleLottery& p, const UtilityTable& u) {
  Rational e;
  for (const auto& [s, pr] : p.support()) {
    if (s >= u.size()) throw DomainError("lottery support outside the utility table's domain");
    e += pr * u[s];
  }
  return e;
}

// ---------------------------------------------------------------------------
// Weak orders

/// Complete, transitive relation on items 0..size-1 (states or lotteries).
class WeakOrder {
 public:
  static WeakOrder by_utility(UtilityTable u) {
    WeakOrder w;
    w.rep_ = std::move(u);
    return w;
  }

  /// `ge[a][b]` is true iff a is weakly preferred to b. Completeness and
  /// transitivity are validated (cubic in the item count).
  static WeakOrder by_table(std::vector<std::vector<bool>> ge) {
    const std::size_t n = ge.size();
    for (const auto& row : ge)
      if (row.size() != n) throw DomainError("comparison table is not square");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!ge[a][b] && !ge[b][a])
          throw DomainError("comparison table incomplete at (" + std::to_string(a) + "," + std::to_string(b) + ")");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!ge[a][b]) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (ge[b][c] && !ge[a][c])
            throw DomainError("comparison table intransitive at (" + std::to_string(a) + "," + std::to_string(b) +
                              "," + std::to_string(c) + ")");
      }
    WeakOrder w;
    w.rep_ = std::move(ge);
    return w;
  }

  std::size_t size() const noexcept {
    if (auto u = utility()) return u->size();
    return std::get<Table>(rep_).size();
  }

  bool ge(std::size_t a, std::size_t b) const {
    if (auto u = utility()) return (*u)[a] >= (*u)[b];
    return std::get<Table>(rep_)[a][b];
  }
  bool gt(std::size_t a, std::size_t b) const { return ge(a, b) && !ge(b, a); }
  bool eq(std::size_t a, std::size_t b) const { return ge(a, b) && ge(b, a); }

  const UtilityTable* utility() const noexcept { return std::get_if<UtilityTable>(&rep_); }

  /// True iff every item is indifferent to every other.
  bool is_trivial() const {
    for (std::size_t a = 1; a < size(); ++a)
      if (!eq(0, a)) return false;
    return true;
  }

  /// class_of[a] = smallest item indifferent to a.
  std::vector<std::size_t> indifference_classes() const {
    const std::size_t n = size();
    std::vector<std::size_t> cls(n);
    if (auto u = utility()) {
      std::map<Rational, std::size_t> first;
      for (std::size_t a = 0; a < n; ++a) cls[a] = first.emplace((*u)[a], a).first->second;
      return cls;
    }
    for (std::size_t a = 0; a < n; ++a) {
      cls[a] = a;
      for (std::size_t b = 0; b < a; ++b)
        if (eq(a, b)) {
          cls[a] = cls[b];
          break;
        }
    }
    return cls;
  }

 private:
  using Table = std::vector<std::vector<bool>>;
  std::variant<UtilityTable, Table> rep_;
};

// ---------------------------------------------------------------------------
// Societies

/// Utility tables for n agents plus an ethical table, on one state space.
struct Profile {
  std::vector<UtilityTable> agents;
  UtilityTable ethical;

  std::size_t n() const noexcept { return agents.size(); }

  void validate(std::size_t states) const {
    if (agents.empty()) throw DomainError("profile has no agents");
    if (ethical.size() != states) throw DomainError("ethical table does not cover the state space");
    for (const auto& u : agents)
      if (u.size() != states) throw DomainError("agent table does not cover the state space");
  }

  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Ethical order plus n >= 2 individual orders on a shared state space,
/// with optional NM (u*, v*) and Alt (u, v) utility profiles.
class Society {
 public:
  Society(StateSpace space, std::vector<WeakOrder> individuals, WeakOrder ethical,
          std::vector<std::string> names = {})
      : space_(std::move(space)), individuals_(std::move(individuals)), ethical_(std::move(ethical)),
        names_(std::move(names)) {
    if (individuals_.size() < 2) throw DomainError("a society needs at least two individuals");
    for (const auto& w : individuals_)
      if (w.size() != space_.size()) throw DomainError("individual order not defined on the state space");
    if (ethical_.size() != space_.size()) throw DomainError("ethical order not defined on the state space");
    if (names_.empty())
      for (std::size_t i = 1; i <= individuals_.size(); ++i) names_.push_back(std::to_string(i));
    if (names_.size() != individuals_.size()) throw DomainError("agent name count differs from agent count");
  }

  /// Orders induced by the profile's tables.
  static Society from_profile(StateSpace space, const Profile& p, std::vector<std::string> names = {}) {
    p.validate(space.size());
    std::vector<WeakOrder> ind;
    for (const auto& u : p.agents) ind.push_back(WeakOrder::by_utility(u));
    return Society(std::move(space), std::move(ind), WeakOrder::by_utility(p.ethical), std::move(names));
  }

  Society& with_nm(Profile p) {
    check_profile(p);
    nm_ = std::move(p);
    return *this;
  }
  Society& with_alt(Profile p) {
    check_profile(p);
    alt_ = std::move(p);
    return *this;
  }

  const StateSpace& space() const noexcept { return space_; }
  std::size_t n() const noexcept { return individuals_.size(); }
  const WeakOrder& individual(std::size_t i) const { return individuals_.at(i); }
  std::span<const WeakOrder> individuals() const noexcept { return individuals_; }
  const WeakOrder& ethical() const noexcept { return ethical_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::span<const std::string> names() const noexcept { return names_; }
  const std::optional<Profile>& nm() const noexcept { return nm_; }
  const std::optional<Profile>& alt() const noexcept { return alt_; }

  /// Profile of the base orders, when every base order is utility-backed.
  std::optional<Profile> base_profile() const {
    Profile p;
    for (const auto& w : individuals_) {
      if (!w.utility()) return std::nullopt;
      p.agents.push_back(*w.utility());
    }
    if (!ethical_.utility()) return std::nullopt;
    p.ethical = *ethical_.utility();
    return p;
  }

 private:
  void check_profile(const Profile& p) const {
    p.validate(space_.size());
    if (p.n() != n()) throw DomainError("profile agent count differs from the society's");
  }

  StateSpace space_;
  std::vector<WeakOrder> individuals_;
  WeakOrder ethical_;
  std::vector<std::string> names_;
  std::optional<Profile> nm_;
  std::optional<Profile> alt_;
};

// ---------------------------------------------------------------------------
// Society-level axioms

/// x >=_i y for every individual, strictly for at least one.
inline bool pareto_dominates(const Society& soc, State x, State y) {
  if (x >= soc.space().size() || y >= soc.space().size()) throw DomainError("unknown state");
  bool strict = false;
  for (const auto& w : soc.individuals()) {
    if (!w.ge(x, y)) return false;
    strict = strict || !w.ge(y, x);
  }
  return strict;
}

/// Witness (x, y): y is Pareto-dominated by x but x is not ethically
/// strictly better.
inline Verdict<StatePair> check_pareto_criterion(const Society& soc) {
  const std::size_t m = soc.space().size();
  for (State x = 0; x < m; ++x)
    for (State y = 0; y < m; ++y)
      if (pareto_dominates(soc, x, y) && !soc.ethical().gt(x, y)) return Verdict<StatePair>::fail({x, y});
  return Verdict<StatePair>::ok();
}

struct SemiSeparabilityOptions {
  /// Upper bound on |X|^(n+1), the size of the brute-force search space.
  std::uint64_t cap = std::uint64_t{1} << 30;
};

/// PASS iff for every profile (x_1..x_n) some x has x ~_i x_i for all i.
/// Witness: the lexicographically first failing profile.
///
/// Answers the X^n x X search by comparing the realized indifference-class
/// signatures with their full product, so the cost is quadratic in |X|.
inline Verdict<std::vector<State>> check_semi_separable(std::span<const WeakOrder> individuals,
                                                         const SemiSeparabilityOptions& opt = {}) {
  if (individuals.empty()) throw DomainError("semi-separability needs at least one individual");
  const std::size_t m = individuals.front().size();
  const std::size_t n = individuals.size();
  for (const auto& w : individuals)
    if (w.size() != m) throw DomainError("individual orders defined on different spaces");
  {
    std::uint64_t work = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      if (work > opt.cap / m) throw CapacityError("semi-separability search |X|^(n+1) exceeds the configured cap");
      work *= m;
    }
  }
  std::vector<std::vector<std::size_t>> cls(n);
  std::vector<std::vector<State>> reps(n);  // class representatives, ascending
  for (std::size_t i = 0; i < n; ++i) {
    cls[i] = individuals[i].indifference_classes();
    for (State s = 0; s < m; ++s)
      if (cls[i][s] == s) reps[i].push_back(s);
  }
  struct VecHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
      std::size_t h = v.size();
      for (auto x : v) h = h * 1000003u ^ x;
      return h;
    }
  };
  std::unordered_set<std::vector<State>, VecHash> realized;
  for (State s = 0; s < m; ++s) {
    std::vector<State> sig(n);
    for (std::size_t i = 0; i < n; ++i) sig[i] = cls[i][s];
    realized.insert(std::move(sig));
  }
  std::uint64_t combos = 1;
  for (const auto& r : reps) {
    if (combos > std::numeric_limits<std::uint64_t>::max() / r.size()) {
      combos = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    combos *= r.size();
  }
  if (combos == realized.size()) return Verdict<std::vector<State>>::ok();

  std::vector<std::size_t> k(n, 0);
  std::vector<State> sig(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) sig[i] = reps[i][k[i]];
    if (!realized.contains(sig)) return Verdict<std::vector<State>>::fail(sig);
    std::size_t i = n;
    while (i-- > 0) {
      if (++k[i] < reps[i].size()) break;
      k[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return Verdict<std::vector<State>>::ok();  // unreachable when counts differ
}

inline Verdict<std::vector<State>> check_semi_separable(const Society& soc, const SemiSeparabilityOptions& opt = {}) {
  return check_semi_separable(soc.individuals(), opt);
}

/// `ext` orders `lotteries`; `base` orders states. Checks
/// x >= y <=> delta_x >= delta_y for every pair of states.
inline Verdict<StatePair> check_probabilistic_extension(std::span<const SimpleLottery> lotteries, const WeakOrder& ext,
                                                        const WeakOrder& base) {
  if (ext.size() != lotteries.size()) throw DomainError("lottery order size differs from the lottery list");
  std::vector<std::optional<std::size_t>> dirac(base.size());
  for (std::size_t k = 0; k < lotteries.size(); ++k)
    if (lotteries[k].is_dirac()) {
      State s = lotteries[k].support().begin()->first;
      if (s < dirac.size() && !dirac[s]) dirac[s] = k;
    }
  for (State s = 0; s < dirac.size(); ++s)
    if (!dirac[s]) throw DomainError("Dirac lottery for state " + std::to_string(s) + " missing from the extension");
  for (State x = 0; x < base.size(); ++x)
    for (State y = 0; y < base.size(); ++y)
      if (base.ge(x, y) != ext.ge(*dirac[x], *dirac[y])) return Verdict<StatePair>::fail({x, y});
  return Verdict<StatePair>::ok();
}

/// x >= y <=> [x,y] >= [y,y] for every pair.
inline Verdict<StatePair> matches(const WeakOrder& order, const AltSystem& alt) {
  if (order.size() != alt.size()) throw DomainError("order and alt system defined on different spaces");
  for (State x = 0; x < order.size(); ++x)
    for (State y = 0; y < order.size(); ++y)
      if (order.ge(x, y) != alt.ge(x, y, y, y)) return Verdict<StatePair>::fail({x, y});
  return Verdict<StatePair>::ok();
}

}  // namespace utilagg
