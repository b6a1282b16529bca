#pragma once

/// @file nm.hpp
/// Expected-utility machinery on finite lottery samples: independence,
/// NM representation and positive-affine uniqueness.
///
/// Independence and representation are checked on enumerated samples rather
/// than on all simple lotteries. Segmental continuity is not checked: on the
/// finite dyadic sets of mixture weights used here every subset is closed,
/// so the condition has no finite content.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "utilagg/core.hpp"

namespace utilagg {

/// A finite list of lotteries with a weak order on it. The first
/// `base_count` entries are the lotteries quantified over by
/// check_independence; the rest hold their mixtures.
class LotteryOrderSample {
 public:
  LotteryOrderSample(std::vector<SimpleLottery> lotteries, WeakOrder order, unsigned depth,
                     std::optional<std::size_t> base_count = std::nullopt)
      : lotteries_(std::move(lotteries)), order_(std::move(order)), depth_(depth),
        base_count_(base_count.value_or(lotteries_.size())) {
    if (order_.size() != lotteries_.size()) throw DomainError("lottery order size differs from the lottery list");
    if (base_count_ > lotteries_.size()) throw DomainError("base count exceeds the lottery list");
    if (depth_ > 16) throw DomainError("mixture depth above 16");
    for (std::size_t k = 0; k < lotteries_.size(); ++k) index_.emplace(lotteries_[k], k);
  }

  /// Base lotteries plus every mixture (1-t)P + tR with P, R in the base and
  /// t = k/2^depth < 1, ordered by `key`.
  static LotteryOrderSample with_mixture_closure(const std::vector<SimpleLottery>& base,
                                                 const std::function<Rational(const SimpleLottery&)>& key,
                                                 unsigned depth) {
    std::vector<SimpleLottery> all;
    std::map<SimpleLottery, std::size_t> seen;
    auto add = [&](SimpleLottery p) {
      if (seen.emplace(p, all.size()).second) all.push_back(std::move(p));
    };
    for (const auto& p : base) add(p);
    const std::size_t base_count = all.size();
    const Rational unit = dyadic_unit(depth);
    const long steps = 1L << depth;
    for (std::size_t a = 0; a < base_count; ++a)
      for (std::size_t r = 0; r < base_count; ++r)
        for (long k = 1; k < steps; ++k) add(mix(all[a], all[r], unit * Rational(k)));
    std::vector<Rational> keys;
    keys.reserve(all.size());
    for (const auto& p : all) keys.push_back(key(p));
    return LotteryOrderSample(std::move(all), WeakOrder::by_utility(UtilityTable(std::move(keys))), depth, base_count);
  }

  /// Sample ordered by expected utility of `u`.
  static LotteryOrderSample expected_utility(const std::vector<SimpleLottery>& base, const UtilityTable& u,
                                             unsigned depth) {
    return with_mixture_closure(base, [&u](const SimpleLottery& p) { return expectation(p, u); }, depth);
  }

  std::span<const SimpleLottery> lotteries() const noexcept { return lotteries_; }
  const SimpleLottery& lottery(std::size_t k) const { return lotteries_.at(k); }
  const WeakOrder& order() const noexcept { return order_; }
  unsigned depth() const noexcept { return depth_; }
  std::size_t base_count() const noexcept { return base_count_; }

  std::optional<std::size_t> find(const SimpleLottery& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<SimpleLottery> lotteries_;
  WeakOrder order_;
  unsigned depth_;
  std::size_t base_count_;
  std::map<SimpleLottery, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Sample generators

/// Every Dirac lottery plus the dyadic mixtures of each pair of Diracs at
/// depth m.
inline std::vector<SimpleLottery> dirac_and_pairwise_lotteries(std::size_t states, unsigned depth) {
  std::vector<SimpleLottery> out;
  for (State s = 0; s < states; ++s) out.push_back(SimpleLottery::dirac(s));
  const Rational unit = dyadic_unit(depth);
  for (State a = 0; a < states; ++a)
    for (State b = a + 1; b < states; ++b)
      for (long k = 1; k < (1L << depth); ++k)
        out.push_back(mix(SimpleLottery::dirac(a), SimpleLottery::dirac(b), unit * Rational(k)));
  return out;
}

/// `count` lotteries with supports of up to `max_support` states and
/// probabilities that are multiples of 2^-depth.
inline std::vector<SimpleLottery> random_lotteries(std::size_t states, std::size_t count, std::uint64_t seed,
                                                   unsigned depth, std::size_t max_support = 3) {
  if (states == 0) throw DomainError("no states to draw lotteries on");
  std::mt19937_64 rng(seed);
  const long total = 1L << depth;
  std::vector<SimpleLottery> out;
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t support = 1 + rng() % std::min(max_support, states);
    std::map<State, Rational> pr;
    long left = total;
    for (std::size_t j = 0; j + 1 < support && left > 0; ++j) {
      long take = static_cast<long>(rng() % static_cast<std::uint64_t>(left + 1));
      pr[rng() % states] += Rational(take, total);
      left -= take;
    }
    pr[rng() % states] += Rational(left, total);
    out.push_back(SimpleLottery::make(pr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

struct IndependenceWitness {
  std::size_t better;  // P, index into the sample
  std::size_t worse;   // Q
  std::size_t common;  // R
  Rational t;
};

/// PASS iff for all base P > Q, base R and t = k/2^depth < 1,
/// (1-t)P + tR > (1-t)Q + tR. Throws when a needed mixture is not in the
/// sample.
inline Verdict<IndependenceWitness> check_independence(const LotteryOrderSample& s) {
  const auto& ord = s.order();
  const Rational unit = dyadic_unit(s.depth());
  const long steps = 1L << s.depth();
  auto locate = [&](const SimpleLottery& p) {
    auto k = s.find(p);
    if (!k) throw DomainError("mixture escapes the enumerated lottery sample");
    return *k;
  };
  for (std::size_t p = 0; p < s.base_count(); ++p)
    for (std::size_t q = 0; q < s.base_count(); ++q) {
      if (!ord.gt(p, q)) continue;
      for (std::size_t r = 0; r < s.base_count(); ++r)
        for (long k = 0; k < steps; ++k) {
          Rational t = unit * Rational(k);
          std::size_t mp = locate(mix(s.lottery(p), s.lottery(r), t));
          std::size_t mq = locate(mix(s.lottery(q), s.lottery(r), t));
          if (!ord.gt(mp, mq)) return Verdict<IndependenceWitness>::fail({p, q, r, t});
        }
    }
  return Verdict<IndependenceWitness>::ok();
}

/// P >= Q <=> E_P[u] >= E_Q[u] over every pair of sample lotteries.
/// Witness: the first disagreeing pair of sample indices.
inline Verdict<std::pair<std::size_t, std::size_t>> nm_represents(const UtilityTable& u, const LotteryOrderSample& s) {
  std::vector<Rational> e;
  e.reserve(s.lotteries().size());
  for (const auto& p : s.lotteries()) e.push_back(expectation(p, u));
  for (std::size_t a = 0; a < e.size(); ++a)
    for (std::size_t b = 0; b < e.size(); ++b)
      if (s.order().ge(a, b) != (e[a] >= e[b])) return Verdict<std::pair<std::size_t, std::size_t>>::fail({a, b});
  return Verdict<std::pair<std::size_t, std::size_t>>::ok();
}

struct Affine {
  Rational alpha;
  Rational beta;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// (alpha > 0, beta) with w = alpha * u + beta pointwise, if one exists.
inline std::optional<Affine> affine_relation(const UtilityTable& u, const UtilityTable& w) {
  if (u.size() != w.size()) throw DomainError("utility tables defined on different spaces");
  if (u.size() == 0) return Affine{Rational(1), Rational(0)};
  std::optional<State> other;
  for (State s = 1; s < u.size() && !other; ++s)
    if (u[s] != u[0]) other = s;
  Affine f;
  if (!other) {
    f = {Rational(1), w[0] - u[0]};
  } else {
    f.alpha = (w[*other] - w[0]) / (u[*other] - u[0]);
    f.beta = w[0] - f.alpha * u[0];
  }
  if (f.alpha.sign() <= 0) return std::nullopt;
  for (State s = 0; s < u.size(); ++s)
    if (f.alpha * u[s] + f.beta != w[s]) return std::nullopt;
  return f;
}

}  // namespace utilagg
