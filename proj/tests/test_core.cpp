#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "utilagg/coincidence.hpp"
#include "utilagg/core.hpp"

using namespace utilagg;

namespace {

UtilityTable tab(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return UtilityTable(std::move(v));
}

Society two_agent(const UtilityTable& u1, const UtilityTable& u2, const UtilityTable& v) {
  return Society::from_profile(gen::labelled_space(v.size()), Profile{{u1, u2}, v});
}

}  // namespace

// ---------------------------------------------------------------------------
// State spaces

TEST(StateSpace, ProductGridEnumeratesFirstDimensionSlowest) {
  auto d = GridDimension::make(Rational(0), Rational(1), Rational(1, 2));
  auto sp = StateSpace::product_grid({d, d});
  ASSERT_EQ(sp.size(), 9u);
  EXPECT_EQ(sp.id(0), "0/1,0/1");
  EXPECT_EQ(sp.id(1), "0/1,1/2");
  EXPECT_EQ(sp.id(3), "1/2,0/1");
  EXPECT_EQ(sp.require("1/1,1/2"), 7u);
}

TEST(StateSpace, RejectsNonDyadicResolutionAndDuplicates) {
  EXPECT_THROW(GridDimension::make(Rational(0), Rational(1), Rational(1, 3)), DomainError);
  EXPECT_THROW(GridDimension::make(Rational(0), Rational(3), Rational(2)), DomainError);
  EXPECT_NO_THROW(GridDimension::make(Rational(0), Rational(3), Rational(3, 4)));
  EXPECT_THROW(StateSpace::explicit_list({"a", "a"}), DomainError);
  EXPECT_THROW(StateSpace::explicit_list({}), DomainError);
}

// ---------------------------------------------------------------------------
// Lotteries

TEST(Lottery, MixEndpointsAndMidpoint) {
  auto p = SimpleLottery::make({{0, Rational(1, 3)}, {1, Rational(2, 3)}});
  auto q = SimpleLottery::dirac(2);
  EXPECT_EQ(mix(p, q, Rational(0)), p);
  EXPECT_EQ(mix(p, q, Rational(1)), q);
  auto half = mix(SimpleLottery::dirac(0), SimpleLottery::dirac(1), Rational(1, 2));
  EXPECT_EQ(half, SimpleLottery::make({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  EXPECT_THROW(mix(p, q, Rational(3, 2)), DomainError);
  EXPECT_THROW(mix(p, q, Rational(-1, 2)), DomainError);
}

TEST(Lottery, MixOfThreeSupportLotteriesByHand) {
  auto p = SimpleLottery::make({{0, Rational(1, 2)}, {1, Rational(1, 4)}, {2, Rational(1, 4)}});
  auto q = SimpleLottery::make({{1, Rational(1, 3)}, {2, Rational(1, 3)}, {3, Rational(1, 3)}});
  auto r = mix(p, q, Rational(3, 8));
  // (5/8)(1/2) = 5/16; (5/8)(1/4) + (3/8)(1/3) = 5/32 + 4/32 = 9/32; same for 2; (3/8)(1/3) = 1/8.
  EXPECT_EQ(r.probability(0), Rational(5, 16));
  EXPECT_EQ(r.probability(1), Rational(9, 32));
  EXPECT_EQ(r.probability(2), Rational(9, 32));
  EXPECT_EQ(r.probability(3), Rational(1, 8));
  EXPECT_EQ(r.support().size(), 4u);
}

TEST(Lottery, InvariantsEnforced) {
  EXPECT_THROW(SimpleLottery::make({{0, Rational(1, 2)}}), DomainError);
  EXPECT_THROW(SimpleLottery::make({{0, Rational(3, 2)}, {1, Rational(-1, 2)}}), DomainError);
  auto p = SimpleLottery::make({{0, Rational(1)}, {1, Rational(0)}});
  EXPECT_EQ(p.support().size(), 1u);
  EXPECT_TRUE(p.is_dirac());
}

TEST(Lottery, ExpectationExamples) {
  auto u = tab({4, 0, 7});
  EXPECT_EQ(expectation(SimpleLottery::dirac(2), u), Rational(7));
  EXPECT_EQ(expectation(SimpleLottery::make({{0, Rational(1, 4)}, {1, Rational(3, 4)}}), u), Rational(1));
  EXPECT_THROW(expectation(SimpleLottery::dirac(5), u), DomainError);
}

TEST(LotteryProperty, ExpectationMatchesSummationOracleAndIsLinearInMixing) {
  gen::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto u = rng.table(8);
    auto draw = [&] {
      std::map<State, Rational> pr;
      long left = 64;
      for (int k = 0; k < 4; ++k) {
        long take = rng.integer(0, left);
        pr[rng.index(8)] += Rational(take, 64);
        left -= take;
      }
      pr[rng.index(8)] += Rational(left, 64);
      return SimpleLottery::make(pr);
    };
    auto p = draw(), q = draw();
    EXPECT_EQ(expectation(p, u).raw(), oracle::expectation(p.support(), u));
    Rational t = rng.dyadic(5, 0, 32);
    EXPECT_EQ(expectation(mix(p, q, t), u), (Rational(1) - t) * expectation(p, u) + t * expectation(q, u));
  }
}

// ---------------------------------------------------------------------------
// Weak orders

TEST(WeakOrder, TableFormValidated) {
  EXPECT_NO_THROW(WeakOrder::by_table({{true, true}, {false, true}}));
  EXPECT_THROW(WeakOrder::by_table({{true, false}, {false, true}}), DomainError);
  // a >= b, b >= c, but not a >= c
  EXPECT_THROW(WeakOrder::by_table({{true, true, false}, {false, true, true}, {true, false, true}}), DomainError);
  auto w = WeakOrder::by_table({{true, true, true}, {true, true, true}, {false, false, true}});
  EXPECT_TRUE(w.eq(0, 1));
  EXPECT_TRUE(w.gt(0, 2));
  EXPECT_EQ(w.indifference_classes(), (std::vector<std::size_t>{0, 0, 2}));
}

// ---------------------------------------------------------------------------
// Pareto

TEST(Pareto, DominanceExamples) {
  auto soc = two_agent(tab({1, 0, 2}), tab({5, 5, 9}), tab({0, 0, 0}));
  EXPECT_FALSE(pareto_dominates(soc, 0, 0));
  EXPECT_TRUE(pareto_dominates(soc, 0, 1));
  auto soc2 = two_agent(tab({1, 0}), tab({0, 1}), tab({0, 0}));
  EXPECT_FALSE(pareto_dominates(soc2, 0, 1));
  EXPECT_THROW(pareto_dominates(soc2, 0, 7), DomainError);
}

TEST(Pareto, CriterionExamples) {
  auto u1 = tab({0, 1, 2, 3}), u2 = tab({3, 0, 2, 1});
  EXPECT_TRUE(check_pareto_criterion(two_agent(u1, u2, u1 + u2)).pass());
  auto c = tab({4, 4, 4, 4});
  EXPECT_TRUE(check_pareto_criterion(two_agent(c, c, tab({0, 9, 1, 3}))).pass());
  // v = u1 - u2 with u1 constant: any rise in u2 is an ethical fall.
  auto soc = two_agent(c, u2, c - u2);
  auto v = check_pareto_criterion(soc);
  ASSERT_FALSE(v.pass());
  auto o = oracle::pareto_violation({c, u2}, c - u2);
  ASSERT_TRUE(o);
  EXPECT_EQ(*v.witness, *o);
  EXPECT_GT(u2[v.witness->first], u2[v.witness->second]);
}

TEST(ParetoProperty, IrreflexiveAsymmetricAndPlantedPositiveWeightsPass) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.index(7);
    std::vector<UtilityTable> us{rng.table(m, 3), rng.table(m, 3), rng.table(m, 3)};
    std::vector<Rational> a{rng.positive(), rng.positive(), rng.positive()};
    UtilityTable v = linear_combination(us, a, rng.rational());
    auto soc = Society::from_profile(gen::labelled_space(m), Profile{us, v});
    for (State x = 0; x < m; ++x) {
      EXPECT_FALSE(pareto_dominates(soc, x, x));
      for (State y = 0; y < m; ++y) {
        if (pareto_dominates(soc, x, y)) {
          EXPECT_FALSE(pareto_dominates(soc, y, x));
        }
      }
    }
    EXPECT_TRUE(check_pareto_criterion(soc).pass());
    auto w = rng.table(m, 3);
    EXPECT_EQ(check_pareto_criterion(Society::from_profile(gen::labelled_space(m), Profile{us, w})).witness,
              oracle::pareto_violation(us, w));
  }
}

// ---------------------------------------------------------------------------
// Semi-separability

TEST(SemiSeparability, ProductSocietyPasses) {
  auto ps = gen::product_society({3, 5}, {{Rational(0), Rational(1), Rational(4)},
                                          {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)}});
  auto soc = Society::from_profile(ps.space, Profile{ps.agents, ps.agents[0] + ps.agents[1]});
  EXPECT_TRUE(check_semi_separable(soc).pass());
}

TEST(SemiSeparability, SimplexFixtureFails) {
  auto soc = simplex_counterexample(Rational(1, 4));
  auto v = check_semi_separable(soc);
  ASSERT_FALSE(v.pass());
  std::vector<UtilityTable> us{*soc.individual(0).utility(), *soc.individual(1).utility()};
  EXPECT_EQ(*v.witness, *oracle::semi_separability_violation(us));
}

// Consumers care about their own bundle only; the firm coordinate y enters
// nobody's utility, so the space is not a product over agents.
TEST(SemiSeparability, ProductionEconomyPasses) {
  auto d = GridDimension::make(Rational(0), Rational(2), Rational(1));
  auto sp = StateSpace::product_grid({d, d, d});
  auto u1 = sp.tabulate([](const auto& c) { return c[0] * c[0]; });
  auto u2 = sp.tabulate([](const auto& c) { return Rational(3) * c[1]; });
  auto soc = Society::from_profile(sp, Profile{{u1, u2}, u1 + u2});
  EXPECT_TRUE(check_semi_separable(soc).pass());
  EXPECT_FALSE(oracle::semi_separability_violation({u1, u2}));
}

TEST(SemiSeparability, CapacityGuard) {
  auto soc = simplex_counterexample(Rational(1, 4));
  EXPECT_THROW(check_semi_separable(soc, SemiSeparabilityOptions{10}), CapacityError);
}

TEST(SemiSeparabilityProperty, ClassSignaturesAgreeWithLiteralSearch) {
  gen::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.index(7), n = 2 + rng.index(2);
    std::vector<UtilityTable> us;
    for (std::size_t i = 0; i < n; ++i) us.push_back(rng.table(m, 1 + rng.integer(0, 2)));
    std::vector<WeakOrder> ws;
    for (const auto& u : us) ws.push_back(WeakOrder::by_utility(u));
    EXPECT_EQ(check_semi_separable(ws).witness, oracle::semi_separability_violation(us)) << "trial " << trial;
  }
}

TEST(SemiSeparabilityProperty, SeparableProductSocietiesAlwaysPass) {
  gen::Rng rng(19);
  const std::size_t sizes[] = {2, 3, 5};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> ks{sizes[rng.index(3)], sizes[rng.index(3)], sizes[rng.index(3)]};
    std::vector<std::vector<Rational>> lv;
    for (auto k : ks) {
      std::vector<Rational> l;
      for (std::size_t j = 0; j < k; ++j) l.push_back(rng.rational(3));  // ties allowed
      lv.push_back(l);
    }
    auto ps = gen::product_society(ks, lv);
    std::vector<WeakOrder> ws;
    for (const auto& u : ps.agents) ws.push_back(WeakOrder::by_utility(u));
    EXPECT_TRUE(check_semi_separable(ws).pass());
  }
}

// ---------------------------------------------------------------------------
// Probabilistic extension and matching

TEST(ProbabilisticExtension, Examples) {
  auto u = tab({0, 3, 1});
  auto lotteries = dirac_and_pairwise_lotteries(3, 2);
  std::vector<Rational> e;
  for (const auto& p : lotteries) e.push_back(expectation(p, u));
  auto ext = WeakOrder::by_utility(UtilityTable(e));
  EXPECT_TRUE(check_probabilistic_extension(lotteries, ext, WeakOrder::by_utility(u)).pass());
  auto flipped = WeakOrder::by_utility(tab({0, 1, 3}));
  auto v = check_probabilistic_extension(lotteries, ext, flipped);
  ASSERT_FALSE(v.pass());
  EXPECT_EQ(*v.witness, (StatePair{1, 2}));
  std::vector<SimpleLottery> no_dirac{mix(SimpleLottery::dirac(0), SimpleLottery::dirac(1), Rational(1, 2))};
  EXPECT_THROW(check_probabilistic_extension(no_dirac, WeakOrder::by_utility(tab({0})), WeakOrder::by_utility(u)),
               DomainError);
}

TEST(ProbabilisticExtensionProperty, AgreesWithPairwiseBruteForce) {
  gen::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.index(5);
    auto u = rng.table(m, 3), w = rng.table(m, 3);
    auto lotteries = dirac_and_pairwise_lotteries(m, 1);
    std::vector<Rational> e;
    for (const auto& p : lotteries) e.push_back(expectation(p, w));
    bool expected = true;
    for (State x = 0; x < m; ++x)
      for (State y = 0; y < m; ++y) expected = expected && ((u[x] >= u[y]) == (w[x] >= w[y]));
    EXPECT_EQ(check_probabilistic_extension(lotteries, WeakOrder::by_utility(UtilityTable(e)), WeakOrder::by_utility(u))
                  .pass(),
              expected);
  }
}

TEST(Matching, Examples) {
  auto u = tab({0, 2, 1, 5});
  auto order = WeakOrder::by_utility(u);
  EXPECT_TRUE(matches(order, AltSystem::by_utility(u)).pass());
  EXPECT_FALSE(matches(order, AltSystem::by_utility(Rational(-1) * u)).pass());
  EXPECT_TRUE(matches(order, AltSystem::by_utility(u.affine(Rational(3), Rational(7)))).pass());
}

TEST(MatchingProperty, PositiveAffineAltSystemsMatch) {
  gen::Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = rng.table(1 + rng.index(8), 5);
    auto a = AltSystem::by_utility(u.affine(rng.positive(), rng.rational()));
    bool brute = true;
    for (State x = 0; x < u.size(); ++x)
      for (State y = 0; y < u.size(); ++y) brute = brute && ((u[x] >= u[y]) == a.ge(x, y, y, y));
    EXPECT_TRUE(brute);
    EXPECT_EQ(matches(WeakOrder::by_utility(u), a).pass(), brute);
  }
}

TEST(CoreProperty, ChecksArePure) {
  auto soc = simplex_counterexample(Rational(1, 8));
  EXPECT_EQ(check_semi_separable(soc).witness, check_semi_separable(soc).witness);
  EXPECT_EQ(check_pareto_criterion(soc).witness, check_pareto_criterion(soc).witness);
}
