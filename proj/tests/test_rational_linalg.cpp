#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "utilagg/linalg.hpp"
#include "utilagg/rational.hpp"

using utilagg::Matrix;
using utilagg::Rational;
using utilagg::Vector;

TEST(Rational, CanonicalFormAndSerialization) {
  EXPECT_EQ(Rational(6, -4).str(), "-3/2");
  EXPECT_EQ(Rational(3).str(), "3/1");
  EXPECT_EQ(Rational(0, 7).str(), "0/1");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_EQ(Rational::parse(Rational(22, 7).str()), Rational(22, 7));
}

TEST(Rational, ParseRejectsMalformedText) {
  for (const char* bad : {"1/0", "", "1/", "/2", "a/b", "1.5", "1/-2", "1//2", " 1/2", "0x10"})
    EXPECT_THROW(Rational::parse(bad), utilagg::ParseError) << bad;
}

TEST(Rational, ExactArithmetic) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_THROW(a / Rational(0), utilagg::DomainError);
  EXPECT_LT(b, a);
  EXPECT_EQ(utilagg::abs(Rational(-3, 4)), Rational(3, 4));
}

TEST(Rational, DyadicHelpers) {
  EXPECT_EQ(utilagg::dyadic_unit(3), Rational(1, 8));
  EXPECT_EQ(utilagg::dyadic_exponent(Rational(1, 16)), 4u);
  EXPECT_EQ(utilagg::dyadic_exponent(Rational(1)), 0u);
  EXPECT_FALSE(utilagg::dyadic_exponent(Rational(3, 16)));
  EXPECT_FALSE(utilagg::dyadic_exponent(Rational(1, 3)));
  EXPECT_EQ(utilagg::exact_sqrt(Rational(9, 16)), Rational(3, 4));
  EXPECT_FALSE(utilagg::exact_sqrt(Rational(1, 2)));
  EXPECT_FALSE(utilagg::exact_sqrt(Rational(-1)));
}

TEST(Linalg, RrefRankAndNullSpace) {
  Matrix m = Matrix::from_rows({{Rational(1), Rational(2), Rational(3)},
                                {Rational(2), Rational(4), Rational(6)},
                                {Rational(1), Rational(0), Rational(1)}});
  EXPECT_EQ(utilagg::rank(m), 2u);
  auto ns = utilagg::null_space(m);
  ASSERT_EQ(ns.size(), 1u);
  for (const auto& r : m * ns[0]) EXPECT_TRUE(r.is_zero());
}

TEST(Linalg, InverseOfRegularAndSingular) {
  Matrix b = Matrix::from_rows({{Rational(2), Rational(1)}, {Rational(1), Rational(1)}});
  Matrix inv = utilagg::inverse(b);
  EXPECT_EQ(inv, Matrix::from_rows({{Rational(1), Rational(-1)}, {Rational(-1), Rational(2)}}));
  Matrix s = Matrix::from_rows({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}});
  EXPECT_THROW(utilagg::inverse(s), utilagg::DomainError);
}

TEST(Linalg, SolveInconsistentSystem) {
  Matrix m = Matrix::from_rows({{Rational(1), Rational(1)}, {Rational(1), Rational(1)}});
  Vector rhs{Rational(1), Rational(2)};
  EXPECT_FALSE(utilagg::solve(m, rhs));
}

// Fraction-free solve against a rank oracle and substitution, including
// rank-deficient systems where pivot columns are skipped.
TEST(LinalgProperty, SolveAgreesWithRankOracle) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng.index(6), cols = 1 + rng.index(5);
    std::vector<Vector> r(rows, Vector(cols));
    for (auto& row : r)
      for (auto& x : row) x = rng.integer(0, 3) == 0 ? Rational(0) : rng.rational(20);
    if (rows > 2 && rng.coin()) r[rows - 1] = r[0];  // planted dependency
    Matrix m = Matrix::from_rows(r);
    Vector rhs(rows);
    for (auto& x : rhs) x = rng.rational(20);
    if (rng.coin()) {
      Vector x(cols);
      for (auto& v : x) v = rng.rational(10);
      rhs = m * x;
    }
    auto sol = utilagg::solve(m, rhs);
    std::vector<Vector> columns;
    for (std::size_t c = 0; c < cols; ++c) columns.push_back(m.col(c));
    EXPECT_EQ(sol.has_value(), oracle::in_span(rhs, columns)) << "trial " << trial;
    if (sol) {
      EXPECT_EQ(m * *sol, rhs);
    }
  }
}
