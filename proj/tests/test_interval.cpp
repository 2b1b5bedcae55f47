#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "checks.hpp"
#include "turingcert/interval.hpp"

using namespace turingcert;

TEST(Interval, RejectsInvertedBounds) { EXPECT_THROW(Interval(2.0, 1.0), InvalidInterval); }

TEST(Interval, RejectsNaN) { EXPECT_THROW(Interval(NAN, 1.0), InvalidInterval); }

TEST(Interval, ExactSumsStayTight) {
  const Interval s = Interval(1, 2) + Interval(3, 4);
  EXPECT_EQ(s.lo(), 4.0);
  EXPECT_EQ(s.hi(), 6.0);
}

TEST(Interval, InexactSumIsWidened) {
  const Interval s = Interval(0.1) + Interval(0.2);
  EXPECT_LT(s.lo(), s.hi());
  EXPECT_TRUE(checks::contains(s, checks::mp(0.1) + checks::mp(0.2)));
}

TEST(Interval, ProductCornerCases) {
  const Interval p = Interval(-2, 3) * Interval(-5, 4);
  EXPECT_EQ(p.lo(), -15.0);
  EXPECT_EQ(p.hi(), 12.0);
}

TEST(Interval, DivisionByZeroContainingDenominator) {
  EXPECT_THROW(Interval(1.0) / Interval(-1, 1), DivisionByZeroInterval);
}

TEST(Interval, SqrtOfNegativeThrows) { EXPECT_THROW(sqrt(Interval(-2, -1)), NegativeBase); }

TEST(Interval, SqrtClampsSlightlyNegativeLowerEnd) {
  const Interval r = sqrt(Interval(-1e-300, 4));
  EXPECT_EQ(r.lo(), 0.0);
  EXPECT_GE(r.hi(), 2.0);
}

TEST(Interval, PowIntEvenPowerOfStraddlingInterval) {
  const Interval r = pow_int(Interval(-2, 1), 2);
  EXPECT_EQ(r.lo(), 0.0);
  EXPECT_EQ(r.hi(), 4.0);
}

TEST(Interval, PiEnclosure) {
  EXPECT_TRUE(checks::contains(Interval::pi(), boost::math::constants::pi<checks::mp>()));
}

TEST(Interval, SinContainsPeak) {
  const Interval r = sin(Interval(1.0, 2.0));
  EXPECT_EQ(r.hi(), 1.0);
  EXPECT_LE(r.lo(), std::sin(1.0));
}

TEST(Interval, CosOverFullPeriod) {
  const Interval r = cos(Interval(0.0, 7.0));
  EXPECT_EQ(r.lo(), -1.0);
  EXPECT_EQ(r.hi(), 1.0);
}

TEST(Interval, IntersectDisjointIsEmpty) {
  EXPECT_FALSE(intersect(Interval(0, 1), Interval(2, 3)).has_value());
  EXPECT_EQ(intersect(Interval(0, 2), Interval(1, 3))->lo(), 1.0);
}

TEST(Interval, RigorousSumEnclosesExact) {
  std::vector<Interval> xs;
  checks::mp exact = 0;
  for (int k = 1; k <= 1000; ++k) {
    xs.emplace_back(1.0 / k);
    exact += checks::mp(1.0 / k);
  }
  EXPECT_TRUE(checks::contains(rigorous_sum(xs), exact));
}

TEST(ComplexInterval, ProductEnclosesPointProduct) {
  const ComplexInterval a(Interval(1, 1.5), Interval(-2, -1.5));
  const ComplexInterval b(Interval(0.3), Interval(0.7));
  const std::complex<double> p = std::complex<double>(1.2, -1.7) * std::complex<double>(0.3, 0.7);
  const ComplexInterval r = a * b;
  EXPECT_TRUE(r.re().contains(p.real()));
  EXPECT_TRUE(r.im().contains(p.imag()));
}

TEST(ComplexInterval, AbsOfPoint) {
  const Interval r = abs(ComplexInterval(Interval(3.0), Interval(4.0)));
  EXPECT_TRUE(r.contains(5.0));
  EXPECT_LT(r.width(), 1e-14);
}

TEST(IntervalProperty, RandomizedContainment) {
  for (const auto& c : checks::containment_suite(100000)) EXPECT_EQ(c.failures, 0) << c.name;
}

TEST(IntervalProperty, NestedOperandsGiveNestedResults) {
  for (const auto& c : checks::monotone_suite(10000)) EXPECT_EQ(c.failures, 0) << c.name;
}
