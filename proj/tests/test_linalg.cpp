#include <gtest/gtest.h>

#include <random>

#include "checks.hpp"
#include "turingcert/linalg.hpp"

using namespace turingcert;

namespace {

FloatMatrix random_complex(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  FloatMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

}  // namespace

TEST(Linalg, IntervalMatmulShapes) {
  EXPECT_THROW(interval_matmul(IntervalMatrix(2, 3), IntervalMatrix(2, 3)), DimensionMismatch);
}

TEST(Linalg, BallProductEnclosesExactProduct) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  RealFloatMatrix a(12, 9), b(9, 7);
  for (auto* m : {&a, &b})
    for (Eigen::Index k = 0; k < m->size(); ++k) m->data()[k] = u(rng) * std::ldexp(1.0, static_cast<int>(u(rng) * 20));
  const BallMatrix c = ball_mul(BallMatrix{a, RealFloatMatrix::Zero(12, 9)}, BallMatrix{b, RealFloatMatrix::Zero(9, 7)});
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) {
      checks::mp s = 0;
      for (Eigen::Index k = 0; k < 9; ++k) s += checks::mp(a(i, k)) * checks::mp(b(k, j));
      EXPECT_TRUE(checks::contains(Interval(c.mid(i, j)) + Interval(-c.rad(i, j), c.rad(i, j)), s));
    }
}

TEST(Linalg, ComplexBallProductMatchesIntervalProduct) {
  const FloatMatrix a = random_complex(10, 1), b = random_complex(10, 2);
  const IntervalMatrix ib = interval_matmul(to_interval(a), to_interval(b));
  const IntervalMatrix bb = to_interval(ball_mul(to_ball(a), to_ball(b)));
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_TRUE(ib(i, j).re().overlaps(bb(i, j).re()));
      EXPECT_TRUE(ib(i, j).im().overlaps(bb(i, j).im()));
      EXPECT_LT(bb(i, j).re().width(), 1e-12);
    }
}

TEST(Linalg, VerifiedInverseOfIntegerMatrix) {
  FloatMatrix p(2, 2);
  p << 2, 1, 1, 1;
  const IntervalMatrix inv = verified_inverse(p);
  EXPECT_TRUE(inv(0, 0).re().contains(1.0));
  EXPECT_TRUE(inv(0, 1).re().contains(-1.0));
  EXPECT_TRUE(inv(1, 1).re().contains(2.0));
}

TEST(Linalg, VerifiedInverseTimesMatrixContainsIdentity) {
  const FloatMatrix p = random_complex(30, 5);
  const IntervalMatrix prod = interval_matmul(verified_inverse(p), to_interval(p));
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) {
      EXPECT_TRUE(prod(i, j).re().contains(i == j ? 1.0 : 0.0));
      EXPECT_TRUE(prod(i, j).im().contains(0.0));
    }
}

TEST(Linalg, SingularMatrixIsRejected) {
  FloatMatrix p(2, 2);
  p << 1, 2, 2, 4;
  EXPECT_THROW(verify_inverse(p), NotVerifiablyInvertible);
}

TEST(Linalg, ApproxEigReconstructs) {
  RealFloatMatrix m(3, 3);
  m << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const EigenDecomposition e = approx_eig(m);
  const Eigen::VectorXcd d = Eigen::Map<const Eigen::VectorXcd>(e.values.data(), 3);
  const FloatMatrix r = e.vectors * d.asDiagonal() * e.vectors.inverse();
  EXPECT_LT((r - m.cast<std::complex<double>>()).norm(), 1e-12);
}
