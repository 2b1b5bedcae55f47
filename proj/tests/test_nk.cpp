#include <gtest/gtest.h>

#include "checks.hpp"
#include "turingcert/gershgorin.hpp"
#include "turingcert/nk.hpp"

using namespace turingcert;

TEST(Nk, WeightOfBasisVectors) {
  EXPECT_EQ(l1_weight(0, 1.0).hi(), 1.0);
  EXPECT_EQ(l1_weight(3, 0.0).hi(), 2.0);
  EXPECT_TRUE(l1_weight(4, 1.0).contains(8.0));
}

TEST(Nk, WeightedNorm) {
  const std::vector<Interval> x{Interval(-1.0), Interval(1.0), Interval(0.5), Interval(2.0), Interval(-0.25)};
  // |-1| + (1 + 2*0.5) + (2 + 2*0.25)
  EXPECT_TRUE(x_alpha_norm(x, 2, 0.0).contains(5.5));
  EXPECT_THROW(x_alpha_norm(x, 3, 0.0), DimensionMismatch);
}

TEST(Nk, ColumnNormsOfIdentity) {
  RealIntervalMatrix id = RealIntervalMatrix::identity(7);
  const ColumnNorms c = x_alpha_op_colnorms(id, 3, 1.0);
  EXPECT_TRUE(c.op().contains(1.0));
  EXPECT_LT(c.op().hi(), 1.0 + 1e-14);
}

TEST(Nk, RadiiFormula) {
  const NkRadii r = nk_radii(Interval(1.301e-3), Interval(8.356e-2), Interval(1.658));
  const double y = 1.301e-3, z1 = 8.356e-2, z2 = 1.658;
  const double expect = ((1 - z1) - std::sqrt((1 - z1) * (1 - z1) - 2 * z2 * y)) / z2;
  EXPECT_NEAR(r.r_min.mid(), expect, 1e-12);
  EXPECT_NEAR(r.r_max.mid(), 0.553, 5e-4);
}

TEST(Nk, ContractionFailures) {
  EXPECT_THROW(nk_radii(Interval(1e-3), Interval(1.0), Interval(1.0)), ContractionFails);
  EXPECT_THROW(nk_radii(Interval(0.5), Interval(0.1), Interval(2.0)), ContractionFails);
  EXPECT_THROW(nk_radii(Interval(0.1), Interval(0.1), Interval(2.5), true), ContractionFails);
  EXPECT_NO_THROW(nk_radii(Interval(0.1), Interval(0.1), Interval(2.5)));
}

TEST(Nk, TruncationTooSmall) {
  EXPECT_THROW(bound_E(0.0, 1, 0.5, checks::main_instance(), 1.0), TruncationTooSmall);
}

TEST(Nk, ClosedFormAtZeroDelta) {
  const auto inst = checks::main_instance();
  const auto spec = classify_cell(inst, Interval(0.0), 50, 2.0);
  const NkCertificate c = enclose_d0(inst, Interval(0.0), 50, 0.0, spec.mu);
  EXPECT_TRUE(checks::contains(c.d0_enclosure, boost::multiprecision::sqrt(checks::mp(6)) - 3));
  EXPECT_LE(c.d0_enclosure.width(), 1e-6);
  EXPECT_TRUE(c.identified_as_d0);
}

TEST(Nk, FirstBandCellBounds) {
  const auto inst = checks::main_instance();
  const Interval delta(4 * 607 / 1000.0, 4 * 608 / 1000.0);
  const auto spec = classify_cell(inst, delta, 50, 2.0);
  const NkCertificate c = enclose_d0(inst, delta, 50, 0.0, spec.mu);
  // Reference values Y = 1.301e-3, Z1 = 8.356e-2, Z2 = 1.658 were computed from different eigendata.
  EXPECT_NEAR(c.Y.hi(), 1.301e-3, 0.15 * 1.301e-3);
  EXPECT_NEAR(c.Z1.hi(), 8.356e-2, 0.05 * 8.356e-2);
  EXPECT_NEAR(c.Z2.hi(), 1.658, 0.05 * 1.658);
  EXPECT_LT(c.d0_enclosure.hi(), 0);
  EXPECT_GT(c.d0_prime.range.lo(), 0);
  EXPECT_TRUE(c.identified_as_d0);
}

TEST(Nk, DerivativeMatchesFiniteDifference) {
  const auto inst = checks::main_instance();
  const Interval delta(1.0, 1.004);
  const auto spec = classify_cell(inst, delta, 50, 2.0);
  const NkCertificate c = enclose_d0(inst, delta, 50, 0.0, spec.mu);
  const double h = 1e-5;
  const double fd = (approx_eigendata(inst, 1.002 + h, 50).lambda_bar - approx_eigendata(inst, 1.002 - h, 50).lambda_bar) / (2 * h);
  EXPECT_TRUE(c.d0_prime.range.contains(fd));
}

TEST(Nk, LeadingEigenpairIsNormalized) {
  const ApproxEigenData e = approx_eigendata(checks::main_instance(), 0.0, 20);
  double s = 0;
  for (double x : e.u_tilde) s += x * x;
  for (double x : e.v_tilde) s += x * x;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(e.lambda_bar, -3 + std::sqrt(6.0), 1e-12);
}
