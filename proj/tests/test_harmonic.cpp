#include <gtest/gtest.h>

#include "checks.hpp"
#include "turingcert/harmonic.hpp"

using namespace turingcert;

TEST(Harmonic, LaplacianEigenvalue) {
  const auto inst = checks::main_instance();
  EXPECT_EQ(laplacian_eigenvalue(0, inst).hi(), 0.0);
  EXPECT_TRUE(laplacian_eigenvalue(3, inst).contains(9 * M_PI * M_PI / 4));
}

TEST(Harmonic, ZerothCoefficientIsRelativeMeasure) {
  const auto inst = checks::main_instance();
  EXPECT_TRUE(fourier_indicator_coeff(inst.omega1, 0, inst).contains(M_PI / 8));
}

TEST(Harmonic, KernelConstantForMainInstance) {
  const KernelBound kb = b_constant(checks::main_instance());
  EXPECT_TRUE(kb.C.contains(64 / (M_PI * M_PI * M_PI)));
  EXPECT_LT(kb.C.width(), 1e-14);
}

TEST(Harmonic, FactorsMatchCoefficients) {
  const auto inst = checks::main_instance();
  const KernelFactors f = kernel_factors(inst, 10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) EXPECT_TRUE(b_coeff(i, j, inst).overlaps(f.row[i] * f.col[j]));
}

TEST(Harmonic, BCoeffAgreesWithQuadrature) {
  const auto inst = checks::main_instance();
  for (std::size_t i = 0; i <= 50; ++i)
    for (std::size_t j = 0; j <= 50; ++j) {
      const Interval b = b_coeff(i, j, inst);
      ASSERT_NEAR(b.mid(), checks::b_coeff_quadrature(i, j, inst), 1e-10) << i << "," << j;
      ASSERT_LT(b.width(), 1e-13);
    }
}

TEST(Harmonic, BCoeffDecayBound) {
  const auto inst = checks::main_instance();
  const Interval C = b_constant(inst).C;
  for (std::size_t i = 0; i <= 200; ++i)
    for (std::size_t j = 0; j <= 200; ++j) {
      const Interval bound = C / Interval(static_cast<double>(std::max<std::size_t>(1, i) * std::max<std::size_t>(1, j)));
      ASSERT_LE(b_coeff(i, j, inst).mag(), bound.hi()) << i << "," << j;
    }
}

TEST(Harmonic, ValidateRejectsPieceOutsideDomain) {
  auto inst = checks::main_instance();
  inst.omega1 = {{Interval(1.5), Interval(2.5)}};
  EXPECT_THROW(inst.validate(), InvalidProblem);
}

TEST(Harmonic, ValidateRejectsNonpositiveDeterminant) {
  auto inst = checks::main_instance();
  inst.c = Interval(5.0);
  EXPECT_THROW(inst.validate(), InvalidProblem);
}
