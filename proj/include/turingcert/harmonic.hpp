#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "turingcert/errors.hpp"
#include "turingcert/interval.hpp"

namespace turingcert {

/// Closed subinterval [lo, hi] of (0, l); endpoints are enclosures so that
/// values like pi/4 stay exact.
struct Subinterval {
  Interval lo;
  Interval hi;
};

using SubdomainUnion = std::vector<Subinterval>;

inline Interval measure(const SubdomainUnion& d) {
  Interval s(0.0);
  for (const auto& piece : d) s += piece.hi - piece.lo;
  return s;
}

/// Coefficients of the linearized system on Omega = (0, l).
struct ProblemInstance {
  Interval a, b, c, d, theta, l;
  SubdomainUnion omega1, omega2;

  std::size_t I1() const { return omega1.size(); }
  std::size_t I2() const { return omega2.size(); }

  void validate() const {
    if (!(l.lo() > 0)) throw InvalidProblem("domain length must be positive");
    if (theta.lo() < 0) throw InvalidProblem("theta must be nonnegative");
    check_union(omega1, "omega1");
    check_union(omega2, "omega2");
    if (!(measure(omega1).lo() > 0)) throw InvalidProblem("omega1 has zero measure");
    if (!((a + d).hi() < 0)) throw InvalidProblem("a + d < 0 not certified");
    if (!((a * d - b * c).lo() > 0)) throw InvalidProblem("ad - bc > 0 not certified");
  }

 private:
  void check_union(const SubdomainUnion& u, const char* name) const {
    if (u.empty()) throw InvalidProblem(std::string(name) + " is empty");
    std::vector<Subinterval> sorted(u);
    std::sort(sorted.begin(), sorted.end(),
              [](const Subinterval& x, const Subinterval& y) { return x.lo.mid() < y.lo.mid(); });
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      const auto& s = sorted[k];
      if (s.lo.lo() < 0 || s.hi.hi() > l.lo() || s.lo.hi() > s.hi.lo())
        throw InvalidProblem(std::string(name) + " piece not inside [0, l]");
      if (k > 0 && sorted[k - 1].hi.hi() > s.lo.lo())
        throw InvalidProblem(std::string(name) + " pieces overlap");
    }
  }
};

/// |B_ij| <= C / (max(1,i)^q1 max(1,j)^q2).
struct KernelBound {
  double q1 = 1.0;
  double q2 = 1.0;
  Interval C;
};

inline Interval laplacian_eigenvalue(std::size_t j, const ProblemInstance& inst) {
  if (j == 0) return Interval(0.0);
  return sqr(Interval::pi() * Interval(static_cast<double>(j)) / inst.l);
}

/// Cosine coefficient of the indicator of d, in the convention
/// u = u_0 + 2 sum u_j cos(j pi x / l).
inline Interval fourier_indicator_coeff(const SubdomainUnion& d, std::size_t j,
                                        const ProblemInstance& inst) {
  if (j == 0) return measure(d) / inst.l;
  const Interval w = Interval::pi() * Interval(static_cast<double>(j)) / inst.l;
  Interval s(0.0);
  for (const auto& piece : d) s += sin(piece.hi * w) - sin(piece.lo * w);
  return s / (Interval::pi() * Interval(static_cast<double>(j)));
}

/// B_ij = row[i] * col[j]; the kernel is rank one.
struct KernelFactors {
  std::vector<Interval> row;
  std::vector<Interval> col;
};

inline KernelFactors kernel_factors(const ProblemInstance& inst, std::size_t n) {
  KernelFactors f;
  f.row.reserve(n);
  f.col.reserve(n);
  const Interval scale = inst.l / measure(inst.omega1);
  for (std::size_t i = 0; i < n; ++i) {
    f.row.push_back(scale * fourier_indicator_coeff(inst.omega1, i, inst));
    Interval fj = fourier_indicator_coeff(inst.omega2, i, inst);
    f.col.push_back(i == 0 ? fj : Interval(2.0) * fj);
  }
  return f;
}

inline Interval b_coeff(std::size_t i, std::size_t j, const ProblemInstance& inst) {
  Interval fi = fourier_indicator_coeff(inst.omega1, i, inst);
  Interval fj = fourier_indicator_coeff(inst.omega2, j, inst);
  if (j > 0) fj = Interval(2.0) * fj;
  return inst.l / measure(inst.omega1) * fi * fj;
}

inline KernelBound b_constant(const ProblemInstance& inst) {
  const Interval pi = Interval::pi();
  const Interval i1(static_cast<double>(inst.I1()));
  const Interval i2(static_cast<double>(inst.I2()));
  const Interval m1 = measure(inst.omega1);
  const Interval m2 = measure(inst.omega2);
  Interval c = Interval(8.0) * i1 * i2 * inst.l / (sqr(pi) * m1);
  c = max(c, Interval(4.0) * i2 / pi);
  c = max(c, Interval(2.0) * i1 * m2 / (m1 * pi));
  c = max(c, m2 / inst.l);
  return KernelBound{1.0, 1.0, c};
}

}  // namespace turingcert
