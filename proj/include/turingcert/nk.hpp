#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "turingcert/errors.hpp"
#include "turingcert/harmonic.hpp"
#include "turingcert/interval.hpp"
#include "turingcert/linalg.hpp"

namespace turingcert {

/// Finitely supported element of the weighted space l^1_alpha.
struct WeightedVec {
  double alpha = 0.0;
  std::vector<ComplexInterval> entries;
};

/// Norm of the canonical basis vector e_j: 1 for j = 0, 2 j^alpha otherwise.
inline Interval l1_weight(std::size_t j, double alpha) {
  if (j == 0) return Interval(1.0);
  return Interval(2.0) * pow_real(Interval(static_cast<double>(j)), alpha);
}

template <class T>
Interval l1_alpha_norm(std::span<const T> v, double alpha) {
  Interval s(0.0);
  for (std::size_t k = 0; k < v.size(); ++k) s += abs(v[k]) * l1_weight(k, alpha);
  return s;
}

inline Interval l1_alpha_norm(const WeightedVec& v) {
  return l1_alpha_norm(std::span<const ComplexInterval>(v.entries), v.alpha);
}

/// |lambda| + ||u||_alpha + ||v||_alpha for X = (lambda, u_0..u_{N-1}, v_0..v_{N-1}).
inline Interval x_alpha_norm(std::span<const Interval> x, std::size_t N, double alpha) {
  if (x.size() != 2 * N + 1) throw DimensionMismatch("x_alpha_norm");
  return abs(x[0]) + l1_alpha_norm(x.subspan(1, N), alpha) + l1_alpha_norm(x.subspan(1 + N, N), alpha);
}

struct ColumnNorms {
  Interval c0, c1, c2;
  Interval op() const { return max(c0, max(c1, c2)); }
};

/// Column-block norms of a finite operator on X_alpha given as a
/// (2N+1) x (2N+1) matrix in split ordering.
inline ColumnNorms x_alpha_op_colnorms(const RealIntervalMatrix& L, std::size_t N, double alpha) {
  const std::size_t n = 2 * N + 1;
  if (L.rows() != n || L.cols() != n) throw DimensionMismatch("x_alpha_op_colnorms");
  std::vector<Interval> w(N);
  for (std::size_t k = 0; k < N; ++k) w[k] = l1_weight(k, alpha);
  auto col_norm = [&](std::size_t c) {
    Interval s = abs(L(0, c));
    for (std::size_t k = 0; k < N; ++k) s += (abs(L(1 + k, c)) + abs(L(1 + N + k, c))) * w[k];
    return s;
  };
  ColumnNorms out{col_norm(0), Interval(0.0), Interval(0.0)};
  for (std::size_t j = 0; j < N; ++j) {
    out.c1 = max(out.c1, col_norm(1 + j) / w[j]);
    out.c2 = max(out.c2, col_norm(1 + N + j) / w[j]);
  }
  return out;
}

/// Numeric eigenpair of the truncated problem. (u_tilde, v_tilde) has unit
/// Euclidean norm; (u_bar, v_bar) is rescaled so that the pairing is 1.
struct ApproxEigenData {
  double lambda_bar = 0.0;
  std::vector<double> u_bar, v_bar, u_tilde, v_tilde;
  double delta_mid = 0.0;
};

/// Split-ordered truncation (u_0..u_{N-1}, v_0..v_{N-1}) at a point delta.
inline RealFloatMatrix split_truncated_M(const ProblemInstance& inst, double delta, std::size_t N) {
  const KernelFactors kf = kernel_factors(inst, N);
  RealFloatMatrix m = RealFloatMatrix::Zero(2 * N, 2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    const Interval lam = laplacian_eigenvalue(i, inst);
    m(i, i) = (inst.a - inst.theta * lam).mid();
    m(i, N + i) = inst.b.mid();
    m(N + i, N + i) = (inst.d - lam).mid();
    for (std::size_t j = 0; j < N; ++j) m(N + i, j) = (Interval(delta) * kf.row[i] * kf.col[j]).mid();
    m(N + i, i) += inst.c.mid();
  }
  return m;
}

inline ApproxEigenData approx_eigendata(const ProblemInstance& inst, double delta_mid, std::size_t N) {
  const EigenDecomposition eig = approx_eig(split_truncated_M(inst, delta_mid, N));
  std::size_t best = 0;
  for (std::size_t k = 1; k < eig.values.size(); ++k)
    if (eig.values[k].real() > eig.values[best].real()) best = k;
  const std::complex<double> lam = eig.values[best];
  if (std::fabs(lam.imag()) >= 1e-10)
    throw ComplexLeadingEigenvalue("imaginary part " + std::to_string(lam.imag()));
  Eigen::VectorXcd z = eig.vectors.col(best);
  Eigen::Index arg = 0;
  z.cwiseAbs().maxCoeff(&arg);
  z /= z(arg);
  Eigen::VectorXd x = z.real();
  x /= x.norm();

  ApproxEigenData out;
  out.lambda_bar = lam.real();
  out.delta_mid = delta_mid;
  out.u_tilde.assign(x.data(), x.data() + N);
  out.v_tilde.assign(x.data() + N, x.data() + 2 * N);
  const double pairing = x.dot(x);
  for (std::size_t k = 0; k < 2 * N; ++k) (k < N ? out.u_bar : out.v_bar).push_back(x(k) / pairing);
  return out;
}

/// E(alpha, N): tail bound of sum_{k>=N} k^{alpha-q1} / |lambda_k - (d - lambda_bar)|.
inline Interval bound_E(double alpha, std::size_t N, double lambda_bar, const ProblemInstance& inst, double q1) {
  const Interval lp = inst.l / Interval::pi();
  const Interval gap = inst.d - Interval(lambda_bar);
  const Interval need = Interval(1.0) + lp * sqrt(abs(gap));
  if (!(static_cast<double>(N) > need.hi()))
    throw TruncationTooSmall("N must exceed " + std::to_string(need.hi()));
  const Interval nu = lp * sqrt(max(Interval(0.0), gap));
  const Interval e = Interval(alpha) - Interval(1.0) - Interval(q1);
  return sqr(lp) * pow_real(Interval(static_cast<double>(N - 1)) - nu, e) / -e;
}

/// R(theta, x, N) = 1 / |-theta (N pi / l)^2 + x - lambda_bar|, bounding the
/// diagonal inverse on all modes k >= N.
inline Interval bound_R(const Interval& theta, const Interval& x, std::size_t N, double lambda_bar,
                        const ProblemInstance& inst) {
  const Interval den = -theta * laplacian_eigenvalue(N, inst) + x - Interval(lambda_bar);
  if (!(den.hi() < 0)) throw SingularDenominator("tail diagonal not negative at N");
  return Interval(1.0) / -den;
}

struct NkRadii {
  Interval r_min;
  Interval r_max;
};

/// Radii of the Newton-Kantorovich theorem from upper bounds Y, Z1, Z2.
/// r_min is increasing in all three, so evaluating at the upper endpoints is
/// safe. With strict set the discriminant uses 4 Z2 Y instead of 2 Z2 Y.
inline NkRadii nk_radii(const Interval& Y, const Interval& Z1, const Interval& Z2, bool strict = false) {
  const Interval y(Y.hi()), z1(Z1.hi()), z2(Z2.hi());
  if (!(z1.hi() < 1)) throw ContractionFails("Z1 >= 1");
  const Interval one_minus = Interval(1.0) - z1;
  const Interval disc = sqr(one_minus) - Interval(2.0) * z2 * y;
  if (!(disc.lo() > 0)) throw ContractionFails("(1-Z1)^2 - 2 Z2 Y <= 0");
  if (strict && !((sqr(one_minus) - Interval(4.0) * z2 * y).lo() > 0))
    throw ContractionFails("(1-Z1)^2 - 4 Z2 Y <= 0");
  return {Interval(2.0) * y / (one_minus + sqrt(disc)), one_minus / z2};
}

struct DerivEnclosure {
  Interval app;
  Interval err;
  Interval range;
};

struct NkCertificate {
  Interval delta;
  double alpha = 0.0;
  std::size_t N = 0;
  double lambda_bar = 0.0;
  Interval Y, Z1, Z2;
  Interval r_min, r_max;
  Interval d0_enclosure;
  bool identified_as_d0 = false;
  DerivEnclosure d0_prime;
};

/// Rigorous ingredients shared by the eigenvalue and derivative bounds.
struct NkSystem {
  std::size_t N = 0;
  double alpha = 0.0;
  ApproxEigenData data;
  KernelBound kb;
  RealFloatMatrix A;           // numeric inverse of the truncated DF at delta_mid
  std::vector<Interval> Bu;    // Pi B u_bar
  Interval E, R_a, R_d;
};

namespace detail {

inline BallMatrix point_ball(const RealFloatMatrix& m) {
  return {m, RealFloatMatrix::Zero(m.rows(), m.cols())};
}

inline BallMatrix interval_ball(const RealIntervalMatrix& m) {
  BallMatrix b{RealFloatMatrix(m.rows(), m.cols()), RealFloatMatrix(m.rows(), m.cols())};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      b.mid(i, j) = m(i, j).mid();
      b.rad(i, j) = m(i, j).rad();
    }
  return b;
}

inline Interval ball_entry(const BallMatrix& b, Eigen::Index i, Eigen::Index j) {
  const double r = b.rad(i, j);
  return Interval(b.mid(i, j)) + Interval(-r, r);
}

inline Interval chi(std::size_t k, double q) {
  return Interval(1.0) / pow_real(Interval(static_cast<double>(std::max<std::size_t>(1, k))), q);
}

}  // namespace detail

struct NkBounds {
  NkSystem sys;
  Interval Y, Z1, Z2;
  Interval a2_chi, a12_chi, a22_chi;  // |a2~| . chi_q1, || |A12| chi_q1 ||, || |A22| chi_q1 ||
  Interval u_chi;                     // |u_bar| . chi_q2
};

/// Y, Z1, Z2 for a delta cell with eigendata frozen at the cell midpoint.
inline NkBounds nk_bounds(const ProblemInstance& inst, const Interval& delta, std::size_t N, double alpha) {
  NkBounds out;
  NkSystem& s = out.sys;
  s.N = N;
  s.alpha = alpha;
  s.kb = b_constant(inst);
  if (!(alpha >= 0 && alpha >= -s.kb.q2 && alpha < 1 + s.kb.q1))
    throw InvalidProblem("alpha outside [max(0,-q2), 1+q1)");
  s.data = approx_eigendata(inst, delta.mid(), N);
  const ApproxEigenData& d = s.data;
  const Interval lb(d.lambda_bar);
  const std::size_t n = 2 * N + 1;
  const KernelFactors kf = kernel_factors(inst, N);

  // DF = DF0 + delta * Bblock; Bblock holds B in the (v, u) block.
  RealIntervalMatrix df0(n, n), bblock(n, n);
  for (std::size_t i = 0; i < N; ++i) {
    const Interval lam = laplacian_eigenvalue(i, inst);
    df0(0, 1 + i) = Interval(d.u_tilde[i]);
    df0(0, 1 + N + i) = Interval(d.v_tilde[i]);
    df0(1 + i, 0) = Interval(-d.u_bar[i]);
    df0(1 + N + i, 0) = Interval(-d.v_bar[i]);
    df0(1 + i, 1 + i) = -inst.theta * lam + inst.a - lb;
    df0(1 + i, 1 + N + i) = inst.b;
    df0(1 + N + i, 1 + i) = inst.c;
    df0(1 + N + i, 1 + N + i) = -lam + inst.d - lb;
    for (std::size_t j = 0; j < N; ++j) bblock(1 + N + i, 1 + j) = kf.row[i] * kf.col[j];
  }
  RealFloatMatrix df_mid = mid_real(df0) + d.delta_mid * mid_real(bblock);
  s.A = df_mid.partialPivLu().inverse();
  if (!s.A.allFinite()) throw ContractionFails("truncated DF not numerically invertible");

  const BallMatrix A = detail::point_ball(s.A);
  const BallMatrix adf0 = ball_mul(A, detail::interval_ball(df0));
  const BallMatrix ab = ball_mul(A, detail::interval_ball(bblock));
  RealIntervalMatrix defect(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      defect(i, j) = Interval(i == j ? 1.0 : 0.0) - detail::ball_entry(adf0, i, j) -
                     delta * detail::ball_entry(ab, i, j);

  // Pi F(X_bar) = F0 + delta * (0, 0, Pi B u_bar).
  RealIntervalMatrix f0(n, 1), g(n, 1);
  Interval pairing(0.0);
  for (std::size_t i = 0; i < N; ++i)
    pairing += Interval(d.u_tilde[i]) * Interval(d.u_bar[i]) + Interval(d.v_tilde[i]) * Interval(d.v_bar[i]);
  f0(0, 0) = pairing - Interval(1.0);
  s.Bu.assign(N, Interval(0.0));
  for (std::size_t i = 0; i < N; ++i) {
    const Interval lam = laplacian_eigenvalue(i, inst);
    const Interval u(d.u_bar[i]), v(d.v_bar[i]);
    f0(1 + i, 0) = (-inst.theta * lam + inst.a - lb) * u + inst.b * v;
    f0(1 + N + i, 0) = inst.c * u + (-lam + inst.d - lb) * v;
    Interval bu(0.0);
    for (std::size_t j = 0; j < N; ++j) bu += kf.col[j] * Interval(d.u_bar[j]);
    s.Bu[i] = kf.row[i] * bu;
    g(1 + N + i, 0) = s.Bu[i];
  }
  const BallMatrix af0 = ball_mul(A, detail::interval_ball(f0));
  const BallMatrix ag = ball_mul(A, detail::interval_ball(g));
  std::vector<Interval> af(n);
  for (std::size_t i = 0; i < n; ++i) af[i] = detail::ball_entry(af0, i, 0) + delta * detail::ball_entry(ag, i, 0);

  s.E = bound_E(alpha, N, d.lambda_bar, inst, s.kb.q1);
  s.R_a = bound_R(inst.theta, inst.a, N, d.lambda_bar, inst);
  s.R_d = bound_R(Interval(1.0), inst.d, N, d.lambda_bar, inst);

  const Interval C = s.kb.C;
  const Interval ad = abs(delta);
  out.u_chi = Interval(0.0);
  out.a2_chi = Interval(0.0);
  for (std::size_t k = 0; k < N; ++k) {
    out.u_chi += abs(Interval(d.u_bar[k])) * detail::chi(k, s.kb.q2);
    out.a2_chi += abs(Interval(s.A(0, 1 + N + k))) * detail::chi(k, s.kb.q1);
  }
  std::vector<Interval> a12(N, Interval(0.0)), a22(N, Interval(0.0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const Interval ck = detail::chi(k, s.kb.q1);
      a12[i] += abs(Interval(s.A(1 + i, 1 + N + k))) * ck;
      a22[i] += abs(Interval(s.A(1 + N + i, 1 + N + k))) * ck;
    }
  out.a12_chi = l1_alpha_norm(std::span<const Interval>(a12), alpha);
  out.a22_chi = l1_alpha_norm(std::span<const Interval>(a22), alpha);

  out.Y = x_alpha_norm(af, N, alpha) + Interval(2.0) * C * ad * s.E * out.u_chi;

  const Interval nq = pow_real(Interval(static_cast<double>(N)), Interval(alpha) + Interval(s.kb.q2));
  const Interval z1_finite = x_alpha_op_colnorms(defect, N, alpha).op() + Interval(2.0) * C * ad * s.E;
  const Interval z1_tail = C * ad / (Interval(2.0) * nq) * (out.a2_chi + out.a12_chi + out.a22_chi) +
                           abs(inst.c) * s.R_d + C * ad / nq * s.E;
  const Interval z1_b = abs(inst.b) * s.R_a;
  out.Z1 = max(z1_finite, max(z1_tail, z1_b));

  const Interval a_norm = x_alpha_op_colnorms(to_interval(s.A), N, alpha).op();
  out.Z2 = max(a_norm, max(s.R_a, s.R_d));
  return out;
}

/// d0'(delta) = approximation -a2~ . Pi B u_bar plus the implicit-function
/// error bound.
inline DerivEnclosure derivative_enclosure(const NkBounds& b, const NkRadii& radii) {
  const NkSystem& s = b.sys;
  const std::size_t N = s.N;
  const Interval C = s.kb.C;
  const Interval r(radii.r_min.hi());
  const Interval q = Interval(b.Z1.hi()) + Interval(b.Z2.hi()) * r;
  if (!(q.hi() < 1)) throw NeumannSeriesDiverges("Z1 + Z2 r_min >= 1");

  // A applied to (0, 0, Pi B u_bar): only the v-columns of A contribute.
  std::vector<Interval> col(2 * N + 1, Interval(0.0));
  for (std::size_t i = 0; i < 2 * N + 1; ++i)
    for (std::size_t k = 0; k < N; ++k) col[i] += Interval(s.A(i, 1 + N + k)) * s.Bu[k];
  const Interval app = -col[0];
  const Interval col_norm = x_alpha_norm(col, N, s.alpha);
  const Interval err = (C * (b.a2_chi + b.a12_chi + b.a22_chi + Interval(2.0) * s.E) * r +
                        Interval(2.0) * C * s.E * b.u_chi + q * col_norm) /
                       (Interval(1.0) - q);
  return {app, Interval(err.hi()), app + Interval(-err.hi(), err.hi())};
}

/// Full validation of the leading eigenvalue on a delta cell. mu is the
/// Gershgorin separation line of the same cell.
inline NkCertificate enclose_d0(const ProblemInstance& inst, const Interval& delta, std::size_t N, double alpha,
                                const Interval& mu, bool strict_discriminant = false) {
  const NkBounds b = nk_bounds(inst, delta, N, alpha);
  const NkRadii radii = nk_radii(b.Y, b.Z1, b.Z2, strict_discriminant);
  NkCertificate cert;
  cert.delta = delta;
  cert.alpha = alpha;
  cert.N = N;
  cert.lambda_bar = b.sys.data.lambda_bar;
  cert.Y = Interval(b.Y.hi());
  cert.Z1 = Interval(b.Z1.hi());
  cert.Z2 = Interval(b.Z2.hi());
  cert.r_min = radii.r_min;
  cert.r_max = radii.r_max;
  const double r = radii.r_min.hi();
  cert.d0_enclosure = Interval(cert.lambda_bar) + Interval(-r, r);
  cert.identified_as_d0 = cert.d0_enclosure.lo() > mu.hi();
  cert.d0_prime = derivative_enclosure(b, radii);
  return cert;
}

}  // namespace turingcert
