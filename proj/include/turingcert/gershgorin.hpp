#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "turingcert/errors.hpp"
#include "turingcert/harmonic.hpp"
#include "turingcert/interval.hpp"
#include "turingcert/linalg.hpp"

namespace turingcert {

/// Diagonal scaling Q with f(i) = max(1, i^p).
struct ScalingBasis {
  double p = 2.0;

  Interval f(std::size_t i) const {
    if (i <= 1) return Interval(1.0);
    return pow_real(Interval(static_cast<double>(i)), p);
  }
};

/// Approximate eigenvector basis of the truncated scaled matrix, interleaved
/// ordering (u0, v0, u1, v1, ...). Columns are sorted by decreasing real part
/// of their eigenvalue.
struct DiagonalizerBasis {
  std::size_t N = 0;
  FloatMatrix P;
  VerifiedInverse P_inv;
  std::vector<std::complex<double>> eigenvalues;

  static DiagonalizerBasis identity(std::size_t n) {
    DiagonalizerBasis d;
    d.N = n;
    d.P = FloatMatrix::Identity(2 * n, 2 * n);
    d.P_inv = verify_inverse(d.P);
    d.eigenvalues.assign(2 * n, 0.0);
    return d;
  }
};

struct GershgorinDisk {
  ComplexInterval center;
  Interval radius_bound;
};

enum class Classification { Stable, UnstableOne, Undetermined };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "Stable";
    case Classification::UnstableOne: return "UnstableOne";
    default: return "Undetermined";
  }
}

struct SpectrumCertificate {
  Interval delta;
  std::size_t N = 0;
  double p = 0.0;
  std::vector<GershgorinDisk> disks;
  Interval m_bar;
  Interval mu;
  Classification classification = Classification::Undetermined;
  Interval disk0_left;   // Re c0 - R0
  Interval disk0_right;  // Re c0 + R0
  bool at_most_one = false;
  std::string failure;
};

/// Interleaved 2N x 2N truncation of M for a delta interval.
inline IntervalMatrix build_truncated_M(const ProblemInstance& inst, const Interval& delta, std::size_t N) {
  const std::size_t n = 2 * N;
  const KernelFactors kf = kernel_factors(inst, N);
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < N; ++i) {
    const Interval lam = laplacian_eigenvalue(i, inst);
    m(2 * i, 2 * i) = inst.a - inst.theta * lam;
    m(2 * i, 2 * i + 1) = inst.b;
    m(2 * i + 1, 2 * i + 1) = inst.d - lam;
    for (std::size_t j = 0; j < N; ++j) m(2 * i + 1, 2 * j) = delta * (kf.row[i] * kf.col[j]);
    m(2 * i + 1, 2 * i) = inst.c + delta * (kf.row[i] * kf.col[i]);
  }
  return m;
}

namespace detail {

// Scaled truncation split as A + delta * B: A holds the local 2x2 blocks and
// B the rank-one kernel part with entries x_r y_s.
struct ScaledParts {
  IntervalMatrix local;
  std::vector<Interval> x;  // nonzero at odd rows: row_i f(i)
  std::vector<Interval> y;  // nonzero at even columns: col_j / f(j)
};

inline ScaledParts scaled_parts(const ProblemInstance& inst, std::size_t N, const ScalingBasis& basis) {
  const std::size_t n = 2 * N;
  const KernelFactors kf = kernel_factors(inst, N);
  ScaledParts s{IntervalMatrix(n, n), std::vector<Interval>(n, Interval(0.0)),
                std::vector<Interval>(n, Interval(0.0))};
  for (std::size_t i = 0; i < N; ++i) {
    const Interval lam = laplacian_eigenvalue(i, inst);
    s.local(2 * i, 2 * i) = inst.a - inst.theta * lam;
    s.local(2 * i, 2 * i + 1) = inst.b;
    s.local(2 * i + 1, 2 * i) = inst.c;
    s.local(2 * i + 1, 2 * i + 1) = inst.d - lam;
    const Interval fi = basis.f(i);
    s.x[2 * i + 1] = kf.row[i] * fi;
    s.y[2 * i] = kf.col[i] / fi;
  }
  return s;
}

}  // namespace detail

/// Q^{-1} M Q restricted to the first 2N coordinates: entry (2i+1, 2j)
/// carries delta B_ij f(i)/f(j).
inline IntervalMatrix build_scaled_M(const ProblemInstance& inst, const Interval& delta, std::size_t N,
                                     const ScalingBasis& basis) {
  const auto parts = detail::scaled_parts(inst, N, basis);
  IntervalMatrix m = parts.local;
  for (std::size_t r = 1; r < 2 * N; r += 2)
    for (std::size_t s = 0; s < 2 * N; s += 2) m(r, s) += delta * (parts.x[r] * parts.y[s]);
  return m;
}

/// Numeric eigenvectors of the scaled truncation at a point delta.
inline DiagonalizerBasis make_diagonalizer(const ProblemInstance& inst, double delta_mid, std::size_t N,
                                           const ScalingBasis& basis) {
  const RealFloatMatrix m = mid_real(build_scaled_M(inst, Interval(delta_mid), N, basis));
  const EigenDecomposition eig = approx_eig(m);
  const std::size_t n = 2 * N;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto &a = eig.values[x], &b = eig.values[y];
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  DiagonalizerBasis d;
  d.N = N;
  d.P.resize(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    Eigen::VectorXcd v = eig.vectors.col(order[c]);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    d.P.col(c) = v / v(arg);
    d.eigenvalues.push_back(eig.values[order[c]]);
  }
  d.P_inv = verify_inverse(d.P);
  return d;
}

/// Enclosure of the 2N x 2N block P^{-1} (Q^{-1} M Q) P, using
/// P^{-1} A P + delta (P^{-1} x)(y^T P) so that delta enters affinely.
inline IntervalMatrix build_frak_block(const ProblemInstance& inst, const Interval& delta,
                                       const ScalingBasis& basis, const DiagonalizerBasis& diag) {
  const std::size_t n = 2 * diag.N;
  const auto parts = detail::scaled_parts(inst, diag.N, basis);
  const IntervalMatrix P = to_interval(diag.P);

  IntervalMatrix AP(n, n);
  for (std::size_t i = 0; i < diag.N; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      const auto& pu = P(2 * i, c);
      const auto& pv = P(2 * i + 1, c);
      AP(2 * i, c) = parts.local(2 * i, 2 * i) * pu + parts.local(2 * i, 2 * i + 1) * pv;
      AP(2 * i + 1, c) = parts.local(2 * i + 1, 2 * i) * pu + parts.local(2 * i + 1, 2 * i + 1) * pv;
    }
  const ComplexBallMatrix pinv = diag.P_inv.ball();
  const IntervalMatrix G = to_interval(ball_mul(pinv, to_ball(AP)));

  IntervalMatrix xcol(n, 1);
  for (std::size_t r = 0; r < n; ++r) xcol(r, 0) = parts.x[r];
  const IntervalMatrix px = to_interval(ball_mul(pinv, to_ball(xcol)));

  std::vector<ComplexInterval> yp(n);
  for (std::size_t c = 0; c < n; ++c) {
    ComplexInterval s(0.0);
    for (std::size_t j = 0; j < diag.N; ++j) s += parts.y[2 * j] * P(2 * j, c);
    yp[c] = s;
  }

  IntervalMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = G(r, c) + delta * (px(r, 0) * yp[c]);
  return out;
}

/// 1 / ((p+q2-1) (N-1)^{p+q2-1}), the integral-comparison bound of
/// sum_{j>=N} j^{-(p+q2)}.
inline Interval tail_sum_bound(const Interval& s, std::size_t N) {
  const Interval e = s - Interval(1.0);
  return Interval(1.0) / (e * pow_real(Interval(static_cast<double>(N - 1)), e));
}

/// Upper bound R_r of the Gershgorin radius of finite row r of the full
/// infinite matrix.
inline Interval radius_finite(std::size_t r, const IntervalMatrix& frak, const DiagonalizerBasis& diag,
                              const KernelBound& kb, const Interval& delta, double p) {
  const std::size_t N = diag.N;
  const Interval pref = kb.C * abs(delta) * tail_sum_bound(Interval(p) + Interval(kb.q2), N);
  const Interval w(diag.P_inv.row_radius[r]);
  Interval weighted(0.0);
  for (std::size_t k = 0; k < N; ++k) {
    const std::complex<double> v = diag.P_inv.approx(r, 2 * k + 1);
    const Interval mag = abs(ComplexInterval(Interval(std::fabs(v.real())) + w, Interval(std::fabs(v.imag())) + w));
    weighted += mag * pow_real(Interval(static_cast<double>(std::max<std::size_t>(1, k))), Interval(p) - Interval(kb.q1));
  }
  Interval off(0.0);
  for (std::size_t s = 0; s < 2 * N; ++s)
    if (s != r) off += abs(frak(r, s));
  return pref * weighted + off;
}

/// rho_{N,p}: row-weighted size of the u-rows of P plus the tail bound.
inline Interval rho_Np(const DiagonalizerBasis& diag, double p, double q2) {
  const std::size_t N = diag.N;
  Interval s(0.0);
  for (std::size_t k = 0; k < N; ++k) {
    Interval row(0.0);
    for (std::size_t c = 0; c < 2 * N; ++c) row += abs(ComplexInterval(diag.P(2 * k, c)));
    s += row / pow_real(Interval(static_cast<double>(std::max<std::size_t>(1, k))), Interval(p) + Interval(q2));
  }
  return s + tail_sum_bound(Interval(p) + Interval(q2), N);
}

/// Upper bound of Re(c_k) + R_k over all k >= 2N. Returns the entire line
/// when no finite bound exists.
inline Interval m_bar(const ProblemInstance& inst, const Interval& delta, std::size_t N, double p,
                      const KernelBound& kb, const Interval& rho) {
  const Interval kappa = sqr(Interval::pi() / inst.l);
  const Interval even = -inst.theta * laplacian_eigenvalue(N, inst) + inst.a + abs(inst.b);
  const Interval K = kb.C * abs(delta) * rho;
  const Interval s = Interval(p) - Interval(kb.q1);
  auto g = [&](const Interval& x) {
    return -kappa * sqr(x) + K * pow_real(x, s) + abs(inst.c) + inst.d;
  };
  const Interval n_int(static_cast<double>(N));
  if (p > kb.q1 + 2) return Interval::entire();
  if (p == kb.q1 + 2) {
    if (!(K.hi() <= kappa.lo())) return Interval::entire();
    return max(even, g(n_int));
  }
  if (p <= kb.q1 || K.hi() == 0) return max(even, g(n_int));

  const Interval l2 = sqr(inst.l);
  const Interval abar = pow_real(K * l2 * s / (Interval(2.0) * sqr(Interval::pi())),
                                 Interval(1.0) / (Interval(2.0) - s));
  Interval odd = g(n_int);
  const double lo = std::max(static_cast<double>(N), std::floor(abar.lo()));
  const double hi = std::ceil(abar.hi());
  if (hi - lo > 1e6) {
    odd = max(odd, g(Interval(lo, hi)));
  } else {
    for (double i = lo; i <= hi; i += 1) odd = max(odd, g(Interval(i)));
  }
  return max(even, odd);
}

/// Certify the spectrum picture on one delta cell.
inline SpectrumCertificate classify_cell(const ProblemInstance& inst, const Interval& delta, std::size_t N,
                                         double p) {
  SpectrumCertificate cert;
  cert.delta = delta;
  cert.N = N;
  cert.p = p;
  cert.m_bar = Interval::entire();
  cert.mu = Interval::entire();
  cert.disk0_left = Interval::entire();
  cert.disk0_right = Interval::entire();
  try {
    const KernelBound kb = b_constant(inst);
    const ScalingBasis basis{p};
    const DiagonalizerBasis diag = make_diagonalizer(inst, delta.mid(), N, basis);
    const IntervalMatrix frak = build_frak_block(inst, delta, basis, diag);
    const std::size_t n = 2 * N;
    cert.disks.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
      cert.disks.push_back({frak(r, r), radius_finite(r, frak, diag, kb, delta, p)});
    cert.m_bar = m_bar(inst, delta, N, p, kb, rho_Np(diag, p, kb.q2));
    Interval mu = cert.m_bar;
    for (std::size_t r = 1; r < n; ++r) mu = max(mu, cert.disks[r].center.re() + cert.disks[r].radius_bound);
    cert.mu = mu;
    cert.disk0_left = cert.disks[0].center.re() - cert.disks[0].radius_bound;
    cert.disk0_right = cert.disks[0].center.re() + cert.disks[0].radius_bound;
  } catch (const CertError& e) {
    cert.failure = e.what();
    return cert;
  }
  const bool mu_neg = cert.mu.hi() < 0;
  cert.at_most_one = mu_neg && cert.disk0_left.lo() > cert.mu.hi();
  if (mu_neg && cert.disk0_right.hi() < 0)
    cert.classification = Classification::Stable;
  else if (cert.at_most_one && cert.disk0_left.lo() > 0)
    cert.classification = Classification::UnstableOne;
  return cert;
}

/// Smallest i0 such that all disks of the Q-scaled matrix with index >= 2 i0
/// lie in the open left half plane (one space dimension, kappa = (pi/l)^2).
inline std::size_t tail_threshold_qbasis(const ProblemInstance& inst, const Interval& delta, double p,
                                         std::size_t cap = 10'000'000) {
  const KernelBound kb = b_constant(inst);
  if (!(p > 1 - kb.q2 && p < kb.q1 + 2)) throw NoThresholdFound("p outside (1-q2, q1+2)");
  const Interval s = Interval(p) + Interval(kb.q2);
  const Interval e = Interval(p) - Interval(kb.q1);
  const std::size_t n0 = 1000;
  Interval partial(0.0);
  for (std::size_t j = 0; j < n0; ++j)
    partial += Interval(1.0) / pow_real(Interval(static_cast<double>(std::max<std::size_t>(1, j))), s);
  const Interval c_prime = kb.C * (partial + tail_sum_bound(s, n0));
  const Interval kappa = sqr(Interval::pi() / inst.l);
  const Interval K = c_prime * abs(delta);
  auto holds = [&](std::size_t i) {
    const Interval x(static_cast<double>(i));
    const Interval x2 = sqr(x);
    const bool even = (-inst.theta * kappa * x2 + inst.a + abs(inst.b)).hi() < 0;
    const Interval w = pow_real(Interval(static_cast<double>(std::max<std::size_t>(1, i))), e);
    const bool odd = (-kappa * x2 + K * w + inst.d + abs(inst.c)).hi() < 0;
    return even && odd;
  };
  // Both bounds are eventually decreasing; past the peak of the odd bound
  // the conditions stay true once they hold.
  std::size_t start = 0;
  if (p > kb.q1 && K.hi() > 0) {
    const Interval peak = pow_real(K * e / (Interval(2.0) * kappa), Interval(1.0) / (Interval(2.0) - e));
    start = static_cast<std::size_t>(std::ceil(peak.hi()));
  }
  if (inst.theta.lo() <= 0) throw NoThresholdFound("theta must be positive");
  std::size_t i = start;
  while (!holds(i)) {
    if (++i > cap) throw NoThresholdFound("no threshold below cap");
  }
  while (i > 0 && holds(i - 1)) --i;
  return i;
}

}  // namespace turingcert
