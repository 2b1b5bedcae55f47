#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <string>
#include <vector>

#include "turingcert/errors.hpp"
#include "turingcert/interval.hpp"

namespace turingcert {

using FloatMatrix = Eigen::MatrixXcd;
using RealFloatMatrix = Eigen::MatrixXd;

/// Row-major dense matrix over an interval scalar type.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntervalMatrix = DenseMatrix<ComplexInterval>;
using RealIntervalMatrix = DenseMatrix<Interval>;

template <class T>
DenseMatrix<T> interval_matmul(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch(std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T s(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

template <class T>
std::vector<T> interval_matvec(const DenseMatrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size())
    throw DimensionMismatch(std::to_string(a.cols()) + " vs " + std::to_string(x.size()));
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T s(0.0);
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
    y[i] = s;
  }
  return y;
}

inline IntervalMatrix to_interval(const FloatMatrix& m) {
  IntervalMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = ComplexInterval(m(i, j));
  return r;
}

inline RealIntervalMatrix to_interval(const RealFloatMatrix& m) {
  RealIntervalMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Interval(m(i, j));
  return r;
}

template <class T>
Eigen::MatrixXd mid_real(const DenseMatrix<T>& m) {
  Eigen::MatrixXd r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, Interval>)
        r(i, j) = m(i, j).mid();
      else
        r(i, j) = m(i, j).re().mid();
    }
  return r;
}

struct EigenDecomposition {
  std::vector<std::complex<double>> values;
  FloatMatrix vectors;  // column k belongs to values[k]
};

inline EigenDecomposition approx_eig(const RealFloatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("approx_eig needs a square matrix");
  if (!m.allFinite()) throw ConvergenceFailure("non-finite input");
  Eigen::EigenSolver<RealFloatMatrix> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("real eigensolver");
  EigenDecomposition out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  out.vectors = es.eigenvectors();
  return out;
}

inline EigenDecomposition approx_eig(const FloatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("approx_eig needs a square matrix");
  if (!m.allFinite()) throw ConvergenceFailure("non-finite input");
  Eigen::ComplexEigenSolver<FloatMatrix> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("complex eigensolver");
  EigenDecomposition out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  out.vectors = es.eigenvectors();
  return out;
}

/// Midpoint-radius matrix: every entry lies in [mid - rad, mid + rad].
struct BallMatrix {
  Eigen::MatrixXd mid;
  Eigen::MatrixXd rad;
};

struct ComplexBallMatrix {
  BallMatrix re;
  BallMatrix im;
};

/// Product with a-priori rounding error bounds, so the float GEMM can do the
/// heavy lifting. The radius is computed with a safety factor that absorbs
/// the rounding of the radius computation itself.
inline BallMatrix ball_mul(const BallMatrix& a, const BallMatrix& b) {
  if (a.mid.cols() != b.mid.rows()) throw DimensionMismatch("ball_mul");
  const double k = static_cast<double>(a.mid.cols());
  const double u = 0x1p-53;
  const double gamma = 2.0 * (k + 2.0) * u;
  const double factor = 1.0 + 2.0 * (k + 8.0) * u;
  const double eta = (k + 4.0) * std::numeric_limits<double>::denorm_min();
  BallMatrix c;
  c.mid.noalias() = a.mid * b.mid;
  const Eigen::MatrixXd am = a.mid.cwiseAbs();
  const Eigen::MatrixXd bm = b.mid.cwiseAbs();
  Eigen::MatrixXd r = gamma * (am * bm);
  const bool a_exact = a.rad.isZero(0.0), b_exact = b.rad.isZero(0.0);
  if (!b_exact) r.noalias() += am * b.rad;
  if (!a_exact) r.noalias() += a.rad * (bm + b.rad);
  c.rad = (r * factor).array() + eta;
  c.rad = c.rad.unaryExpr([](double x) { return detail::next_up(x); });
  return c;
}

inline ComplexBallMatrix ball_mul(const ComplexBallMatrix& a, const ComplexBallMatrix& b) {
  const Eigen::Index n = a.re.mid.rows(), k = a.re.mid.cols(), m = b.re.mid.cols();
  if (k != b.re.mid.rows()) throw DimensionMismatch("ball_mul");
  BallMatrix lhs{Eigen::MatrixXd(n, 2 * k), Eigen::MatrixXd(n, 2 * k)};
  lhs.mid << a.re.mid, a.im.mid;
  lhs.rad << a.re.rad, a.im.rad;
  BallMatrix to_re{Eigen::MatrixXd(2 * k, m), Eigen::MatrixXd(2 * k, m)};
  to_re.mid << b.re.mid, -b.im.mid;
  to_re.rad << b.re.rad, b.im.rad;
  BallMatrix to_im{Eigen::MatrixXd(2 * k, m), Eigen::MatrixXd(2 * k, m)};
  to_im.mid << b.im.mid, b.re.mid;
  to_im.rad << b.im.rad, b.re.rad;
  return {ball_mul(lhs, to_re), ball_mul(lhs, to_im)};
}

inline ComplexBallMatrix to_ball(const FloatMatrix& m) {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  return {{m.real(), z}, {m.imag(), z}};
}

inline ComplexBallMatrix to_ball(const IntervalMatrix& m) {
  ComplexBallMatrix b;
  for (BallMatrix* part : {&b.re, &b.im}) {
    part->mid.resize(m.rows(), m.cols());
    part->rad.resize(m.rows(), m.cols());
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& z = m(i, j);
      b.re.mid(i, j) = z.re().mid();
      b.re.rad(i, j) = z.re().rad();
      b.im.mid(i, j) = z.im().mid();
      b.im.rad(i, j) = z.im().rad();
    }
  return b;
}

inline IntervalMatrix to_interval(const ComplexBallMatrix& b) {
  IntervalMatrix m(b.re.mid.rows(), b.re.mid.cols());
  for (Eigen::Index i = 0; i < b.re.mid.rows(); ++i)
    for (Eigen::Index j = 0; j < b.re.mid.cols(); ++j) {
      const double rr = b.re.rad(i, j), ri = b.im.rad(i, j);
      m(i, j) = ComplexInterval(Interval(b.re.mid(i, j)) + Interval(-rr, rr),
                                Interval(b.im.mid(i, j)) + Interval(-ri, ri));
    }
  return m;
}

/// Enclosure of p^{-1} as a ball around the float inverse V, with one
/// radius per row: |p^{-1} - V|_ij <= |row_i(I - Vp)|_1 ||V||_inf / (1 - rho).
struct VerifiedInverse {
  FloatMatrix approx;
  std::vector<double> row_radius;
  double rho = 0.0;

  ComplexBallMatrix ball() const {
    ComplexBallMatrix b = to_ball(approx);
    for (Eigen::Index i = 0; i < approx.rows(); ++i) {
      b.re.rad.row(i).setConstant(row_radius[i]);
      b.im.rad.row(i).setConstant(row_radius[i]);
    }
    return b;
  }
  IntervalMatrix enclosure() const { return to_interval(ball()); }
};

inline VerifiedInverse verify_inverse(const FloatMatrix& p) {
  if (p.rows() != p.cols()) throw DimensionMismatch("verified_inverse needs a square matrix");
  const Eigen::Index n = p.rows();
  VerifiedInverse out;
  out.approx = p.partialPivLu().inverse();
  if (!out.approx.allFinite()) throw NotVerifiablyInvertible("float inverse not finite");
  const ComplexBallMatrix vp = ball_mul(to_ball(out.approx), to_ball(p));
  std::vector<Interval> row_sum(n, Interval(0.0));
  Interval rho(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Interval s(0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rr = vp.re.rad(i, j), ri = vp.im.rad(i, j);
      ComplexInterval e(Interval(i == j ? 1.0 : 0.0) - Interval(vp.re.mid(i, j)) + Interval(-rr, rr),
                        Interval(-vp.im.mid(i, j)) + Interval(-ri, ri));
      s += Interval(abs(e).hi());
    }
    row_sum[i] = s;
    rho = max(rho, s);
  }
  if (!(rho.hi() < 1.0))
    throw NotVerifiablyInvertible("||I - V p|| bound " + std::to_string(rho.hi()));
  Interval norm_v(0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Interval s(0.0);
    for (Eigen::Index j = 0; j < n; ++j) s += Interval(abs(ComplexInterval(out.approx(i, j))).hi());
    norm_v = max(norm_v, s);
  }
  const Interval scale = Interval(norm_v.hi()) / (Interval(1.0) - Interval(rho.hi()));
  out.rho = rho.hi();
  out.row_radius.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.row_radius[i] = (Interval(row_sum[i].hi()) * scale).hi();
  return out;
}

inline IntervalMatrix verified_inverse(const FloatMatrix& p) { return verify_inverse(p).enclosure(); }

}  // namespace turingcert
