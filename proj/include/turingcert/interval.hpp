#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>

#include "turingcert/errors.hpp"

namespace turingcert {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

inline double widen_down(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = next_down(x);
  return x;
}
inline double widen_up(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = next_up(x);
  return x;
}

// Round-to-nearest result plus the sign of (exact - value). dir == 2 means
// the sign is unknown and both sides must be widened.
struct Rounded {
  double value;
  int dir;
};

inline int sign_of(double e) { return e > 0 ? 1 : (e < 0 ? -1 : 0); }

// Residuals from fma/TwoSum are exact as long as nothing underflows.
inline constexpr double kTrustFloor = 0x1p-900;

inline Rounded add(double a, double b) {
  double s = a + b;
  if (std::isinf(a) || std::isinf(b)) return {s, 0};
  if (!std::isfinite(s)) return {s, 2};
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, sign_of(err)};
}

inline Rounded mul(double a, double b) {
  if (a == 0 || b == 0) return {0.0, 0};
  double p = a * b;
  if (std::isinf(a) || std::isinf(b)) return {p, 0};
  if (!std::isfinite(p) || std::fabs(p) < kTrustFloor) return {p, 2};
  return {p, sign_of(std::fma(a, b, -p))};
}

inline Rounded div(double a, double b) {
  if (a == 0) return {0.0, 0};
  double q = a / b;
  if (std::isinf(a) || std::isinf(b)) return {q, 0};
  if (!std::isfinite(q) || std::fabs(q) < kTrustFloor || std::fabs(a) < kTrustFloor)
    return {q, 2};
  double r = std::fma(-q, b, a);
  return {q, sign_of(r) * sign_of(b)};
}

inline Rounded sqrt(double x) {
  double s = std::sqrt(x);
  if (x == 0 || std::isinf(x)) return {s, 0};
  if (x < kTrustFloor) return {s, 2};
  return {s, sign_of(std::fma(-s, s, x))};
}

inline double down(Rounded r) { return r.dir < 0 || r.dir == 2 ? next_down(r.value) : r.value; }
inline double up(Rounded r) { return r.dir > 0 || r.dir == 2 ? next_up(r.value) : r.value; }

}  // namespace detail

/// Closed real interval [lo, hi] with binary64 endpoints. Infinite endpoints
/// are allowed; NaN and lo > hi are rejected.
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double v) : Interval(v, v) {}  // NOLINT(google-explicit-constructor)
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == detail::kInf ||
        hi == -detail::kInf)
      throw InvalidInterval("[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  static Interval entire() { return Interval(-detail::kInf, detail::kInf); }
  static Interval pi() { return Interval(3.141592653589793, detail::next_up(3.141592653589793)); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double inf() const { return lo_; }
  double sup() const { return hi_; }

  double mid() const {
    if (lo_ == -detail::kInf && hi_ == detail::kInf) return 0.0;
    if (lo_ == -detail::kInf) return -std::numeric_limits<double>::max();
    if (hi_ == detail::kInf) return std::numeric_limits<double>::max();
    if (lo_ == hi_) return lo_;
    double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
  }
  // Upper bound on the distance from mid() to either endpoint.
  double rad() const {
    double m = mid();
    return std::max(detail::up(detail::add(hi_, -m)), detail::up(detail::add(m, -lo_)));
  }
  double width() const { return detail::up(detail::add(hi_, -lo_)); }
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const {
    if (lo_ <= 0 && hi_ >= 0) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
  }

  bool contains(double v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool subset_of(const Interval& o) const { return o.contains(*this); }
  bool overlaps(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
  bool is_point() const { return lo_ == hi_; }
  bool is_bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }

  Interval operator-() const { return unchecked(-hi_, -lo_); }

  friend Interval operator+(const Interval& x, const Interval& y) {
    return unchecked(detail::down(detail::add(x.lo_, y.lo_)), detail::up(detail::add(x.hi_, y.hi_)));
  }
  friend Interval operator-(const Interval& x, const Interval& y) {
    return unchecked(detail::down(detail::add(x.lo_, -y.hi_)), detail::up(detail::add(x.hi_, -y.lo_)));
  }
  friend Interval operator*(const Interval& x, const Interval& y) {
    if (x.lo_ >= 0 && y.lo_ >= 0)
      return unchecked(detail::down(detail::mul(x.lo_, y.lo_)), detail::up(detail::mul(x.hi_, y.hi_)));
    const detail::Rounded p[4] = {detail::mul(x.lo_, y.lo_), detail::mul(x.lo_, y.hi_),
                                  detail::mul(x.hi_, y.lo_), detail::mul(x.hi_, y.hi_)};
    double lo = detail::kInf, hi = -detail::kInf;
    for (const auto& r : p) {
      lo = std::min(lo, detail::down(r));
      hi = std::max(hi, detail::up(r));
    }
    return unchecked(lo, hi);
  }
  friend Interval operator/(const Interval& x, const Interval& y) {
    if (y.contains(0.0)) throw DivisionByZeroInterval();
    const detail::Rounded q[4] = {detail::div(x.lo_, y.lo_), detail::div(x.lo_, y.hi_),
                                  detail::div(x.hi_, y.lo_), detail::div(x.hi_, y.hi_)};
    double lo = detail::kInf, hi = -detail::kInf;
    for (const auto& r : q) {
      lo = std::min(lo, detail::down(r));
      hi = std::max(hi, detail::up(r));
    }
    return unchecked(lo, hi);
  }

  Interval& operator+=(const Interval& y) { return *this = *this + y; }
  Interval& operator-=(const Interval& y) { return *this = *this - y; }
  Interval& operator*=(const Interval& y) { return *this = *this * y; }
  Interval& operator/=(const Interval& y) { return *this = *this / y; }

  friend bool operator==(const Interval& x, const Interval& y) = default;

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << '[' << x.lo_ << ", " << x.hi_ << ']';
  }

  // For endpoints already known to be ordered and non-NaN.
  static Interval unchecked(double lo, double hi) {
    Interval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval hull(const Interval& x, const Interval& y) {
  return Interval::unchecked(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y) {
  double lo = std::max(x.lo(), y.lo());
  double hi = std::min(x.hi(), y.hi());
  if (lo > hi) return std::nullopt;
  return Interval::unchecked(lo, hi);
}

inline Interval abs(const Interval& x) { return Interval::unchecked(x.mig(), x.mag()); }

inline Interval min(const Interval& x, const Interval& y) {
  return Interval::unchecked(std::min(x.lo(), y.lo()), std::min(x.hi(), y.hi()));
}
inline Interval max(const Interval& x, const Interval& y) {
  return Interval::unchecked(std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline Interval sqr(const Interval& x) {
  Interval a = abs(x);
  return Interval::unchecked(detail::down(detail::mul(a.lo(), a.lo())),
                             detail::up(detail::mul(a.hi(), a.hi())));
}

inline Interval sqrt(const Interval& x) {
  if (x.hi() < 0) throw NegativeBase("sqrt of " + std::to_string(x.hi()));
  double lo = std::max(x.lo(), 0.0);
  return Interval::unchecked(detail::down(detail::sqrt(lo)), detail::up(detail::sqrt(x.hi())));
}

/// x^n by repeated squaring; exact up to outward rounding of each product.
inline Interval pow_int(const Interval& x, int n) {
  if (n < 0) return Interval(1.0) / pow_int(x, -n);
  if (n == 0) return Interval(1.0);
  Interval base = x, result(1.0);
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n > 0) base = sqr(base);
  }
  return result;
}

namespace detail {

inline constexpr int kTranscendentalUlps = 4;

inline Interval widened(double lo_value, double hi_value) {
  return Interval::unchecked(widen_down(lo_value, kTranscendentalUlps),
                             widen_up(hi_value, kTranscendentalUlps));
}

inline double pow_endpoint_down(double t, double a) {
  if (t == 0) return 0.0;
  if (std::isinf(t)) return std::pow(t, a);
  return widen_down(std::pow(t, a), kTranscendentalUlps);
}
inline double pow_endpoint_up(double t, double a) {
  if (t == 0) return a > 0 ? 0.0 : kInf;
  if (std::isinf(t)) return std::pow(t, a);
  return widen_up(std::pow(t, a), kTranscendentalUlps);
}

}  // namespace detail

/// Encloses {t^a : t in x}. Integer exponents of moderate size go through
/// exact repeated multiplication.
inline Interval pow_real(const Interval& x, double a) {
  if (!(x.lo() > 0 || (x.lo() >= 0 && a >= 0)))
    throw NegativeBase("pow_real base " + std::to_string(x.lo()) + " exponent " + std::to_string(a));
  if (a == 0) return Interval(1.0);
  if (a == std::trunc(a) && std::fabs(a) <= 64) return pow_int(x, static_cast<int>(a));
  if (a > 0)
    return Interval::unchecked(std::max(0.0, detail::pow_endpoint_down(x.lo(), a)),
                               detail::pow_endpoint_up(x.hi(), a));
  return Interval::unchecked(std::max(0.0, detail::pow_endpoint_down(x.hi(), a)),
                             detail::pow_endpoint_up(x.lo(), a));
}

/// t^a is monotone in a for fixed t > 0, so the corners bound the range.
inline Interval pow_real(const Interval& x, const Interval& a) {
  if (a.is_point()) return pow_real(x, a.lo());
  return hull(pow_real(x, a.lo()), pow_real(x, a.hi()));
}

inline Interval exp(const Interval& x) {
  double lo = x.lo() == -detail::kInf ? 0.0 : detail::widen_down(std::exp(x.lo()), detail::kTranscendentalUlps);
  double hi = x.hi() == detail::kInf ? detail::kInf : detail::widen_up(std::exp(x.hi()), detail::kTranscendentalUlps);
  return Interval::unchecked(std::max(lo, 0.0), hi);
}

inline Interval log(const Interval& x) {
  if (x.hi() <= 0) throw NegativeBase("log of nonpositive interval");
  double lo = x.lo() <= 0 ? -detail::kInf : detail::widen_down(std::log(x.lo()), detail::kTranscendentalUlps);
  double hi = x.hi() == detail::kInf ? detail::kInf : detail::widen_up(std::log(x.hi()), detail::kTranscendentalUlps);
  return Interval::unchecked(lo, hi);
}

namespace detail {

// sin(x + shift) where shift is 0 (sine) or pi/2 (cosine). Extrema of sin sit
// at pi/2 + m pi with value (-1)^m; any such point that may lie in the
// argument is included.
inline Interval periodic(const Interval& x, bool cosine) {
  const Interval one(-1.0, 1.0);
  if (!x.is_bounded() || x.mag() > 0x1p40) return one;
  const Interval pi = Interval::pi();
  // Extremum m sits at offset + m pi.
  const Interval offset = cosine ? Interval(0.0) : pi / Interval(2.0);
  if (x.width() >= 2 * pi.lo()) return one;
  double m_lo = std::ceil(((Interval(x.lo()) - offset) / pi).lo());
  double m_hi = std::floor(((Interval(x.hi()) - offset) / pi).hi());
  double flo, fhi;
  if (cosine) {
    flo = std::cos(x.lo());
    fhi = std::cos(x.hi());
  } else {
    flo = std::sin(x.lo());
    fhi = std::sin(x.hi());
  }
  Interval r = hull(widened(flo, flo), widened(fhi, fhi));
  for (double m = m_lo; m <= m_hi; m += 1) {
    double v = std::fmod(m, 2.0) == 0 ? 1.0 : -1.0;
    r = hull(r, Interval(v));
  }
  return Interval::unchecked(std::max(r.lo(), -1.0), std::min(r.hi(), 1.0));
}

}  // namespace detail

inline Interval sin(const Interval& x) { return detail::periodic(x, false); }
inline Interval cos(const Interval& x) { return detail::periodic(x, true); }

/// Left-to-right sum; the fixed order keeps results reproducible.
inline Interval rigorous_sum(std::span<const Interval> xs) {
  Interval s(0.0);
  for (const auto& x : xs) s += x;
  return s;
}

/// Rectangle in the complex plane.
class ComplexInterval {
 public:
  ComplexInterval() = default;
  ComplexInterval(Interval re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  ComplexInterval(double re) : re_(re) {}    // NOLINT(google-explicit-constructor)
  ComplexInterval(Interval re, Interval im) : re_(re), im_(im) {}
  ComplexInterval(std::complex<double> z) : re_(z.real()), im_(z.imag()) {}  // NOLINT

  const Interval& re() const { return re_; }
  const Interval& im() const { return im_; }
  std::complex<double> mid() const { return {re_.mid(), im_.mid()}; }

  bool contains(std::complex<double> z) const { return re_.contains(z.real()) && im_.contains(z.imag()); }
  bool contains(const ComplexInterval& z) const { return re_.contains(z.re_) && im_.contains(z.im_); }

  ComplexInterval operator-() const { return {-re_, -im_}; }
  friend ComplexInterval operator+(const ComplexInterval& x, const ComplexInterval& y) {
    return {x.re_ + y.re_, x.im_ + y.im_};
  }
  friend ComplexInterval operator-(const ComplexInterval& x, const ComplexInterval& y) {
    return {x.re_ - y.re_, x.im_ - y.im_};
  }
  friend ComplexInterval operator*(const ComplexInterval& x, const ComplexInterval& y) {
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
  }
  friend ComplexInterval operator*(const Interval& s, const ComplexInterval& y) {
    return {s * y.re_, s * y.im_};
  }
  friend ComplexInterval operator*(const ComplexInterval& y, const Interval& s) { return s * y; }
  friend ComplexInterval operator/(const ComplexInterval& x, const ComplexInterval& y) {
    Interval den = sqr(y.re_) + sqr(y.im_);
    return {(x.re_ * y.re_ + x.im_ * y.im_) / den, (x.im_ * y.re_ - x.re_ * y.im_) / den};
  }
  ComplexInterval& operator+=(const ComplexInterval& y) { return *this = *this + y; }
  ComplexInterval& operator-=(const ComplexInterval& y) { return *this = *this - y; }
  ComplexInterval& operator*=(const ComplexInterval& y) { return *this = *this * y; }

  friend bool operator==(const ComplexInterval&, const ComplexInterval&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ComplexInterval& z) {
    return os << z.re_ << " + i" << z.im_;
  }

 private:
  Interval re_;
  Interval im_;
};

/// Encloses |z| over the rectangle.
inline Interval abs(const ComplexInterval& z) {
  if (z.im().is_point() && z.im().lo() == 0) return abs(z.re());
  return sqrt(sqr(z.re()) + sqr(z.im()));
}

inline ComplexInterval conj(const ComplexInterval& z) { return {z.re(), -z.im()}; }

inline ComplexInterval hull(const ComplexInterval& x, const ComplexInterval& y) {
  return {hull(x.re(), y.re()), hull(x.im(), y.im())};
}

}  // namespace turingcert
