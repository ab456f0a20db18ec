#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <string_view>

#include "core/bigfloat.hpp"

namespace steffkit {

// Arbitrary-precision complex number as a pair of BigReal components of equal
// width.  Division uses Smith's rescaled formula, which also guarantees that
// values with an exactly zero imaginary part reproduce BigReal arithmetic bit
// for bit; the same holds for the transcendental functions below.  That keeps
// runs over the complex field consistent with real-field runs on real data.
class BigComplex {
 public:
  BigComplex() = default;
  explicit BigComplex(unsigned bits) : re_(bits), im_(0.0, bits) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {
    if (re_.precision() != im_.precision())
      throw PrecisionMismatch(re_.precision(), im_.precision());
  }
  explicit BigComplex(BigReal re) : re_(std::move(re)), im_(0.0, re_.precision()) {}
  BigComplex(double re, double im, unsigned bits) : re_(re, bits), im_(im, bits) {}

  const BigReal& real() const { return re_; }
  const BigReal& imag() const { return im_; }
  unsigned precision() const { return re_.precision(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    const BigReal &c = b.re_, &d = b.im_;
    if (abs(c) >= abs(d)) {
      BigReal r = d / c;
      BigReal den = c + d * r;
      return {(a.re_ + a.im_ * r) / den, (a.im_ - a.re_ * r) / den};
    }
    BigReal r = c / d;
    BigReal den = c * r + d;
    return {(a.re_ * r + a.im_) / den, (a.im_ * r - a.re_) / den};
  }

  friend BigComplex operator*(const BigComplex& a, const BigReal& s) {
    return {a.re_ * s, a.im_ * s};
  }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return a * s; }
  friend BigComplex operator*(const BigComplex& a, double s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator*(double s, const BigComplex& a) { return a * s; }

  BigComplex operator-() const { return {-re_, -im_}; }
  BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
  BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }

  friend bool operator==(const BigComplex& a, const BigComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }

  friend BigReal abs(const BigComplex& z) { return hypot(z.re_, z.im_); }
  friend BigComplex conj(const BigComplex& z) { return {z.re_, -z.im_}; }

  friend BigComplex sqrt(const BigComplex& z) {
    unsigned bits = z.precision();
    if (z.is_zero()) return BigComplex(0.0, 0.0, bits);
    BigReal m = abs(z);
    if (z.re_.sign() >= 0) {
      BigReal t = sqrt((m + z.re_) / 2.0);
      return {t, z.im_ / (t * 2.0)};
    }
    BigReal t = sqrt((m - z.re_) / 2.0);
    BigReal re = abs(z.im_) / (t * 2.0);
    return {re, z.im_.sign() < 0 ? -t : t};
  }

  friend BigComplex exp(const BigComplex& z) {
    BigReal e = exp(z.re_);
    return {e * cos(z.im_), e * sin(z.im_)};
  }
  friend BigComplex log(const BigComplex& z) {
    return {log(abs(z)), atan2(z.im_, z.re_)};
  }
  friend BigComplex sin(const BigComplex& z) {
    return {sin(z.re_) * cosh(z.im_), cos(z.re_) * sinh(z.im_)};
  }
  friend BigComplex cos(const BigComplex& z) {
    return {cos(z.re_) * cosh(z.im_), -(sin(z.re_) * sinh(z.im_))};
  }

 private:
  BigReal re_;
  BigReal im_;
};

BigReal abs(const BigComplex& z);
BigComplex conj(const BigComplex& z);
BigComplex sqrt(const BigComplex& z);
BigComplex exp(const BigComplex& z);
BigComplex log(const BigComplex& z);
BigComplex sin(const BigComplex& z);
BigComplex cos(const BigComplex& z);

// Integer powers by repeated squaring.  Used for every x^k with an integral
// literal exponent so machineishness of pow() never leaks into results.
template <class S>
S ipow(S base, long e, const S& one) {
  if (e == 0) return one;
  bool neg = e < 0;
  unsigned long k = neg ? static_cast<unsigned long>(-(e + 1)) + 1ul
                        : static_cast<unsigned long>(e);
  S acc = one;
  S sq = std::move(base);
  while (k) {
    if (k & 1ul) acc = acc * sq;
    k >>= 1;
    if (k) sq = sq * sq;
  }
  return neg ? one / acc : acc;
}

// ---- helpers over the two real representations --------------------------

inline double real_log(double x) { return std::log(x); }
inline BigReal real_log(const BigReal& x) { return log(x); }
inline double real_sqrt(double x) { return std::sqrt(x); }
inline BigReal real_sqrt(const BigReal& x) { return sqrt(x); }
inline double real_to_double(double x) { return x; }
inline double real_to_double(const BigReal& x) { return x.to_double(); }
inline bool real_finite(double x) { return std::isfinite(x); }
inline bool real_finite(const BigReal& x) { return x.is_finite(); }
inline bool real_is_zero(double x) { return x == 0.0; }
inline bool real_is_zero(const BigReal& x) { return x.is_zero(); }

// ---- scalar traits -------------------------------------------------------

template <class S>
struct FieldTraits;

template <>
struct FieldTraits<double> {
  using Real = double;
  static constexpr bool is_complex = false;
  static constexpr bool is_machine = true;

  static unsigned precision(const double&) { return 53; }
  static double from_double(double x, unsigned) { return x; }
  static double from_real(const double& x) { return x; }
  static double make(double re, double im, unsigned) {
    if (im != 0.0) throw InvalidArgument("imaginary value in a real field");
    return re;
  }
  static double from_parts(const double& re, const double& im) {
    if (im != 0.0) throw InvalidArgument("imaginary value in a real field");
    return re;
  }
  static double from_decimal(std::string_view s, unsigned) {
    std::string buf(s);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0')
      throw InvalidArgument("not a valid decimal number: '" + buf + "'");
    return v;
  }
  static double re(double x) { return x; }
  static double im(double) { return 0.0; }
  static double abs(double x) { return std::fabs(x); }
  static double abs_sq(double x) { return x * x; }
  static double zero(unsigned) { return 0.0; }
  static double one(unsigned) { return 1.0; }
  static bool finite(double x) { return std::isfinite(x); }
  static double real_two_pow(long e, unsigned) { return std::ldexp(1.0, static_cast<int>(e)); }

  static double sin(double x) { return std::sin(x); }
  static double cos(double x) { return std::cos(x); }
  static double exp(double x) { return std::exp(x); }
  static double log(double x) { return std::log(x); }
  static double sqrt_(double x) { return std::sqrt(x); }
  static double pow_(double b, double e) { return std::pow(b, e); }
};

template <>
struct FieldTraits<std::complex<double>> {
  using S = std::complex<double>;
  using Real = double;
  static constexpr bool is_complex = true;
  static constexpr bool is_machine = true;

  static unsigned precision(const S&) { return 53; }
  static S from_double(double x, unsigned) { return S(x, 0.0); }
  static S from_real(const double& x) { return S(x, 0.0); }
  static S make(double re, double im, unsigned) { return S(re, im); }
  static S from_parts(const double& re, const double& im) { return S(re, im); }
  static S from_decimal(std::string_view s, unsigned bits) {
    return S(FieldTraits<double>::from_decimal(s, bits), 0.0);
  }
  static double re(const S& x) { return x.real(); }
  static double im(const S& x) { return x.imag(); }
  static double abs(const S& x) { return std::hypot(x.real(), x.imag()); }
  static double abs_sq(const S& x) { return x.real() * x.real() + x.imag() * x.imag(); }
  static S zero(unsigned) { return S(0.0, 0.0); }
  static S one(unsigned) { return S(1.0, 0.0); }
  static bool finite(const S& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }
  static double real_two_pow(long e, unsigned) { return std::ldexp(1.0, static_cast<int>(e)); }

  static S sin(const S& x) { return std::sin(x); }
  static S cos(const S& x) { return std::cos(x); }
  static S exp(const S& x) { return std::exp(x); }
  static S log(const S& x) { return std::log(x); }
  static S sqrt_(const S& x) { return std::sqrt(x); }
  static S pow_(const S& b, const S& e) {
    if (e.imag() == 0.0 && b.imag() == 0.0 && b.real() > 0.0)
      return S(std::pow(b.real(), e.real()), 0.0);
    return std::exp(e * std::log(b));
  }
};

template <>
struct FieldTraits<BigReal> {
  using Real = BigReal;
  static constexpr bool is_complex = false;
  static constexpr bool is_machine = false;

  static unsigned precision(const BigReal& x) { return x.precision(); }
  static BigReal from_double(double x, unsigned bits) { return BigReal(x, bits); }
  static BigReal from_real(const BigReal& x) { return x; }
  static BigReal make(double re, double im, unsigned bits) {
    if (im != 0.0) throw InvalidArgument("imaginary value in a real field");
    return BigReal(re, bits);
  }
  static BigReal from_parts(const BigReal& re, const BigReal& im) {
    if (!im.is_zero()) throw InvalidArgument("imaginary value in a real field");
    return re;
  }
  static BigReal from_decimal(std::string_view s, unsigned bits) {
    return BigReal::from_string(s, bits);
  }
  static BigReal re(const BigReal& x) { return x; }
  static BigReal im(const BigReal& x) { return BigReal(0.0, x.precision()); }
  static BigReal abs(const BigReal& x) { return steffkit::abs(x); }
  static BigReal abs_sq(const BigReal& x) { return x * x; }
  static BigReal zero(unsigned bits) { return BigReal(0.0, bits); }
  static BigReal one(unsigned bits) { return BigReal(1.0, bits); }
  static bool finite(const BigReal& x) { return x.is_finite(); }
  static BigReal real_two_pow(long e, unsigned bits) { return BigReal::two_pow(e, bits); }

  static BigReal sin(const BigReal& x) { return steffkit::sin(x); }
  static BigReal cos(const BigReal& x) { return steffkit::cos(x); }
  static BigReal exp(const BigReal& x) { return steffkit::exp(x); }
  static BigReal log(const BigReal& x) { return steffkit::log(x); }
  static BigReal sqrt_(const BigReal& x) { return steffkit::sqrt(x); }
  static BigReal pow_(const BigReal& b, const BigReal& e) { return steffkit::pow(b, e); }
};

template <>
struct FieldTraits<BigComplex> {
  using Real = BigReal;
  static constexpr bool is_complex = true;
  static constexpr bool is_machine = false;

  static unsigned precision(const BigComplex& x) { return x.precision(); }
  static BigComplex from_double(double x, unsigned bits) { return BigComplex(x, 0.0, bits); }
  static BigComplex from_real(const BigReal& x) { return BigComplex(x); }
  static BigComplex make(double re, double im, unsigned bits) { return BigComplex(re, im, bits); }
  static BigComplex from_parts(const BigReal& re, const BigReal& im) { return BigComplex(re, im); }
  static BigComplex from_decimal(std::string_view s, unsigned bits) {
    return BigComplex(BigReal::from_string(s, bits));
  }
  static BigReal re(const BigComplex& x) { return x.real(); }
  static BigReal im(const BigComplex& x) { return x.imag(); }
  static BigReal abs(const BigComplex& x) { return steffkit::abs(x); }
  static BigReal abs_sq(const BigComplex& x) {
    return x.real() * x.real() + x.imag() * x.imag();
  }
  static BigComplex zero(unsigned bits) { return BigComplex(0.0, 0.0, bits); }
  static BigComplex one(unsigned bits) { return BigComplex(1.0, 0.0, bits); }
  static bool finite(const BigComplex& x) { return x.is_finite(); }
  static BigReal real_two_pow(long e, unsigned bits) { return BigReal::two_pow(e, bits); }

  static BigComplex sin(const BigComplex& x) { return steffkit::sin(x); }
  static BigComplex cos(const BigComplex& x) { return steffkit::cos(x); }
  static BigComplex exp(const BigComplex& x) { return steffkit::exp(x); }
  static BigComplex log(const BigComplex& x) { return steffkit::log(x); }
  static BigComplex sqrt_(const BigComplex& x) { return steffkit::sqrt(x); }
  static BigComplex pow_(const BigComplex& b, const BigComplex& e) {
    if (e.imag().is_zero() && e.real().is_integer()) {
      double d = e.real().to_double();
      if (d >= -1e9 && d <= 1e9)
        return ipow(b, e.real().to_long(), one(b.precision()));
    }
    if (e.imag().is_zero() && b.imag().is_zero() && b.real() > 0.0)
      return BigComplex(pow(b.real(), e.real()));
    return exp(e * log(b));
  }
};

// Division of a complex value by a real scalar stays componentwise so the
// zero-imaginary case remains exact.
inline BigComplex operator/(const BigComplex& a, const BigReal& s) {
  return {a.real() / s, a.imag() / s};
}

}  // namespace steffkit
