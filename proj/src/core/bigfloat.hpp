#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>
#include <utility>

#include "core/errors.hpp"

namespace steffkit {

enum class Field { Real, Complex };

// Arithmetic configuration: significand width plus the scalar field.
struct PrecisionContext {
  unsigned bits = 1024;
  Field field = Field::Real;

  PrecisionContext() = default;
  PrecisionContext(unsigned b, Field f) : bits(b), field(f) {
    if (b < 64)
      throw InvalidArgument("precision context needs at least 64 significand bits");
  }
};

// Arbitrary-precision real number backed by MPFR, rounding to nearest.
// Every value carries its own significand width; binary operations on two
// BigReal operands insist the widths agree and throw PrecisionMismatch
// otherwise.  Mixing with machine integers or doubles is allowed since those
// convert exactly.
class BigReal {
 public:
  BigReal() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }

  explicit BigReal(unsigned bits) {
    mpfr_init2(v_, prec(bits));
    mpfr_set_nan(v_);
  }

  BigReal(double x, unsigned bits) {
    mpfr_init2(v_, prec(bits));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }

  BigReal(long x, unsigned bits) {
    mpfr_init2(v_, prec(bits));
    mpfr_set_si(v_, x, MPFR_RNDN);
  }

  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }

  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  BigReal& operator=(BigReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~BigReal() { mpfr_clear(v_); }

  // Parses a decimal literal, rounding once into the target precision.
  static BigReal from_string(std::string_view text, unsigned bits);

  // Exact power of two, useful for thresholds.
  static BigReal two_pow(long e, unsigned bits) {
    BigReal r(bits);
    mpfr_set_ui_2exp(r.v_, 1u, e, MPFR_RNDN);
    return r;
  }

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific notation with the requested number of significant digits.
  std::string to_string(int sig_digits = 20) const;

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(common(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(common(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(common(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(common(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  friend BigReal operator+(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator+(double a, const BigReal& b) { return b + a; }
  friend BigReal operator-(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(double a, const BigReal& b) {
    BigReal r(b.precision());
    mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(double a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(double a, const BigReal& b) {
    BigReal r(b.precision());
    mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  BigReal operator-() const {
    BigReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& o) { return *this = *this + o; }
  BigReal& operator-=(const BigReal& o) { return *this = *this - o; }
  BigReal& operator*=(const BigReal& o) { return *this = *this * o; }
  BigReal& operator/=(const BigReal& o) { return *this = *this / o; }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }
  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  friend bool operator==(const BigReal& a, double b) { return mpfr_cmp_d(a.v_, b) == 0 && !a.is_nan(); }
  friend bool operator!=(const BigReal& a, double b) { return !(a == b); }
  friend bool operator<(const BigReal& a, double b) { return !a.is_nan() && mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator<=(const BigReal& a, double b) { return !a.is_nan() && mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>(const BigReal& a, double b) { return !a.is_nan() && mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator>=(const BigReal& a, double b) { return !a.is_nan() && mpfr_cmp_d(a.v_, b) >= 0; }
  friend bool operator<(double a, const BigReal& b) { return b > a; }
  friend bool operator>(double a, const BigReal& b) { return b < a; }

#define STEFFKIT_UNARY(name, fn)                 \
  friend BigReal name(const BigReal& x) {        \
    BigReal r(x.precision());                    \
    fn(r.v_, x.v_, MPFR_RNDN);                   \
    return r;                                    \
  }
  STEFFKIT_UNARY(abs, mpfr_abs)
  STEFFKIT_UNARY(sqrt, mpfr_sqrt)
  STEFFKIT_UNARY(cbrt, mpfr_cbrt)
  STEFFKIT_UNARY(sin, mpfr_sin)
  STEFFKIT_UNARY(cos, mpfr_cos)
  STEFFKIT_UNARY(exp, mpfr_exp)
  STEFFKIT_UNARY(log, mpfr_log)
  STEFFKIT_UNARY(sinh, mpfr_sinh)
  STEFFKIT_UNARY(cosh, mpfr_cosh)
#undef STEFFKIT_UNARY

  friend BigReal atan2(const BigReal& y, const BigReal& x) {
    BigReal r(common(y, x));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal pow(const BigReal& b, const BigReal& e) {
    BigReal r(common(b, e));
    mpfr_pow(r.v_, b.v_, e.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal hypot(const BigReal& a, const BigReal& b) {
    BigReal r(common(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }
  friend BigReal min(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }

 private:
  static mpfr_prec_t prec(unsigned bits) {
    if (bits < 2) throw InvalidArgument("precision below 2 bits");
    return static_cast<mpfr_prec_t>(bits);
  }
  static unsigned common(const BigReal& a, const BigReal& b) {
    if (a.precision() != b.precision())
      throw PrecisionMismatch(a.precision(), b.precision());
    return a.precision();
  }

  mpfr_t v_;
};

// Namespace-scope declarations for the hidden friends above so qualified
// lookup works too.
BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal cbrt(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal sinh(const BigReal& x);
BigReal cosh(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal pow(const BigReal& b, const BigReal& e);
BigReal hypot(const BigReal& a, const BigReal& b);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);

}  // namespace steffkit
