#pragma once

// Closed real intervals with MPFR endpoints. Every operation rounds the lower
// endpoint toward -inf and the upper endpoint toward +inf, so the true value of
// any expression built from these operations is contained in the result.

#include <string>

#include <mpfr.h>

#include "primfield/numeric.hpp"

namespace primfield {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

/// RAII owner of a single mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t precision = kDefaultPrecision);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  /// Exact conversion; the value must be finite.
  Rational to_rational() const;
  /// Scientific notation with `digits` significant digits, rounded per `rnd`.
  std::string to_string(int digits, mpfr_rnd_t rnd) const;

 private:
  mpfr_t value_;
};

class Interval {
 public:
  explicit Interval(mpfr_prec_t precision = kDefaultPrecision);

  static Interval from_double(double value, mpfr_prec_t precision = kDefaultPrecision);
  static Interval from_integer(const Integer& value, mpfr_prec_t precision = kDefaultPrecision);
  static Interval from_rational(const Rational& value, mpfr_prec_t precision = kDefaultPrecision);
  static Interval from_bounds(const Real& lo, const Real& hi);
  static Interval euler_gamma(mpfr_prec_t precision = kDefaultPrecision);
  static Interval pi(mpfr_prec_t precision = kDefaultPrecision);
  static Interval log2(mpfr_prec_t precision = kDefaultPrecision);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const;
  Interval& operator+=(const Interval& other) { return *this = *this + other; }
  Interval& operator*=(const Interval& other) { return *this = *this * other; }

  Interval scaled(const Integer& factor) const;
  Interval log() const;
  Interval log1p() const;
  Interval exp() const;
  Interval sqrt() const;
  /// Non-negative integer power; the interval must be non-negative.
  Interval pow(unsigned long exponent) const;
  /// Real power x^y for x > 0.
  Interval pow(const Interval& exponent) const;
  /// Convex hull of both intervals.
  Interval hull(const Interval& other) const;

  bool contains(double value) const;
  bool contains(const Rational& value) const;
  bool certainly_less_equal(const Interval& other) const;
  bool certainly_less(const Interval& other) const;
  bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }

  /// hi - lo, rounded up.
  double width() const;
  double midpoint() const;
  double lower_double() const { return lo_.to_double(MPFR_RNDD); }
  double upper_double() const { return hi_.to_double(MPFR_RNDU); }

  std::string lo_string(int digits = 30) const { return lo_.to_string(digits, MPFR_RNDD); }
  std::string hi_string(int digits = 30) const { return hi_.to_string(digits, MPFR_RNDU); }

 private:
  using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  static Interval corner_hull(const Interval& a, const Interval& b, BinaryOp op);

  Real lo_;
  Real hi_;
};

/// A bracket whose endpoints are exact rationals.
struct RationalBracket {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const RationalBracket& inner) const { return lo <= inner.lo && inner.hi <= hi; }
};

}  // namespace primfield
