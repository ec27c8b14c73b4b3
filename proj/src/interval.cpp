#include "primfield/interval.hpp"

#include <algorithm>
#include <vector>

#include "primfield/error.hpp"

namespace primfield {

Real::Real(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Rational Real::to_rational() const {
  if (!mpfr_number_p(value_)) throw DomainError("cannot convert a non-finite value to a rational");
  if (mpfr_zero_p(value_)) return Rational(0);
  Integer mantissa;
  const mpfr_exp_t exponent = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
  Rational out(mantissa);
  if (exponent >= 0) {
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return out;
}

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
  char* raw = nullptr;
  const char* format = rnd == MPFR_RNDD ? "%.*RDe" : rnd == MPFR_RNDU ? "%.*RUe" : "%.*RNe";
  if (mpfr_asprintf(&raw, format, digits - 1, value_) < 0) throw Error("mpfr formatting failed");
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

namespace {

mpfr_prec_t joint(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Interval::Interval(mpfr_prec_t precision) : lo_(precision), hi_(precision) {}

Interval Interval::from_double(double value, mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_set_d(out.lo_.get(), value, MPFR_RNDD);
  mpfr_set_d(out.hi_.get(), value, MPFR_RNDU);
  return out;
}

Interval Interval::from_integer(const Integer& value, mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_set_z(out.lo_.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_.get(), value.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_rational(const Rational& value, mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_set_q(out.lo_.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_.get(), value.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_bounds(const Real& lo, const Real& hi) {
  if (mpfr_greater_p(lo.get(), hi.get())) throw DomainError("interval bounds out of order");
  Interval out(std::max(lo.precision(), hi.precision()));
  mpfr_set(out.lo_.get(), lo.get(), MPFR_RNDD);
  mpfr_set(out.hi_.get(), hi.get(), MPFR_RNDU);
  return out;
}

Interval Interval::euler_gamma(mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_const_euler(out.lo_.get(), MPFR_RNDD);
  mpfr_const_euler(out.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::pi(mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_const_pi(out.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(out.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::log2(mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_const_log2(out.lo_.get(), MPFR_RNDD);
  mpfr_const_log2(out.hi_.get(), MPFR_RNDU);
  return out;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(joint(a, b));
  mpfr_add(out.lo_.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(out.hi_.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(joint(a, b));
  mpfr_sub(out.lo_.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(out.hi_.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  return out;
}

Interval Interval::operator-() const {
  Interval out(precision());
  mpfr_neg(out.lo_.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(out.hi_.get(), lo_.get(), MPFR_RNDU);
  return out;
}

// Min over the four endpoint combinations rounded down, max rounded up.
Interval Interval::corner_hull(const Interval& a, const Interval& b, BinaryOp op) {
  const mpfr_prec_t precision = joint(a, b);
  Interval out(precision);
  Real down(precision);
  Real up(precision);
  bool first = true;
  for (mpfr_srcptr x : {a.lo().get(), a.hi().get()}) {
    for (mpfr_srcptr y : {b.lo().get(), b.hi().get()}) {
      op(down.get(), x, y, MPFR_RNDD);
      op(up.get(), x, y, MPFR_RNDU);
      if (first || mpfr_less_p(down.get(), out.lo_.get())) mpfr_set(out.lo_.get(), down.get(), MPFR_RNDD);
      if (first || mpfr_greater_p(up.get(), out.hi_.get())) mpfr_set(out.hi_.get(), up.get(), MPFR_RNDU);
      first = false;
    }
  }
  return out;
}

Interval operator*(const Interval& a, const Interval& b) {
  if (mpfr_sgn(a.lo().get()) >= 0 && mpfr_sgn(b.lo().get()) >= 0) {
    Interval out(joint(a, b));
    mpfr_mul(out.lo_.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_mul(out.hi_.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return out;
  }
  return Interval::corner_hull(a, b, mpfr_mul);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_sgn(b.lo().get()) <= 0 && mpfr_sgn(b.hi().get()) >= 0) {
    throw DomainError("interval division by an interval containing zero");
  }
  return Interval::corner_hull(a, b, mpfr_div);
}

Interval Interval::scaled(const Integer& factor) const {
  Interval out(precision());
  if (factor >= 0) {
    mpfr_mul_z(out.lo_.get(), lo_.get(), factor.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.hi_.get(), hi_.get(), factor.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_mul_z(out.lo_.get(), hi_.get(), factor.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.hi_.get(), lo_.get(), factor.get_mpz_t(), MPFR_RNDU);
  }
  return out;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_.get()) <= 0) throw DomainError("log of an interval that is not strictly positive");
  Interval out(precision());
  mpfr_log(out.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_log(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::log1p() const {
  if (mpfr_cmp_si(lo_.get(), -1) <= 0) throw DomainError("log1p of an interval reaching -1");
  Interval out(precision());
  mpfr_log1p(out.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_log1p(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::exp() const {
  Interval out(precision());
  mpfr_exp(out.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_exp(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_.get()) < 0) throw DomainError("sqrt of a negative interval");
  Interval out(precision());
  mpfr_sqrt(out.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_sqrt(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::pow(unsigned long exponent) const {
  if (mpfr_sgn(lo_.get()) < 0) throw DomainError("integer power of an interval with negative part");
  Interval out(precision());
  mpfr_pow_ui(out.lo_.get(), lo_.get(), exponent, MPFR_RNDD);
  mpfr_pow_ui(out.hi_.get(), hi_.get(), exponent, MPFR_RNDU);
  return out;
}

Interval Interval::pow(const Interval& exponent) const { return (exponent * log()).exp(); }

Interval Interval::hull(const Interval& other) const {
  Interval out(joint(*this, other));
  mpfr_min(out.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_max(out.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  return out;
}

bool Interval::contains(double value) const {
  return mpfr_cmp_d(lo_.get(), value) <= 0 && mpfr_cmp_d(hi_.get(), value) >= 0;
}

bool Interval::contains(const Rational& value) const {
  return mpfr_cmp_q(lo_.get(), value.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), value.get_mpq_t()) >= 0;
}

bool Interval::certainly_less_equal(const Interval& other) const {
  return mpfr_lessequal_p(hi_.get(), other.lo_.get()) != 0;
}

bool Interval::certainly_less(const Interval& other) const {
  return mpfr_less_p(hi_.get(), other.lo_.get()) != 0;
}

double Interval::width() const {
  Real diff(precision());
  mpfr_sub(diff.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return diff.to_double(MPFR_RNDU);
}

double Interval::midpoint() const {
  Real sum(precision() + 1);
  mpfr_add(sum.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(sum.get(), sum.get(), 1, MPFR_RNDN);
  return sum.to_double();
}

}  // namespace primfield
