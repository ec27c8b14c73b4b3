#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace primfield {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer int_pow(std::uint64_t base, unsigned long exponent) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

inline Integer int_pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline std::string to_decimal(const Integer& value) { return value.get_str(10); }

/// "num/den" in lowest terms; integers print without a denominator.
inline std::string to_decimal(const Rational& value) {
  Rational canon(value);
  canon.canonicalize();
  if (canon.get_den() == 1) return canon.get_num().get_str(10);
  return canon.get_num().get_str(10) + "/" + canon.get_den().get_str(10);
}

inline Integer parse_integer(const std::string& text) { return Integer(text, 10); }

}  // namespace primfield
