#pragma once

#include <compare>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primfield/numeric.hpp"

namespace primfield {

/// Integer encoding of a monic polynomial: index(f) = f evaluated at x = q.
/// For degree d it lies in [q^d, 2 q^d).
using PolyIndex = std::uint64_t;

bool is_prime(std::uint64_t n);

/// Returns q unchanged, or throws DomainError when q is not a prime below 2^31.
std::uint32_t require_prime(std::uint64_t q);

class FieldElement {
 public:
  FieldElement(std::uint32_t value, std::uint32_t modulus);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }

  FieldElement operator+(FieldElement other) const;
  FieldElement operator-(FieldElement other) const;
  FieldElement operator*(FieldElement other) const;
  FieldElement inverse() const;
  bool operator==(const FieldElement&) const = default;

 private:
  struct Trusted {};
  FieldElement(Trusted, std::uint32_t value, std::uint32_t modulus) : value_(value), modulus_(modulus) {}
  void check_same_field(FieldElement other) const;

  std::uint32_t value_;
  std::uint32_t modulus_;
};

namespace detail {
struct Unchecked {};
}  // namespace detail

/// Monic polynomial over F_q, q prime. Only the coefficients below the leading
/// one are stored (little-endian); the constant 1 has degree 0 and no coefficients.
class MonicPoly {
 public:
  /// The constant polynomial 1.
  explicit MonicPoly(std::uint32_t q);
  /// x^deg + sum low[i] x^i with deg = low.size().
  MonicPoly(std::uint32_t q, std::vector<std::uint32_t> low);
  MonicPoly(detail::Unchecked, std::uint32_t q, std::vector<std::uint32_t> low)
      : q_(q), coeffs_(std::move(low)) {}

  static MonicPoly from_index(std::uint32_t q, PolyIndex index);
  static MonicPoly from_index(std::uint32_t q, const Integer& index);

  std::uint32_t q() const { return q_; }
  int degree() const { return static_cast<int>(coeffs_.size()); }
  std::span<const std::uint32_t> low_coefficients() const { return coeffs_; }
  /// Coefficient of x^i, including the leading 1 at i = degree().
  std::uint32_t coefficient(int i) const;
  bool is_one() const { return coeffs_.empty(); }

  /// Throws BudgetExceeded if the index does not fit in 64 bits.
  PolyIndex index() const;
  Integer big_index() const;
  /// q^deg
  Integer norm() const;

  /// Canonical text "q=<q>;c0,c1,...,1".
  std::string to_text() const;
  /// Human form such as "x^2+x+1".
  std::string to_display() const;

  friend bool operator==(const MonicPoly&, const MonicPoly&) = default;
  /// (degree, index) order.
  friend std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b);

 private:
  std::uint32_t q_;
  std::vector<std::uint32_t> coeffs_;
};

/// Accepts the canonical text form or a bare decimal index. A bare index needs
/// `default_q`; a text form whose q disagrees with `default_q` is rejected.
MonicPoly parse_poly(std::string_view text, std::optional<std::uint32_t> default_q = std::nullopt);

MonicPoly poly_mul(const MonicPoly& a, const MonicPoly& b);

struct DivRem {
  /// Dense coefficients including the leading term; empty when the quotient is 0.
  std::vector<std::uint32_t> quotient;
  /// Dense coefficients with trailing zeros trimmed; empty when the remainder is 0.
  std::vector<std::uint32_t> remainder;

  bool exact() const { return remainder.empty(); }
  std::optional<MonicPoly> monic_quotient(std::uint32_t q) const;
};

DivRem poly_divrem(const MonicPoly& a, const MonicPoly& b);
bool divides(const MonicPoly& divisor, const MonicPoly& f);
/// f / divisor; throws DomainError when the division is not exact.
MonicPoly exact_quotient(const MonicPoly& f, const MonicPoly& divisor);

/// Rabin's test: f | x^(q^n) - x and gcd(f, x^(q^(n/r)) - x) = 1 for primes r | n.
bool is_irreducible(const MonicPoly& f);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 31;

/// All monic polynomials of one degree, in increasing index order.
class MonicRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = MonicPoly;
    using difference_type = std::ptrdiff_t;
    using pointer = const MonicPoly*;
    using reference = const MonicPoly&;

    iterator() = default;
    const MonicPoly& operator*() const { return *current_; }
    const MonicPoly* operator->() const { return &*current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.remaining_ == b.remaining_; }

   private:
    friend class MonicRange;
    iterator(std::uint32_t q, int degree, std::uint64_t remaining);

    std::optional<MonicPoly> current_;
    std::vector<std::uint32_t> digits_;
    std::uint32_t q_ = 2;
    std::uint64_t remaining_ = 0;
  };

  MonicRange(std::uint32_t q, int degree, std::uint64_t count) : q_(q), degree_(degree), count_(count) {}

  iterator begin() const { return iterator(q_, degree_, count_); }
  iterator end() const { return iterator(); }
  std::uint64_t size() const { return count_; }

 private:
  std::uint32_t q_;
  int degree_;
  std::uint64_t count_;
};

/// Throws BudgetExceeded (reporting required vs allowed) when q^n > budget.
MonicRange enumerate_monic(std::uint32_t q, int degree, std::uint64_t budget = kDefaultEnumerationBudget);

/// Arithmetic directly on polynomial indices, for hot loops. q = 2 uses
/// carry-less bit operations; other primes decode base-q digits.
class IndexArith {
 public:
  explicit IndexArith(std::uint32_t q);

  std::uint32_t q() const { return q_; }
  /// Largest degree d with 2 q^d < 2^63.
  int max_degree() const { return max_degree_; }
  PolyIndex first(int degree) const { return powers_.at(static_cast<std::size_t>(degree)); }
  PolyIndex end(int degree) const { return 2 * powers_.at(static_cast<std::size_t>(degree)); }
  bool valid(PolyIndex index) const;
  int degree(PolyIndex index) const;

  /// Product index; the caller guarantees the product degree is <= max_degree().
  PolyIndex mul(PolyIndex a, PolyIndex b) const;
  /// Quotient index when `divisor` divides `f`.
  std::optional<PolyIndex> exact_div(PolyIndex f, PolyIndex divisor) const;
  bool divides(PolyIndex divisor, PolyIndex f) const;

 private:
  std::uint32_t q_;
  int max_degree_ = 0;
  std::vector<PolyIndex> powers_;
};

}  // namespace primfield
