#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "primfield/poly.hpp"

namespace primfield {

inline constexpr std::uint64_t kDefaultSieveCap = std::uint64_t{1} << 31;

struct Factorization {
  /// Irreducible factors in (degree, index) order with multiplicities.
  std::vector<std::pair<MonicPoly, int>> factors;
  int omega = 0;
  int big_omega = 0;
  bool squarefree = true;
  /// d(f) and D(f); both 0 for the constant 1.
  int min_factor_degree = 0;
  int max_factor_degree = 0;

  MonicPoly product(std::uint32_t q) const;
};

/// Fills the derived fields from `factors`.
Factorization summarize(std::vector<std::pair<MonicPoly, int>> factors);

/// Smallest-irreducible-factor table for every monic polynomial of degree 1..D,
/// "smallest" meaning least (degree, index).
class FactorSieve {
 public:
  FactorSieve(std::uint32_t q, int max_degree, std::uint64_t max_entries = kDefaultSieveCap);

  std::uint32_t q() const { return arith_.q(); }
  int max_degree() const { return max_degree_; }
  const IndexArith& arith() const { return arith_; }

  PolyIndex smallest_factor(PolyIndex f) const;
  bool is_irreducible(PolyIndex f) const { return smallest_factor(f) == f; }

  /// Irreducible factor indices of f with repetition, in (degree, index) order.
  void factor_indices(PolyIndex f, std::vector<PolyIndex>& out) const;

 private:
  void check_range(PolyIndex f) const;

  IndexArith arith_;
  int max_degree_;
  std::vector<std::uint32_t> spf_;
};

FactorSieve build_factor_sieve(std::uint32_t q, int max_degree, std::uint64_t max_entries = kDefaultSieveCap);

/// Throws DomainError when deg f exceeds the sieve or the fields differ.
Factorization factorize(const MonicPoly& f, const FactorSieve& sieve);

}  // namespace primfield
