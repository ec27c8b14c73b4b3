#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primfield/numeric.hpp"
#include "primfield/poly.hpp"

namespace primfield {

int mobius(std::uint64_t n);

/// Number of monic irreducibles of degree exactly n over F_q (q any integer >= 2).
Integer pi_prime(std::uint64_t q, int n);
/// Number of monic irreducibles of degree 1..n.
Integer pi_cumulative(std::uint64_t q, int n);

/// Least n >= 1 with pi_cumulative(q, n) >= k.
int kth_irreducible_degree(std::uint64_t q, const Integer& k);

/// Indices of all monic irreducibles of degree n, ascending. Marks multiples of
/// the irreducibles of degree <= n/2 inside the degree-n block only.
std::vector<PolyIndex> irreducibles_of_degree(std::uint32_t q, int n,
                                              std::uint64_t budget = kDefaultEnumerationBudget);

/// The k-th irreducible in (degree, index) order, k >= 1.
MonicPoly kth_irreducible(std::uint32_t q, const Integer& k, std::uint64_t budget = kDefaultEnumerationBudget);

/// pi_q(n) up to a horizon, optionally with the per-degree irreducible lists.
class OrderedIrreducibles {
 public:
  OrderedIrreducibles(std::uint64_t q, int horizon);
  /// Also materializes the lists (q must be prime).
  static OrderedIrreducibles materialized(std::uint32_t q, int horizon,
                                          std::uint64_t budget = kDefaultEnumerationBudget);

  std::uint64_t q() const { return q_; }
  int horizon() const { return horizon_; }
  const Integer& pi_prime(int n) const { return per_degree_.at(static_cast<std::size_t>(n)); }
  const Integer& cumulative(int n) const { return cumulative_.at(static_cast<std::size_t>(n)); }
  bool has_lists() const { return !lists_.empty(); }
  const std::vector<PolyIndex>& of_degree(int n) const { return lists_.at(static_cast<std::size_t>(n)); }

  /// Degree of the k-th irreducible, or nullopt beyond the horizon.
  std::optional<int> degree_of(const Integer& k) const;
  /// Requires the lists.
  MonicPoly kth(const Integer& k) const;

 private:
  std::uint64_t q_;
  int horizon_;
  std::vector<Integer> per_degree_;  // index 0 unused
  std::vector<Integer> cumulative_;  // cumulative_[0] = 0
  std::vector<std::vector<PolyIndex>> lists_;
};

struct DegreeBracketReport {
  std::uint64_t q = 2;
  std::uint64_t k_min = 0;
  std::uint64_t k_max = 0;
  double slack = 0.5;
  std::uint64_t lower_violations = 0;
  std::uint64_t upper_violations = 0;
  /// min over k of deg P_k - (L(k) - 1 - slack); negative means a violation.
  double worst_lower_margin = 0;
  std::uint64_t worst_lower_k = 0;
  /// min over k of (L(k) + slack) - deg P_k.
  double worst_upper_margin = 0;
  std::uint64_t worst_upper_k = 0;
  /// Smallest k in range beyond which no violation occurs.
  std::uint64_t empirical_threshold = 0;

  std::uint64_t violations() const { return lower_violations + upper_violations; }
};

/// Checks L(k) - 1 - slack <= deg P_k <= L(k) + slack for every k in [k_min, k_max],
/// with L(k) = log_q k + log_q log_q k + log_q(q - 1). Works one degree run at a time.
DegreeBracketReport check_degree_brackets(std::uint64_t q, std::uint64_t k_min, std::uint64_t k_max,
                                          double slack = 0.5);

}  // namespace primfield
