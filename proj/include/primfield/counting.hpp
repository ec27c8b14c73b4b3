#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primfield/budget.hpp"
#include "primfield/interval.hpp"
#include "primfield/numeric.hpp"

namespace primfield {

struct MonicCounts {
  Integer exact_degree;  // M'_q(n) = q^n
  Integer up_to_degree;  // M_q(n) = (q^(n+1) - 1) / (q - 1)
};

MonicCounts monic_count(std::uint64_t q, int n);

/// table(n, k) = number of squarefree monic polynomials of degree n with exactly
/// k irreducible factors, for 0 <= k <= n <= N.
class CountTable {
 public:
  CountTable(std::uint64_t q, int max_degree, std::vector<Integer> irreducibles_per_degree,
             std::vector<std::vector<Integer>> rows, int complete_through);

  std::uint64_t q() const { return q_; }
  int max_degree() const { return max_degree_; }
  /// Rows 0..complete_through() are final; equals max_degree() unless a deadline hit.
  int complete_through() const { return complete_through_; }
  bool complete() const { return complete_through_ == max_degree_; }

  const Integer& at(int n, int k) const;
  Integer row_sum(int n) const;
  /// Irreducible count per degree that fed the table (pi'_q(d) unless built with exclusions).
  const Integer& irreducibles(int d) const { return irreducibles_.at(static_cast<std::size_t>(d)); }

 private:
  std::uint64_t q_;
  int max_degree_;
  int complete_through_;
  std::vector<Integer> irreducibles_;
  std::vector<std::vector<Integer>> rows_;
};

/// Folds in one degree at a time the generating factor (1 + u x^d)^(pi'_q(d)).
CountTable build_count_table(std::uint64_t q, int max_degree, const Deadline& deadline = {});

/// Same fold with caller-supplied irreducible counts per degree (index 0 unused);
/// used to count squarefree polynomials coprime to a fixed set of irreducibles.
CountTable build_count_table_from(std::uint64_t q, int max_degree, std::vector<Integer> irreducibles_per_degree,
                                  const Deadline& deadline = {});

struct MertensResult {
  std::uint64_t q = 2;
  int n = 1;
  /// prod_{deg p <= n} (1 - q^-deg p), when its size fits the exact-bit budget.
  std::optional<Rational> exact;
  Interval product;
  /// e^gamma * n * product
  Interval normalized;
};

inline constexpr std::uint64_t kDefaultExactBitBudget = std::uint64_t{1} << 26;

MertensResult mertens_product(std::uint64_t q, int n, mpfr_prec_t precision = kDefaultPrecision,
                              std::uint64_t exact_bit_budget = kDefaultExactBitBudget);

/// Lower envelope of e^gamma n P(n) over 1 <= n <= max_n, and the empirical
/// constant e^gamma / that minimum for the uniform Erdos-sum bound. Nothing is
/// claimed beyond max_n.
struct MertensEnvelope {
  int max_n = 0;
  int argmin = 0;
  Interval min_normalized;
  Interval constant;
};

MertensEnvelope mertens_envelope(std::uint64_t q, int max_n, mpfr_prec_t precision = kDefaultPrecision);

/// Bit length of the exact Mertens rational's denominator, sum_{d<=n} d pi'_q(d) log2 q.
Integer mertens_exact_bits(std::uint64_t q, int n);

/// Exact Mertens products for n = 0..max_n as numerator / q^exponent.
struct MertensNumerators {
  std::vector<Integer> numerator;
  std::vector<Integer> exponent;
};
MertensNumerators mertens_numerators(std::uint64_t q, int max_n, std::uint64_t exact_bit_budget);

struct GEvaluation {
  Interval value;
  int truncation_degree = 0;
};

inline constexpr int kMaxGTruncation = 64;

/// G(z) = 1/Gamma(z+1) prod_p (1 + z/|p|)(1 - 1/|p|)^z for 0 <= z <= 2, as a
/// bracket of width <= eps. The tail beyond degree D is bounded by
/// z(1+z) q^-D / ((D+1)(q-1)) in the log.
GEvaluation evaluate_G(std::uint64_t q, const Real& z, double eps, mpfr_prec_t precision = kDefaultPrecision);
GEvaluation evaluate_G(std::uint64_t q, double z, double eps, mpfr_prec_t precision = kDefaultPrecision);

/// H_k(n) = q^n/n * log^(k-1) n / (k-1)! * G((k-1)/log n), for n >= 2 and
/// 1 <= k <= 2 log n + 1.
Interval sathe_selberg_H(std::uint64_t q, int n, int k, double eps = 1e-12,
                         mpfr_prec_t precision = kDefaultPrecision);

/// c = 2 - log 2
Interval hardy_ramanujan_constant(mpfr_prec_t precision = kDefaultPrecision);

/// q^n/n * (log n + c)^(k-1)/(k-1)! for k = 1..n, outward rounded.
std::vector<Interval> hardy_ramanujan_row(std::uint64_t q, int n, mpfr_prec_t precision = kDefaultPrecision);

struct CellRef {
  int n = 0;
  int k = 0;
};

struct HardyRamanujanReport {
  std::uint64_t q = 2;
  int max_degree = 0;
  std::uint64_t checked = 0;
  std::vector<CellRef> violations;
  /// Cells where even 1024-bit brackets could not separate the two sides.
  std::vector<CellRef> inconclusive;
  double max_ratio = 0;
  CellRef max_ratio_cell;
  bool complete = true;
};

HardyRamanujanReport verify_hr_bound(const CountTable& table, mpfr_prec_t precision = kDefaultPrecision,
                                     const Deadline& deadline = {});

struct RecurrenceViolation {
  int n = 0;
  int k = 0;
  Integer lhs;
  Integer rhs;
};

struct RecurrenceReport {
  std::uint64_t q = 2;
  int max_degree = 0;
  std::uint64_t checked = 0;
  std::vector<RecurrenceViolation> violations;
  bool complete = true;
};

/// (k-1) table(n,k) <= sum_{d <= n/2} pi'_q(d) table(n-d, k-1) for 2 <= k <= n.
RecurrenceReport verify_recurrence_bound(const CountTable& table, const Deadline& deadline = {});

/// Q(y) = y log y - y + 1
Interval rate_function(const Interval& y);
Interval rate_function(double y, mpfr_prec_t precision = kDefaultPrecision);

struct TailSums {
  int n = 0;
  double alpha = 0;
  double beta = 0;
  int low_cutoff = 0;   // k <= low_cutoff
  int high_cutoff = 0;  // k >= high_cutoff
  Integer low_tail;
  Integer high_tail;
  /// tail * n^Q(.) * sqrt(log n) / q^n
  Interval low_normalized;
  Interval high_normalized;
};

TailSums tail_sums(const CountTable& table, int n, double alpha, double beta,
                   mpfr_prec_t precision = kDefaultPrecision);

struct NortonCheck {
  double x = 0;
  double alpha = 0;
  double beta = 0;
  Interval low_lhs;
  Interval low_rhs;
  Interval high_lhs;
  Interval high_rhs;
  bool low_holds = false;
  bool high_holds = false;
  /// Upper-tail right side with Norton's extra factor beta.
  Interval high_rhs_with_beta;
  bool high_holds_with_beta = false;
};

/// Poisson tail bounds: P(X <= alpha x) < e^{-Q(alpha) x} / ((1-alpha) sqrt(alpha x)) and
/// P(X >= beta x) < e^{-Q(beta) x} / ((beta-1) sqrt(2 pi beta x)) for X ~ Poisson(x).
NortonCheck norton_check(double x, double alpha, double beta, mpfr_prec_t precision = kDefaultPrecision);

}  // namespace primfield
