#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primfield/budget.hpp"
#include "primfield/interval.hpp"
#include "primfield/numeric.hpp"
#include "primfield/primitive.hpp"
#include "primfield/sieve.hpp"

namespace primfield {

/// T[n][m] = number of monic g with n < deg g <= m having a monic divisor of
/// degree exactly n, for 1 <= n <= m <= horizon.
class MultiplesTable {
 public:
  MultiplesTable(std::uint32_t q, int horizon, std::vector<std::vector<std::uint64_t>> cumulative);

  std::uint32_t q() const { return q_; }
  int horizon() const { return horizon_; }
  std::uint64_t count(int n, int m) const;
  /// T_n(m) / M_q(m), exact.
  Rational ratio(int n, int m) const;

 private:
  std::uint32_t q_;
  int horizon_;
  std::vector<std::vector<std::uint64_t>> cumulative_;
};

/// Bitmask of degrees of monic divisors of f, from its factor degrees (subset sums).
std::uint64_t divisor_degree_mask(PolyIndex f, const FactorSieve& sieve, std::vector<PolyIndex>& scratch);

MultiplesTable build_multiples_table(const FactorSieve& sieve, int horizon);
std::uint64_t multiples_count(std::uint32_t q, int n, int m, const FactorSieve& sieve);

struct BesicovitchLevel {
  int degree = 0;
  /// max over the window of T_n(m)/M_q(m), and the threshold eps/2^(i+1) it met
  Rational own_multiples_max;
  Rational own_threshold;
  /// max over the window of T_{n_(i-1)}(m)/M_q(m) against eps/2^i; absent for the first level
  std::optional<Rational> previous_multiples_max;
  std::optional<Rational> previous_threshold;
  std::uint64_t members = 0;
  /// A(n_i)/M_q(n_i)
  Rational density_ratio;
  bool ratio_ok = false;
};

struct BesicovitchResult {
  std::uint32_t q = 2;
  double epsilon = 0;
  int horizon = 0;
  std::vector<BesicovitchLevel> levels;
  PrimitiveSetHorizon set{2, 0};
  /// Conditions hold on [candidate, horizon] only; no statement beyond the horizon.
  static constexpr const char* certificate_scope = "window-checked up to the horizon";
  bool ratios_ok() const;
};

/// Greedy level selection with both conditions checked on [candidate, horizon].
BesicovitchResult besicovitch_construct(std::uint32_t q, double epsilon, int horizon,
                                        std::uint64_t sieve_entries = kDefaultSieveCap);

/// L(x) families: powlog is (log(x+e))^(1+eps); iterlog is
/// l2(x) ... l_(j-1)(x) * l_j(x)^(1+eps) with l1 = log max(x, e), l_i = log max(l_(i-1), e).
class GrowthFunction {
 public:
  enum class Kind { PowLog, IterLog };

  static GrowthFunction powlog(double eps);
  static GrowthFunction iterlog(int depth, double eps);
  /// "powlog:eps=0.1" or "iterlog:j=2,eps=0.1"
  static GrowthFunction parse(const std::string& text);

  Kind kind() const { return kind_; }
  double eps() const { return eps_; }
  int depth() const { return depth_; }
  std::string to_string() const;

  double operator()(double x) const;
  Interval operator()(const Interval& x) const;

  /// Upper bound on the integral of 1/(x L(x) (log x - a)) over [K, inf), when
  /// K is large enough for the closed form; a = log of the norm constant.
  std::optional<Interval> tail_integral(const Integer& k, const Interval& a) const;

  /// Positive and nondecreasing on a geometric grid over [2, 1e12].
  bool grid_monotone() const;

 private:
  GrowthFunction(Kind kind, int depth, double eps);

  Kind kind_;
  int depth_;
  double eps_;
};

struct TTerm {
  std::uint64_t k = 0;      // t_k
  std::uint64_t index = 0;  // position among irreducibles in (degree, index) order
  int degree = 0;
};

/// t_k = r_(k0+k), r_j = the floor(j L(j))-th irreducible for j >= y0.
struct TSequence {
  std::uint64_t q = 2;
  GrowthFunction L = GrowthFunction::powlog(0.1);
  std::uint64_t y0 = 3;
  std::uint64_t k0 = 0;
  /// r_j computed exactly for j <= computed_through; tail bound covers j beyond it.
  std::uint64_t computed_through = 0;
  Rational partial_sum;
  Rational tail_bound;
  /// t_1.. for the first few k, for reports.
  std::vector<TTerm> head;

  bool certified() const { return partial_sum + tail_bound < Rational(1, 2); }
  /// t_k on demand.
  TTerm term(std::uint64_t k) const;
};

struct TSequenceBudget {
  std::uint64_t max_terms = std::uint64_t{1} << 24;
  Deadline deadline;
};

/// Position floor(j L(j)) of r_j among the irreducibles, exact.
std::uint64_t r_index(const GrowthFunction& L, std::uint64_t j);

/// Rigorous bound on sum_{j > K} 1/|r_j|, or nullopt when K is too small for it.
std::optional<Rational> t_tail_bound(std::uint64_t q, const GrowthFunction& L, std::uint64_t K);

/// Least k0 >= max(k0_min, y0) whose certificate closes; K doubles until it does.
TSequence build_t_sequence(std::uint64_t q, const GrowthFunction& L, std::uint64_t k0_min = 0,
                           const TSequenceBudget& budget = {});

struct TSequenceCheck {
  bool certified = false;
  bool indices_increasing = false;
  /// Recomputed partial sum equals the stored one.
  bool partial_sum_matches = false;
  bool ok() const { return certified && indices_increasing && partial_sum_matches; }
};

/// Recomputes the partial sum and the index monotonicity from the stored parameters.
TSequenceCheck verify_t_sequence(const TSequence& seq);

/// S'_k(n) for 1 <= k, n <= horizon, counted via the exclusion table; no enumeration.
/// counts[k][n], with counts[0] unused.
std::vector<std::vector<Integer>> mp_counts_exact(const TSequence& seq, int horizon);

/// Number of slices k that can be nonempty at degree <= horizon.
std::uint64_t mp_slice_limit(const TSequence& seq, int horizon);

struct MpConstruction {
  TSequence sequence;
  /// k0 from the certificate alone, before raising for enumeration.
  std::uint64_t certified_k0 = 0;
  int horizon = 0;
  /// t_1..t_s as polynomials, s = number of slices that can be nonempty.
  std::vector<MonicPoly> t;
  PrimitiveSetHorizon set{2, 0};
  /// Cofactor sieve degree used for enumeration.
  int cofactor_degree = 0;
  /// Enumerated S'_k(n), counts[k][n].
  std::vector<std::vector<std::uint64_t>> counts;
};

/// Builds the certified sequence, raises k0 until the cofactors fit `sieve_entries`,
/// and enumerates S_k = t_k * g with g squarefree, coprime to t_1..t_k, omega(g) = k - 1.
MpConstruction mp_construct(std::uint64_t q, const GrowthFunction& L, int horizon,
                            std::uint64_t sieve_entries = std::uint64_t{1} << 22,
                            const TSequenceBudget& budget = {});

struct SliceCheck {
  std::uint64_t checked = 0;
  std::vector<std::pair<MonicPoly, std::string>> failures;
  /// Enumerated counts equal mp_counts_exact.
  bool counts_match = false;
  bool ok() const { return failures.empty() && counts_match; }
};

/// Re-derives each member's slice from divisibility by the t's alone and checks
/// squarefree, omega = k, t_k | f and t_j not dividing f for j < k.
SliceCheck verify_mp_slices(const MpConstruction& mp);

/// (degree, D(a)) per member, D taken from t_k and the cofactor factorization.
std::vector<DensityTerm> mp_density_terms(const MpConstruction& mp);

struct MpRow {
  int n = 0;
  Integer s_prime;
  Interval r;  // S'(n) log n log log n L(log n) / q^n
  std::uint64_t b = 0;
  std::uint64_t b_prime = 0;
  Rational ratio_b;        // S'(n) / q^(n - deg t_B)
  Rational ratio_b_prime;  // S'(n) / q^(n - deg t_B')
};

struct MpSliceRow {
  int n = 0;
  std::uint64_t k = 0;
  Integer count;
  Interval target;  // q^m/m log^(k-2) m / (k-2)!, m = n - deg t_k
  Interval ratio;
  Interval spread;   // (k-1)/log^2 m
  bool spread_ok = false;
};

struct MpDiagnostics {
  std::vector<MpRow> rows;
  std::vector<MpSliceRow> slices;
  std::optional<RationalBracket> band_b;
  std::optional<RationalBracket> band_b_prime;
  std::uint64_t spread_exceeded = 0;
};

/// Rows for 8 <= n <= horizon from exact counts[k][n].
MpDiagnostics mp_diagnostics(const TSequence& seq, const std::vector<std::vector<Integer>>& counts, int horizon,
                             mpfr_prec_t precision = kDefaultPrecision);

}  // namespace primfield
