#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "primfield/interval.hpp"
#include "primfield/numeric.hpp"
#include "primfield/poly.hpp"
#include "primfield/sieve.hpp"

namespace primfield {

struct PrimitivityCertificate {
  bool primitive = true;
  /// First offending pair (divisor, multiple): the least divisor in (degree, index)
  /// order, with its least multiple in the set.
  std::optional<std::pair<MonicPoly, MonicPoly>> counterexample;
  /// Work counters: multiples generated and direct division tests.
  std::uint64_t multiples_probed = 0;
  std::uint64_t divisions_tested = 0;
};

/// Finite set of monic polynomials of degree <= horizon over F_q. The constant 1
/// is allowed only as the whole set {1}.
class PrimitiveSetHorizon {
 public:
  PrimitiveSetHorizon(std::uint32_t q, int horizon);

  static PrimitiveSetHorizon from_polys(std::uint32_t q, int horizon, const std::vector<MonicPoly>& polys);

  /// Returns false when already present.
  bool insert(const MonicPoly& f);
  bool insert_index(PolyIndex f);

  std::uint32_t q() const { return arith_.q(); }
  int horizon() const { return horizon_; }
  const IndexArith& arith() const { return arith_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(PolyIndex f) const { return lookup_.count(f) != 0; }

  /// Ascending index order, which is (degree, index) order.
  const std::vector<PolyIndex>& elements() const;
  std::vector<MonicPoly> polys() const;
  /// Elements of degree exactly n.
  std::vector<PolyIndex> of_degree(int n) const;
  /// Per-degree counts, index 0..horizon.
  std::vector<std::uint64_t> degree_counts() const;
  /// A(n): elements of degree <= n.
  std::uint64_t count_up_to(int n) const;
  int max_element_degree() const;

  /// Cached until the next insert.
  const PrimitivityCertificate& certificate() const;

 private:
  void check_index(PolyIndex f) const;

  IndexArith arith_;
  int horizon_;
  mutable std::vector<PolyIndex> elements_;
  mutable bool sorted_ = true;
  std::unordered_set<PolyIndex> lookup_;
  mutable std::optional<PrimitivityCertificate> certificate_;
};

/// Per element, either enumerates its multiples up to the top degree and looks
/// them up, or divides it into every higher-degree element; whichever is cheaper.
PrimitivityCertificate is_primitive(const PrimitiveSetHorizon& s);

/// sum over a of 1/(q^deg a * deg a). Rejects the constant 1.
Rational erdos_sum(const PrimitiveSetHorizon& s);

struct ErdosIrreducibleBracket {
  /// [S_D, S_D + 1/D] with S_D = sum_{d <= D} pi'(d) / (d q^d).
  RationalBracket bracket;
  int truncation = 0;
  /// Brackets for every D = 1..truncation; each lies inside all earlier ones.
  std::vector<RationalBracket> history;
};

ErdosIrreducibleBracket erdos_sum_irreducibles(std::uint64_t q, double eps);

/// One element's data for the density inequality.
struct DensityTerm {
  int degree = 0;
  /// D(a), largest degree of an irreducible factor.
  int max_factor_degree = 0;
};

struct ErdosDensityReport {
  bool primitive = true;
  std::optional<std::pair<MonicPoly, MonicPoly>> counterexample;
  /// sum over a of q^-deg a * prod_{deg p <= D(a)} (1 - q^-deg p), exact.
  Rational lhs;
  bool holds = false;
};

/// Exact LHS from precomputed (degree, D(a)) pairs; the caller vouches for primitivity.
ErdosDensityReport erdos_density_lhs(std::uint64_t q, const std::vector<DensityTerm>& terms);

/// Certifies primitivity, factors every element with the sieve, and evaluates the LHS.
ErdosDensityReport verify_erdos_density_inequality(const PrimitiveSetHorizon& s, const FactorSieve& sieve);

struct DensityProfile {
  /// ratio[n] = A(n)/M_q(n) for n = 0..up_to.
  std::vector<Rational> ratio;
  std::vector<Rational> running_max;
  /// min of ratio over [tail_start, up_to]
  int tail_start = 0;
  Rational tail_min;
};

DensityProfile density_profile(const PrimitiveSetHorizon& s, int up_to, std::optional<int> tail_start = std::nullopt);

/// Greedy divisor-free sampling: walk degrees 1..horizon in index order, offer each
/// polynomial with probability `offer_rate`, accept it when no accepted element divides it.
PrimitiveSetHorizon random_primitive_set(std::uint32_t q, int horizon, std::uint64_t seed, double offer_rate,
                                         const FactorSieve& sieve);

/// Header "q=<q>;horizon=<D>" then one polynomial per line (text form or index).
void write_set(std::ostream& out, const PrimitiveSetHorizon& s);
PrimitiveSetHorizon read_set(std::istream& in);

}  // namespace primfield
