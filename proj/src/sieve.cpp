#include "primfield/sieve.hpp"

#include <algorithm>

#include "primfield/error.hpp"

namespace primfield {

MonicPoly Factorization::product(std::uint32_t q) const {
  MonicPoly out(q);
  for (const auto& [factor, multiplicity] : factors) {
    for (int i = 0; i < multiplicity; ++i) out = poly_mul(out, factor);
  }
  return out;
}

Factorization summarize(std::vector<std::pair<MonicPoly, int>> factors) {
  Factorization out;
  std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out.factors = std::move(factors);
  out.omega = static_cast<int>(out.factors.size());
  for (const auto& [factor, multiplicity] : out.factors) {
    out.big_omega += multiplicity;
    if (multiplicity > 1) out.squarefree = false;
    const int d = factor.degree();
    out.max_factor_degree = std::max(out.max_factor_degree, d);
    out.min_factor_degree = out.min_factor_degree == 0 ? d : std::min(out.min_factor_degree, d);
  }
  return out;
}

FactorSieve::FactorSieve(std::uint32_t q, int max_degree, std::uint64_t max_entries)
    : arith_(q), max_degree_(max_degree) {
  if (max_degree < 1) throw DomainError("sieve degree must be at least 1");
  if (max_degree > arith_.max_degree()) {
    throw BudgetExceeded("sieve degree " + std::to_string(max_degree) + " exceeds 64-bit indices");
  }
  const std::uint64_t entries = arith_.end(max_degree);
  if (entries > max_entries || entries > std::uint64_t{0xFFFFFFFF}) {
    throw BudgetExceeded("factor sieve needs " + std::to_string(entries) + " entries, budget allows " +
                         std::to_string(std::min<std::uint64_t>(max_entries, 0xFFFFFFFF)));
  }
  spf_.assign(entries, 0);

  // Irreducibles are visited in (degree, index) order, so the first mark on a
  // cell is its least factor. A product p*g whose least factor is p has
  // deg g >= deg p, hence only p with 2 deg p <= D mark anything.
  for (int d = 1; d <= max_degree; ++d) {
    for (PolyIndex p = arith_.first(d); p < arith_.end(d); ++p) {
      if (spf_[p] != 0) continue;
      spf_[p] = static_cast<std::uint32_t>(p);
      for (int e = d; e + d <= max_degree; ++e) {
        for (PolyIndex g = arith_.first(e); g < arith_.end(e); ++g) {
          const PolyIndex m = arith_.mul(p, g);
          if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(p);
        }
      }
    }
  }
}

void FactorSieve::check_range(PolyIndex f) const {
  if (f >= spf_.size() || !arith_.valid(f) || f < arith_.first(1)) {
    throw DomainError("polynomial index " + std::to_string(f) + " outside the sieve range (degree 1.." +
                      std::to_string(max_degree_) + ")");
  }
}

PolyIndex FactorSieve::smallest_factor(PolyIndex f) const {
  check_range(f);
  return spf_[f];
}

void FactorSieve::factor_indices(PolyIndex f, std::vector<PolyIndex>& out) const {
  out.clear();
  if (f == 1) return;
  check_range(f);
  while (f != 1) {
    const PolyIndex p = spf_[f];
    out.push_back(p);
    f = *arith_.exact_div(f, p);
  }
}

FactorSieve build_factor_sieve(std::uint32_t q, int max_degree, std::uint64_t max_entries) {
  return {q, max_degree, max_entries};
}

Factorization factorize(const MonicPoly& f, const FactorSieve& sieve) {
  if (f.q() != sieve.q()) throw FieldMismatch();
  if (f.degree() > sieve.max_degree()) {
    throw DomainError("degree " + std::to_string(f.degree()) + " exceeds sieve range " +
                      std::to_string(sieve.max_degree()));
  }
  std::vector<PolyIndex> indices;
  sieve.factor_indices(f.index(), indices);
  std::vector<std::pair<MonicPoly, int>> factors;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    factors.emplace_back(MonicPoly::from_index(f.q(), indices[i]), static_cast<int>(j - i));
    i = j;
  }
  return summarize(std::move(factors));
}

}  // namespace primfield
