#include "primfield/irreducible.hpp"

#include <cmath>
#include <functional>

#include "primfield/error.hpp"

namespace primfield {

int mobius(std::uint64_t n) {
  if (n == 0) throw DomainError("mobius(0) is undefined");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

Integer pi_prime(std::uint64_t q, int n) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (n < 1) throw DomainError("pi_prime needs degree n >= 1");
  Integer sum = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(static_cast<std::uint64_t>(d));
    if (mu == 0) continue;
    const Integer term = int_pow(q, static_cast<unsigned long>(n / d));
    if (mu > 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  Integer out;
  mpz_divexact_ui(out.get_mpz_t(), sum.get_mpz_t(), static_cast<unsigned long>(n));
  if (out * n > int_pow(q, static_cast<unsigned long>(n))) throw Error("internal: pi_prime exceeds q^n/n");
  return out;
}

Integer pi_cumulative(std::uint64_t q, int n) {
  if (n < 1) throw DomainError("pi_cumulative needs degree n >= 1");
  Integer total = 0;
  for (int d = 1; d <= n; ++d) total += pi_prime(q, d);
  return total;
}

int kth_irreducible_degree(std::uint64_t q, const Integer& k) {
  if (k < 1) throw DomainError("k must be positive");
  Integer total = 0;
  for (int n = 1;; ++n) {
    total += pi_prime(q, n);
    if (total >= k) return n;
  }
}

std::vector<PolyIndex> irreducibles_of_degree(std::uint32_t q, int n, std::uint64_t budget) {
  const IndexArith arith(q);
  if (n < 1) throw DomainError("degree must be at least 1");
  if (n > arith.max_degree()) throw BudgetExceeded("degree " + std::to_string(n) + " exceeds 64-bit indices");
  const PolyIndex base = arith.first(n);
  if (base > budget) {
    throw BudgetExceeded("degree-" + std::to_string(n) + " block needs " + std::to_string(base) +
                         " cells, budget allows " + std::to_string(budget));
  }
  std::vector<bool> composite(base, false);
  for (int d = 1; 2 * d <= n; ++d) {
    for (PolyIndex p : irreducibles_of_degree(q, d, budget)) {
      for (PolyIndex g = arith.first(n - d); g < arith.end(n - d); ++g) composite[arith.mul(p, g) - base] = true;
    }
  }
  std::vector<PolyIndex> out;
  for (PolyIndex offset = 0; offset < base; ++offset) {
    if (!composite[offset]) out.push_back(base + offset);
  }
  return out;
}

MonicPoly kth_irreducible(std::uint32_t q, const Integer& k, std::uint64_t budget) {
  const int n = kth_irreducible_degree(q, k);
  const Integer before = n == 1 ? Integer(0) : pi_cumulative(q, n - 1);
  const Integer offset = k - before - 1;
  const std::vector<PolyIndex> block = irreducibles_of_degree(q, n, budget);
  return MonicPoly::from_index(q, block.at(offset.get_ui()));
}

OrderedIrreducibles::OrderedIrreducibles(std::uint64_t q, int horizon) : q_(q), horizon_(horizon) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  per_degree_.emplace_back(0);
  cumulative_.emplace_back(0);
  for (int n = 1; n <= horizon; ++n) {
    per_degree_.push_back(primfield::pi_prime(q, n));
    cumulative_.push_back(cumulative_.back() + per_degree_.back());
  }
}

OrderedIrreducibles OrderedIrreducibles::materialized(std::uint32_t q, int horizon, std::uint64_t budget) {
  OrderedIrreducibles out(q, horizon);
  out.lists_.emplace_back();
  for (int n = 1; n <= horizon; ++n) {
    out.lists_.push_back(irreducibles_of_degree(q, n, budget));
    if (Integer(static_cast<unsigned long>(out.lists_.back().size())) != out.per_degree_[static_cast<std::size_t>(n)]) {
      throw Error("internal: irreducible list length disagrees with the Gauss count");
    }
  }
  return out;
}

std::optional<int> OrderedIrreducibles::degree_of(const Integer& k) const {
  if (k < 1) throw DomainError("k must be positive");
  for (int n = 1; n <= horizon_; ++n) {
    if (cumulative_[static_cast<std::size_t>(n)] >= k) return n;
  }
  return std::nullopt;
}

MonicPoly OrderedIrreducibles::kth(const Integer& k) const {
  if (!has_lists()) throw DomainError("irreducible lists were not materialized");
  const auto n = degree_of(k);
  if (!n) throw DomainError("k = " + to_decimal(k) + " lies beyond the materialized horizon");
  const Integer offset = k - cumulative_[static_cast<std::size_t>(*n - 1)] - 1;
  return MonicPoly::from_index(static_cast<std::uint32_t>(q_), of_degree(*n).at(offset.get_ui()));
}

namespace {

// First k in [lo, hi] with pred(k) true, or hi + 1; pred must be monotone.
std::uint64_t first_true(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& pred) {
  std::uint64_t a = lo;
  std::uint64_t b = hi + 1;
  while (a < b) {
    const std::uint64_t mid = a + (b - a) / 2;
    if (pred(mid)) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  return a;
}

}  // namespace

DegreeBracketReport check_degree_brackets(std::uint64_t q, std::uint64_t k_min, std::uint64_t k_max, double slack) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (k_min <= q) throw DomainError("k_min must exceed q so that log_q log_q k is positive");
  if (k_max < k_min) throw DomainError("k_max must be at least k_min");
  DegreeBracketReport report;
  report.q = q;
  report.k_min = k_min;
  report.k_max = k_max;
  report.slack = slack;
  report.empirical_threshold = k_min;

  const long double log_q = std::log(static_cast<long double>(q));
  const long double shift = std::log(static_cast<long double>(q - 1)) / log_q;
  auto center = [&](std::uint64_t k) {
    const long double lk = std::log(static_cast<long double>(k)) / log_q;
    return lk + std::log(lk) / log_q + shift;
  };

  bool first_run = true;
  Integer below = 0;  // pi_q(n - 1)
  for (int n = 1;; ++n) {
    const Integer upto = below + pi_prime(q, n);
    // k in (below, upto] have degree n
    if (upto >= k_min) {
      const std::uint64_t run_lo = below + 1 > k_min ? Integer(below + 1).get_ui() : k_min;
      const std::uint64_t run_hi = upto >= k_max ? k_max : upto.get_ui();
      const auto deg = static_cast<long double>(n);

      const double lower_margin = static_cast<double>(deg - (center(run_hi) - 1 - slack));
      const double upper_margin = static_cast<double>(center(run_lo) + slack - deg);
      if (first_run || lower_margin < report.worst_lower_margin) {
        report.worst_lower_margin = lower_margin;
        report.worst_lower_k = run_hi;
      }
      if (first_run || upper_margin < report.worst_upper_margin) {
        report.worst_upper_margin = upper_margin;
        report.worst_upper_k = run_lo;
      }
      first_run = false;

      // lower side fails for k with center(k) > n + 1 + slack (a suffix of the run)
      const std::uint64_t lower_start =
          first_true(run_lo, run_hi, [&](std::uint64_t k) { return center(k) - 1 - slack > deg; });
      if (lower_start <= run_hi) {
        report.lower_violations += run_hi - lower_start + 1;
        report.empirical_threshold = std::max(report.empirical_threshold, run_hi + 1);
      }
      // upper side fails for k with center(k) + slack < n (a prefix of the run)
      const std::uint64_t upper_end =
          first_true(run_lo, run_hi, [&](std::uint64_t k) { return center(k) + slack >= deg; });
      if (upper_end > run_lo) {
        report.upper_violations += upper_end - run_lo;
        report.empirical_threshold = std::max(report.empirical_threshold, upper_end);
      }
    }
    if (upto >= k_max) break;
    below = upto;
  }
  return report;
}

}  // namespace primfield
