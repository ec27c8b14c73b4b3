#include "primfield/counting.hpp"

#include <algorithm>
#include <cmath>

#include "primfield/error.hpp"
#include "primfield/irreducible.hpp"

namespace primfield {

MonicCounts monic_count(std::uint64_t q, int n) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (n < 0) throw DomainError("degree must be non-negative");
  MonicCounts out;
  out.exact_degree = int_pow(q, static_cast<unsigned long>(n));
  out.up_to_degree = (int_pow(q, static_cast<unsigned long>(n) + 1) - 1) / Integer(static_cast<unsigned long>(q - 1));
  return out;
}

CountTable::CountTable(std::uint64_t q, int max_degree, std::vector<Integer> irreducibles_per_degree,
                       std::vector<std::vector<Integer>> rows, int complete_through)
    : q_(q),
      max_degree_(max_degree),
      complete_through_(complete_through),
      irreducibles_(std::move(irreducibles_per_degree)),
      rows_(std::move(rows)) {}

const Integer& CountTable::at(int n, int k) const {
  static const Integer zero = 0;
  if (n < 0 || n > complete_through_) {
    throw DomainError("row " + std::to_string(n) + " is outside the completed table (0.." +
                      std::to_string(complete_through_) + ")");
  }
  if (k < 0 || k > n) return zero;
  return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

Integer CountTable::row_sum(int n) const {
  Integer total = 0;
  for (int k = 0; k <= n; ++k) total += at(n, k);
  return total;
}

CountTable build_count_table(std::uint64_t q, int max_degree, const Deadline& deadline) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (max_degree < 1) throw DomainError("table degree must be at least 1");
  std::vector<Integer> irreducibles(static_cast<std::size_t>(max_degree) + 1, 0);
  for (int d = 1; d <= max_degree; ++d) irreducibles[static_cast<std::size_t>(d)] = pi_prime(q, d);
  return build_count_table_from(q, max_degree, std::move(irreducibles), deadline);
}

CountTable build_count_table_from(std::uint64_t q, int max_degree, std::vector<Integer> irreducibles_per_degree,
                                  const Deadline& deadline) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (max_degree < 1) throw DomainError("table degree must be at least 1");
  if (irreducibles_per_degree.size() < static_cast<std::size_t>(max_degree) + 1) {
    throw DomainError("need irreducible counts for every degree up to the table degree");
  }
  const auto N = static_cast<std::size_t>(max_degree);
  std::vector<std::vector<Integer>> rows(N + 1);
  for (std::size_t n = 0; n <= N; ++n) rows[n].assign(n + 1, 0);
  rows[0][0] = 1;

  int complete_through = max_degree;
  std::vector<Integer> binomial;
  for (std::size_t d = 1; d <= N; ++d) {
    const Integer& count = irreducibles_per_degree[d];
    const std::size_t max_j = N / d;
    binomial.assign(max_j + 1, 0);
    for (std::size_t j = 1; j <= max_j; ++j) {
      mpz_bin_ui(binomial[j].get_mpz_t(), count.get_mpz_t(), static_cast<unsigned long>(j));
    }
    // Descending n: rows below n still hold the previous fold when row n is updated.
    for (std::size_t n = N; n >= d; --n) {
      auto& target = rows[n];
      for (std::size_t j = 1; j * d <= n; ++j) {
        if (binomial[j] == 0) break;
        const auto& source = rows[n - j * d];
        for (std::size_t k = 0; k < source.size(); ++k) {
          if (source[k] == 0) continue;
          mpz_addmul(target[k + j].get_mpz_t(), binomial[j].get_mpz_t(), source[k].get_mpz_t());
        }
      }
    }
    if (d < N && deadline.expired()) {
      complete_through = static_cast<int>(d);
      break;
    }
  }
  return {q, max_degree, std::move(irreducibles_per_degree), std::move(rows), complete_through};
}

Integer mertens_exact_bits(std::uint64_t q, int n) {
  Integer exponent = 0;
  for (int d = 1; d <= n; ++d) exponent += pi_prime(q, d) * d;
  return exponent * static_cast<unsigned long>(mpz_sizeinbase(Integer(static_cast<unsigned long>(q)).get_mpz_t(), 2));
}

MertensNumerators mertens_numerators(std::uint64_t q, int max_n, std::uint64_t exact_bit_budget) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (max_n < 0) throw DomainError("degree must be non-negative");
  const Integer bits = mertens_exact_bits(q, max_n);
  if (bits > Integer(static_cast<unsigned long>(exact_bit_budget))) {
    throw BudgetExceeded("exact Mertens product through degree " + std::to_string(max_n) + " needs about " +
                         to_decimal(bits) + " bits, budget allows " + std::to_string(exact_bit_budget));
  }
  MertensNumerators out;
  out.numerator.emplace_back(1);
  out.exponent.emplace_back(0);
  for (int d = 1; d <= max_n; ++d) {
    const Integer count = pi_prime(q, d);
    const Integer factor = int_pow(q, static_cast<unsigned long>(d)) - 1;
    out.numerator.push_back(out.numerator.back() * int_pow(factor, count.get_ui()));
    out.exponent.push_back(out.exponent.back() + count * d);
  }
  return out;
}

MertensResult mertens_product(std::uint64_t q, int n, mpfr_prec_t precision, std::uint64_t exact_bit_budget) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (n < 1) throw DomainError("Mertens product needs n >= 1");
  MertensResult out;
  out.q = q;
  out.n = n;
  if (mertens_exact_bits(q, n) <= Integer(static_cast<unsigned long>(exact_bit_budget))) {
    const MertensNumerators parts = mertens_numerators(q, n, exact_bit_budget);
    Rational value(parts.numerator.back(), int_pow(q, parts.exponent.back().get_ui()));
    value.canonicalize();
    out.exact = value;
  }
  Interval log_product = Interval::from_integer(0, precision);
  for (int d = 1; d <= n; ++d) {
    const Interval x = Interval::from_rational(Rational(1, int_pow(q, static_cast<unsigned long>(d))), precision);
    log_product += (-x).log1p().scaled(pi_prime(q, d));
  }
  out.product = log_product.exp();
  out.normalized = Interval::euler_gamma(precision).exp() * out.product.scaled(n);
  return out;
}

MertensEnvelope mertens_envelope(std::uint64_t q, int max_n, mpfr_prec_t precision) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (max_n < 1) throw DomainError("envelope needs max_n >= 1");
  MertensEnvelope out;
  out.max_n = max_n;
  const Interval e_gamma = Interval::euler_gamma(precision).exp();
  Interval log_product = Interval::from_integer(0, precision);
  for (int n = 1; n <= max_n; ++n) {
    const Interval x = Interval::from_rational(Rational(1, int_pow(q, static_cast<unsigned long>(n))), precision);
    log_product += (-x).log1p().scaled(pi_prime(q, n));
    const Interval normalized = e_gamma * log_product.exp().scaled(n);
    if (n == 1 || normalized.midpoint() < out.min_normalized.midpoint()) {
      out.argmin = n;
      out.min_normalized = normalized;
    }
  }
  out.constant = e_gamma / out.min_normalized;
  return out;
}

namespace {

Interval log_gamma_one_plus(const Real& z, mpfr_prec_t precision) {
  // 1 + z is formed exactly, so the only rounding is inside lngamma itself.
  mpfr_prec_t p = std::max(precision, z.precision()) + 8;
  Real s(p);
  while (mpfr_add_ui(s.get(), z.get(), 1, MPFR_RNDN) != 0) {
    p *= 2;
    if (p > 1 << 16) throw BudgetExceeded("cannot represent 1 + z exactly");
    s = Real(p);
  }
  Real lo(precision);
  Real hi(precision);
  mpfr_lngamma(lo.get(), s.get(), MPFR_RNDD);
  mpfr_lngamma(hi.get(), s.get(), MPFR_RNDU);
  return Interval::from_bounds(lo, hi);
}

Interval log_G(std::uint64_t q, const Real& z, int truncation, mpfr_prec_t precision) {
  const Interval zi = Interval::from_bounds(z, z);
  Interval sum = -log_gamma_one_plus(z, precision);
  for (int d = 1; d <= truncation; ++d) {
    const Interval x = Interval::from_rational(Rational(1, int_pow(q, static_cast<unsigned long>(d))), precision);
    const Interval term = (zi * x).log1p() + zi * (-x).log1p();
    sum += term.scaled(pi_prime(q, d));
  }
  // |log(1 + z x) + z log(1 - x)| <= z(1+z) x^2 for x <= 1/2, and pi'(d) <= q^d/d.
  const Interval one = Interval::from_integer(1, precision);
  const Interval tail = zi * (zi + one) /
                        Interval::from_integer(int_pow(q, static_cast<unsigned long>(truncation)) *
                                                   (truncation + 1) * static_cast<unsigned long>(q - 1),
                                               precision);
  const Interval zero = Interval::from_integer(0, precision);
  return sum + (-tail).hull(zero);
}

}  // namespace

GEvaluation evaluate_G(std::uint64_t q, const Real& z, double eps, mpfr_prec_t precision) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (mpfr_sgn(z.get()) < 0 || mpfr_cmp_ui(z.get(), 2) > 0) throw DomainError("G(z) is evaluated for 0 <= z <= 2");

  // Start where the tail majorant z(1+z) q^-D / ((D+1)(q-1)) drops below eps/4.
  const double zd = z.to_double(MPFR_RNDU);
  int truncation = 1;
  while (truncation < kMaxGTruncation &&
         zd * (1 + zd) * std::pow(static_cast<double>(q), -truncation) / ((truncation + 1) * (q - 1.0)) > eps / 4) {
    ++truncation;
  }
  for (mpfr_prec_t p = precision; p <= 4096; p *= 2) {
    for (int d = truncation; d <= kMaxGTruncation; ++d) {
      const Interval value = log_G(q, z, d, p).exp();
      if (value.width() <= eps) return {value, d};
    }
  }
  throw BudgetExceeded("G(z) bracket of width " + std::to_string(eps) +
                       " is unachievable with truncation degree <= 64 and 4096-bit precision");
}

GEvaluation evaluate_G(std::uint64_t q, double z, double eps, mpfr_prec_t precision) {
  if (!std::isfinite(z)) throw DomainError("z must be finite");
  Real zr(std::max<mpfr_prec_t>(precision, 64));
  mpfr_set_d(zr.get(), z, MPFR_RNDN);
  return evaluate_G(q, zr, eps, precision);
}

Interval sathe_selberg_H(std::uint64_t q, int n, int k, double eps, mpfr_prec_t precision) {
  if (n < 2) throw DomainError("H_k(n) needs n >= 2");
  const double log_n = std::log(static_cast<double>(n));
  if (k < 1 || static_cast<double>(k) > 2 * log_n + 1) {
    throw DomainError("k = " + std::to_string(k) + " is outside the Sathe-Selberg range 1 <= k <= 2 log n + 1 (" +
                      std::to_string(2 * log_n + 1) + ")");
  }
  const Interval base = Interval::from_rational(Rational(int_pow(q, static_cast<unsigned long>(n)), n), precision);
  if (k == 1) return base;
  const Interval log_ni = Interval::from_integer(n, precision).log();
  Integer factorial;
  mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(k - 1));
  const Interval power = log_ni.pow(static_cast<unsigned long>(k - 1)) / Interval::from_integer(factorial, precision);
  const Interval z = Interval::from_integer(k - 1, precision) / log_ni;

  // G is not monotone near 0, so enclose G on [z_lo, z_hi] by the endpoint hull
  // widened by |G'| <= 4 times the width: |psi(1+z)| <= 1, each degree-d log term
  // has derivative <= 3 q^-2d, and G <= 1/min Gamma < 1.13.
  Real z_hi = z.hi();
  if (mpfr_cmp_ui(z_hi.get(), 2) > 0) mpfr_set_ui(z_hi.get(), 2, MPFR_RNDN);
  const Interval g_ends = evaluate_G(q, z.lo(), eps, precision).value.hull(evaluate_G(q, z_hi, eps, precision).value);
  const Interval slope = Interval::from_integer(4, precision) * (z - z);
  const Interval g = g_ends + slope;
  return base * power * g;
}

Interval hardy_ramanujan_constant(mpfr_prec_t precision) {
  return Interval::from_integer(2, precision) - Interval::log2(precision);
}

std::vector<Interval> hardy_ramanujan_row(std::uint64_t q, int n, mpfr_prec_t precision) {
  if (n < 1) throw DomainError("degree must be at least 1");
  const Interval step = Interval::from_integer(n, precision).log() + hardy_ramanujan_constant(precision);
  std::vector<Interval> row;
  row.reserve(static_cast<std::size_t>(n));
  row.push_back(Interval::from_rational(Rational(int_pow(q, static_cast<unsigned long>(n)), n), precision));
  for (int k = 2; k <= n; ++k) {
    row.push_back(row.back() * step / Interval::from_integer(k - 1, precision));
  }
  return row;
}

HardyRamanujanReport verify_hr_bound(const CountTable& table, mpfr_prec_t precision, const Deadline& deadline) {
  HardyRamanujanReport report;
  report.q = table.q();
  report.max_degree = table.complete_through();
  report.complete = table.complete();
  bool have_ratio = false;
  for (int n = 1; n <= table.complete_through(); ++n) {
    if (deadline.expired()) {
      report.complete = false;
      report.max_degree = n - 1;
      break;
    }
    std::vector<Interval> row = hardy_ramanujan_row(table.q(), n, precision);
    mpfr_prec_t row_precision = precision;
    for (int k = 1; k <= n; ++k) {
      const Integer& count = table.at(n, k);
      ++report.checked;
      for (;;) {
        const Interval& bound = row[static_cast<std::size_t>(k - 1)];
        if (mpfr_cmp_z(bound.lo().get(), count.get_mpz_t()) >= 0) break;
        if (mpfr_cmp_z(bound.hi().get(), count.get_mpz_t()) < 0) {
          report.violations.push_back({n, k});
          break;
        }
        if (row_precision >= 1024) {
          report.inconclusive.push_back({n, k});
          break;
        }
        row_precision *= 2;
        row = hardy_ramanujan_row(table.q(), n, row_precision);
      }
      if (count != 0) {
        const double ratio = (Interval::from_integer(count, precision) / row[static_cast<std::size_t>(k - 1)]).midpoint();
        if (!have_ratio || ratio > report.max_ratio) {
          report.max_ratio = ratio;
          report.max_ratio_cell = {n, k};
          have_ratio = true;
        }
      }
    }
  }
  return report;
}

RecurrenceReport verify_recurrence_bound(const CountTable& table, const Deadline& deadline) {
  RecurrenceReport report;
  report.q = table.q();
  report.max_degree = table.complete_through();
  report.complete = table.complete();
  Integer lhs;
  Integer rhs;
  for (int n = 2; n <= table.complete_through(); ++n) {
    if (deadline.expired()) {
      report.complete = false;
      report.max_degree = n - 1;
      break;
    }
    for (int k = 2; k <= n; ++k) {
      lhs = table.at(n, k) * (k - 1);
      rhs = 0;
      for (int d = 1; 2 * d <= n; ++d) {
        mpz_addmul(rhs.get_mpz_t(), table.irreducibles(d).get_mpz_t(), table.at(n - d, k - 1).get_mpz_t());
      }
      ++report.checked;
      if (lhs > rhs) report.violations.push_back({n, k, lhs, rhs});
    }
  }
  return report;
}

Interval rate_function(const Interval& y) {
  if (!y.certainly_positive()) throw DomainError("Q(y) needs y > 0");
  return y * y.log() - y + Interval::from_integer(1, y.precision());
}

Interval rate_function(double y, mpfr_prec_t precision) { return rate_function(Interval::from_double(y, precision)); }

namespace {

void require_tail_parameters(double alpha, double beta) {
  if (!(alpha > 0 && alpha < 1 && beta > 1 && std::isfinite(beta))) {
    throw DomainError("tail parameters must satisfy 0 < alpha < 1 < beta");
  }
}

}  // namespace

TailSums tail_sums(const CountTable& table, int n, double alpha, double beta, mpfr_prec_t precision) {
  require_tail_parameters(alpha, beta);
  if (n < 2) throw DomainError("tail sums need n >= 2");
  if (n > table.complete_through()) throw DomainError("table does not cover degree " + std::to_string(n));
  TailSums out;
  out.n = n;
  out.alpha = alpha;
  out.beta = beta;
  const double log_n = std::log(static_cast<double>(n));
  out.low_cutoff = static_cast<int>(std::floor(alpha * log_n));
  out.high_cutoff = static_cast<int>(std::ceil(beta * log_n));
  out.low_tail = 0;
  out.high_tail = 0;
  for (int k = 0; k <= n; ++k) {
    if (k <= out.low_cutoff) out.low_tail += table.at(n, k);
    if (k >= out.high_cutoff) out.high_tail += table.at(n, k);
  }
  const Interval log_ni = Interval::from_integer(n, precision).log();
  const Interval scale = log_ni.sqrt() / Interval::from_integer(int_pow(table.q(), static_cast<unsigned long>(n)), precision);
  auto normalize = [&](const Integer& tail, double y) {
    return Interval::from_integer(tail, precision) * (rate_function(y, precision) * log_ni).exp() * scale;
  };
  out.low_normalized = normalize(out.low_tail, alpha);
  out.high_normalized = normalize(out.high_tail, beta);
  return out;
}

NortonCheck norton_check(double x, double alpha, double beta, mpfr_prec_t precision) {
  require_tail_parameters(alpha, beta);
  if (!(x > 0 && std::isfinite(x))) throw DomainError("x must be positive");
  NortonCheck out;
  out.x = x;
  out.alpha = alpha;
  out.beta = beta;

  // Cutoffs from exact products of the binary inputs.
  const Rational low_edge = Rational(alpha) * Rational(x);
  const Rational high_edge = Rational(beta) * Rational(x);
  Integer low_cutoff;
  Integer high_cutoff;
  mpz_fdiv_q(low_cutoff.get_mpz_t(), low_edge.get_num_mpz_t(), low_edge.get_den_mpz_t());
  mpz_cdiv_q(high_cutoff.get_mpz_t(), high_edge.get_num_mpz_t(), high_edge.get_den_mpz_t());
  if (!high_cutoff.fits_slong_p() || high_cutoff > 1000000) throw BudgetExceeded("x too large for direct Poisson sums");

  const Interval xi = Interval::from_double(x, precision);
  Interval term = (-xi).exp();
  Interval low_sum = Interval::from_integer(0, precision);
  Interval below_high = Interval::from_integer(0, precision);
  for (long k = 0; k < high_cutoff.get_si() || k <= low_cutoff.get_si(); ++k) {
    if (k > 0) term = term * xi / Interval::from_integer(k, precision);
    if (k <= low_cutoff.get_si()) low_sum += term;
    if (k < high_cutoff.get_si()) below_high += term;
  }
  out.low_lhs = low_sum;
  out.high_lhs = Interval::from_integer(1, precision) - below_high;

  const Interval one = Interval::from_integer(1, precision);
  const Interval a = Interval::from_double(alpha, precision);
  const Interval b = Interval::from_double(beta, precision);
  out.low_rhs = (-(rate_function(a) * xi)).exp() / ((one - a) * (a * xi).sqrt());
  out.high_rhs = (-(rate_function(b) * xi)).exp() /
                 ((b - one) * (Interval::from_integer(2, precision) * Interval::pi(precision) * b * xi).sqrt());
  out.low_holds = out.low_lhs.certainly_less(out.low_rhs);
  out.high_holds = out.high_lhs.certainly_less(out.high_rhs);
  out.high_rhs_with_beta = out.high_rhs * b;
  out.high_holds_with_beta = out.high_lhs.certainly_less(out.high_rhs_with_beta);
  return out;
}

}  // namespace primfield
