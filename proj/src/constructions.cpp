#include "primfield/constructions.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "primfield/counting.hpp"
#include "primfield/error.hpp"
#include "primfield/irreducible.hpp"

namespace primfield {

// ---------------------------------------------------------------------------
// Multiples of degree-n polynomials

MultiplesTable::MultiplesTable(std::uint32_t q, int horizon, std::vector<std::vector<std::uint64_t>> cumulative)
    : q_(q), horizon_(horizon), cumulative_(std::move(cumulative)) {}

std::uint64_t MultiplesTable::count(int n, int m) const {
  if (n < 1 || m > horizon_ || n > horizon_) {
    throw DomainError("multiples table covers 1 <= n, m <= " + std::to_string(horizon_));
  }
  if (m <= n) return 0;
  return cumulative_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

Rational MultiplesTable::ratio(int n, int m) const {
  Rational r(Integer(static_cast<unsigned long>(count(n, m))), monic_count(q_, m).up_to_degree);
  r.canonicalize();
  return r;
}

std::uint64_t divisor_degree_mask(PolyIndex f, const FactorSieve& sieve, std::vector<PolyIndex>& scratch) {
  sieve.factor_indices(f, scratch);
  std::uint64_t reach = 1;
  for (PolyIndex p : scratch) reach |= reach << sieve.arith().degree(p);
  return reach;
}

MultiplesTable build_multiples_table(const FactorSieve& sieve, int horizon) {
  if (horizon > sieve.max_degree()) {
    throw DomainError("multiples table to degree " + std::to_string(horizon) + " needs a sieve that far; it stops at " +
                      std::to_string(sieve.max_degree()));
  }
  if (horizon > 62) throw DomainError("divisor-degree masks hold degrees up to 62");
  const auto H = static_cast<std::size_t>(horizon);
  // per_degree[d][n]: polynomials of degree d with a divisor of degree n < d
  std::vector<std::vector<std::uint64_t>> per_degree(H + 1, std::vector<std::uint64_t>(H + 1, 0));
  const IndexArith& arith = sieve.arith();
  std::vector<PolyIndex> scratch;
  for (int d = 2; d <= horizon; ++d) {
    auto& row = per_degree[static_cast<std::size_t>(d)];
    for (PolyIndex g = arith.first(d); g < arith.end(d); ++g) {
      std::uint64_t mask = divisor_degree_mask(g, sieve, scratch) & ((std::uint64_t{1} << d) - 2);
      while (mask != 0) {
        ++row[static_cast<std::size_t>(std::countr_zero(mask))];
        mask &= mask - 1;
      }
    }
  }
  std::vector<std::vector<std::uint64_t>> cumulative(H + 1, std::vector<std::uint64_t>(H + 1, 0));
  for (std::size_t n = 1; n <= H; ++n) {
    for (std::size_t m = n + 1; m <= H; ++m) cumulative[n][m] = cumulative[n][m - 1] + per_degree[m][n];
  }
  return {sieve.q(), horizon, std::move(cumulative)};
}

std::uint64_t multiples_count(std::uint32_t q, int n, int m, const FactorSieve& sieve) {
  if (sieve.q() != q) throw FieldMismatch();
  if (m > sieve.max_degree()) {
    throw DomainError("degree " + std::to_string(m) + " exceeds the sieve horizon " + std::to_string(sieve.max_degree()));
  }
  if (n < 1) throw DomainError("divisor degree must be at least 1");
  std::uint64_t total = 0;
  std::vector<PolyIndex> scratch;
  const IndexArith& arith = sieve.arith();
  for (int d = n + 1; d <= m; ++d) {
    for (PolyIndex g = arith.first(d); g < arith.end(d); ++g) {
      if ((divisor_degree_mask(g, sieve, scratch) >> n) & 1) ++total;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Besicovitch levels

bool BesicovitchResult::ratios_ok() const {
  return !levels.empty() && std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.ratio_ok; });
}

namespace {

Rational exact_double(double x) {
  Rational r(x);
  r.canonicalize();
  return r;
}

Rational window_max(const MultiplesTable& table, int n, int from, int to) {
  Rational best = 0;
  for (int m = from; m <= to; ++m) best = std::max(best, table.ratio(n, m));
  return best;
}

}  // namespace

BesicovitchResult besicovitch_construct(std::uint32_t q, double epsilon, int horizon, std::uint64_t sieve_entries) {
  const Rational eps = exact_double(epsilon);
  const Rational target = Rational(static_cast<long>(q) - 1, static_cast<long>(q));
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (eps >= target) throw DomainError("epsilon >= (q-1)/q makes the density target vacuous");
  if (horizon < 1) throw DomainError("horizon must be at least 1");

  const FactorSieve sieve(q, horizon, sieve_entries);
  const MultiplesTable table = build_multiples_table(sieve, horizon);

  BesicovitchResult out;
  out.q = q;
  out.epsilon = epsilon;
  out.horizon = horizon;
  Rational best_eps;  // smallest epsilon the first condition could have met
  bool have_best = false;
  for (int level = 1;; ++level) {
    const int start = out.levels.empty() ? 1 : out.levels.back().degree + 1;
    const Rational own_threshold = eps / Rational(Integer(1) << (level + 1));
    const Rational prev_threshold = eps / Rational(Integer(1) << level);
    bool found = false;
    for (int n = start; n <= horizon && !found; ++n) {
      BesicovitchLevel cand;
      cand.degree = n;
      cand.own_multiples_max = window_max(table, n, n, horizon);
      cand.own_threshold = own_threshold;
      if (level == 1) {
        const Rational needed = cand.own_multiples_max * 4;
        if (!have_best || needed < best_eps) best_eps = needed;
        have_best = true;
      }
      if (cand.own_multiples_max > own_threshold) continue;
      if (!out.levels.empty()) {
        cand.previous_multiples_max = window_max(table, out.levels.back().degree, n, horizon);
        cand.previous_threshold = prev_threshold;
        if (*cand.previous_multiples_max > prev_threshold) continue;
      }
      out.levels.push_back(std::move(cand));
      found = true;
    }
    if (!found) break;
  }
  if (out.levels.empty()) {
    std::ostringstream msg;
    msg << "no admissible first level up to degree " << horizon << "; smallest workable epsilon is "
        << best_eps.get_d();
    throw DomainError(msg.str());
  }

  // A = union over levels of I_(n_i) minus multiples of earlier level degrees
  PrimitiveSetHorizon set(q, horizon);
  std::vector<PolyIndex> scratch;
  std::uint64_t earlier = 0;
  const IndexArith& arith = sieve.arith();
  for (auto& lvl : out.levels) {
    for (PolyIndex g = arith.first(lvl.degree); g < arith.end(lvl.degree); ++g) {
      if (earlier == 0 || (divisor_degree_mask(g, sieve, scratch) & earlier) == 0) {
        set.insert_index(g);
        ++lvl.members;
      }
    }
    earlier |= std::uint64_t{1} << lvl.degree;
    lvl.density_ratio = Rational(Integer(static_cast<unsigned long>(set.count_up_to(lvl.degree))),
                                 monic_count(q, lvl.degree).up_to_degree);
    lvl.density_ratio.canonicalize();
    lvl.ratio_ok = lvl.density_ratio >= target - eps;
  }
  out.set = std::move(set);
  return out;
}

// ---------------------------------------------------------------------------
// Growth functions

GrowthFunction::GrowthFunction(Kind kind, int depth, double eps) : kind_(kind), depth_(depth), eps_(eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("growth exponent eps must be positive");
  if (kind == Kind::IterLog && (depth < 2 || depth > 6)) throw DomainError("iterated-log depth j must lie in 2..6");
}

GrowthFunction GrowthFunction::powlog(double eps) { return {Kind::PowLog, 1, eps}; }
GrowthFunction GrowthFunction::iterlog(int depth, double eps) { return {Kind::IterLog, depth, eps}; }

GrowthFunction GrowthFunction::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  std::map<std::string, std::string> params;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("growth function parameter '" + item + "' needs name=value");
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto number = [&](const std::string& key, const std::string& fallback) {
    const auto it = params.find(key);
    const std::string value = it == params.end() ? fallback : it->second;
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::logic_error&) {
      throw ParseError("growth function parameter " + key + "='" + value + "' is not a number");
    }
  };
  for (const auto& [key, value] : params) {
    if (key != "eps" && !(family == "iterlog" && key == "j")) {
      throw ParseError("unknown growth function parameter '" + key + "'");
    }
  }
  try {
    if (family == "powlog") return powlog(number("eps", "0.1"));
    if (family == "iterlog") {
      const double j = number("j", "2");
      if (j != std::floor(j)) throw ParseError("iterated-log depth j must be an integer");
      return iterlog(static_cast<int>(j), number("eps", "0.1"));
    }
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown growth function family '" + family + "' (expected powlog or iterlog)");
}

std::string GrowthFunction::to_string() const {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, eps_).ptr;  // shortest round-trip form
  const std::string eps(buf, end);
  if (kind_ == Kind::PowLog) return "powlog:eps=" + eps;
  return "iterlog:j=" + std::to_string(depth_) + ",eps=" + eps;
}

double GrowthFunction::operator()(double x) const {
  if (kind_ == Kind::PowLog) return std::pow(std::log(x + std::numbers::e), 1 + eps_);
  double level = std::log(std::max(x, std::numbers::e));
  double product = 1;
  for (int i = 2; i <= depth_; ++i) {
    level = std::log(std::max(level, std::numbers::e));
    product *= i < depth_ ? level : std::pow(level, 1 + eps_);
  }
  return product;
}

namespace {

Interval e_constant(mpfr_prec_t precision) { return Interval::from_double(1.0, precision).exp(); }

Interval max_with(const Interval& x, const Interval& floor_value) {
  if (mpfr_cmp(x.lo().get(), floor_value.hi().get()) >= 0) return x;
  if (mpfr_cmp(x.hi().get(), floor_value.lo().get()) <= 0) return floor_value;
  return Interval::from_bounds(floor_value.lo(),
                               mpfr_cmp(x.hi().get(), floor_value.hi().get()) >= 0 ? x.hi() : floor_value.hi());
}

// the double 1 + eps, so both evaluations agree on the function
Interval exponent_of(double eps, mpfr_prec_t precision) { return Interval::from_double(1.0 + eps, precision); }

// log max(x, e); exactly 1 once the clamp certainly applies, so floor(j L(j)) stays decidable there
Interval clamped_log(const Interval& x, const Interval& e) {
  if (mpfr_cmp(x.hi().get(), e.lo().get()) <= 0) return Interval::from_double(1.0, x.precision());
  return max_with(x, e).log();
}

// l_i(x) for i = 1..depth, clamped as in the class comment
std::vector<Interval> iterated_logs(const Interval& x, int depth) {
  const Interval e = e_constant(x.precision());
  std::vector<Interval> out;
  out.push_back(clamped_log(x, e));
  for (int i = 2; i <= depth; ++i) out.push_back(clamped_log(out.back(), e));
  return out;
}

}  // namespace

Interval GrowthFunction::operator()(const Interval& x) const {
  const mpfr_prec_t p = x.precision();
  if (kind_ == Kind::PowLog) return (x + e_constant(p)).log().pow(exponent_of(eps_, p));
  const auto logs = iterated_logs(x, depth_);
  Interval product = Interval::from_double(1.0, p);
  for (int i = 2; i < depth_; ++i) product *= logs[static_cast<std::size_t>(i - 1)];
  return product * logs.back().pow(exponent_of(eps_, p));
}

std::optional<Interval> GrowthFunction::tail_integral(const Integer& k, const Interval& a) const {
  const mpfr_prec_t p = a.precision();
  const Interval x = Interval::from_integer(k, p);
  const Interval one = Interval::from_double(1.0, p);
  if (kind_ == Kind::PowLog) {
    // (log(x+e))^(1+eps) >= (log x - a)^(1+eps), so the integrand is <= 1/(x (log x - a)^(2+eps))
    const Interval base = x.log() - a;
    if (!base.certainly_positive()) return std::nullopt;
    const Interval expo = exponent_of(eps_, p);
    return one / (base.pow(expo) * expo);
  }
  // No clamping beyond K once l_(j-1)(K) >= e; with log x >= 2a, log x - a >= (log x)/2
  // and the integral of 1/(x l1 l2 ... l_j^(1+eps)) is l_j(K)^-eps / eps.
  const auto logs = iterated_logs(x, depth_);
  const Interval e = e_constant(p);
  if (!e.certainly_less_equal(logs[static_cast<std::size_t>(depth_ - 2)])) return std::nullopt;
  if (!(a + a).certainly_less_equal(logs[0])) return std::nullopt;
  const Interval eps = Interval::from_double(eps_, p);
  return (one + one) / (logs.back().pow(eps) * eps);
}

bool GrowthFunction::grid_monotone() const {
  double previous = 0;
  for (double x = 2; x <= 1e12; x *= 1.05) {
    const double v = (*this)(x);
    if (!(v >= 1) || v < previous) return false;
    previous = v;
  }
  return true;
}

// ---------------------------------------------------------------------------
// The t-sequence

namespace {

// pi_q(n) for n while it fits in 63 bits; degree of the m-th irreducible by search.
class IrreducibleRanks {
 public:
  explicit IrreducibleRanks(std::uint64_t q) {
    cumulative_.push_back(0);
    for (int n = 1;; ++n) {
      const Integer c = pi_cumulative(q, n);
      if (c >= (Integer(1) << 63)) break;
      cumulative_.push_back(c.get_ui());
    }
  }

  int degree_of(std::uint64_t m) const {
    const auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), m);
    if (it == cumulative_.end()) throw BudgetExceeded("irreducible rank beyond 63-bit counts");
    return static_cast<int>(it - cumulative_.begin());
  }

  std::uint64_t before(int n) const { return cumulative_.at(static_cast<std::size_t>(n - 1)); }

 private:
  std::vector<std::uint64_t> cumulative_;
};

const IrreducibleRanks& ranks_for(std::uint64_t q) {
  static std::mutex lock;
  static std::map<std::uint64_t, IrreducibleRanks> cache;
  const std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, IrreducibleRanks(q)).first;
  return it->second;
}

// 1 / |m-th irreducible| <= c log q / (m log(m/c)) with c = (q/(q-1))^2: from
// sum_{d<=n} q^d/d <= c q^n/n (induction from n = 2) and m <= pi_q(deg).
Interval norm_constant(std::uint64_t q, mpfr_prec_t p) {
  const Interval ratio = Interval::from_rational(Rational(static_cast<long>(q), static_cast<long>(q - 1)), p);
  return ratio * ratio;
}

}  // namespace

std::uint64_t r_index(const GrowthFunction& L, std::uint64_t j) {
  const double v = static_cast<double>(j) * L(static_cast<double>(j));
  const double nearest = std::round(v);
  if (std::abs(v - nearest) > std::max(1e-9, v * 1e-13) && v < 9e15) return static_cast<std::uint64_t>(std::floor(v));
  for (mpfr_prec_t p = 256; p <= 4096; p *= 2) {
    const Interval x = Interval::from_integer(Integer(static_cast<unsigned long>(j)), p);
    const Interval value = x * L(x);
    Integer lo;
    Integer hi;
    mpfr_get_z(lo.get_mpz_t(), value.lo().get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), value.hi().get(), MPFR_RNDD);
    if (lo == hi) {
      if (!lo.fits_ulong_p()) throw BudgetExceeded("irreducible rank exceeds 64 bits");
      return lo.get_ui();
    }
  }
  throw BudgetExceeded("could not resolve floor(j L(j)) at j = " + std::to_string(j));
}

std::optional<Rational> t_tail_bound(std::uint64_t q, const GrowthFunction& L, std::uint64_t K) {
  const mpfr_prec_t p = kDefaultPrecision;
  const Interval c = norm_constant(q, p);
  const Interval a = c.log();
  const Interval x = Interval::from_integer(Integer(static_cast<unsigned long>(K)), p);
  const Interval h = x * L(x);
  if (!c.certainly_less(h)) return std::nullopt;
  const auto integral = L.tail_integral(Integer(static_cast<unsigned long>(K)), a);
  if (!integral) return std::nullopt;
  // r_j's rank is >= (j-1) L(j-1) = h(j-1); the sum over j > K is at most f(K) + integral.
  const Interval one = Interval::from_double(1.0, p);
  const Interval f = one / (h * (h / c).log());
  const Interval bound = c * Interval::from_integer(Integer(static_cast<unsigned long>(q)), p).log() * (f + *integral);
  return bound.hi().to_rational();
}

TTerm TSequence::term(std::uint64_t k) const {
  if (k < 1) throw DomainError("t-sequence terms start at k = 1");
  TTerm t;
  t.k = k;
  t.index = r_index(L, k0 + k);
  t.degree = ranks_for(q).degree_of(t.index);
  return t;
}

namespace {

constexpr std::size_t kHeadTerms = 64;

struct PartialSums {
  // sum over j in (k0, K] of 1/q^deg(r_j) as numerator / q^top
  Integer numerator;
  int top = 0;
};

}  // namespace

TSequence build_t_sequence(std::uint64_t q, const GrowthFunction& L, std::uint64_t k0_min,
                           const TSequenceBudget& budget) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!L.grid_monotone()) throw DomainError("growth function is not positive and nondecreasing on the grid");
  TSequence seq;
  seq.q = q;
  seq.L = L;
  seq.y0 = 3;  // both families satisfy L >= 1 everywhere
  const std::uint64_t start = std::max(k0_min, seq.y0);
  const IrreducibleRanks& ranks = ranks_for(q);

  std::vector<std::uint8_t> degree;  // degree[i] = deg r_(start + 1 + i)
  std::uint64_t K = std::max<std::uint64_t>(4096, 2 * start);
  for (;;) {
    if (K - start > budget.max_terms) {
      throw BudgetExceeded("t-sequence certificate not reached within " + std::to_string(budget.max_terms) +
                           " terms for L = " + L.to_string());
    }
    if (budget.deadline.expired()) throw BudgetExceeded("t-sequence deadline reached");
    std::uint64_t previous = degree.empty() ? 0 : r_index(L, start + degree.size());
    for (std::uint64_t j = start + 1 + degree.size(); j <= K; ++j) {
      const std::uint64_t m = r_index(L, j);
      if (m <= previous) throw DomainError("floor(j L(j)) is not strictly increasing at j = " + std::to_string(j));
      previous = m;
      degree.push_back(static_cast<std::uint8_t>(ranks.degree_of(m)));
    }
    const auto tail = t_tail_bound(q, L, K);
    if (tail && *tail < Rational(1, 2)) {
      const int top = degree.back();
      Integer numerator = 0;
      std::vector<Integer> weight(static_cast<std::size_t>(top) + 1);
      for (int d = 0; d <= top; ++d) weight[static_cast<std::size_t>(d)] = int_pow(q, static_cast<unsigned long>(top - d));
      for (std::uint8_t d : degree) numerator += weight[d];
      // walk k0 up until numerator / q^top + tail < 1/2
      const Rational room = (Rational(1, 2) - *tail) * Rational(int_pow(q, static_cast<unsigned long>(top)));
      std::uint64_t k0 = start;
      std::size_t next = 0;
      while (Rational(numerator) >= room && next < degree.size()) {
        numerator -= weight[degree[next++]];
        ++k0;
      }
      if (Rational(numerator) < room) {
        seq.k0 = k0;
        seq.computed_through = K;
        seq.tail_bound = *tail;
        seq.partial_sum = Rational(numerator, int_pow(q, static_cast<unsigned long>(top)));
        seq.partial_sum.canonicalize();
        break;
      }
    }
    K *= 2;
  }
  for (std::uint64_t k = 1; k <= kHeadTerms && seq.k0 + k <= seq.computed_through; ++k) {
    seq.head.push_back(seq.term(k));
  }
  return seq;
}

TSequenceCheck verify_t_sequence(const TSequence& seq) {
  TSequenceCheck check;
  check.certified = seq.certified();
  const IrreducibleRanks& ranks = ranks_for(seq.q);
  Rational sum = 0;
  std::map<int, std::uint64_t> per_degree;
  bool increasing = seq.k0 >= seq.y0;
  std::uint64_t previous = 0;
  for (std::uint64_t j = seq.y0; j <= seq.computed_through; ++j) {
    const std::uint64_t m = r_index(seq.L, j);
    if (j > seq.y0 && m <= previous) increasing = false;
    previous = m;
    if (j > seq.k0) ++per_degree[ranks.degree_of(m)];
  }
  for (const auto& [d, count] : per_degree) {
    sum += Rational(Integer(static_cast<unsigned long>(count)), int_pow(seq.q, static_cast<unsigned long>(d)));
  }
  sum.canonicalize();
  const auto tail = t_tail_bound(seq.q, seq.L, seq.computed_through);
  check.indices_increasing = increasing;
  check.partial_sum_matches = sum == seq.partial_sum && tail && *tail == seq.tail_bound;
  return check;
}

// ---------------------------------------------------------------------------
// Slices S_k

std::uint64_t mp_slice_limit(const TSequence& seq, int horizon) {
  std::uint64_t s = 0;
  // a squarefree cofactor with k-1 factors has degree >= k-1
  while (seq.term(s + 1).degree + static_cast<int>(s) <= horizon) ++s;
  return s;
}

std::vector<std::vector<Integer>> mp_counts_exact(const TSequence& seq, int horizon) {
  const std::uint64_t s = mp_slice_limit(seq, horizon);
  const auto H = static_cast<std::size_t>(horizon);
  std::vector<std::vector<Integer>> counts(s + 1, std::vector<Integer>(H + 1, 0));
  std::vector<Integer> irreducibles(H + 1, 0);
  for (std::size_t d = 1; d <= H; ++d) irreducibles[d] = pi_prime(seq.q, static_cast<int>(d));
  for (std::uint64_t k = 1; k <= s; ++k) {
    const int dk = seq.term(k).degree;
    irreducibles[static_cast<std::size_t>(dk)] -= 1;  // exclude t_1..t_k
    const int room = horizon - dk;
    if (room == 0) {
      if (k == 1) counts[k][H] = 1;
      continue;
    }
    const CountTable table = build_count_table_from(seq.q, room, irreducibles);
    for (int m = static_cast<int>(k) - 1; m <= room; ++m) {
      counts[k][static_cast<std::size_t>(m + dk)] = table.at(m, static_cast<int>(k) - 1);
    }
  }
  return counts;
}

namespace {

PolyIndex irreducible_at_rank(std::uint32_t q, std::uint64_t rank, std::map<int, std::vector<PolyIndex>>& cache) {
  const IrreducibleRanks& ranks = ranks_for(q);
  const int d = ranks.degree_of(rank);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, irreducibles_of_degree(q, d)).first;
  return it->second.at(rank - ranks.before(d) - 1);
}

// entries a sieve of degree G needs
std::uint64_t sieve_size(std::uint64_t q, int G) {
  std::uint64_t size = 2;
  for (int i = 0; i < G; ++i) {
    if (size > (std::uint64_t{1} << 62) / q) return std::uint64_t{1} << 62;
    size *= q;
  }
  return size;
}

// smallest k with t_k | f, or 0
std::uint64_t first_t_dividing(PolyIndex f, const std::vector<PolyIndex>& t, const IndexArith& arith) {
  const int df = arith.degree(f);
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (arith.degree(t[j]) > df) break;
    if (arith.divides(t[j], f)) return j + 1;
  }
  return 0;
}

}  // namespace

MpConstruction mp_construct(std::uint64_t q, const GrowthFunction& L, int horizon, std::uint64_t sieve_entries,
                            const TSequenceBudget& budget) {
  const std::uint32_t p = require_prime(q);
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  MpConstruction mp;
  mp.horizon = horizon;
  mp.sequence = build_t_sequence(q, L, 0, budget);
  mp.certified_k0 = mp.sequence.k0;

  int cofactor_cap = 0;
  while (sieve_size(q, cofactor_cap + 1) <= sieve_entries) ++cofactor_cap;
  // slices k >= 2 need cofactors up to degree horizon - deg t_2
  if (horizon - mp.sequence.term(2).degree > cofactor_cap) {
    const int needed = horizon - cofactor_cap;
    const IrreducibleRanks& ranks = ranks_for(q);
    std::uint64_t lo = mp.sequence.k0 + 2;
    std::uint64_t hi = lo;
    while (ranks.degree_of(r_index(L, hi)) < needed) hi *= 2;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (ranks.degree_of(r_index(L, mid)) >= needed) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    mp.sequence = build_t_sequence(q, L, lo - 2, budget);
  }
  const TSequence& seq = mp.sequence;
  const std::uint64_t s = mp_slice_limit(seq, horizon);

  std::map<int, std::vector<PolyIndex>> by_degree;
  std::vector<PolyIndex> t;
  std::unordered_map<PolyIndex, std::uint64_t> slice_of_t;
  for (std::uint64_t k = 1; k <= s; ++k) {
    t.push_back(irreducible_at_rank(p, seq.term(k).index, by_degree));
    slice_of_t.emplace(t.back(), k);
    mp.t.push_back(MonicPoly::from_index(p, t.back()));
  }

  PrimitiveSetHorizon set(p, horizon);
  mp.counts.assign(s + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(horizon) + 1, 0));
  if (s >= 1) {
    set.insert_index(t[0]);
    mp.counts[1][static_cast<std::size_t>(seq.term(1).degree)] = 1;
  }
  mp.cofactor_degree = s >= 2 ? horizon - seq.term(2).degree : 0;
  if (mp.cofactor_degree >= 1) {
    const FactorSieve sieve(p, mp.cofactor_degree, sieve_entries);
    const IndexArith& arith = sieve.arith();
    std::vector<int> t_degree(s + 1);
    for (std::uint64_t k = 1; k <= s; ++k) t_degree[k] = arith.degree(t[k - 1]);
    std::vector<PolyIndex> factors;
    for (int d = 1; d <= mp.cofactor_degree; ++d) {
      if (budget.deadline.expired()) throw BudgetExceeded("construction deadline reached during enumeration");
      for (PolyIndex g = arith.first(d); g < arith.end(d); ++g) {
        sieve.factor_indices(g, factors);
        const std::uint64_t k = factors.size() + 1;
        if (k > s || d > horizon - t_degree[k]) continue;
        bool admissible = true;
        for (std::size_t i = 0; i < factors.size() && admissible; ++i) {
          if (i > 0 && factors[i] == factors[i - 1]) admissible = false;
          const auto hit = slice_of_t.find(factors[i]);
          if (hit != slice_of_t.end() && hit->second <= k) admissible = false;
        }
        if (!admissible) continue;
        const PolyIndex f = arith.mul(t[k - 1], g);
        set.insert_index(f);
        ++mp.counts[k][static_cast<std::size_t>(t_degree[k] + d)];
      }
    }
  }
  mp.set = std::move(set);
  return mp;
}

SliceCheck verify_mp_slices(const MpConstruction& mp) {
  SliceCheck check;
  const std::uint32_t q = mp.set.q();
  const IndexArith& arith = mp.set.arith();
  std::vector<PolyIndex> t;
  for (const auto& poly : mp.t) t.push_back(poly.index());
  const std::size_t s = t.size();
  std::vector<std::vector<std::uint64_t>> counts(s + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(mp.horizon) + 1, 0));
  std::optional<FactorSieve> sieve;
  if (mp.cofactor_degree >= 1) sieve.emplace(q, mp.cofactor_degree);
  std::vector<PolyIndex> factors;
  for (PolyIndex f : mp.set.elements()) {
    ++check.checked;
    auto fail = [&](const std::string& why) { check.failures.emplace_back(MonicPoly::from_index(q, f), why); };
    const std::uint64_t k = first_t_dividing(f, t, arith);
    if (k == 0) {
      fail("no t_k divides it");
      continue;
    }
    const PolyIndex g = *arith.exact_div(f, t[k - 1]);
    if (g == 1) {
      factors.clear();
    } else if (!sieve || arith.degree(g) > sieve->max_degree()) {
      fail("cofactor beyond the enumeration degree");
      continue;
    } else {
      sieve->factor_indices(g, factors);
    }
    bool squarefree = true;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] == t[k - 1] || (i > 0 && factors[i] == factors[i - 1])) squarefree = false;
    }
    if (!squarefree) fail("not squarefree");
    if (factors.size() + 1 != k) fail("omega(f) = " + std::to_string(factors.size() + 1) + " but f lies in slice " + std::to_string(k));
    ++counts[k][static_cast<std::size_t>(arith.degree(f))];
  }
  const auto exact = mp_counts_exact(mp.sequence, mp.horizon);
  check.counts_match = exact.size() == counts.size();
  for (std::size_t k = 1; k < counts.size() && check.counts_match; ++k) {
    for (std::size_t n = 0; n < counts[k].size(); ++n) {
      if (exact[k][n] != counts[k][n] || mp.counts[k][n] != counts[k][n]) check.counts_match = false;
    }
  }
  return check;
}

std::vector<DensityTerm> mp_density_terms(const MpConstruction& mp) {
  const IndexArith& arith = mp.set.arith();
  std::vector<PolyIndex> t;
  for (const auto& poly : mp.t) t.push_back(poly.index());
  std::optional<FactorSieve> sieve;
  if (mp.cofactor_degree >= 1) sieve.emplace(mp.set.q(), mp.cofactor_degree);
  std::vector<DensityTerm> terms;
  terms.reserve(mp.set.size());
  std::vector<PolyIndex> factors;
  for (PolyIndex f : mp.set.elements()) {
    const std::uint64_t k = first_t_dividing(f, t, arith);
    if (k == 0) throw DomainError("member without a t_k factor");
    const PolyIndex g = *arith.exact_div(f, t[k - 1]);
    int top = arith.degree(t[k - 1]);
    if (g != 1) {
      sieve->factor_indices(g, factors);
      top = std::max(top, arith.degree(factors.back()));
    }
    terms.push_back({arith.degree(f), top});
  }
  return terms;
}

MpDiagnostics mp_diagnostics(const TSequence& seq, const std::vector<std::vector<Integer>>& counts, int horizon,
                             mpfr_prec_t precision) {
  MpDiagnostics out;
  const std::uint64_t s = counts.empty() ? 0 : counts.size() - 1;
  std::vector<int> t_degree(1, 0);
  auto degree_of = [&](std::uint64_t k) {
    while (t_degree.size() <= k) t_degree.push_back(seq.term(t_degree.size()).degree);
    return t_degree[k];
  };
  const Interval one = Interval::from_double(1.0, precision);
  auto power_ratio = [&](const Integer& value, long exponent) {
    Rational r(value);
    if (exponent >= 0) {
      r /= Rational(int_pow(seq.q, static_cast<unsigned long>(exponent)));
    } else {
      r *= Rational(int_pow(seq.q, static_cast<unsigned long>(-exponent)));
    }
    r.canonicalize();
    return r;
  };
  for (int n = 8; n <= horizon; ++n) {
    MpRow row;
    row.n = n;
    row.s_prime = 0;
    for (std::uint64_t k = 1; k <= s; ++k) row.s_prime += counts[k][static_cast<std::size_t>(n)];
    const Interval log_n = Interval::from_integer(Integer(n), precision).log();
    row.r = Interval::from_integer(row.s_prime, precision) * log_n * log_n.log() * seq.L(log_n) /
            Interval::from_integer(int_pow(seq.q, static_cast<unsigned long>(n)), precision);
    const double ln = std::log(static_cast<double>(n));
    row.b = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(0.5 * ln)));
    row.b_prime = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(1.5 * ln)));
    row.ratio_b = power_ratio(row.s_prime, n - degree_of(row.b));
    row.ratio_b_prime = power_ratio(row.s_prime, n - degree_of(row.b_prime));
    auto widen = [](std::optional<RationalBracket>& band, const Rational& v) {
      if (!band) {
        band = RationalBracket{v, v};
      } else {
        band->lo = std::min(band->lo, v);
        band->hi = std::max(band->hi, v);
      }
    };
    widen(out.band_b, row.ratio_b);
    widen(out.band_b_prime, row.ratio_b_prime);

    for (std::uint64_t k = 2; k <= row.b_prime && k <= s; ++k) {
      const int m = n - degree_of(k);
      if (m < 2) continue;
      MpSliceRow slice;
      slice.n = n;
      slice.k = k;
      slice.count = counts[k][static_cast<std::size_t>(n)];
      const Interval log_m = Interval::from_integer(Integer(m), precision).log();
      Integer factorial = 1;
      for (std::uint64_t i = 2; i <= k - 2; ++i) factorial *= static_cast<unsigned long>(i);
      slice.target = Interval::from_integer(int_pow(seq.q, static_cast<unsigned long>(m)), precision) /
                     Interval::from_integer(Integer(m), precision) * log_m.pow(static_cast<unsigned long>(k - 2)) /
                     Interval::from_integer(factorial, precision);
      slice.ratio = Interval::from_integer(slice.count, precision) / slice.target;
      slice.spread = Interval::from_integer(Integer(static_cast<unsigned long>(k - 1)), precision) / (log_m * log_m);
      slice.spread_ok = slice.spread.certainly_less_equal(one);
      if (!slice.spread_ok) ++out.spread_exceeded;
      out.slices.push_back(std::move(slice));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace primfield
