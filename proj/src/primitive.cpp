#include "primfield/primitive.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include "primfield/counting.hpp"
#include "primfield/error.hpp"
#include "primfield/irreducible.hpp"

namespace primfield {

PrimitiveSetHorizon::PrimitiveSetHorizon(std::uint32_t q, int horizon) : arith_(q), horizon_(horizon) {
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  if (horizon > arith_.max_degree()) {
    throw BudgetExceeded("horizon " + std::to_string(horizon) + " exceeds 64-bit indices for q=" + std::to_string(q));
  }
}

PrimitiveSetHorizon PrimitiveSetHorizon::from_polys(std::uint32_t q, int horizon, const std::vector<MonicPoly>& polys) {
  PrimitiveSetHorizon out(q, horizon);
  for (const auto& f : polys) out.insert(f);
  return out;
}

void PrimitiveSetHorizon::check_index(PolyIndex f) const {
  if (!arith_.valid(f)) throw DomainError("not a monic polynomial index: " + std::to_string(f));
  const int d = arith_.degree(f);
  if (d > horizon_) {
    throw DomainError("degree " + std::to_string(d) + " exceeds the set horizon " + std::to_string(horizon_));
  }
  const bool holds_one = lookup_.count(1) != 0;
  if ((f == 1 && !lookup_.empty() && !holds_one) || (f != 1 && holds_one)) {
    throw DomainError("the constant 1 divides everything; it may only appear as the whole set {1}");
  }
}

bool PrimitiveSetHorizon::insert(const MonicPoly& f) {
  if (f.q() != q()) throw FieldMismatch();
  if (f.degree() > horizon_) {
    throw DomainError("degree " + std::to_string(f.degree()) + " exceeds the set horizon " + std::to_string(horizon_));
  }
  return insert_index(f.index());
}

bool PrimitiveSetHorizon::insert_index(PolyIndex f) {
  check_index(f);
  if (!lookup_.insert(f).second) return false;
  if (!elements_.empty() && elements_.back() > f) sorted_ = false;
  elements_.push_back(f);
  certificate_.reset();
  return true;
}

const std::vector<PolyIndex>& PrimitiveSetHorizon::elements() const {
  if (!sorted_) {
    std::sort(elements_.begin(), elements_.end());
    sorted_ = true;
  }
  return elements_;
}

std::vector<MonicPoly> PrimitiveSetHorizon::polys() const {
  std::vector<MonicPoly> out;
  out.reserve(size());
  for (PolyIndex f : elements()) out.push_back(MonicPoly::from_index(q(), f));
  return out;
}

std::vector<PolyIndex> PrimitiveSetHorizon::of_degree(int n) const {
  if (n < 0 || n > horizon_) return {};
  const auto& els = elements();
  const auto lo = std::lower_bound(els.begin(), els.end(), arith_.first(n));
  const auto hi = std::lower_bound(els.begin(), els.end(), arith_.end(n));
  return {lo, hi};
}

std::vector<std::uint64_t> PrimitiveSetHorizon::degree_counts() const {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(horizon_) + 1, 0);
  for (PolyIndex f : elements_) ++out[static_cast<std::size_t>(arith_.degree(f))];
  return out;
}

std::uint64_t PrimitiveSetHorizon::count_up_to(int n) const {
  if (n < 0) return 0;
  if (n >= horizon_) return size();
  const auto& els = elements();
  return static_cast<std::uint64_t>(std::lower_bound(els.begin(), els.end(), arith_.end(n)) - els.begin());
}

int PrimitiveSetHorizon::max_element_degree() const {
  if (empty()) return 0;
  return arith_.degree(elements().back());
}

const PrimitivityCertificate& PrimitiveSetHorizon::certificate() const {
  if (!certificate_) certificate_ = is_primitive(*this);
  return *certificate_;
}

PrimitivityCertificate is_primitive(const PrimitiveSetHorizon& s) {
  PrimitivityCertificate cert;
  const auto& els = s.elements();
  if (els.size() <= 1) return cert;
  const IndexArith& arith = s.arith();
  const int top = s.max_element_degree();
  const std::uint64_t saturate = std::uint64_t{1} << 62;

  for (PolyIndex a : els) {
    const int da = arith.degree(a);
    if (da >= top) break;
    const auto higher = std::lower_bound(els.begin(), els.end(), arith.end(da));
    const auto by_division = static_cast<std::uint64_t>(els.end() - higher);
    std::uint64_t by_multiples = 0;
    for (int e = 1; e <= top - da && by_multiples < saturate; ++e) by_multiples += arith.first(e);

    std::optional<PolyIndex> hit;
    if (by_multiples <= by_division) {
      // Multiples of higher cofactor degree have larger index, so stop after the first degree with a hit.
      for (int e = 1; e <= top - da && !hit; ++e) {
        for (PolyIndex g = arith.first(e); g < arith.end(e); ++g) {
          const PolyIndex m = arith.mul(a, g);
          ++cert.multiples_probed;
          if (s.contains(m) && (!hit || m < *hit)) hit = m;
        }
      }
    } else {
      for (auto it = higher; it != els.end(); ++it) {
        ++cert.divisions_tested;
        if (arith.divides(a, *it)) {
          hit = *it;
          break;
        }
      }
    }
    if (hit) {
      cert.primitive = false;
      cert.counterexample.emplace(MonicPoly::from_index(s.q(), a), MonicPoly::from_index(s.q(), *hit));
      return cert;
    }
  }
  return cert;
}

Rational erdos_sum(const PrimitiveSetHorizon& s) {
  const auto counts = s.degree_counts();
  if (counts[0] != 0) {
    throw DomainError("the Erdos sum assumes A != {1}: the constant polynomial has degree 0");
  }
  Rational total = 0;
  for (std::size_t d = 1; d < counts.size(); ++d) {
    if (counts[d] == 0) continue;
    total += Rational(Integer(static_cast<unsigned long>(counts[d])),
                      int_pow(s.q(), static_cast<unsigned long>(d)) * static_cast<unsigned long>(d));
  }
  total.canonicalize();
  return total;
}

ErdosIrreducibleBracket erdos_sum_irreducibles(std::uint64_t q, double eps) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (eps < 1e-7) throw BudgetExceeded("the 1/D tail majorant needs D > 1/eps terms; eps below 1e-7 is refused");
  ErdosIrreducibleBracket out;
  Rational partial = 0;
  for (int d = 1;; ++d) {
    partial += Rational(pi_prime(q, d), int_pow(q, static_cast<unsigned long>(d)) * d);
    partial.canonicalize();
    RationalBracket b{partial, partial + Rational(1, d)};
    b.hi.canonicalize();
    out.history.push_back(b);
    if (b.width() <= eps) {
      out.bracket = b;
      out.truncation = d;
      return out;
    }
  }
}

ErdosDensityReport erdos_density_lhs(std::uint64_t q, const std::vector<DensityTerm>& terms) {
  ErdosDensityReport report;
  if (terms.empty()) {
    report.lhs = 0;
    report.holds = true;
    return report;
  }
  std::map<std::pair<int, int>, unsigned long> groups;
  int max_d = 0;
  int max_degree = 0;
  for (const auto& t : terms) {
    if (t.degree < 0 || t.max_factor_degree < 0 || t.max_factor_degree > t.degree) {
      throw DomainError("density term needs 0 <= D(a) <= deg a");
    }
    ++groups[{t.degree, t.max_factor_degree}];
    max_d = std::max(max_d, t.max_factor_degree);
    max_degree = std::max(max_degree, t.degree);
  }
  // P(D) = N_D / q^E_D; every term is put over the common denominator q^(E_max + max_degree).
  const MertensNumerators parts = mertens_numerators(q, max_d, kDefaultExactBitBudget);
  const Integer& e_max = parts.exponent[static_cast<std::size_t>(max_d)];
  Integer numerator = 0;
  for (const auto& [key, count] : groups) {
    const auto [degree, d] = key;
    const Integer shift = e_max - parts.exponent[static_cast<std::size_t>(d)] + (max_degree - degree);
    numerator += parts.numerator[static_cast<std::size_t>(d)] * int_pow(q, shift.get_ui()) * count;
  }
  const Integer denominator = int_pow(q, Integer(e_max + max_degree).get_ui());
  report.holds = numerator <= denominator;
  report.lhs = Rational(numerator, denominator);
  report.lhs.canonicalize();
  return report;
}

ErdosDensityReport verify_erdos_density_inequality(const PrimitiveSetHorizon& s, const FactorSieve& sieve) {
  if (s.q() != sieve.q()) throw FieldMismatch();
  if (s.max_element_degree() > sieve.max_degree()) {
    throw DomainError("sieve covers degree " + std::to_string(sieve.max_degree()) + " but the set reaches degree " +
                      std::to_string(s.max_element_degree()));
  }
  const PrimitivityCertificate& cert = s.certificate();
  if (!cert.primitive) {
    ErdosDensityReport report;
    report.primitive = false;
    report.counterexample = cert.counterexample;
    return report;
  }
  std::vector<DensityTerm> terms;
  terms.reserve(s.size());
  std::vector<PolyIndex> factors;
  for (PolyIndex f : s.elements()) {
    sieve.factor_indices(f, factors);
    const int top = factors.empty() ? 0 : sieve.arith().degree(factors.back());
    terms.push_back({sieve.arith().degree(f), top});
  }
  return erdos_density_lhs(s.q(), terms);
}

DensityProfile density_profile(const PrimitiveSetHorizon& s, int up_to, std::optional<int> tail_start) {
  if (up_to < 0 || up_to > s.horizon()) {
    throw DomainError("profile degree " + std::to_string(up_to) + " outside 0.." + std::to_string(s.horizon()));
  }
  DensityProfile out;
  out.tail_start = tail_start.value_or(up_to / 2);
  if (out.tail_start < 0 || out.tail_start > up_to) throw DomainError("tail window start outside the profile");
  const auto counts = s.degree_counts();
  std::uint64_t cumulative = 0;
  for (int n = 0; n <= up_to; ++n) {
    cumulative += counts[static_cast<std::size_t>(n)];
    Rational r(Integer(static_cast<unsigned long>(cumulative)), monic_count(s.q(), n).up_to_degree);
    r.canonicalize();
    out.running_max.push_back(n == 0 ? r : std::max(out.running_max.back(), r));
    if (n == out.tail_start || (n > out.tail_start && r < out.tail_min)) out.tail_min = r;
    out.ratio.push_back(std::move(r));
  }
  return out;
}

namespace {

// All divisors of f other than 1 and f, from its factor multiset.
void proper_divisors(PolyIndex f, const std::vector<PolyIndex>& factors, const IndexArith& arith,
                     std::vector<PolyIndex>& out) {
  out.assign(1, 1);
  for (std::size_t i = 0; i < factors.size();) {
    std::size_t j = i;
    while (j < factors.size() && factors[j] == factors[i]) ++j;
    const std::size_t base = out.size();
    for (std::size_t b = 0; b < base; ++b) {
      PolyIndex power = out[b];
      for (std::size_t m = i; m < j; ++m) {
        power = arith.mul(power, factors[i]);
        out.push_back(power);
      }
    }
    i = j;
  }
  std::erase_if(out, [f](PolyIndex d) { return d == 1 || d == f; });
}

}  // namespace

PrimitiveSetHorizon random_primitive_set(std::uint32_t q, int horizon, std::uint64_t seed, double offer_rate,
                                         const FactorSieve& sieve) {
  if (sieve.q() != q) throw FieldMismatch();
  if (sieve.max_degree() < horizon) throw DomainError("sieve does not cover the requested horizon");
  if (!(offer_rate > 0 && offer_rate <= 1)) throw DomainError("offer rate must lie in (0, 1]");
  PrimitiveSetHorizon out(q, horizon);
  std::mt19937_64 rng(seed);
  const auto threshold = static_cast<std::uint64_t>(offer_rate * 9007199254740992.0);  // 2^53
  std::vector<PolyIndex> factors;
  std::vector<PolyIndex> divisors;
  const IndexArith& arith = sieve.arith();
  for (int d = 1; d <= horizon; ++d) {
    for (PolyIndex f = arith.first(d); f < arith.end(d); ++f) {
      if ((rng() >> 11) >= threshold) continue;
      sieve.factor_indices(f, factors);
      proper_divisors(f, factors, arith, divisors);
      if (std::none_of(divisors.begin(), divisors.end(), [&](PolyIndex g) { return out.contains(g); })) {
        out.insert_index(f);
      }
    }
  }
  return out;
}

void write_set(std::ostream& out, const PrimitiveSetHorizon& s) {
  out << "q=" << s.q() << ";horizon=" << s.horizon() << '\n';
  for (PolyIndex f : s.elements()) out << MonicPoly::from_index(s.q(), f).to_text() << '\n';
}

PrimitiveSetHorizon read_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("set file is empty");
  std::uint32_t q = 0;
  int horizon = 0;
  {
    const auto semi = line.find(';');
    if (line.rfind("q=", 0) != 0 || semi == std::string::npos || line.compare(semi + 1, 8, "horizon=") != 0) {
      throw ParseError("set header must read q=<q>;horizon=<D>, got '" + line + "'");
    }
    try {
      std::size_t used = 0;
      const unsigned long qv = std::stoul(line.substr(2, semi - 2), &used);
      if (used != semi - 2) throw std::invalid_argument("q");
      const std::string h = line.substr(semi + 9);
      const int hv = std::stoi(h, &used);
      while (used < h.size() && (h[used] == '\r' || h[used] == ' ')) ++used;
      if (used != h.size()) throw std::invalid_argument("horizon");
      q = require_prime(qv);
      horizon = hv;
    } catch (const std::logic_error&) {
      throw ParseError("set header must read q=<q>;horizon=<D>, got '" + line + "'");
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  PrimitiveSetHorizon out(q, horizon);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      out.insert(parse_poly(line, q));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DomainError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace primfield
