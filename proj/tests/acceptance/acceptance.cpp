// One PASS/FAIL line per acceptance criterion. With no arguments every
// criterion runs; otherwise only the numbers given. Exit status is 0 iff every
// selected criterion passed.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "primfield/constructions.hpp"
#include "primfield/counting.hpp"
#include "primfield/irreducible.hpp"
#include "primfield/primitive.hpp"
#include "primfield/sieve.hpp"

using namespace primfield;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Golden values from the first verified run.
constexpr double kMertensNormalized30 = 0.9835616125807;  // e^gamma * 30 * prod_{deg p <= 30} (1 - 2^-deg p)
constexpr double kErdosIrreduciblesMid = 1.4671607237;  // midpoint of the D = 1000 bracket, q = 2
constexpr std::uint64_t kGoldenK0 = 7;
constexpr int kGoldenBesicovitchLevel = 18;

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

const MpConstruction& mp_at_40() {
  static const MpConstruction mp = mp_construct(2, GrowthFunction::powlog(0.1), 40);
  return mp;
}

// 1. count table against sieve enumeration bucketed by number of factors
Verdict counting_oracle() {
  Verdict v;
  std::ostringstream d;
  for (auto [q, N] : {std::pair<std::uint32_t, int>{2, 14}, {3, 9}}) {
    const CountTable table = build_count_table(q, N);
    const FactorSieve sieve = build_factor_sieve(q, N);
    std::vector<PolyIndex> factors;
    std::uint64_t cells = 0;
    for (int n = 1; n <= N; ++n) {
      std::vector<std::uint64_t> by_omega(static_cast<std::size_t>(n) + 1, 0);
      for (PolyIndex f = sieve.arith().first(n); f < sieve.arith().end(n); ++f) {
        sieve.factor_indices(f, factors);
        bool squarefree = true;
        for (std::size_t i = 1; i < factors.size(); ++i) squarefree = squarefree && factors[i] != factors[i - 1];
        if (squarefree) ++by_omega[factors.size()];
      }
      for (int k = 0; k <= n; ++k) {
        ++cells;
        if (table.at(n, k) != Integer(static_cast<unsigned long>(by_omega[static_cast<std::size_t>(k)]))) {
          v.pass = false;
          d << "mismatch q=" << q << " n=" << n << " k=" << k << "; ";
        }
      }
    }
    d << "q=" << q << " N=" << N << ": " << cells << " cells; ";
  }
  v.detail = d.str();
  return v;
}

// 2. pi'_q(n) against irreducibility tests over every monic polynomial
Verdict gauss_formula() {
  Verdict v;
  std::ostringstream d;
  for (auto [q, N] : {std::pair<std::uint32_t, int>{2, 10}, {3, 10}, {5, 7}}) {
    for (int n = 1; n <= N; ++n) {
      std::uint64_t found = 0;
      for (const MonicPoly& f : enumerate_monic(q, n)) found += is_irreducible(f) ? 1 : 0;
      if (pi_prime(q, n) != Integer(static_cast<unsigned long>(found))) {
        v.pass = false;
        d << "mismatch q=" << q << " n=" << n << "; ";
      }
    }
    d << "q=" << q << " n<=" << N << " ok; ";
  }
  v.detail = d.str();
  return v;
}

// 3. Hardy-Ramanujan bound over 1 <= k <= n <= 200
Verdict hardy_ramanujan() {
  Verdict v;
  std::ostringstream d;
  for (std::uint64_t q : {2u, 3u}) {
    const CountTable table = build_count_table(q, 200);
    const HardyRamanujanReport r = verify_hr_bound(table);
    if (!r.violations.empty() || !r.inconclusive.empty() || !r.complete) v.pass = false;
    d << "q=" << q << ": " << r.checked << " cells, " << r.violations.size() << " violations, " << r.inconclusive.size()
      << " undecided, max ratio ~" << fmt(r.max_ratio, 4) << "; ";
  }
  v.detail = d.str();
  return v;
}

// 4. recurrence inequality over 2 <= k <= n <= 60
Verdict recurrence() {
  Verdict v;
  std::ostringstream d;
  for (std::uint64_t q : {2u, 3u}) {
    const RecurrenceReport r = verify_recurrence_bound(build_count_table(q, 60));
    if (!r.violations.empty() || !r.complete) v.pass = false;
    d << "q=" << q << ": " << r.checked << " cells, " << r.violations.size() << " violations; ";
  }
  v.detail = d.str();
  return v;
}

// 5. G(z) in [e^-3, 1], G(0) = 1, non-increasing, on z = 0, 0.05, ..., 2
Verdict g_bounds() {
  Verdict v;
  std::ostringstream d;
  const double lower = std::exp(-3.0) - 1e-6;
  const double upper = 1 + 1e-6;
  double previous = 0;
  int above = 0;
  int below = 0;
  int rises = 0;
  double first_rise = -1;
  double first_above = -1;
  double peak = 0;
  for (int i = 0; i <= 40; ++i) {
    const double z = 0.05 * i;
    const GEvaluation g = evaluate_G(2, z, 1e-6);
    if (i == 0 && !g.value.contains(1.0)) {
      v.pass = false;
      d << "G(0) bracket misses 1; ";
    }
    if (g.value.upper_double() > upper) {
      ++above;
      if (first_above < 0) first_above = z;
    }
    if (g.value.lower_double() < lower) ++below;
    const double mid = g.value.midpoint();
    if (i > 0 && mid > previous) {
      ++rises;
      if (first_rise < 0) first_rise = z;
    }
    peak = std::max(peak, mid);
    previous = mid;
  }
  if (above || below || rises) v.pass = false;
  d << above << " points above 1 (first z=" << fmt(first_above) << ", peak " << fmt(peak, 8) << "), " << below
    << " below e^-3, " << rises << " increases (first at z=" << fmt(first_rise) << "); G(2) ~"
    << fmt(evaluate_G(2, 2.0, 1e-6).value.midpoint(), 7);
  v.detail = d.str();
  return v;
}

// 6. e^gamma n P(n) approaches 1
Verdict mertens_trend() {
  Verdict v;
  auto gap = [](int n) {
    const MertensResult r = mertens_product(2, n);
    return std::abs(r.normalized.midpoint() - 1);
  };
  const double g10 = gap(10);
  const double g40 = gap(40);
  const MertensResult r30 = mertens_product(2, 30);
  const double at30 = r30.normalized.midpoint();
  v.pass = g40 < g10 && std::abs(at30 - 1) <= 0.1 && std::abs(at30 - kMertensNormalized30) < 1e-9 &&
           r30.normalized.width() < 1e-20;
  v.detail = "|gap| n=10: " + fmt(g10) + ", n=40: " + fmt(g40) + "; n=30 value " + r30.normalized.lo_string(12) +
             " (golden " + fmt(kMertensNormalized30, 13) + ")";
  return v;
}

// 7. sum_a q^-deg a prod_{deg p <= D(a)} (1 - q^-deg p) <= 1
Verdict density_inequality() {
  Verdict v;
  std::ostringstream d;
  Rational worst = 0;
  auto record = [&](const ErdosDensityReport& r, const std::string& what) {
    if (!r.primitive || !r.holds) {
      v.pass = false;
      d << what << " fails; ";
    }
    if (r.lhs > worst) worst = r.lhs;
  };
  const FactorSieve sieve2 = build_factor_sieve(2, 16);
  const FactorSieve sieve3 = build_factor_sieve(3, 11);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const bool three = seed % 3 == 0;
    const FactorSieve& sieve = three ? sieve3 : sieve2;
    const int horizon = three ? 6 + static_cast<int>(seed % 6) : 10 + static_cast<int>(seed % 7);
    const double rate = 0.05 + 0.45 * static_cast<double>(seed % 10) / 9.0;
    const PrimitiveSetHorizon s = random_primitive_set(sieve.q(), horizon, seed, rate, sieve);
    record(verify_erdos_density_inequality(s, sieve), "random seed " + std::to_string(seed));
  }
  d << "100 random sets; ";
  const BesicovitchResult bes = besicovitch_construct(2, 0.25, 18);
  const FactorSieve sieve18 = build_factor_sieve(2, 18);
  const ErdosDensityReport b = verify_erdos_density_inequality(bes.set, sieve18);
  record(b, "besicovitch");
  const ErdosDensityReport m = erdos_density_lhs(2, mp_density_terms(mp_at_40()));
  record(m, "mp");
  d << "besicovitch lhs ~" << fmt(b.lhs.get_d()) << ", mp lhs ~" << fmt(m.lhs.get_d()) << "; ";
  for (auto [q, D] : {std::pair<std::uint32_t, int>{2, 16}, {3, 11}}) {
    const FactorSieve& sieve = q == 2 ? sieve2 : sieve3;
    PrimitiveSetHorizon irr(q, D);
    for (int n = 1; n <= D; ++n) {
      for (PolyIndex p : irreducibles_of_degree(q, n)) irr.insert_index(p);
    }
    const ErdosDensityReport r = verify_erdos_density_inequality(irr, sieve);
    record(r, "irreducible prefix q=" + std::to_string(q));
    d << "irreducibles q=" << q << " deg<=" << D << " lhs ~" << fmt(r.lhs.get_d()) << "; ";
    for (int n = 1; n <= D; ++n) {
      PrimitiveSetHorizon layer(q, n);
      for (PolyIndex f = layer.arith().first(n); f < layer.arith().end(n); ++f) layer.insert_index(f);
      record(verify_erdos_density_inequality(layer, sieve), "degree layer q=" + std::to_string(q));
    }
  }
  d << "full degree layers ok; max lhs ~" << fmt(worst.get_d());
  v.detail = d.str();
  return v;
}

// 8. two-sided degree bracket for the k-th irreducible, k in [10^3, 10^6]
Verdict degree_brackets() {
  const DegreeBracketReport r = check_degree_brackets(2, 1000, 1000000, 0.5);
  Verdict v;
  v.pass = r.violations() == 0;
  v.detail = std::to_string(r.violations()) + " violations; worst margins lower " + fmt(r.worst_lower_margin, 4) +
             " (k=" + std::to_string(r.worst_lower_k) + "), upper " + fmt(r.worst_upper_margin, 4) + " (k=" +
             std::to_string(r.worst_upper_k) + ")";
  return v;
}

// 9. high-upper-density construction, q = 2, eps = 0.25, horizon 18
Verdict besicovitch() {
  const BesicovitchResult r = besicovitch_construct(2, 0.25, 18);
  Verdict v;
  const auto& level = r.levels.front();
  v.pass = r.set.certificate().primitive && r.ratios_ok() && level.density_ratio >= Rational(1, 4) &&
           level.degree == kGoldenBesicovitchLevel;
  v.detail = std::to_string(r.levels.size()) + " level(s), first n=" + std::to_string(level.degree) + ", A/M = " +
             level.density_ratio.get_str() + ", " + std::to_string(r.set.size()) + " members, scope: " +
             BesicovitchResult::certificate_scope;
  return v;
}

// 10. t-sequence certificate and the explicit slice construction to degree 40
Verdict mp_construction() {
  Verdict v;
  const TSequence seq = build_t_sequence(2, GrowthFunction::powlog(0.1));
  const TSequenceCheck tc = verify_t_sequence(seq);
  const MpConstruction& mp = mp_at_40();
  const SliceCheck sc = verify_mp_slices(mp);
  const bool primitive = mp.set.certificate().primitive;
  const auto counts = mp_counts_exact(seq, 40);
  const MpDiagnostics diag = mp_diagnostics(seq, counts, 40);
  v.pass = tc.ok() && seq.k0 == kGoldenK0 && mp.sequence.certified() && primitive && sc.ok();
  std::ostringstream d;
  d << "k0=" << seq.k0 << ", partial+tail ~" << fmt(Rational(seq.partial_sum + seq.tail_bound).get_d()) << " < 1/2; explicit k0="
    << mp.sequence.k0 << ", " << mp.set.size() << " members, primitive=" << primitive << ", " << sc.checked
    << " re-verified, " << sc.failures.size() << " failures; R(40) ~" << fmt(diag.rows.back().r.midpoint(), 4);
  if (diag.band_b) d << ", band B [" << fmt(diag.band_b->lo.get_d(), 4) << ", " << fmt(diag.band_b->hi.get_d(), 4) << "]";
  d << " (reported, not asserted)";
  v.detail = d.str();
  return v;
}

// 11. Poisson tail inequalities at x = 5, 10, 20
Verdict norton() {
  Verdict v;
  std::ostringstream d;
  for (double x : {5.0, 10.0, 20.0}) {
    const NortonCheck c = norton_check(x, 0.5, 1.5, 256);
    if (!c.low_holds || !c.high_holds) v.pass = false;
    d << "x=" << x << ": lower " << (c.low_holds ? "ok" : "FAILS") << ", upper " << (c.high_holds ? "ok" : "FAILS");
    if (!c.high_holds) {
      d << " (" << fmt(c.high_lhs.midpoint()) << " vs " << fmt(c.high_rhs.midpoint()) << "; with factor beta "
        << (c.high_holds_with_beta ? "holds" : "fails") << ")";
    }
    d << "; ";
  }
  v.detail = d.str();
  return v;
}

// 12. Erdos sum over the irreducibles to width 1e-3
Verdict erdos_irreducibles() {
  Verdict v;
  const ErdosIrreducibleBracket r = erdos_sum_irreducibles(2, 1e-3);
  bool nested = true;
  for (std::size_t i = 1; i < r.history.size(); ++i) nested = nested && r.history[i - 1].contains(r.history[i]);
  const Rational width = r.bracket.width();
  const double mid = Rational((r.bracket.lo + r.bracket.hi) / 2).get_d();
  v.pass = nested && width < Rational(1e-3) && std::abs(mid - kErdosIrreduciblesMid) < 1e-9;
  v.detail = "D=" + std::to_string(r.truncation) + ", width " + width.get_str() + ", nested=" + (nested ? "yes" : "no") +
             ", midpoint ~" + fmt(mid, 11);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria = {
      {1, {"count table equals enumeration", counting_oracle}},
      {2, {"irreducible counts", gauss_formula}},
      {3, {"Hardy-Ramanujan bound to n=200", hardy_ramanujan}},
      {4, {"recurrence inequality to n=60", recurrence}},
      {5, {"G(z) range and monotonicity", g_bounds}},
      {6, {"Mertens product trend", mertens_trend}},
      {7, {"Erdos density inequality", density_inequality}},
      {8, {"degree brackets for the k-th irreducible", degree_brackets}},
      {9, {"high-density construction", besicovitch}},
      {10, {"slice construction to degree 40", mp_construction}},
      {11, {"Poisson tail inequalities", norton}},
      {12, {"Erdos sum over irreducibles", erdos_irreducibles}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [n, _] : criteria) selected.push_back(n);
  }
  bool all = true;
  for (int n : selected) {
    const auto it = criteria.find(n);
    if (it == criteria.end()) {
      std::cerr << "no criterion " << n << "\n";
      return 1;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && v.pass;
    std::cout << "criterion " << n << " [" << (v.pass ? "PASS" : "FAIL") << "] " << it->second.first << ": "
              << v.detail << " (" << fmt(secs, 3) << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
