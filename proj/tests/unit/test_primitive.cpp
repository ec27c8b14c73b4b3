#include <doctest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "primfield/counting.hpp"
#include "primfield/error.hpp"
#include "primfield/primitive.hpp"

using namespace primfield;

namespace {

MonicPoly P(const char* text) { return parse_poly(text); }

oracle::Poly dense(std::uint32_t q, PolyIndex f) {
  int n = 0;
  while (oracle::ipow(q, n + 1) <= f) ++n;
  return oracle::monic(q, n, f - oracle::ipow(q, n));
}

// least (divisor, multiple) over all ordered pairs, by brute force
std::optional<std::pair<PolyIndex, PolyIndex>> naive_violation(std::uint32_t q, std::vector<PolyIndex> els) {
  std::sort(els.begin(), els.end());
  for (PolyIndex a : els) {
    for (PolyIndex b : els) {
      if (a != b && oracle::divides(dense(q, a), dense(q, b), q)) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("primitive-core") {
  TEST_CASE("primitivity examples") {
    PrimitiveSetHorizon s = PrimitiveSetHorizon::from_polys(2, 3, {P("q=2;0,1"), P("q=2;1,1")});
    CHECK(s.certificate().primitive);
    s.insert(P("q=2;0,1,1"));
    const auto& cert = s.certificate();
    REQUIRE_FALSE(cert.primitive);
    CHECK(cert.counterexample->first == P("q=2;0,1"));
    CHECK(cert.counterexample->second == P("q=2;0,1,1"));
    for (std::uint32_t q : {2u, 3u}) {
      PrimitiveSetHorizon all(q, 4);
      for (const auto& f : enumerate_monic(q, 4)) all.insert(f);
      CHECK(is_primitive(all).primitive);
    }
  }

  TEST_CASE("set invariants") {
    PrimitiveSetHorizon s(2, 4);
    CHECK(s.insert(P("q=2;1,1,1")));
    CHECK_FALSE(s.insert(P("q=2;1,1,1")));
    CHECK_THROWS_AS(s.insert(P("q=2;1,1,1,1,1,1")), DomainError);
    CHECK_THROWS_AS(s.insert(MonicPoly(2, {})), DomainError);
    CHECK_THROWS_AS(s.insert(P("q=3;1,1")), FieldMismatch);
    PrimitiveSetHorizon one(2, 3);
    one.insert(MonicPoly(2, {}));
    CHECK(one.certificate().primitive);
    CHECK_THROWS_AS(one.insert(P("q=2;0,1")), DomainError);
    CHECK_THROWS_AS(erdos_sum(one), DomainError);
    s.insert(P("q=2;0,1"));
    s.insert(P("q=2;1,0,0,1,1"));
    CHECK(s.count_up_to(0) == 0);
    CHECK(s.count_up_to(1) == 1);
    CHECK(s.count_up_to(3) == 2);
    CHECK(s.count_up_to(4) == 3);
    CHECK(s.of_degree(2).size() == 1);
    CHECK(s.max_element_degree() == 4);
  }

  TEST_CASE("primitivity agrees with all-pairs division") {
    std::mt19937_64 rng(7);
    for (std::uint32_t q : {2u, 3u}) {
      const int horizon = q == 2 ? 8 : 5;
      const IndexArith arith(q);
      for (int trial = 0; trial < 150; ++trial) {
        PrimitiveSetHorizon s(q, horizon);
        const std::size_t size = 2 + rng() % 60;
        std::vector<PolyIndex> els;
        for (std::size_t i = 0; i < size; ++i) {
          const int d = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(horizon));
          const PolyIndex f = arith.first(d) + rng() % arith.first(d);
          if (s.insert_index(f)) els.push_back(f);
        }
        const auto cert = is_primitive(s);
        const auto expected = naive_violation(q, els);
        REQUIRE(cert.primitive == !expected.has_value());
        if (expected) {
          REQUIRE(cert.counterexample->first.index() == expected->first);
          REQUIRE(cert.counterexample->second.index() == expected->second);
        }
      }
    }
  }

  TEST_CASE("Erdos sums") {
    CHECK(erdos_sum(PrimitiveSetHorizon::from_polys(2, 1, {P("q=2;0,1"), P("q=2;1,1")})) == 1);
    CHECK(erdos_sum(PrimitiveSetHorizon::from_polys(2, 2, {P("q=2;1,1,1")})) == Rational(1, 8));
    PrimitiveSetHorizon quad(2, 2);
    for (const auto& f : enumerate_monic(2, 2)) quad.insert(f);
    CHECK(erdos_sum(quad) == Rational(1, 2));
    CHECK(erdos_sum(PrimitiveSetHorizon(2, 5)) == 0);
    // every full degree layer contributes 1/n
    for (std::uint32_t q : {2u, 3u}) {
      for (int n = 1; n <= 5; ++n) {
        PrimitiveSetHorizon layer(q, n);
        for (const auto& f : enumerate_monic(q, n)) layer.insert(f);
        CHECK(erdos_sum(layer) == Rational(1, n));
      }
    }
  }

  TEST_CASE("Erdos sum over irreducibles") {
    const auto r = erdos_sum_irreducibles(2, 1e-3);
    CHECK(r.history.at(0).lo == 1);
    CHECK(r.history.at(1).lo == Rational(9, 8));
    CHECK(r.bracket.width() <= Rational(1, 1000));
    CHECK(r.truncation == 1000);
    for (std::size_t i = 1; i < r.history.size(); ++i) REQUIRE(r.history[i - 1].contains(r.history[i]));
    // partial sums against a direct count of irreducibles
    Rational direct = 0;
    for (int d = 1; d <= 8; ++d) {
      direct += Rational(static_cast<long>(oracle::irreducibles(2, d).size()), static_cast<long>(d * oracle::ipow(2, d)));
    }
    CHECK(r.history.at(7).lo == direct);
    CHECK_THROWS_AS(erdos_sum_irreducibles(2, 0), DomainError);
  }

  TEST_CASE("density inequality examples") {
    const FactorSieve sieve = build_factor_sieve(2, 6);
    const auto a = verify_erdos_density_inequality(PrimitiveSetHorizon::from_polys(2, 1, {P("q=2;0,1"), P("q=2;1,1")}), sieve);
    CHECK(a.lhs == Rational(1, 4));
    CHECK(a.holds);
    const auto b = verify_erdos_density_inequality(PrimitiveSetHorizon::from_polys(2, 2, {P("q=2;1,1,1")}), sieve);
    CHECK(b.lhs == Rational(3, 64));
    const auto e = verify_erdos_density_inequality(PrimitiveSetHorizon(2, 3), sieve);
    CHECK(e.lhs == 0);
    CHECK(e.holds);
    const auto bad = verify_erdos_density_inequality(
        PrimitiveSetHorizon::from_polys(2, 2, {P("q=2;0,1"), P("q=2;0,1,1")}), sieve);
    CHECK_FALSE(bad.primitive);
    CHECK_FALSE(bad.holds);
    CHECK_THROWS_AS(verify_erdos_density_inequality(PrimitiveSetHorizon::from_polys(2, 8, {P("q=2;1,0,0,0,0,0,0,0,1")}), sieve),
                    DomainError);
  }

  TEST_CASE("density inequality against direct products") {
    // full layers and random primitive sets; products taken over enumerated irreducibles
    const FactorSieve sieve = build_factor_sieve(2, 9);
    std::vector<Rational> mertens(10, 1);
    for (int d = 1; d <= 9; ++d) {
      mertens[static_cast<std::size_t>(d)] = mertens[static_cast<std::size_t>(d - 1)];
      for (std::size_t i = 0; i < oracle::irreducibles(2, d).size(); ++i) {
        mertens[static_cast<std::size_t>(d)] *= Rational(static_cast<long>(oracle::ipow(2, d) - 1), static_cast<long>(oracle::ipow(2, d)));
      }
    }
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const PrimitiveSetHorizon s = random_primitive_set(2, 9, seed, 0.3, sieve);
      Rational expected = 0;
      std::vector<PolyIndex> factors;
      for (PolyIndex f : s.elements()) {
        sieve.factor_indices(f, factors);
        const long norm = 1L << sieve.arith().degree(f);
        expected += mertens[static_cast<std::size_t>(sieve.arith().degree(factors.back()))] / norm;
      }
      const auto r = verify_erdos_density_inequality(s, sieve);
      CHECK(r.lhs == expected);
      CHECK(r.holds);
    }
  }

  TEST_CASE("density profile") {
    PrimitiveSetHorizon s = PrimitiveSetHorizon::from_polys(2, 3, {P("q=2;0,1"), P("q=2;1,1")});
    const auto p = density_profile(s, 3);
    CHECK(p.ratio.at(0) == 0);
    CHECK(p.ratio.at(1) == Rational(2, 3));
    CHECK(p.ratio.at(3) == Rational(2, 15));
    CHECK(p.running_max.at(3) == Rational(2, 3));
    CHECK(p.tail_start == 1);
    CHECK(p.tail_min == Rational(2, 15));
    CHECK_THROWS_AS(density_profile(s, 4), DomainError);
  }

  TEST_CASE("random primitive sets") {
    for (std::uint32_t q : {2u, 3u}) {
      const int horizon = q == 2 ? 10 : 6;
      const FactorSieve sieve = build_factor_sieve(q, horizon);
      const PrimitiveSetHorizon a = random_primitive_set(q, horizon, 42, 0.2, sieve);
      const PrimitiveSetHorizon b = random_primitive_set(q, horizon, 42, 0.2, sieve);
      CHECK(a.elements() == b.elements());
      CHECK(a.certificate().primitive);
      CHECK(a.size() > 0);
      const PrimitiveSetHorizon c = random_primitive_set(q, horizon, 43, 0.2, sieve);
      CHECK(a.elements() != c.elements());
      if (q == 3) {
        std::vector<PolyIndex> els(a.elements().begin(), a.elements().end());
        CHECK_FALSE(naive_violation(q, els).has_value());
      }
    }
  }

  TEST_CASE("set file round trip") {
    const FactorSieve sieve = build_factor_sieve(3, 5);
    const PrimitiveSetHorizon s = random_primitive_set(3, 5, 9, 0.3, sieve);
    std::stringstream buf;
    write_set(buf, s);
    const PrimitiveSetHorizon back = read_set(buf);
    CHECK(back.q() == 3);
    CHECK(back.horizon() == 5);
    CHECK(back.elements() == s.elements());
    std::istringstream bad("q=4;horizon=3\n");
    CHECK_THROWS_AS(read_set(bad), ParseError);
    std::istringstream junk("q=2;horizon=3\nx^9\n");
    CHECK_THROWS_AS(read_set(junk), ParseError);
  }
}
