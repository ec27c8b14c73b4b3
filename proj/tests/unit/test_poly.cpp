#include <doctest.h>

#include "oracle.hpp"
#include "primfield/error.hpp"
#include "primfield/poly.hpp"

using namespace primfield;

namespace {

MonicPoly from_dense(std::uint32_t q, const oracle::Poly& dense) {
  return MonicPoly(q, std::vector<std::uint32_t>(dense.begin(), dense.end() - 1));
}

oracle::Poly to_dense(const MonicPoly& f) {
  oracle::Poly out;
  for (int i = 0; i <= f.degree(); ++i) out.push_back(f.coefficient(i));
  return out;
}

}  // namespace

TEST_SUITE("field-poly") {
  TEST_CASE("field elements") {
    const FieldElement a(3, 5);
    const FieldElement b(4, 5);
    CHECK((a + b).value() == 2);
    CHECK((a - b).value() == 4);
    CHECK((a * b).value() == 2);
    CHECK((a * a.inverse()).value() == 1);
    CHECK_THROWS_AS(FieldElement(5, 5), DomainError);
    CHECK_THROWS_AS(FieldElement(1, 4), DomainError);
    CHECK_THROWS_AS(a + FieldElement(1, 7), FieldMismatch);
  }

  TEST_CASE("multiplication examples") {
    CHECK(poly_mul(parse_poly("2", 2), parse_poly("3", 2)).to_display() == "x^2+x");
    const MonicPoly one(2);
    const MonicPoly f = parse_poly("q=2;1,0,1,1");
    CHECK(poly_mul(one, f) == f);
    const MonicPoly g = parse_poly("q=2;1,1,1");
    CHECK(poly_mul(g, g) == parse_poly("q=2;1,0,1,0,1"));
    CHECK_THROWS_AS(poly_mul(g, MonicPoly(3)), FieldMismatch);
    CHECK_THROWS_WITH(poly_mul(g, MonicPoly(3)), "field mismatch");
  }

  TEST_CASE("division examples") {
    const auto r1 = poly_divrem(parse_poly("q=2;0,1,1"), parse_poly("q=2;0,1"));
    CHECK(r1.exact());
    CHECK(r1.monic_quotient(2)->to_display() == "x+1");
    const auto r2 = poly_divrem(parse_poly("q=2;1,1,1"), parse_poly("q=2;0,1"));
    CHECK(r2.remainder == std::vector<std::uint32_t>{1});
    CHECK(divides(parse_poly("q=2;1,1,1"), parse_poly("q=2;1,0,1,0,1")));
    CHECK_THROWS_AS(exact_quotient(parse_poly("q=2;1,1,1"), parse_poly("q=2;0,1")), DomainError);
  }

  TEST_CASE("mul and divrem agree with schoolbook arithmetic") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
      for (int da = 0; da <= 3; ++da) {
        for (int db = 0; db <= 3; ++db) {
          for (std::uint64_t i = 0; i < oracle::ipow(q, da); ++i) {
            for (std::uint64_t j = 0; j < oracle::ipow(q, db); ++j) {
              const auto a = oracle::monic(q, da, i);
              const auto b = oracle::monic(q, db, j);
              const MonicPoly pa = from_dense(q, a);
              const MonicPoly pb = from_dense(q, b);
              REQUIRE(to_dense(poly_mul(pa, pb)) == oracle::mul(a, b, q));
              const DivRem dr = poly_divrem(pa, pb);
              REQUIRE(dr.remainder == oracle::mod(a, b, q));
            }
          }
        }
      }
    }
  }

  TEST_CASE("enumeration order and budget") {
    std::vector<std::string> seen;
    for (const auto& f : enumerate_monic(2, 1)) seen.push_back(f.to_display());
    CHECK(seen == std::vector<std::string>{"x", "x+1"});
    seen.clear();
    for (const auto& f : enumerate_monic(2, 2)) seen.push_back(f.to_display());
    CHECK(seen.size() == 4);
    CHECK(seen.front() == "x^2");
    CHECK(seen.back() == "x^2+x+1");
    CHECK(enumerate_monic(3, 2).size() == 9);
    CHECK_THROWS_AS(enumerate_monic(2, 40, 1000), BudgetExceeded);
  }

  TEST_CASE("index round trip, exhaustive") {
    // q = 5 stops at degree 9 (5^12 alone is 2.4e8 polynomials)
    for (std::uint32_t q : {2u, 3u, 5u}) {
      const int top = q == 5 ? 9 : 12;
      for (int n = 0; n <= top; ++n) {
        PolyIndex expected = oracle::ipow(q, n);
        for (const auto& f : enumerate_monic(q, n)) {
          REQUIRE(f.index() == expected);
          REQUIRE(MonicPoly::from_index(q, expected) == f);
          REQUIRE(parse_poly(f.to_text()) == f);
          ++expected;
        }
      }
    }
  }

  TEST_CASE("parsing") {
    CHECK(parse_poly("7", 2).to_display() == "x^2+x+1");
    CHECK(parse_poly("q=3;1,0,1").to_display() == "x^2+1");
    CHECK_THROWS_AS(parse_poly("q=3;1,0,1", 2), FieldMismatch);
    CHECK_THROWS_AS(parse_poly("q=2;1,0"), ParseError);
    CHECK_THROWS_AS(parse_poly("q=2;2,1"), ParseError);
    CHECK_THROWS_AS(parse_poly("banana", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("3"), ParseError);
    CHECK_THROWS_AS(parse_poly("q=4;1,1"), ParseError);
  }

  TEST_CASE("irreducibility examples") {
    CHECK(is_irreducible(parse_poly("q=2;1,1,1")));
    CHECK_FALSE(is_irreducible(parse_poly("q=2;1,0,1")));
    CHECK(is_irreducible(parse_poly("q=3;1,0,1")));
    CHECK_THROWS_WITH(is_irreducible(MonicPoly(2)), "units are neither irreducible nor reducible here");
  }

  TEST_CASE("irreducibility agrees with trial division") {
    for (std::uint32_t q : {2u, 3u}) {
      // literal trial division by all lower degrees for small n
      for (int n = 1; n <= 6; ++n) {
        for (const auto& f : oracle::all_monic(q, n)) {
          REQUIRE(is_irreducible(from_dense(q, f)) == oracle::irreducible_by_trial(f, q));
        }
      }
      // product enumeration for the rest
      for (int n = 7; n <= 10; ++n) {
        const auto red = oracle::reducibles(q, n);
        for (const auto& f : oracle::all_monic(q, n)) {
          REQUIRE(is_irreducible(from_dense(q, f)) == (red.count(f) == 0));
        }
      }
    }
  }

  TEST_CASE("index arithmetic") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
      const IndexArith arith(q);
      for (int da = 0; da <= 3; ++da) {
        for (int db = 0; db <= 3; ++db) {
          for (PolyIndex a = arith.first(da); a < arith.end(da); ++a) {
            for (PolyIndex b = arith.first(db); b < arith.end(db); ++b) {
              const PolyIndex p = arith.mul(a, b);
              REQUIRE(p == poly_mul(MonicPoly::from_index(q, a), MonicPoly::from_index(q, b)).index());
              REQUIRE(arith.exact_div(p, b) == a);
              REQUIRE(arith.degree(p) == da + db);
            }
          }
        }
      }
      CHECK_FALSE(arith.divides(arith.first(1), arith.first(1) + 1));
    }
  }
}
