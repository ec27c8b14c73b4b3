#include "primfield/poly.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>

#include "primfield/error.hpp"

namespace primfield {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t require_prime(std::uint64_t q) {
  if (q >= (std::uint64_t{1} << 31)) throw DomainError("field size must be a prime below 2^31, got " + std::to_string(q));
  if (!is_prime(q)) throw DomainError("field size must be prime, got " + std::to_string(q));
  return static_cast<std::uint32_t>(q);
}

namespace {

std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exponent, std::uint32_t p) {
  std::uint32_t result = 1 % p;
  while (exponent > 0) {
    if (exponent & 1U) result = mod_mul(result, base, p);
    base = mod_mul(base, base, p);
    exponent >>= 1U;
  }
  return result;
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) { return mod_pow(a, p - 2, p); }

}  // namespace

FieldElement::FieldElement(std::uint32_t value, std::uint32_t modulus)
    : value_(value), modulus_(require_prime(modulus)) {
  if (value >= modulus) throw DomainError("field element out of range");
}

void FieldElement::check_same_field(FieldElement other) const {
  if (other.modulus_ != modulus_) throw FieldMismatch();
}

FieldElement FieldElement::operator+(FieldElement other) const {
  check_same_field(other);
  return {Trusted{}, static_cast<std::uint32_t>((std::uint64_t{value_} + other.value_) % modulus_), modulus_};
}

FieldElement FieldElement::operator-(FieldElement other) const {
  check_same_field(other);
  return {Trusted{}, static_cast<std::uint32_t>((std::uint64_t{value_} + modulus_ - other.value_) % modulus_),
          modulus_};
}

FieldElement FieldElement::operator*(FieldElement other) const {
  check_same_field(other);
  return {Trusted{}, mod_mul(value_, other.value_, modulus_), modulus_};
}

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw DomainError("zero has no inverse");
  return {Trusted{}, mod_inverse(value_, modulus_), modulus_};
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers. A Dense vector holds every coefficient including
// the leading one; the zero polynomial is the empty vector.

namespace {

using Dense = std::vector<std::uint32_t>;

void trim(Dense& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Dense dense_of(const MonicPoly& f) {
  Dense out(f.low_coefficients().begin(), f.low_coefficients().end());
  out.push_back(1);
  return out;
}

Dense dense_mul(const Dense& a, const Dense& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    }
  }
  Dense out(acc.begin(), acc.end());
  trim(out);
  return out;
}

// a = quotient * b + remainder; b must be non-zero.
void dense_divrem(const Dense& a, const Dense& b, std::uint32_t p, Dense* quotient, Dense* remainder) {
  Dense r = a;
  trim(r);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = mod_inverse(b.back(), p);
  Dense quot;
  if (r.size() >= b.size()) quot.assign(r.size() - db, 0);
  while (r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const std::uint32_t coef = mod_mul(r.back(), lead_inv, p);
    quot[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::uint32_t sub = mod_mul(coef, b[i], p);
      r[shift + i] = (r[shift + i] + p - sub) % p;
    }
    trim(r);
  }
  if (quotient != nullptr) *quotient = std::move(quot);
  if (remainder != nullptr) *remainder = std::move(r);
}

Dense dense_mod(const Dense& a, const Dense& m, std::uint32_t p) {
  Dense r;
  dense_divrem(a, m, p, nullptr, &r);
  return r;
}

Dense dense_gcd(Dense a, Dense b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = dense_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Dense dense_powmod(Dense base, std::uint64_t exponent, const Dense& m, std::uint32_t p) {
  Dense result{1};
  base = dense_mod(base, m, p);
  while (exponent > 0) {
    if (exponent & 1U) result = dense_mod(dense_mul(result, base, p), m, p);
    exponent >>= 1U;
    if (exponent > 0) base = dense_mod(dense_mul(base, base, p), m, p);
  }
  return result;
}

Dense dense_sub(Dense a, const Dense& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

MonicPoly::MonicPoly(std::uint32_t q) : q_(require_prime(q)) {}

MonicPoly::MonicPoly(std::uint32_t q, std::vector<std::uint32_t> low) : q_(require_prime(q)), coeffs_(std::move(low)) {
  for (std::uint32_t c : coeffs_) {
    if (c >= q_) throw DomainError("coefficient " + std::to_string(c) + " out of range for q=" + std::to_string(q_));
  }
}

MonicPoly MonicPoly::from_index(std::uint32_t q, PolyIndex index) {
  require_prime(q);
  if (index == 0) throw DomainError("0 is not a polynomial index");
  std::vector<std::uint32_t> digits;
  while (index > 0) {
    digits.push_back(static_cast<std::uint32_t>(index % q));
    index /= q;
  }
  if (digits.back() != 1) throw DomainError("index is not in [q^d, 2 q^d) for any degree d");
  digits.pop_back();
  return {detail::Unchecked{}, q, std::move(digits)};
}

MonicPoly MonicPoly::from_index(std::uint32_t q, const Integer& index) {
  require_prime(q);
  if (index <= 0) throw DomainError("polynomial indices are positive");
  std::vector<std::uint32_t> digits;
  Integer rest = index;
  while (rest > 0) {
    digits.push_back(static_cast<std::uint32_t>(mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), q)));
  }
  if (digits.back() != 1) throw DomainError("index is not in [q^d, 2 q^d) for any degree d");
  digits.pop_back();
  return {detail::Unchecked{}, q, std::move(digits)};
}

std::uint32_t MonicPoly::coefficient(int i) const {
  if (i < 0 || i > degree()) return 0;
  return i == degree() ? 1U : coeffs_[static_cast<std::size_t>(i)];
}

PolyIndex MonicPoly::index() const {
  __extension__ using Wide = unsigned __int128;
  Wide acc = 1;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * q_ + *it;
    if (acc > std::numeric_limits<PolyIndex>::max()) {
      throw BudgetExceeded("polynomial index exceeds 64 bits (degree " + std::to_string(degree()) + ")");
    }
  }
  return static_cast<PolyIndex>(acc);
}

Integer MonicPoly::big_index() const {
  Integer acc = 1;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q_ + *it;
  return acc;
}

Integer MonicPoly::norm() const { return int_pow(q_, static_cast<unsigned long>(degree())); }

std::string MonicPoly::to_text() const {
  std::string out = "q=" + std::to_string(q_) + ";";
  for (std::uint32_t c : coeffs_) out += std::to_string(c) + ",";
  out += "1";
  return out;
}

std::string MonicPoly::to_display() const {
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const std::uint32_t c = coefficient(i);
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (c != 1 || i == 0) out += std::to_string(c);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b) {
  if (a.q_ != b.q_) return a.q_ <=> b.q_;
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (int i = a.degree() - 1; i >= 0; --i) {
    if (auto c = a.coeffs_[static_cast<std::size_t>(i)] <=> b.coeffs_[static_cast<std::size_t>(i)]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = strip(s);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

MonicPoly parse_poly(std::string_view text, std::optional<std::uint32_t> default_q) {
  text = strip(text);
  if (text.empty()) throw ParseError("empty polynomial text");
  if (text.rfind("q=", 0) != 0) {
    if (!default_q) throw ParseError("a bare polynomial index needs a field size q");
    try {
      return MonicPoly::from_index(*default_q, Integer(std::string(text), 10));
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed polynomial index: '" + std::string(text) + "'");
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw ParseError("polynomial text lacks ';': '" + std::string(text) + "'");
  const std::uint64_t q64 = parse_u64(text.substr(2, semi - 2), "field size");
  std::uint32_t q = 0;
  try {
    q = require_prime(q64);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  if (default_q && *default_q != q) throw FieldMismatch();
  std::vector<std::uint32_t> coeffs;
  std::string_view rest = text.substr(semi + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::uint64_t c = parse_u64(rest.substr(0, comma), "coefficient");
    if (c >= q) throw ParseError("coefficient " + std::to_string(c) + " out of range for q=" + std::to_string(q));
    coeffs.push_back(static_cast<std::uint32_t>(c));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (coeffs.back() != 1) throw ParseError("polynomial text must end with the leading coefficient 1");
  coeffs.pop_back();
  return {detail::Unchecked{}, q, std::move(coeffs)};
}

MonicPoly poly_mul(const MonicPoly& a, const MonicPoly& b) {
  if (a.q() != b.q()) throw FieldMismatch();
  Dense prod = dense_mul(dense_of(a), dense_of(b), a.q());
  prod.pop_back();
  return {detail::Unchecked{}, a.q(), std::move(prod)};
}

std::optional<MonicPoly> DivRem::monic_quotient(std::uint32_t q) const {
  if (quotient.empty() || quotient.back() != 1) return std::nullopt;
  std::vector<std::uint32_t> low(quotient.begin(), quotient.end() - 1);
  return MonicPoly(detail::Unchecked{}, q, std::move(low));
}

DivRem poly_divrem(const MonicPoly& a, const MonicPoly& b) {
  if (a.q() != b.q()) throw FieldMismatch();
  DivRem out;
  dense_divrem(dense_of(a), dense_of(b), a.q(), &out.quotient, &out.remainder);
  return out;
}

bool divides(const MonicPoly& divisor, const MonicPoly& f) { return poly_divrem(f, divisor).exact(); }

MonicPoly exact_quotient(const MonicPoly& f, const MonicPoly& divisor) {
  DivRem dr = poly_divrem(f, divisor);
  if (!dr.exact()) throw DomainError(divisor.to_text() + " does not divide " + f.to_text());
  return *dr.monic_quotient(f.q());
}

bool is_irreducible(const MonicPoly& f) {
  const int n = f.degree();
  if (n == 0) throw DomainError("units are neither irreducible nor reducible here");
  if (n == 1) return true;
  const std::uint32_t p = f.q();
  const Dense modulus = dense_of(f);
  const Dense x{0, 1};
  const std::vector<int> primes = prime_divisors(n);
  // frob[i] = x^(q^i) mod f
  std::vector<Dense> frob;
  frob.reserve(static_cast<std::size_t>(n) + 1);
  frob.push_back(x);
  for (int i = 1; i <= n; ++i) frob.push_back(dense_powmod(frob.back(), p, modulus, p));
  if (!dense_sub(frob[static_cast<std::size_t>(n)], x, p).empty()) return false;
  for (int r : primes) {
    const Dense g = dense_gcd(modulus, dense_sub(frob[static_cast<std::size_t>(n / r)], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

MonicRange::iterator::iterator(std::uint32_t q, int degree, std::uint64_t remaining)
    : digits_(static_cast<std::size_t>(degree), 0), q_(q), remaining_(remaining) {
  if (remaining_ > 0) current_.emplace(detail::Unchecked{}, q_, digits_);
}

MonicRange::iterator& MonicRange::iterator::operator++() {
  --remaining_;
  if (remaining_ == 0) {
    current_.reset();
    return *this;
  }
  for (auto& d : digits_) {
    if (++d < q_) break;
    d = 0;
  }
  current_.emplace(detail::Unchecked{}, q_, digits_);
  return *this;
}

MonicRange enumerate_monic(std::uint32_t q, int degree, std::uint64_t budget) {
  require_prime(q);
  if (degree < 0) throw DomainError("degree must be non-negative");
  const Integer count = int_pow(q, static_cast<unsigned long>(degree));
  if (count > Integer(std::to_string(budget))) {
    throw BudgetExceeded("enumerating degree " + std::to_string(degree) + " needs " + to_decimal(count) +
                         " polynomials, budget allows " + std::to_string(budget));
  }
  return {q, degree, count.get_ui()};
}

// ---------------------------------------------------------------------------

IndexArith::IndexArith(std::uint32_t q) : q_(require_prime(q)) {
  constexpr PolyIndex kLimit = PolyIndex{1} << 62;
  PolyIndex power = 1;
  while (true) {
    powers_.push_back(power);
    if (power > kLimit / q_) break;
    power *= q_;
  }
  max_degree_ = static_cast<int>(powers_.size()) - 1;
}

bool IndexArith::valid(PolyIndex index) const {
  if (index == 0) return false;
  const int d = degree(index);
  return index < 2 * powers_[static_cast<std::size_t>(d)];
}

int IndexArith::degree(PolyIndex index) const {
  if (q_ == 2) return std::bit_width(index) - 1;
  auto it = std::upper_bound(powers_.begin(), powers_.end(), index);
  return static_cast<int>(it - powers_.begin()) - 1;
}

namespace {

constexpr int kMaxDigits = 64;

int decode(PolyIndex index, std::uint32_t q, std::uint32_t* digits) {
  int n = 0;
  while (index > 0) {
    digits[n++] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  return n;
}

PolyIndex encode(const std::uint32_t* digits, int n, std::uint32_t q) {
  PolyIndex acc = 0;
  for (int i = n - 1; i >= 0; --i) acc = acc * q + digits[i];
  return acc;
}

}  // namespace

PolyIndex IndexArith::mul(PolyIndex a, PolyIndex b) const {
  if (q_ == 2) {
    if (std::bit_width(a) < std::bit_width(b)) std::swap(a, b);
    PolyIndex out = 0;
    while (b != 0) {
      const int shift = std::countr_zero(b);
      out ^= a << shift;
      b &= b - 1;
    }
    return out;
  }
  std::uint32_t da[kMaxDigits];
  std::uint32_t db[kMaxDigits];
  std::uint64_t acc[2 * kMaxDigits] = {};
  const int na = decode(a, q_, da);
  const int nb = decode(b, q_, db);
  for (int i = 0; i < na; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; j < nb; ++j) acc[i + j] = (acc[i + j] + std::uint64_t{da[i]} * db[j]) % q_;
  }
  std::uint32_t out[2 * kMaxDigits];
  const int n = na + nb - 1;
  for (int i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(acc[i]);
  return encode(out, n, q_);
}

std::optional<PolyIndex> IndexArith::exact_div(PolyIndex f, PolyIndex divisor) const {
  if (q_ == 2) {
    const int dd = std::bit_width(divisor) - 1;
    PolyIndex quotient = 0;
    int df = std::bit_width(f) - 1;
    while (df >= dd) {
      quotient |= PolyIndex{1} << (df - dd);
      f ^= divisor << (df - dd);
      df = std::bit_width(f) - 1;
    }
    if (f != 0) return std::nullopt;
    return quotient;
  }
  std::uint32_t r[kMaxDigits];
  std::uint32_t d[kMaxDigits];
  std::uint32_t quot[kMaxDigits] = {};
  const int nf = decode(f, q_, r);
  const int nd = decode(divisor, q_, d);
  if (nf < nd) return std::nullopt;
  // divisor is monic: d[nd - 1] == 1
  for (int shift = nf - nd; shift >= 0; --shift) {
    const std::uint32_t coef = r[shift + nd - 1];
    quot[shift] = coef;
    if (coef == 0) continue;
    for (int i = 0; i < nd; ++i) {
      const auto sub = static_cast<std::uint32_t>(std::uint64_t{coef} * d[i] % q_);
      r[shift + i] = (r[shift + i] + q_ - sub) % q_;
    }
  }
  for (int i = 0; i < nd - 1; ++i) {
    if (r[i] != 0) return std::nullopt;
  }
  return encode(quot, nf - nd + 1, q_);
}

bool IndexArith::divides(PolyIndex divisor, PolyIndex f) const { return exact_div(f, divisor).has_value(); }

}  // namespace primfield
