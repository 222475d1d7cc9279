#include <doctest.h>

#include <numeric>
#include <random>

#include "gpif/arith.hpp"

using namespace gpif;
using namespace gpif::arith;

namespace {

Rational q(long n, long d) { return Rational(BigInt(n), BigInt(d)); }

// oracle: fractions as reduced (num, den) pairs in __int128
struct Frac {
  __int128 n, d;
};
Frac reduce(__int128 n, __int128 d) {
  if (d < 0) n = -n, d = -d;
  __int128 a = n < 0 ? -n : n, b = d;
  while (b) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return {n / a, d / a};
}
bool same(const Rational& r, Frac f) { return r.num() == BigInt(static_cast<long>(f.n)) && r.den() == BigInt(static_cast<long>(f.d)); }

}  // namespace

TEST_CASE("rational examples") {
  CHECK(q(1, 2) + q(1, 3) == q(5, 6));
  CHECK((q(1, 2) + q(1, 3)).to_string() == "5/6");
  CHECK(q(2, 4).to_string() == "1/2");
  CHECK(q(2, 4).num() == 1);
  CHECK(q(2, 4).den() == 2);
  CHECK_THROWS_AS(q(1, 3) / q(0, 1), ArithmeticError);
  CHECK_THROWS_AS(q(1, 0), ArithmeticError);
  CHECK(q(3, -6).to_string() == "-1/2");
  CHECK(q(0, -5).den() == 1);
  CHECK(Rational(7).is_integer());
  CHECK(q(-4, 2).to_string() == "-2");
}

TEST_CASE("rational arithmetic matches a fraction oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    const long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    const Rational x = q(a, b), y = q(c, d);
    CHECK(same(x + y, reduce(__int128(a) * d + __int128(c) * b, __int128(b) * d)));
    CHECK(same(x - y, reduce(__int128(a) * d - __int128(c) * b, __int128(b) * d)));
    CHECK(same(x * y, reduce(__int128(a) * c, __int128(b) * d)));
    if (c != 0) CHECK(same(x / y, reduce(__int128(a) * d, __int128(b) * c)));
    CHECK(((x <=> y) < 0) == (__int128(a) * d < __int128(c) * b));
  }
}

TEST_CASE("rational field axioms") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
  for (int i = 0; i < 500; ++i) {
    const Rational a = q(num(rng), den(rng)), b = q(num(rng), den(rng)), c = q(num(rng), den(rng));
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Rational(0));
    if (!a.is_zero()) CHECK(a * a.reciprocal() == Rational(1));
  }
}

TEST_CASE("big integers stay exact") {
  Rational big(BigInt("123456789012345678901234567890"), BigInt(1));
  const Rational sq = big * big;
  CHECK(sq.to_string() == "15241578753238836750495351562536198787501905199875019052100");
  CHECK(sq / big == big);
  CHECK(Rational::parse(sq.to_string()) == sq);
}

TEST_CASE("modular examples") {
  CHECK(ModularInt(3, 7).inverse() == ModularInt(5, 7));
  CHECK(ModularInt(1, 12).inverse() == ModularInt(1, 12));
  CHECK_THROWS_AS(ModularInt(2, 8).inverse(), ArithmeticError);
  CHECK(ModularInt(-1, 5).value() == 4);
  CHECK_THROWS_AS(ModularInt(1, 5) + ModularInt(1, 7), ArithmeticError);
  CHECK_THROWS_AS(ModularInt(1, 1), DomainError);
  CHECK(ModularInt(9, 7).to_string() == "2 mod 7");
}

TEST_CASE("prime field axioms and inverses") {
  std::mt19937_64 rng(3);
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 31ull, 65521ull, 2147483647ull}) {
    std::uniform_int_distribution<std::int64_t> d(0, static_cast<std::int64_t>(p) - 1);
    for (int i = 0; i < 200; ++i) {
      const ModularInt a(d(rng), p), b(d(rng), p), c(d(rng), p);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == ModularInt(0, p));
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == ModularInt(1, p));
        CHECK((b / a) * a == b);
      }
      // oracle: plain integer arithmetic
      const unsigned __int128 prod = static_cast<unsigned __int128>(a.value()) * b.value();
      CHECK((a * b).value() == static_cast<std::uint64_t>(prod % p));
    }
  }
}

TEST_CASE("non-prime modulus: units invert, zero divisors do not") {
  for (std::int64_t v = 0; v < 12; ++v) {
    const ModularInt a(v, 12);
    if (std::gcd(v, std::int64_t{12}) == 1) {
      CHECK(a * a.inverse() == ModularInt(1, 12));
    } else {
      CHECK_THROWS_AS(a.inverse(), ArithmeticError);
    }
  }
}

TEST_CASE("scalar round trips") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
  for (int i = 0; i < 300; ++i) {
    const Rational r = q(num(rng), den(rng));
    CHECK(Rational::parse(r.to_string()) == r);
    const ModularInt m(num(rng), 97);
    CHECK(ModularInt::parse(m.to_string()) == m);
  }
  CHECK_THROWS_AS(ModularInt::parse("3"), DomainError);
}

TEST_CASE("fields and coefficients") {
  CHECK_THROWS_AS(Field::prime(4), DomainError);
  CHECK(Field::prime(5).to_string() == "GF(5)");
  CHECK(Field::rationals().to_string() == "QQ");
  const Field f = Field::prime(7);
  CHECK(f.from_rational(q(1, 2)) == Coeff(ModularInt(4, 7)));
  CHECK_THROWS_AS(f.from_rational(q(1, 7)), ArithmeticError);
  CHECK(f.from_int(-1).to_string() == "6");
  CHECK(Field::rationals().from_rational(q(3, 2)).to_string() == "3/2");
  CHECK(Coeff(q(2, 3)).inverse() == Coeff(q(3, 2)));
  CHECK(is_prime(2147483647));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}
