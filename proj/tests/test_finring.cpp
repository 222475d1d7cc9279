#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gpif/finring.hpp"

using namespace gpif;
using namespace gpif::finring;

namespace {

RingPtr zmod(unsigned n) { return FiniteRing::build(RingSpec::zmod(n)); }

FiniteIdeal gen(const RingPtr& r, std::initializer_list<long> xs) {
  std::vector<Elem> g;
  for (long x : xs) g.push_back(r->element_from_integer(x));
  return ideal_closure(r, g);
}

// oracle: a subset is an ideal iff it holds 0 and is closed under + and R·
bool is_ideal_subset(const FiniteRing& r, const Bits& s) {
  if (!s.test(0)) return false;
  for (std::size_t a = 0; a < r.size(); ++a) {
    if (!s.test(a)) continue;
    for (std::size_t b = 0; b < r.size(); ++b) {
      if (s.test(b) && !s.test(r.add(static_cast<Elem>(a), static_cast<Elem>(b)))) return false;
      if (!s.test(r.mul(static_cast<Elem>(b), static_cast<Elem>(a)))) return false;
    }
  }
  return true;
}

bool prime_by_definition(const FiniteIdeal& p) {
  const auto& r = *p.ring();
  if (p.is_unit()) return false;
  for (std::size_t a = 0; a < r.size(); ++a) {
    for (std::size_t b = 0; b < r.size(); ++b) {
      if (!p.contains(static_cast<Elem>(a)) && !p.contains(static_cast<Elem>(b)) &&
          p.contains(r.mul(static_cast<Elem>(a), static_cast<Elem>(b)))) {
        return false;
      }
    }
  }
  return true;
}

unsigned divisor_count(unsigned n) {
  unsigned c = 0;
  for (unsigned d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

std::vector<RingSpec> family() {
  std::vector<RingSpec> out;
  for (unsigned n = 2; n <= 16; ++n) out.push_back(RingSpec::zmod(n));
  for (unsigned n : {18u, 24u, 27u, 32u}) out.push_back(RingSpec::zmod(n));
  for (unsigned p : {2u, 3u, 5u, 7u}) out.push_back(RingSpec::gf(p));
  out.push_back(RingSpec::product({RingSpec::zmod(4), RingSpec::gf(3)}));
  out.push_back(RingSpec::product({RingSpec::zmod(2), RingSpec::zmod(4)}));
  out.push_back(RingSpec::product({RingSpec::zmod(4), RingSpec::zmod(4)}));
  out.push_back(RingSpec::product({RingSpec::gf(2), RingSpec::gf(2), RingSpec::gf(2)}));
  out.push_back(RingSpec::product({RingSpec::zmod(8), RingSpec::zmod(6)}));
  return out;
}

}  // namespace

TEST_CASE("building rings") {
  CHECK(zmod(6)->size() == 6);
  CHECK_THROWS_AS(FiniteRing::build(RingSpec::gf(4)), DomainError);
  const auto r = FiniteRing::build(RingSpec::product({RingSpec::zmod(4), RingSpec::gf(3)}));
  CHECK(r->size() == 12);
  CHECK(r->element_to_string(r->one()) == "<1,1>");
  CHECK_THROWS_AS(FiniteRing::build(RingSpec::zmod(257)), LimitError);
  CHECK_THROWS_AS(FiniteRing::build(RingSpec::zmod(1)), DomainError);
  // tables that are not a ring
  CHECK_THROWS_AS(FiniteRing::from_tables(2, 1, {0, 1, 1, 0}, {0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(FiniteRing::from_tables(2, 1, {0, 1, 1, 1}, {0, 0, 0, 1}), DomainError);
  const auto t = FiniteRing::from_tables(2, 1, {0, 1, 1, 0}, {0, 0, 0, 1});
  CHECK(primes(t).size() == 1);
}

TEST_CASE("ideal closure examples") {
  const auto z6 = zmod(6);
  CHECK(gen(z6, {2}).elements() == std::vector<Elem>{0, 2, 4});
  CHECK(ideal_closure(z6, std::vector<Elem>{}).is_zero());
  const auto z12 = zmod(12);
  CHECK(gen(z12, {8, 6}).elements() == std::vector<Elem>{0, 2, 4, 6, 8, 10});
  // oracle: the ideal (a, b) of Z/n is the multiples of gcd(a, b, n)
  for (unsigned n : {12u, 18u, 30u}) {
    const auto r = zmod(n);
    for (unsigned a = 0; a < n; ++a) {
      for (unsigned b = 0; b < n; ++b) {
        const unsigned g = std::gcd(std::gcd(a, b), n);
        CHECK(gen(r, {a, b}).size() == n / g);
        CHECK(gen(r, {a, b}).contains(static_cast<Elem>(g % n)));
      }
    }
  }
}

TEST_CASE("lattice examples") {
  auto show = [](const RingPtr& r) {
    std::vector<std::string> out;
    for (const auto& i : all_ideals(r)) out.push_back(i.to_string());
    return out;
  };
  CHECK(show(FiniteRing::build(RingSpec::gf(7))) == std::vector<std::string>{"(0)", "(1)"});
  CHECK(show(zmod(8)) == std::vector<std::string>{"(0)", "(4)", "(2)", "(1)"});
  CHECK(show(zmod(6)) == std::vector<std::string>{"(0)", "(3)", "(2)", "(1)"});
  CHECK_THROWS_AS(all_ideals(zmod(12), 3), LimitError);
}

TEST_CASE("prime examples") {
  auto show = [](const RingPtr& r) {
    std::vector<std::string> out;
    for (const auto& p : primes(r)) out.push_back(p.to_string());
    return out;
  };
  CHECK(show(zmod(12)) == std::vector<std::string>{"(2)", "(3)"});
  CHECK(show(FiniteRing::build(RingSpec::gf(5))) == std::vector<std::string>{"(0)"});
  CHECK(show(zmod(8)) == std::vector<std::string>{"(2)"});
  CHECK_THROWS_AS(PrimeIdealFin(gen(zmod(12), {6})), DomainError);
  CHECK(PrimeIdealFin(gen(zmod(12), {3})).residue_size() == 3);
}

TEST_CASE("ideal operation examples") {
  const auto z8 = zmod(8);
  CHECK(ideal_power(gen(z8, {2}), 2) == gen(z8, {4}));
  CHECK(ideal_colon(zero_ideal(z8), gen(z8, {2})) == gen(z8, {4}));
  const auto a = gen(z8, {2});
  CHECK(ideal_product(a, unit_ideal(z8)) == a);
  CHECK(ideal_power(a, 0).is_unit());
  CHECK(ideal_power(a, 3).is_zero());
}

TEST_CASE("the lattice is complete and every member is an ideal") {
  for (const auto& spec : family()) {
    const auto r = FiniteRing::build(spec);
    const auto lat = all_ideals(r);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      CHECK(is_ideal_subset(*r, lat[i].bits()));
      if (i) CHECK((lat[i - 1] <=> lat[i]) < 0);
    }
    // every ideal is a sum of principal ideals, so the principal ones must all be present
    for (std::size_t x = 0; x < r->size(); ++x) {
      const auto px = ideal_closure(r, std::vector<Elem>{static_cast<Elem>(x)});
      CHECK(std::find(lat.begin(), lat.end(), px) != lat.end());
    }
    if (spec.kind == RingSpec::Kind::Zmod) CHECK(lat.size() == divisor_count(spec.n));
  }
}

TEST_CASE("primes: definition, completeness, maximality") {
  for (const auto& spec : family()) {
    const auto r = FiniteRing::build(spec);
    const auto lat = all_ideals(r);
    const auto ps = primes(r);
    std::vector<FiniteIdeal> maximal;
    for (const auto& i : lat) {
      if (i.is_unit()) continue;
      bool top = true;
      for (const auto& j : lat) top = top && (j.is_unit() || j == i || !i.is_subset_of(j));
      if (top) maximal.push_back(i);
    }
    std::size_t by_definition = 0;
    for (const auto& i : lat) {
      const bool prime = prime_by_definition(i);
      by_definition += prime;
      const bool listed = std::any_of(ps.begin(), ps.end(), [&](const PrimeIdealFin& p) { return p.ideal() == i; });
      CHECK(prime == listed);
      // in a finite ring, prime iff maximal
      CHECK(prime == (std::find(maximal.begin(), maximal.end(), i) != maximal.end()));
    }
    CHECK(by_definition == ps.size());
    for (const auto& p : ps) {
      for (const auto& q : ps) {
        if (!(p == q)) CHECK_FALSE(p.ideal().is_subset_of(q.ideal()));
      }
    }
  }
}

TEST_CASE("lattice laws over all ideal pairs") {
  for (const auto& spec : family()) {
    const auto r = FiniteRing::build(spec);
    if (r->size() > 64) continue;
    const auto lat = all_ideals(r);
    for (const auto& a : lat) {
      for (const auto& b : lat) {
        const auto prod = ideal_product(a, b), meet = ideal_intersection(a, b), sum = ideal_sum(a, b);
        CHECK(prod.is_subset_of(meet));
        CHECK(meet.is_subset_of(a));
        CHECK(a.is_subset_of(sum));
        CHECK(ideal_product(ideal_colon(a, b), b).is_subset_of(a));
        CHECK(prod == ideal_product(b, a));
        // colon oracle: membership from the definition
        const auto col = ideal_colon(a, b);
        for (std::size_t x = 0; x < r->size(); ++x) {
          bool in = true;
          for (Elem y : b.elements()) in = in && a.contains(r->mul(static_cast<Elem>(x), y));
          CHECK(col.contains(static_cast<Elem>(x)) == in);
        }
      }
    }
  }
}

TEST_CASE("generators render the least minimal generating set") {
  const auto z12 = zmod(12);
  CHECK(gen(z12, {8, 6}).to_string() == "(2)");
  CHECK(gen(z12, {9}).to_string() == "(3)");
  const auto r = FiniteRing::build(RingSpec::product({RingSpec::zmod(4), RingSpec::zmod(4)}));
  for (const auto& i : all_ideals(r)) {
    const auto g = i.generators();
    CHECK(ideal_closure(r, g) == i);
  }
  const std::vector<long> comps{2, 0};
  CHECK(ideal_closure(r, std::vector<Elem>{r->element_from_components(comps)}).to_string() == "(<2,0>)");
}
