#pragma once

// Helpers shared by the unit tests.

#include <random>
#include <string>

#include "gpif/dsl.hpp"
#include "gpif/groebner.hpp"

namespace gpif::test {

inline poly::Polynomial P(const poly::RingPtr& ring, const std::string& text) {
  return dsl::parse_polynomial(text, ring);
}

inline groebner::Ideal I(const poly::RingPtr& ring, std::initializer_list<const char*> gens) {
  std::vector<poly::Polynomial> ps;
  for (const char* g : gens) ps.push_back(P(ring, g));
  return groebner::Ideal(ring, std::move(ps));
}

inline poly::RingPtr ring_xyz(arith::Field f = arith::Field::rationals(),
                              poly::MonomialOrder o = poly::MonomialOrder::grevlex()) {
  return poly::PolyRing::make({"x", "y", "z"}, f, o);
}

/// Random polynomial with up to `terms` terms, exponents < `max_exp` and
/// small integer coefficients.
inline poly::Polynomial random_poly(const poly::RingPtr& ring, std::mt19937_64& rng, int terms = 4, int max_exp = 3) {
  std::uniform_int_distribution<int> e(0, max_exp - 1), c(-5, 5), n(1, terms);
  poly::Polynomial f(ring);
  const int k = n(rng);
  for (int t = 0; t < k; ++t) {
    poly::Monomial m;
    for (std::size_t v = 0; v < ring->nvars(); ++v) m.exp[v] = static_cast<std::uint16_t>(e(rng));
    f = f + poly::Polynomial::term(ring, m, ring->field().from_int(c(rng)));
  }
  return f;
}

}  // namespace gpif::test
