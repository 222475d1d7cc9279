#pragma once

// Buchberger's algorithm and ideal calculus in k[x1..xn].

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gpif/poly.hpp"

namespace gpif::groebner {

using poly::Polynomial;
using poly::RingPtr;

/// Full normal form of f modulo `basis` under f's ring order. Reducers are
/// tried in listed order against the highest remaining term; irreducible
/// terms move to the remainder.
Polynomial reduce(const Polynomial& f, std::span<const Polynomial> basis);

/// Exact quotient g / f; throws DomainError when f does not divide g.
Polynomial divide_exact(const Polynomial& g, const Polynomial& f);

/// Reduced Groebner basis of the ideal spanned by `gens` under their ring's
/// order: monic, inter-reduced, sorted by descending leading monomial.
/// Uses the normal selection strategy and Buchberger's coprime criterion.
/// The zero ideal yields an empty basis.
std::vector<Polynomial> buchberger(std::vector<Polynomial> gens);

/// An ideal of a polynomial ring. Values are immutable; the reduced
/// Groebner basis under the ring's order is computed once on demand and
/// shared between copies.
class Ideal {
 public:
  Ideal(RingPtr ring, std::vector<Polynomial> gens);

  static Ideal unit(RingPtr ring);
  static Ideal zero(RingPtr ring);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& gens() const { return gens_; }
  const std::vector<Polynomial>& groebner_basis() const;

  bool contains(const Polynomial& f) const;
  bool contains(const Ideal& other) const;
  bool is_unit() const;
  bool is_zero() const { return gens_.empty(); }

  /// Same ideal in the same ambient ring under another order.
  Ideal with_order(poly::MonomialOrder order) const;

  std::string to_string() const;

 private:
  struct Cache {
    std::once_flag once;
    std::vector<Polynomial> basis;
  };
  RingPtr ring_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_;
};

bool ideal_membership(const Polynomial& f, const Ideal& ideal);
/// Equality of generated ideals: compares reduced bases under I's order.
bool ideal_eq(const Ideal& a, const Ideal& b);

Ideal ideal_sum(const Ideal& a, const Ideal& b);
Ideal ideal_product(const Ideal& a, const Ideal& b);
/// Power 0 is the unit ideal.
Ideal ideal_power(const Ideal& a, unsigned r);
/// I ∩ J = (t·I + (1 − t)·J) ∩ k[x], eliminating an auxiliary t.
Ideal ideal_intersection(const Ideal& a, const Ideal& b);
/// (I : J) = ∩ over generators f of J of (I ∩ (f)) / f.
/// Throws DomainError when J is the zero ideal.
Ideal ideal_colon(const Ideal& a, const Ideal& b);

}  // namespace gpif::groebner
