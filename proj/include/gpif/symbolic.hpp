#pragma once

// Ideals of a quotient ring k[x1..xn]/I0, handled through their lifts
// J + I0 in the ambient polynomial ring.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpif/groebner.hpp"

namespace gpif::symbolic {

using groebner::Ideal;
using poly::Polynomial;
using poly::RingPtr;

class QuotientCtx {
 public:
  /// Throws DomainError when I0 is the unit ideal.
  static std::shared_ptr<const QuotientCtx> make(Ideal base);

  const RingPtr& ring() const { return base_.ring(); }
  const Ideal& base() const { return base_; }

 private:
  explicit QuotientCtx(Ideal base) : base_(std::move(base)) {}
  Ideal base_;
};

using CtxPtr = std::shared_ptr<const QuotientCtx>;

class QuotIdeal {
 public:
  QuotIdeal(CtxPtr ctx, std::vector<Polynomial> lift);

  static QuotIdeal unit(CtxPtr ctx);
  /// The ideal generated by the images of all variables.
  static QuotIdeal variables(CtxPtr ctx);

  const CtxPtr& ctx() const { return ctx_; }
  const std::vector<Polynomial>& lift() const { return lift_; }
  /// J + I0 in the ambient ring (basis cached).
  const Ideal& full() const { return full_; }

  bool contains(const QuotIdeal& other) const;
  bool is_unit() const { return full_.is_unit(); }

  std::string to_string() const;

 private:
  CtxPtr ctx_;
  std::vector<Polynomial> lift_;
  Ideal full_;
};

bool quot_ideal_eq(const QuotIdeal& a, const QuotIdeal& b);
QuotIdeal quot_sum(const QuotIdeal& a, const QuotIdeal& b);
QuotIdeal quot_product(const QuotIdeal& a, const QuotIdeal& b);
/// Power 0 is the unit ideal.
QuotIdeal quot_power(const QuotIdeal& a, unsigned r);

/// True iff p^r = p^(r-1) in the quotient ring. Requires r >= 1.
bool power_stabilizes(const QuotIdeal& p, unsigned r);

/// First candidate a with p ⊊ a and p^(r-1)·a ⊆ p^r, if any. Such an a
/// rules out p^r as the prime factorization of any submodule: a chain
/// N ⊂ M_1 ⊂ ... ⊂ M_r = M with all primes p would give aM ⊆ M_(r-1),
/// forcing a into the annihilator p of a generator of M/M_(r-1).
/// Requires r >= 2.
std::optional<QuotIdeal> obstruction_certificate(const QuotIdeal& p, unsigned r,
                                                 const std::vector<QuotIdeal>& candidates);

}  // namespace gpif::symbolic
