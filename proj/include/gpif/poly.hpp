#pragma once

// Multivariate polynomials with dense exponent vectors over QQ or GF(p).

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gpif/arith.hpp"

namespace gpif::poly {

/// Room for 8 user variables plus one auxiliary elimination variable.
inline constexpr std::size_t kMaxVars = 10;
inline constexpr std::size_t kMaxUserVars = 8;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  unsigned degree() const;
  bool is_one() const { return degree() == 0; }
  bool divides(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial lcm(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);

class MonomialOrder {
 public:
  enum class Kind { Grevlex, Lex, Elimination };

  static MonomialOrder grevlex() { return {Kind::Grevlex, 0}; }
  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  /// Grevlex on the first k variables, ties broken by grevlex on the rest.
  /// Any monomial involving one of the first k variables outranks every
  /// monomial that does not.
  static MonomialOrder elimination(std::size_t k) { return {Kind::Elimination, k}; }

  Kind kind() const { return kind_; }
  std::size_t block() const { return block_; }

  /// Negative, zero or positive as a <, =, > b over the first nvars variables.
  int compare(const Monomial& a, const Monomial& b, std::size_t nvars) const;

  std::string to_string() const;
  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;

 private:
  MonomialOrder(Kind k, std::size_t block) : kind_(k), block_(block) {}
  Kind kind_;
  std::size_t block_;
};

/// Ambient ring k[v1..vn] together with its active monomial order.
class PolyRing {
 public:
  static std::shared_ptr<const PolyRing> make(std::vector<std::string> vars, arith::Field field,
                                               MonomialOrder order = MonomialOrder::grevlex());

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const arith::Field& field() const { return field_; }
  const MonomialOrder& order() const { return order_; }

  /// Same variables and field, different order.
  std::shared_ptr<const PolyRing> with_order(MonomialOrder order) const;
  /// Prepends a fresh variable and installs elimination order for it.
  std::shared_ptr<const PolyRing> with_eliminated_var(const std::string& name) const;

  bool same_ambient(const PolyRing& other) const {
    return vars_ == other.vars_ && field_ == other.field_;
  }
  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.same_ambient(b) && a.order_ == b.order_;
  }

  std::string to_string() const;

 private:
  PolyRing(std::vector<std::string> vars, arith::Field field, MonomialOrder order)
      : vars_(std::move(vars)), field_(field), order_(order) {}
  std::vector<std::string> vars_;
  arith::Field field_;
  MonomialOrder order_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

struct Term {
  Monomial mono;
  arith::Coeff coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Terms are kept strictly descending under the ring's order with no zero
/// coefficients; the zero polynomial has no terms.
class Polynomial {
 public:
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}
  Polynomial(RingPtr ring, std::vector<Term> terms);

  static Polynomial constant(RingPtr ring, const arith::Coeff& c);
  static Polynomial variable(RingPtr ring, std::size_t index);
  static Polynomial term(RingPtr ring, const Monomial& m, const arith::Coeff& c);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return is_zero() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  /// Leading term under the ring's order; throws DomainError on zero.
  const Term& leading_term() const;
  const Monomial& leading_monomial() const { return leading_term().mono; }
  const arith::Coeff& leading_coeff() const { return leading_term().coeff; }
  unsigned total_degree() const;
  bool uses_var(std::size_t index) const;

  Polynomial monic() const;
  Polynomial operator-() const;
  Polynomial scaled(const arith::Coeff& c, const Monomial& m) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(unsigned e) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Re-expresses this polynomial in a ring with the same variables and
  /// field but another order.
  Polynomial reordered(const RingPtr& target) const;
  /// Embeds into a ring obtained by prepending `shift` variables.
  Polynomial shifted_into(const RingPtr& target, std::size_t shift) const;
  /// Inverse of shifted_into; the dropped variables must not occur.
  Polynomial unshifted_into(const RingPtr& target, std::size_t shift) const;

  /// `x^2*y - 3/2*z` style.
  std::string to_string() const;

 private:
  void normalize();
  RingPtr ring_;
  std::vector<Term> terms_;
};

/// Maximal term of f under an explicit order. Throws DomainError on zero.
Term leading_term(const Polynomial& f, const MonomialOrder& order);

/// Throws DomainError unless both polynomials live in the same ring.
void require_same_ring(const Polynomial& a, const Polynomial& b);

}  // namespace gpif::poly
