#pragma once

// Exact scalars: GMP-backed integers and rationals, residues mod n, and the
// coefficient type shared by the polynomial engine.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "gpif/error.hpp"

namespace gpif::arith {

using BigInt = mpz_class;

bool is_prime(std::uint64_t n);

/// A rational number kept in lowest terms with a positive denominator, so
/// that structural equality is value equality.
class Rational {
 public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Rational operator-() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "a/b", or "a" when the denominator is 1.
  std::string to_string() const;
  static Rational parse(std::string_view text);

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_;
};

/// Residue class modulo n, 2 <= n < 2^32. Mixing moduli throws.
class ModularInt {
 public:
  ModularInt(std::int64_t value, std::uint64_t modulus);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  ModularInt operator-() const;
  /// Throws ArithmeticError when gcd(value, modulus) > 1.
  ModularInt inverse() const;

  friend ModularInt operator+(const ModularInt& a, const ModularInt& b);
  friend ModularInt operator-(const ModularInt& a, const ModularInt& b);
  friend ModularInt operator*(const ModularInt& a, const ModularInt& b);
  friend ModularInt operator/(const ModularInt& a, const ModularInt& b);
  friend bool operator==(const ModularInt& a, const ModularInt& b) = default;

  /// "v mod n"
  std::string to_string() const;
  static ModularInt parse(std::string_view text);

 private:
  std::uint64_t value_;
  std::uint64_t modulus_;
};

/// A field element: either a rational or a residue modulo a prime.
class Coeff {
 public:
  Coeff() : v_(Rational{}) {}
  Coeff(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Coeff(ModularInt m) : v_(m) {}           // NOLINT(google-explicit-constructor)

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const ModularInt& modular() const { return std::get<ModularInt>(v_); }

  Coeff operator-() const;
  Coeff inverse() const;
  friend Coeff operator+(const Coeff& a, const Coeff& b);
  friend Coeff operator-(const Coeff& a, const Coeff& b);
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  friend Coeff operator/(const Coeff& a, const Coeff& b);
  friend bool operator==(const Coeff& a, const Coeff& b) = default;

  /// Plain rendering used inside polynomials: "3/2" or "5" (residues as their
  /// least non-negative representative).
  std::string to_string() const;

 private:
  std::variant<Rational, ModularInt> v_;
};

/// Coefficient field of a polynomial ring: QQ or GF(p).
class Field {
 public:
  enum class Kind { Rational, Prime };

  static Field rationals() { return Field(Kind::Rational, 0); }
  /// Throws DomainError unless p is a prime below 2^31.
  static Field prime(std::uint64_t p);

  Kind kind() const { return kind_; }
  std::uint64_t characteristic() const { return p_; }

  Coeff zero() const { return from_int(0); }
  Coeff one() const { return from_int(1); }
  Coeff from_int(long value) const;
  /// Maps a rational into the field; in GF(p) the denominator must be a unit.
  Coeff from_rational(const Rational& r) const;
  bool contains(const Coeff& c) const;

  /// "QQ" or "GF(p)"
  std::string to_string() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Field(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint64_t p_;
};

}  // namespace gpif::arith
