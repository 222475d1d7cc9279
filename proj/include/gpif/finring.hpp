#pragma once

// Fully enumerated finite commutative rings and their ideal lattices.

#include <compare>
#include <map>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "gpif/error.hpp"

namespace gpif::finring {

using Elem = std::uint16_t;
using Bits = boost::dynamic_bitset<std::uint64_t>;

inline constexpr std::size_t kDefaultMaxRingSize = 256;
inline constexpr std::size_t kDefaultMaxLattice = 4096;

/// How a ring was built. Product components are Zmod or GF specs.
struct RingSpec {
  enum class Kind { Zmod, GF, Product, Table };
  Kind kind = Kind::Zmod;
  unsigned n = 0;               // modulus for Zmod / GF, element count for Table
  std::vector<RingSpec> parts;  // Product only

  static RingSpec zmod(unsigned n) { return {Kind::Zmod, n, {}}; }
  static RingSpec gf(unsigned p) { return {Kind::GF, p, {}}; }
  static RingSpec product(std::vector<RingSpec> parts);

  /// "Z/6", "GF(5)", "product Z/4, GF(3)".
  std::string to_string() const;
  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

/// Canonical order on element subsets: by cardinality, then the set holding
/// the least element of the symmetric difference comes first.
std::strong_ordering canonical_compare(const Bits& a, const Bits& b);

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

class FiniteRing {
 public:
  /// Zmod n (n >= 2), GF p (p prime, <= 31), or a product of two or three of
  /// those. Throws DomainError / LimitError.
  static RingPtr build(const RingSpec& spec, std::size_t max_size = kDefaultMaxRingSize);
  /// Raw tables (row-major n×n). Throws DomainError on any axiom violation.
  static RingPtr from_tables(std::size_t n, Elem one, std::vector<Elem> add, std::vector<Elem> mul);

  std::size_t size() const { return n_; }
  Elem zero() const { return 0; }
  Elem one() const { return one_; }
  Elem add(Elem a, Elem b) const { return add_[a * n_ + b]; }
  Elem mul(Elem a, Elem b) const { return mul_[a * n_ + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  const RingSpec& spec() const { return spec_; }

  /// Integer label for Zmod/GF/Table rings, `<a,b>` tuples for products.
  std::string element_to_string(Elem e) const;
  /// Inverse of the tuple rendering: component values, one per factor.
  Elem element_from_components(std::span<const long> comps) const;
  /// Maps an integer literal to an element: the image of the integer in
  /// the ring (n·1).
  Elem element_from_integer(long value) const;

  /// Bitsets of the whole ideal lattice, canonically sorted (cached).
  const std::vector<Bits>& lattice(std::size_t max_lattice = kDefaultMaxLattice) const;
  /// Bitsets of the prime ideals, sorted by residue field size then
  /// canonically (cached).
  const std::vector<Bits>& prime_bits() const;

  Bits empty_set() const { return Bits(n_); }

  friend bool same_ring(const FiniteRing& a, const FiniteRing& b);

 private:
  FiniteRing(RingSpec spec, std::size_t n, Elem one, std::vector<Elem> add, std::vector<Elem> mul);
  void verify_axioms() const;

  RingSpec spec_;
  std::size_t n_;
  Elem one_;
  std::vector<Elem> add_;
  std::vector<Elem> mul_;
  std::vector<Elem> neg_;
  std::vector<unsigned> radix_;  // component sizes for products

  mutable std::once_flag lattice_once_;
  mutable std::vector<Bits> lattice_;
  mutable std::size_t lattice_cap_ = 0;
  mutable std::once_flag primes_once_;
  mutable std::vector<Bits> primes_;
  // minimal generating sets already computed, keyed by ideal
  mutable std::mutex generators_mu_;
  mutable std::map<Bits, std::vector<Elem>> generators_;

  friend class FiniteIdeal;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || same_ring(*a, *b); }

class FiniteIdeal {
 public:
  /// Trusts that `bits` is an ideal; use ideal_closure otherwise.
  FiniteIdeal(RingPtr ring, Bits bits);

  const RingPtr& ring() const { return ring_; }
  const Bits& bits() const { return bits_; }
  std::size_t size() const { return bits_.count(); }
  bool contains(Elem e) const { return bits_.test(e); }
  bool is_unit() const { return bits_.all(); }
  bool is_zero() const { return size() == 1; }
  bool is_subset_of(const FiniteIdeal& other) const { return bits_.is_subset_of(other.bits_); }
  std::vector<Elem> elements() const;

  /// Lexicographically least generating set of minimal cardinality.
  std::vector<Elem> generators() const;
  /// "(2)", "(<1,0>,<0,2>)", "(0)".
  std::string to_string() const;

  friend bool operator==(const FiniteIdeal& a, const FiniteIdeal& b) { return a.bits_ == b.bits_; }
  friend std::strong_ordering operator<=>(const FiniteIdeal& a, const FiniteIdeal& b) {
    return canonical_compare(a.bits_, b.bits_);
  }

 private:
  std::vector<Elem> minimal_generators() const;

  RingPtr ring_;
  Bits bits_;
};

/// A prime ideal together with the size of its residue field R/p.
class PrimeIdealFin {
 public:
  /// Throws DomainError when the ideal is not prime.
  explicit PrimeIdealFin(FiniteIdeal ideal);
  /// For ideals taken from FiniteRing::prime_bits(); skips the primality test.
  static PrimeIdealFin known_prime(FiniteIdeal ideal);

  const FiniteIdeal& ideal() const { return ideal_; }
  std::size_t residue_size() const { return residue_size_; }
  std::string to_string() const { return ideal_.to_string(); }

  friend bool operator==(const PrimeIdealFin& a, const PrimeIdealFin& b) { return a.ideal_ == b.ideal_; }
  /// Residue field size first, so Z/n primes come out as (2), (3), (5), ...
  friend std::strong_ordering operator<=>(const PrimeIdealFin& a, const PrimeIdealFin& b);

 private:
  PrimeIdealFin(FiniteIdeal ideal, std::size_t residue_size)
      : ideal_(std::move(ideal)), residue_size_(residue_size) {}

  FiniteIdeal ideal_;
  std::size_t residue_size_;
};

/// Exhaustive primality test: proper and ab ∉ p for all a, b ∉ p.
bool is_prime(const FiniteIdeal& ideal);

FiniteIdeal ideal_closure(const RingPtr& ring, std::span<const Elem> gens);
/// Throws LimitError when the lattice exceeds `max_lattice` ideals.
std::vector<FiniteIdeal> all_ideals(const RingPtr& ring, std::size_t max_lattice = kDefaultMaxLattice);
std::vector<PrimeIdealFin> primes(const RingPtr& ring);

FiniteIdeal unit_ideal(const RingPtr& ring);
FiniteIdeal zero_ideal(const RingPtr& ring);
FiniteIdeal ideal_sum(const FiniteIdeal& a, const FiniteIdeal& b);
FiniteIdeal ideal_product(const FiniteIdeal& a, const FiniteIdeal& b);
FiniteIdeal ideal_intersection(const FiniteIdeal& a, const FiniteIdeal& b);
/// {x : x·B ⊆ A}
FiniteIdeal ideal_colon(const FiniteIdeal& a, const FiniteIdeal& b);
/// Power 0 is R.
FiniteIdeal ideal_power(const FiniteIdeal& a, unsigned r);

}  // namespace gpif::finring
