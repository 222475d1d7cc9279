#include "gpif/finring.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gpif/arith.hpp"

namespace gpif::finring {

namespace {

Bits principal(const FiniteRing& ring, Elem e) {
  Bits out(ring.size());
  for (std::size_t r = 0; r < ring.size(); ++r) out.set(ring.mul(static_cast<Elem>(r), e));
  return out;
}

Bits sumset(const FiniteRing& ring, const Bits& a, const Bits& b) {
  Bits out(ring.size());
  for (auto i = a.find_first(); i != Bits::npos; i = a.find_next(i)) {
    for (auto j = b.find_first(); j != Bits::npos; j = b.find_next(j)) {
      out.set(ring.add(static_cast<Elem>(i), static_cast<Elem>(j)));
    }
  }
  return out;
}

// Additive closure of {0} ∪ seeds, where seeds are already closed under the
// ring action.
Bits additive_closure(const FiniteRing& ring, const std::vector<Elem>& seeds) {
  Bits out(ring.size());
  out.set(0);
  std::vector<Elem> frontier{0};
  while (!frontier.empty()) {
    const Elem x = frontier.back();
    frontier.pop_back();
    for (Elem s : seeds) {
      const Elem y = ring.add(x, s);
      if (!out.test(y)) {
        out.set(y);
        frontier.push_back(y);
      }
    }
  }
  return out;
}

struct CanonicalLess {
  bool operator()(const Bits& a, const Bits& b) const { return canonical_compare(a, b) < 0; }
};

void require_same(const FiniteIdeal& a, const FiniteIdeal& b) {
  if (!same_ring(a.ring(), b.ring())) throw DomainError("ideals of different rings");
}

}  // namespace

std::strong_ordering canonical_compare(const Bits& a, const Bits& b) {
  const auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca <=> cb;
  const Bits diff = a ^ b;
  const auto first = diff.find_first();
  if (first == Bits::npos) return std::strong_ordering::equal;
  return a.test(first) ? std::strong_ordering::less : std::strong_ordering::greater;
}

// ----------------------------------------------------------------- RingSpec

RingSpec RingSpec::product(std::vector<RingSpec> parts) {
  RingSpec s;
  s.kind = Kind::Product;
  s.parts = std::move(parts);
  return s;
}

std::string RingSpec::to_string() const {
  switch (kind) {
    case Kind::Zmod:
      return "Z/" + std::to_string(n);
    case Kind::GF:
      return "GF(" + std::to_string(n) + ")";
    case Kind::Table:
      return "table(" + std::to_string(n) + ")";
    case Kind::Product: {
      std::string out = "product ";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i].to_string();
      }
      return out;
    }
  }
  return "?";
}

// --------------------------------------------------------------- FiniteRing

FiniteRing::FiniteRing(RingSpec spec, std::size_t n, Elem one, std::vector<Elem> add, std::vector<Elem> mul)
    : spec_(std::move(spec)), n_(n), one_(one), add_(std::move(add)), mul_(std::move(mul)), neg_(n, 0) {
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (add_[a * n_ + b] == 0) {
        neg_[a] = static_cast<Elem>(b);
        break;
      }
    }
  }
  if (spec_.kind == RingSpec::Kind::Product) {
    for (const auto& p : spec_.parts) radix_.push_back(p.n);
  }
}

RingPtr FiniteRing::build(const RingSpec& spec, std::size_t max_size) {
  auto check_simple = [](const RingSpec& s) {
    if (s.kind == RingSpec::Kind::Zmod && s.n < 2) throw DomainError("Z/n needs n >= 2");
    if (s.kind == RingSpec::Kind::GF) {
      if (!arith::is_prime(s.n)) {
        throw DomainError("GF(" + std::to_string(s.n) + "): p must be prime (GF(p^k) with k > 1 is unsupported)");
      }
      if (s.n > 31) throw LimitError("GF(p) supports p <= 31");
    }
    if (s.kind == RingSpec::Kind::Product || s.kind == RingSpec::Kind::Table) {
      throw DomainError("product components must be Z/n or GF(p)");
    }
  };

  std::vector<unsigned> moduli;
  if (spec.kind == RingSpec::Kind::Product) {
    if (spec.parts.size() < 2 || spec.parts.size() > 3) throw DomainError("products take 2 or 3 components");
    for (const auto& p : spec.parts) {
      check_simple(p);
      moduli.push_back(p.n);
    }
  } else if (spec.kind == RingSpec::Kind::Table) {
    throw DomainError("table rings are built with from_tables");
  } else {
    check_simple(spec);
    moduli.push_back(spec.n);
  }

  std::size_t n = 1;
  for (auto m : moduli) {
    n *= m;
    if (n > max_size) throw LimitError("ring size exceeds " + std::to_string(max_size));
  }

  // mixed radix, first component most significant
  auto split = [&](std::size_t label) {
    std::vector<unsigned> digits(moduli.size());
    for (std::size_t k = moduli.size(); k-- > 0;) {
      digits[k] = static_cast<unsigned>(label % moduli[k]);
      label /= moduli[k];
    }
    return digits;
  };
  auto join = [&](const std::vector<unsigned>& digits) {
    std::size_t label = 0;
    for (std::size_t k = 0; k < moduli.size(); ++k) label = label * moduli[k] + digits[k];
    return static_cast<Elem>(label);
  };

  std::vector<Elem> add(n * n), mul(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto da = split(a);
    for (std::size_t b = 0; b < n; ++b) {
      const auto db = split(b);
      std::vector<unsigned> s(moduli.size()), p(moduli.size());
      for (std::size_t k = 0; k < moduli.size(); ++k) {
        s[k] = (da[k] + db[k]) % moduli[k];
        p[k] = (da[k] * db[k]) % moduli[k];
      }
      add[a * n + b] = join(s);
      mul[a * n + b] = join(p);
    }
  }
  std::vector<unsigned> ones(moduli.size(), 1);
  auto ring = std::shared_ptr<FiniteRing>(new FiniteRing(spec, n, join(ones), std::move(add), std::move(mul)));
  ring->verify_axioms();
  return ring;
}

RingPtr FiniteRing::from_tables(std::size_t n, Elem one, std::vector<Elem> add, std::vector<Elem> mul) {
  if (n < 2) throw DomainError("a ring with identity 1 != 0 has at least 2 elements");
  if (n > kDefaultMaxRingSize) throw LimitError("ring size exceeds " + std::to_string(kDefaultMaxRingSize));
  if (add.size() != n * n || mul.size() != n * n) throw DomainError("tables must be n×n");
  for (auto v : add) {
    if (v >= n) throw DomainError("addition table entry out of range");
  }
  for (auto v : mul) {
    if (v >= n) throw DomainError("multiplication table entry out of range");
  }
  if (one >= n) throw DomainError("identity label out of range");
  RingSpec spec{RingSpec::Kind::Table, static_cast<unsigned>(n), {}};
  auto ring = std::shared_ptr<FiniteRing>(new FiniteRing(spec, n, one, std::move(add), std::move(mul)));
  ring->verify_axioms();
  return ring;
}

void FiniteRing::verify_axioms() const {
  auto fail = [](const std::string& what) { throw DomainError("ring axiom violated: " + what); };
  if (one_ == 0) fail("1 = 0");
  for (std::size_t a = 0; a < n_; ++a) {
    const auto ea = static_cast<Elem>(a);
    if (add(ea, 0) != ea) fail("0 is not an additive identity");
    if (mul(ea, one_) != ea) fail("1 is not a multiplicative identity");
    if (add(ea, neg(ea)) != 0) fail("missing additive inverse");
    for (std::size_t b = 0; b < n_; ++b) {
      const auto eb = static_cast<Elem>(b);
      if (add(ea, eb) != add(eb, ea)) fail("addition not commutative");
      if (mul(ea, eb) != mul(eb, ea)) fail("multiplication not commutative");
      for (std::size_t c = 0; c < n_; ++c) {
        const auto ec = static_cast<Elem>(c);
        if (add(add(ea, eb), ec) != add(ea, add(eb, ec))) fail("addition not associative");
        if (mul(mul(ea, eb), ec) != mul(ea, mul(eb, ec))) fail("multiplication not associative");
        if (mul(ea, add(eb, ec)) != add(mul(ea, eb), mul(ea, ec))) fail("distributivity");
      }
    }
  }
}

bool same_ring(const FiniteRing& a, const FiniteRing& b) {
  return &a == &b || (a.n_ == b.n_ && a.one_ == b.one_ && a.add_ == b.add_ && a.mul_ == b.mul_);
}

std::string FiniteRing::element_to_string(Elem e) const {
  if (radix_.empty()) return std::to_string(e);
  std::vector<unsigned> digits(radix_.size());
  std::size_t label = e;
  for (std::size_t k = radix_.size(); k-- > 0;) {
    digits[k] = static_cast<unsigned>(label % radix_[k]);
    label /= radix_[k];
  }
  std::string out = "<";
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(digits[k]);
  }
  return out + ">";
}

Elem FiniteRing::element_from_components(std::span<const long> comps) const {
  if (radix_.empty()) {
    if (comps.size() != 1) throw DomainError("tuple element given for a non-product ring");
    return element_from_integer(comps[0]);
  }
  if (comps.size() != radix_.size()) throw DomainError("tuple length does not match the number of factors");
  std::size_t label = 0;
  for (std::size_t k = 0; k < radix_.size(); ++k) {
    const long m = static_cast<long>(radix_[k]);
    label = label * radix_[k] + static_cast<std::size_t>(((comps[k] % m) + m) % m);
  }
  return static_cast<Elem>(label);
}

Elem FiniteRing::element_from_integer(long value) const {
  if (spec_.kind == RingSpec::Kind::Table) {
    if (value < 0 || static_cast<std::size_t>(value) >= n_) throw DomainError("element label out of range");
    return static_cast<Elem>(value);
  }
  // image of value·1; the additive order of 1 divides n
  const long steps = ((value % static_cast<long>(n_)) + static_cast<long>(n_)) % static_cast<long>(n_);
  Elem acc = 0;
  for (long i = 0; i < steps; ++i) acc = add(acc, one_);
  return acc;
}

const std::vector<Bits>& FiniteRing::lattice(std::size_t max_lattice) const {
  std::call_once(lattice_once_, [&] {
    std::set<Bits, CanonicalLess> seen;
    std::vector<Bits> all;
    for (std::size_t x = 0; x < n_; ++x) {
      Bits c = principal(*this, static_cast<Elem>(x));
      if (seen.insert(c).second) all.push_back(std::move(c));
    }
    const std::size_t cap = std::max(max_lattice, kDefaultMaxLattice);
    // join-closure: pairwise sums until nothing new appears
    for (std::size_t j = 0; j < all.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        Bits s = sumset(*this, all[i], all[j]);
        if (seen.insert(s).second) {
          all.push_back(std::move(s));
          if (all.size() > cap) throw LimitError("ideal lattice exceeds " + std::to_string(cap) + " ideals");
        }
      }
    }
    std::sort(all.begin(), all.end(), CanonicalLess{});
    lattice_ = std::move(all);
  });
  if (lattice_.size() > max_lattice) {
    throw LimitError("ideal lattice has " + std::to_string(lattice_.size()) + " ideals, cap is " +
                     std::to_string(max_lattice));
  }
  return lattice_;
}

const std::vector<Bits>& FiniteRing::prime_bits() const {
  std::call_once(primes_once_, [&] {
    const auto& all = lattice();
    std::vector<Bits> found;
    std::vector<Bits> maximal;
    for (const auto& cand : all) {
      if (cand.all()) continue;
      bool prime = true;
      for (std::size_t a = 0; a < n_ && prime; ++a) {
        if (cand.test(a)) continue;
        for (std::size_t b = 0; b < n_; ++b) {
          if (!cand.test(b) && cand.test(mul(static_cast<Elem>(a), static_cast<Elem>(b)))) {
            prime = false;
            break;
          }
        }
      }
      if (prime) found.push_back(cand);
      const bool is_max = std::none_of(all.begin(), all.end(), [&](const Bits& other) {
        return !other.all() && other != cand && cand.is_subset_of(other);
      });
      if (is_max) maximal.push_back(cand);
    }
    // finite rings: prime == maximal
    if (found != maximal) throw std::logic_error("prime ideals differ from maximal ideals in a finite ring");
    std::sort(found.begin(), found.end(), [&](const Bits& a, const Bits& b) {
      const auto ra = n_ / a.count(), rb = n_ / b.count();
      if (ra != rb) return ra < rb;
      return canonical_compare(a, b) < 0;
    });
    primes_ = std::move(found);
  });
  return primes_;
}

// -------------------------------------------------------------- FiniteIdeal

FiniteIdeal::FiniteIdeal(RingPtr ring, Bits bits) : ring_(std::move(ring)), bits_(std::move(bits)) {
  if (bits_.size() != ring_->size()) throw DomainError("ideal bitset size does not match the ring");
}

std::vector<Elem> FiniteIdeal::elements() const {
  std::vector<Elem> out;
  out.reserve(size());
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(static_cast<Elem>(i));
  return out;
}

std::vector<Elem> FiniteIdeal::generators() const {
  if (is_zero()) return {};
  {
    std::lock_guard lock(ring_->generators_mu_);
    if (auto it = ring_->generators_.find(bits_); it != ring_->generators_.end()) return it->second;
  }
  auto gens = minimal_generators();
  std::lock_guard lock(ring_->generators_mu_);
  ring_->generators_.emplace(bits_, gens);
  return gens;
}

std::vector<Elem> FiniteIdeal::minimal_generators() const {
  const auto elems = elements();
  const auto& ring = *ring_;
  for (Elem e : elems) {
    if (principal(ring, e) == bits_) return {e};
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const Bits pi = principal(ring, elems[i]);
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (sumset(ring, pi, principal(ring, elems[j])) == bits_) return {elems[i], elems[j]};
    }
  }
  // not reachable for Z/n, GF(p) or their products (principal ideal rings)
  std::vector<Elem> gens;
  Bits span(ring.size());
  span.set(0);
  for (Elem e : elems) {
    if (span.test(e)) continue;
    gens.push_back(e);
    span = sumset(ring, span, principal(ring, e));
  }
  return gens;
}

std::string FiniteIdeal::to_string() const {
  const auto gens = generators();
  if (gens.empty()) return "(0)";
  std::string out = "(";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ",";
    out += ring_->element_to_string(gens[i]);
  }
  return out + ")";
}

// ------------------------------------------------------------ PrimeIdealFin

PrimeIdealFin::PrimeIdealFin(FiniteIdeal ideal) : ideal_(std::move(ideal)) {
  if (!is_prime(ideal_)) throw DomainError(ideal_.to_string() + " is not a prime ideal");
  residue_size_ = ideal_.ring()->size() / ideal_.size();
}

PrimeIdealFin PrimeIdealFin::known_prime(FiniteIdeal ideal) {
  const std::size_t residue = ideal.ring()->size() / ideal.size();
  return PrimeIdealFin(std::move(ideal), residue);
}

std::strong_ordering operator<=>(const PrimeIdealFin& a, const PrimeIdealFin& b) {
  if (a.residue_size_ != b.residue_size_) return a.residue_size_ <=> b.residue_size_;
  return a.ideal_ <=> b.ideal_;
}

bool is_prime(const FiniteIdeal& ideal) {
  if (ideal.is_unit()) return false;
  const auto& ring = *ideal.ring();
  for (std::size_t a = 0; a < ring.size(); ++a) {
    if (ideal.contains(static_cast<Elem>(a))) continue;
    for (std::size_t b = 0; b < ring.size(); ++b) {
      if (!ideal.contains(static_cast<Elem>(b)) && ideal.contains(ring.mul(static_cast<Elem>(a), static_cast<Elem>(b)))) {
        return false;
      }
    }
  }
  return true;
}

// --------------------------------------------------------------- operations

FiniteIdeal ideal_closure(const RingPtr& ring, std::span<const Elem> gens) {
  std::vector<Elem> seeds;
  Bits seen(ring->size());
  for (Elem g : gens) {
    if (g >= ring->size()) throw DomainError("generator is not a ring element");
    for (std::size_t r = 0; r < ring->size(); ++r) {
      const Elem y = ring->mul(static_cast<Elem>(r), g);
      if (!seen.test(y)) {
        seen.set(y);
        seeds.push_back(y);
      }
    }
  }
  return FiniteIdeal(ring, additive_closure(*ring, seeds));
}

std::vector<FiniteIdeal> all_ideals(const RingPtr& ring, std::size_t max_lattice) {
  std::vector<FiniteIdeal> out;
  for (const auto& b : ring->lattice(max_lattice)) out.emplace_back(ring, b);
  return out;
}

std::vector<PrimeIdealFin> primes(const RingPtr& ring) {
  std::vector<PrimeIdealFin> out;
  for (const auto& b : ring->prime_bits()) out.push_back(PrimeIdealFin::known_prime(FiniteIdeal(ring, b)));
  return out;
}

FiniteIdeal unit_ideal(const RingPtr& ring) {
  Bits b(ring->size());
  b.set();
  return FiniteIdeal(ring, std::move(b));
}

FiniteIdeal zero_ideal(const RingPtr& ring) {
  Bits b(ring->size());
  b.set(0);
  return FiniteIdeal(ring, std::move(b));
}

FiniteIdeal ideal_sum(const FiniteIdeal& a, const FiniteIdeal& b) {
  require_same(a, b);
  return FiniteIdeal(a.ring(), sumset(*a.ring(), a.bits(), b.bits()));
}

FiniteIdeal ideal_product(const FiniteIdeal& a, const FiniteIdeal& b) {
  require_same(a, b);
  const auto& ring = *a.ring();
  std::vector<Elem> products;
  Bits seen(ring.size());
  for (Elem x : a.elements()) {
    for (Elem y : b.elements()) {
      const Elem p = ring.mul(x, y);
      if (!seen.test(p)) {
        seen.set(p);
        products.push_back(p);
      }
    }
  }
  // products of ideal elements are already closed under the ring action
  return FiniteIdeal(a.ring(), additive_closure(ring, products));
}

FiniteIdeal ideal_intersection(const FiniteIdeal& a, const FiniteIdeal& b) {
  require_same(a, b);
  return FiniteIdeal(a.ring(), a.bits() & b.bits());
}

FiniteIdeal ideal_colon(const FiniteIdeal& a, const FiniteIdeal& b) {
  require_same(a, b);
  const auto& ring = *a.ring();
  const auto gens = b.generators();
  Bits out(ring.size());
  for (std::size_t x = 0; x < ring.size(); ++x) {
    bool inside = true;
    for (Elem g : gens) {
      if (!a.contains(ring.mul(static_cast<Elem>(x), g))) {
        inside = false;
        break;
      }
    }
    if (inside) out.set(x);
  }
  return FiniteIdeal(a.ring(), std::move(out));
}

FiniteIdeal ideal_power(const FiniteIdeal& a, unsigned r) {
  FiniteIdeal out = unit_ideal(a.ring());
  for (unsigned k = 0; k < r; ++k) out = ideal_product(out, a);
  return out;
}

}  // namespace gpif::finring
