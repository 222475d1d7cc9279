#include "gpif/props.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include <json.hpp>

namespace gpif::props {

using finmod::PrimeFactorization;
using finmod::RpeFiltration;
using finring::Bits;
using finring::FiniteIdeal;
using finring::PrimeIdealFin;

namespace {

constexpr std::pair<PropertyId, std::string_view> kNames[] = {
    {PropertyId::UniqueMultiset, "UNIQUE-MULTISET"},
    {PropertyId::AssChain, "ASS-CHAIN"},
    {PropertyId::ColonChar, "COLON-CHAR"},
    {PropertyId::FactorProduct, "FACTOR-PRODUCT"},
    {PropertyId::Interchange, "INTERCHANGE"},
    {PropertyId::Reorder, "REORDER"},
    {PropertyId::PowerDistinct, "POWER-DISTINCT"},
    {PropertyId::SelfFactorIff, "SELF-FACTOR-IFF"},
    {PropertyId::MinimalExponent, "MINIMAL-EXPONENT"},
    {PropertyId::DsumRegular, "DSUM-REGULAR"},
    {PropertyId::DsumMax, "DSUM-MAX"},
    {PropertyId::ExistIff, "EXIST-IFF"},
    {PropertyId::ObstructionSound, "OBSTRUCTION-SOUND"},
};

enum class Shape { Module, Dsum, Power, ModuleOrPower };

Shape shape_of(PropertyId id) {
  switch (id) {
    case PropertyId::DsumRegular:
    case PropertyId::DsumMax:
      return Shape::Dsum;
    case PropertyId::SelfFactorIff:
      return Shape::Power;
    case PropertyId::ExistIff:
      return Shape::ModuleOrPower;
    default:
      return Shape::Module;
  }
}

std::optional<Failure> fail(std::string assertion, std::string detail) {
  return Failure{std::move(assertion), std::move(detail)};
}

std::string join_primes(const std::vector<PrimeIdealFin>& ps) {
  std::string out = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].to_string();
  }
  return out + "]";
}

std::vector<PrimeIdealFin> distinct_sorted(std::vector<PrimeIdealFin> ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

// Independent of the colon kernel: tests every element of the ideal.
Bits brute_colon(const finmod::FiniteModule& m, const Bits& n, const FiniteIdeal& a) {
  const auto elems = a.elements();
  Bits out = m.empty_set();
  for (std::size_t x = 0; x < m.size(); ++x) {
    const bool inside = std::all_of(elems.begin(), elems.end(),
                                    [&](Elem r) { return n.test(m.act(r, static_cast<finmod::MElem>(x))); });
    if (inside) out.set(x);
  }
  return out;
}

std::vector<FiniteIdeal> ideals_of(const std::vector<PrimeIdealFin>& ps) {
  std::vector<FiniteIdeal> out;
  for (const auto& p : ps) out.push_back(p.ideal());
  return out;
}

// Canonical filtration plus the one preferring primes in reverse order.
std::vector<RpeFiltration> sample_filtrations(const ModuleCase& c) {
  std::vector<RpeFiltration> out{finmod::rpe_filtration(c.module, c.sub)};
  auto order = ideals_of(distinct_sorted(out.front().primes()));
  if (order.size() > 1) {
    std::reverse(order.begin(), order.end());
    out.push_back(finmod::rpe_filtration(c.module, c.sub, finmod::TieBreak::given(order)));
  }
  return out;
}

// ------------------------------------------------------- module-level checks

using Multiset = std::vector<unsigned>;

Multiset multiset_of(const PrimeFactorization& f, const std::vector<Bits>& ring_primes) {
  Multiset out(ring_primes.size(), 0);
  for (const auto& [p, e] : f.factors()) {
    const auto it = std::find(ring_primes.begin(), ring_primes.end(), p.ideal().bits());
    out[static_cast<std::size_t>(it - ring_primes.begin())] = e;
  }
  return out;
}

class AllFiltrations {
 public:
  AllFiltrations(Submodule top, const std::vector<Bits>& ring_primes) : top_(std::move(top)), primes_(ring_primes) {}

  // Multisets reachable from `cur` over every choice of maximal associated prime.
  const std::set<Multiset>& from(const Submodule& cur) {
    if (auto it = memo_.find(cur.bits()); it != memo_.end()) return it->second;
    std::set<Multiset> out;
    if (cur == top_) {
      out.insert(Multiset(primes_.size(), 0));
    } else {
      const auto ass = finmod::associated_primes(top_, cur);
      for (const auto& p : ass) {
        const bool maximal = std::none_of(ass.begin(), ass.end(), [&](const PrimeIdealFin& q) {
          return !(q == p) && p.ideal().is_subset_of(q.ideal());
        });
        if (!maximal) continue;
        const Submodule next = finmod::colon_submodule(cur, p.ideal(), top_);
        if (next.is_subset_of(cur)) throw DomainError("regular extension did not grow");
        const auto idx = static_cast<std::size_t>(std::find(primes_.begin(), primes_.end(), p.ideal().bits()) - primes_.begin());
        for (Multiset ms : from(next)) {
          ++ms[idx];
          out.insert(std::move(ms));
        }
      }
    }
    return memo_.emplace(cur.bits(), std::move(out)).first->second;
  }

 private:
  Submodule top_;
  const std::vector<Bits>& primes_;
  std::map<Bits, std::set<Multiset>> memo_;
};

std::optional<Failure> check_unique_multiset(const ModuleCase& c) {
  const auto& ring_primes = c.module->ring()->prime_bits();
  AllFiltrations all(Submodule::whole(c.module), ring_primes);
  const auto& reached = all.from(c.sub);
  const Multiset canonical = multiset_of(finmod::factorize(c.module, c.sub), ring_primes);
  if (reached.size() != 1 || *reached.begin() != canonical) {
    return fail("multiset-unique", std::to_string(reached.size()) + " distinct prime multisets over all tie-breaks");
  }
  return std::nullopt;
}

std::optional<Failure> check_ass_chain(const ModuleCase& c) {
  for (const auto& f : sample_filtrations(c)) {
    const auto ps = f.primes();
    for (std::size_t i = 1; i <= f.length(); ++i) {
      const auto expected = distinct_sorted({ps.begin() + static_cast<std::ptrdiff_t>(i - 1), ps.end()});
      const auto actual = finmod::associated_primes(c.module, f.at(i - 1));
      if (actual != expected) {
        return fail("ass-chain", "Ass(M/M_" + std::to_string(i - 1) + ") = " + join_primes(actual) + ", expected " +
                                     join_primes(expected));
      }
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_colon_char(const ModuleCase& c) {
  for (const auto& f : sample_filtrations(c)) {
    FiniteIdeal q = finring::unit_ideal(c.module->ring());
    for (std::size_t i = 1; i <= f.length(); ++i) {
      q = finring::ideal_product(q, f.steps()[i - 1].prime.ideal());
      if (brute_colon(*c.module, c.sub.bits(), q) != f.at(i).bits()) {
        return fail("colon-char", "M_" + std::to_string(i) + " = " + f.at(i).to_string() + " differs from (N : " +
                                      q.to_string() + ")");
      }
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_factor_product(const ModuleCase& c) {
  const auto f = finmod::rpe_filtration(c.module, c.sub);
  const auto whole = PrimeFactorization::from_primes(f.primes());
  for (std::size_t i = 1; i < f.length(); ++i) {
    const Submodule& k = f.at(i);
    const auto upper = finmod::factorize(c.module, k);
    const auto lower = finmod::factorize(k, c.sub);
    if (!(upper * lower == whole)) {
      return fail("factor-product", "K = M_" + std::to_string(i) + ": P_M(N) = " + whole.to_string() + " but P_M(K) P_K(N) = " +
                                        upper.to_string() + " * " + lower.to_string());
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_interchange(const ModuleCase& c) {
  for (const auto& f : sample_filtrations(c)) {
    for (std::size_t i = 1; i < f.length(); ++i) {
      const auto& pi = f.steps()[i - 1].prime;
      const auto& pj = f.steps()[i].prime;
      if (pi == pj) {
        bool refused = false;
        try {
          (void)finmod::interchange_step(f, i);
        } catch (const DomainError&) {
          refused = true;
        }
        if (!refused) return fail("interchange-equal", "equal adjacent primes were interchanged at " + std::to_string(i));
        continue;
      }
      const auto g = finmod::interchange_step(f, i);  // validates
      if (!(g.steps()[i - 1].prime == pj) || !(g.steps()[i].prime == pi)) {
        return fail("interchange-swap", "primes not swapped at " + std::to_string(i));
      }
      for (std::size_t j = 0; j <= f.length(); ++j) {
        if (j != i && !(g.at(j) == f.at(j))) return fail("interchange-frame", "M_" + std::to_string(j) + " changed");
      }
      if (!(finmod::interchange_step(g, i).at(i) == f.at(i))) {
        return fail("interchange-involution", "swapping twice at " + std::to_string(i) + " does not restore M_i");
      }
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_reorder(const ModuleCase& c) {
  const auto fact = finmod::factorize(c.module, c.sub);
  auto order = ideals_of(distinct_sorted(finmod::rpe_filtration(c.module, c.sub).primes()));
  std::sort(order.begin(), order.end());
  do {
    const auto f = finmod::reorder_filtration(c.module, c.sub, order);
    f.validate();
    std::vector<FiniteIdeal> expected;
    for (const auto& p : order) expected.insert(expected.end(), fact.exponent_of(p), p);
    if (ideals_of(f.primes()) != expected) return fail("reorder-grouping", "primes not grouped in the requested order");
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

std::optional<Failure> check_power_distinct(const ModuleCase& c) {
  const auto fact = finmod::factorize(c.module, c.sub);
  for (const auto& [p, r] : fact.factors()) {
    if (finring::ideal_power(p.ideal(), r) == finring::ideal_power(p.ideal(), r - 1)) {
      return fail("power-distinct", p.to_string() + "^" + std::to_string(r) + " equals the previous power");
    }
  }
  return std::nullopt;
}

std::optional<Failure> check_minimal_exponent(const ModuleCase& c) {
  const auto fact = finmod::factorize(c.module, c.sub);
  const auto& ring = c.module->ring();
  const FiniteIdeal full = fact.product_ideal(ring);
  for (std::size_t i = 0; i < fact.factors().size(); ++i) {
    FiniteIdeal lowered = finring::unit_ideal(ring);
    for (std::size_t j = 0; j < fact.factors().size(); ++j) {
      const auto& [p, e] = fact.factors()[j];
      lowered = finring::ideal_product(lowered, finring::ideal_power(p.ideal(), i == j ? e - 1 : e));
    }
    if (lowered == full) {
      return fail("minimal-exponent", "lowering the exponent of " + fact.factors()[i].first.to_string() +
                                          " leaves the product unchanged");
    }
  }
  return std::nullopt;
}

// True when p^r is excluded as a factorization: p^r = p^(r-1), or some
// ideal a strictly above p has p^(r-1) a inside p^r.
bool obstructed(const PrimeIdealFin& p, unsigned r) {
  const auto pr = finring::ideal_power(p.ideal(), r);
  const auto prev = finring::ideal_power(p.ideal(), r - 1);
  if (pr == prev) return true;
  for (const auto& a : finring::all_ideals(p.ideal().ring())) {
    if (a == p.ideal() || !p.ideal().is_subset_of(a)) continue;
    if (finring::ideal_product(prev, a).is_subset_of(pr)) return true;
  }
  return false;
}

std::optional<Failure> check_obstruction_sound(const ModuleCase& c) {
  const auto fact = finmod::factorize(c.module, c.sub);
  if (fact.factors().size() != 1) return std::nullopt;
  const auto& [p, r] = fact.factors().front();
  if (obstructed(p, r)) return fail("obstruction-sound", "an obstructed power " + fact.to_string() + " occurs");
  return std::nullopt;
}

std::optional<Failure> check_exist_converse(const ModuleCase& c) {
  const auto fact = finmod::factorize(c.module, c.sub);
  std::vector<FiniteIdeal> order;
  for (const auto& f : fact.factors()) order.push_back(f.first.ideal());
  const auto f = finmod::reorder_filtration(c.module, c.sub, order);
  std::size_t start = 0;
  for (const auto& [p, r] : fact.factors()) {
    const Submodule& lo = f.at(start);
    const Submodule& hi = f.at(start + r);
    const auto seg = finmod::factorize(hi, lo);
    if (!(seg == PrimeFactorization::from_primes(std::vector<PrimeIdealFin>(r, p)))) {
      return fail("exist-segment", "segment for " + p.to_string() + " factors as " + seg.to_string());
    }
    start += r;
  }
  return std::nullopt;
}

// --------------------------------------------------------- direct sum checks

Submodule embed(const ModulePtr& sum, const std::vector<ModuleCase>& cs, const std::vector<Submodule>& subs) {
  std::vector<ModulePtr> mods;
  for (const auto& c : cs) mods.push_back(c.module);
  return Submodule(sum, finmod::direct_sum(mods, subs).second.bits());
}

std::optional<Failure> check_dsum_regular(const std::vector<ModuleCase>& cs) {
  std::vector<ModulePtr> mods;
  std::vector<Submodule> cur;
  for (const auto& c : cs) {
    mods.push_back(c.module);
    cur.push_back(c.sub);
  }
  const auto [sum, first] = finmod::direct_sum(mods, cur);
  const Submodule whole = Submodule::whole(sum);
  Submodule ncur = first;
  while (!(ncur == whole)) {
    std::vector<PrimeIdealFin> uni;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto a = finmod::associated_primes(mods[i], cur[i]);
      uni.insert(uni.end(), a.begin(), a.end());
    }
    uni = distinct_sorted(uni);
    const auto ass = finmod::associated_primes(whole, ncur);
    if (ass != uni) return fail("dsum-ass", "Ass of the sum " + join_primes(ass) + " vs union " + join_primes(uni));
    std::optional<std::vector<Submodule>> advance;
    for (const auto& p : uni) {
      const bool maximal = std::none_of(uni.begin(), uni.end(), [&](const PrimeIdealFin& q) {
        return !(q == p) && p.ideal().is_subset_of(q.ideal());
      });
      if (!maximal) continue;
      std::vector<Submodule> ks;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto a = finmod::associated_primes(mods[i], cur[i]);
        const bool present = std::find(a.begin(), a.end(), p) != a.end();
        ks.push_back(present ? finmod::regular_prime_extension(Submodule::whole(mods[i]), cur[i], p) : cur[i]);
      }
      const Submodule expected = embed(sum, cs, ks);
      const Submodule actual = finmod::regular_prime_extension(whole, ncur, p);
      if (!(expected == actual)) {
        return fail("dsum-regular", "regular " + p.to_string() + "-extension of the sum is not the componentwise one");
      }
      if (!advance) advance = std::move(ks);
    }
    cur = std::move(*advance);
    ncur = embed(sum, cs, cur);
  }
  return std::nullopt;
}

std::optional<Failure> check_dsum_max(const std::vector<ModuleCase>& cs) {
  std::vector<ModulePtr> mods;
  std::vector<Submodule> subs;
  std::vector<PrimeFactorization> parts;
  for (const auto& c : cs) {
    mods.push_back(c.module);
    subs.push_back(c.sub);
    parts.push_back(finmod::factorize(c.module, c.sub));
  }
  const auto [sum, nsum] = finmod::direct_sum(mods, subs);
  const auto total = finmod::factorize(sum, nsum);
  for (const auto& bits : sum->ring()->prime_bits()) {
    const FiniteIdeal p(sum->ring(), bits);
    unsigned expect = 0;
    for (const auto& f : parts) expect = std::max(expect, f.exponent_of(p));
    if (total.exponent_of(p) != expect) {
      std::string shown;
      for (const auto& f : parts) shown += (shown.empty() ? "" : ", ") + f.to_string();
      return fail("dsum-max", "P of the sum = " + total.to_string() + " from parts " + shown);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------- ring-level checks

struct BuiltPowers {
  RingPtr ring;
  std::vector<std::pair<PrimeIdealFin, unsigned>> powers;
};

BuiltPowers build_powers(const PowerCase& pc) {
  BuiltPowers out{ring_for(pc.ring_spec), {}};
  for (const auto& [gens, r] : pc.powers) {
    if (r < 1) throw DomainError("exponents must be positive");
    out.powers.emplace_back(PrimeIdealFin(finring::ideal_closure(out.ring, gens)), r);
  }
  return out;
}

ModulePtr free_module(const RingPtr& ring) { return finmod::FiniteModule::present(ring, 1, {}); }

std::optional<Failure> check_self_factor(const PowerCase& pc) {
  const auto b = build_powers(pc);
  if (b.powers.size() != 1) throw DomainError("SELF-FACTOR-IFF takes one prime power");
  const auto& [p, r] = b.powers.front();
  const auto m = free_module(b.ring);
  const auto pr = finring::ideal_power(p.ideal(), r);
  const Submodule n(m, pr.bits());
  const bool lhs = finmod::factorize(m, n) == PrimeFactorization::from_primes(std::vector<PrimeIdealFin>(r, p));
  const auto ass = finmod::associated_primes(m, n);
  const bool rhs = !(pr == finring::ideal_power(p.ideal(), r - 1)) && ass.size() == 1 && ass.front() == p;
  if (lhs != rhs) {
    return fail("self-factor-iff", std::string("P_R(p^r) = p^r is ") + (lhs ? "true" : "false") +
                                       " but the power/Ass condition is " + (rhs ? "true" : "false"));
  }
  return std::nullopt;
}

std::optional<Failure> check_exist_direct(const PowerCase& pc) {
  const auto b = build_powers(pc);
  if (b.powers.empty()) throw DomainError("EXIST-IFF needs at least one prime power");
  std::vector<ModulePtr> mods;
  std::vector<Submodule> subs;
  std::vector<PrimeIdealFin> expected;
  for (const auto& [p, r] : b.powers) {
    const auto pr = finring::ideal_power(p.ideal(), r);
    if (pr == finring::ideal_power(p.ideal(), r - 1)) throw DomainError(p.to_string() + "^" + std::to_string(r) + " is a repeated power");
    if (std::find(expected.begin(), expected.end(), p) != expected.end()) throw DomainError("primes must be distinct");
    mods.push_back(free_module(b.ring));
    subs.emplace_back(mods.back(), pr.bits());
    expected.insert(expected.end(), r, p);
  }
  const auto want = PrimeFactorization::from_primes(expected);
  const auto got = mods.size() == 1 ? finmod::factorize(mods.front(), subs.front())
                                    : [&] {
                                        const auto [sum, nsum] = finmod::direct_sum(mods, subs);
                                        return finmod::factorize(sum, nsum);
                                      }();
  if (!(got == want)) return fail("exist-direct", "P_{R^n}(sum of powers) = " + got.to_string() + ", expected " + want.to_string());
  return std::nullopt;
}

std::optional<Failure> check_module(PropertyId id, const ModuleCase& c) {
  switch (id) {
    case PropertyId::UniqueMultiset: return check_unique_multiset(c);
    case PropertyId::AssChain: return check_ass_chain(c);
    case PropertyId::ColonChar: return check_colon_char(c);
    case PropertyId::FactorProduct: return check_factor_product(c);
    case PropertyId::Interchange: return check_interchange(c);
    case PropertyId::Reorder: return check_reorder(c);
    case PropertyId::PowerDistinct: return check_power_distinct(c);
    case PropertyId::MinimalExponent: return check_minimal_exponent(c);
    case PropertyId::ObstructionSound: return check_obstruction_sound(c);
    case PropertyId::ExistIff: return check_exist_converse(c);
    default: throw DomainError(std::string(property_name(id)) + " does not take a single (M, N) instance");
  }
}

// ---------------------------------------------------------------- enumeration

// Arithmetic on codes of R^g (first coordinate most significant).
struct FreeCodes {
  const finring::FiniteRing& ring;
  std::size_t rank;
  std::size_t total;

  std::vector<Elem> digits(std::size_t code) const {
    std::vector<Elem> d(rank);
    for (std::size_t k = rank; k-- > 0;) {
      d[k] = static_cast<Elem>(code % ring.size());
      code /= ring.size();
    }
    return d;
  }
  std::size_t encode(const std::vector<Elem>& d) const {
    std::size_t code = 0;
    for (Elem e : d) code = code * ring.size() + e;
    return code;
  }
  std::size_t add(std::size_t a, std::size_t b) const {
    auto da = digits(a);
    const auto db = digits(b);
    for (std::size_t k = 0; k < rank; ++k) da[k] = ring.add(da[k], db[k]);
    return encode(da);
  }
  Bits cyclic(std::size_t v) const {
    Bits out(total);
    const auto d = digits(v);
    for (std::size_t r = 0; r < ring.size(); ++r) {
      std::size_t code = 0;
      for (std::size_t k = 0; k < rank; ++k) code = code * ring.size() + ring.mul(static_cast<Elem>(r), d[k]);
      out.set(code);
    }
    return out;
  }
};

std::vector<std::size_t> members(const Bits& b) {
  std::vector<std::size_t> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(i);
  return out;
}

// Relation submodules of R^g spanned by at most two rows with 2 <= |M| <= cap.
std::vector<std::vector<std::vector<Elem>>> relation_sets(const RingPtr& ring, std::size_t rank, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < rank; ++k) total *= ring->size();
  const FreeCodes codes{*ring, rank, total};

  std::vector<Bits> cyc;
  std::vector<std::size_t> rep;
  {
    std::set<Bits> seen;
    for (std::size_t v = 0; v < total; ++v) {
      Bits b = codes.cyclic(v);
      if (seen.insert(b).second) {
        cyc.push_back(std::move(b));
        rep.push_back(v);
      }
    }
  }
  std::vector<std::vector<std::vector<Elem>>> out;
  std::set<Bits> seen;
  auto consider = [&](const Bits& s, std::vector<std::vector<Elem>> rows) {
    const std::size_t msize = total / s.count();
    if (msize < 2 || msize > cap) return;
    if (seen.insert(s).second) out.push_back(std::move(rows));
  };
  for (std::size_t i = 0; i < cyc.size(); ++i) {
    std::vector<std::vector<Elem>> rows;
    if (rep[i] != 0) rows.push_back(codes.digits(rep[i]));
    consider(cyc[i], std::move(rows));
  }
  std::vector<std::vector<std::size_t>> elems;
  for (const auto& b : cyc) elems.push_back(members(b));
  const std::size_t n = ring->size();
  auto add = [&](std::size_t x, std::size_t y) -> std::size_t {
    if (rank == 1) return ring->add(static_cast<Elem>(x), static_cast<Elem>(y));
    return ring->add(static_cast<Elem>(x / n), static_cast<Elem>(y / n)) * n +
           ring->add(static_cast<Elem>(x % n), static_cast<Elem>(y % n));
  };
  for (std::size_t i = 1; i < cyc.size(); ++i) {
    for (std::size_t j = i + 1; j < cyc.size(); ++j) {
      // |A + B| = |A| |B| / |A ∩ B|
      const std::size_t meet = (cyc[i] & cyc[j]).count();
      const std::size_t sum_size = elems[i].size() * elems[j].size() / meet;
      if (meet == elems[i].size() || meet == elems[j].size()) continue;  // nested
      if (total / sum_size < 2 || total / sum_size > cap) continue;
      Bits s(total);
      for (std::size_t y : elems[j]) {
        for (std::size_t x : elems[i]) s.set(add(x, y));
      }
      consider(s, {codes.digits(rep[i]), codes.digits(rep[j])});
    }
  }
  return out;
}

void append_cases(const RingSpec& spec, std::size_t rank, std::vector<std::vector<Elem>> rows,
                  std::vector<ModuleCase>& out) {
  const RingPtr ring = ring_for(spec);
  const ModulePtr m = finmod::FiniteModule::present(ring, rank, rows);
  std::set<Bits> seen;
  for (finmod::MElem x = 0; x < m->size(); ++x) {
    const finmod::MElem gen[] = {x};
    Submodule n = finmod::submodule_closure(m, gen);
    if (n.is_whole() || !seen.insert(n.bits()).second) continue;
    out.push_back(ModuleCase{spec, rank, rows, {m->to_tuple(x)}, m, std::move(n)});
  }
}

using Rng = std::mt19937_64;

std::size_t draw(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::optional<ModuleCase> sample_case(Rng& rng, const RingSpec& spec, std::size_t cap) {
  const RingPtr ring = ring_for(spec);
  std::size_t rank = 1 + draw(rng, 2);
  if (ring->size() * ring->size() > finmod::kMaxModuleSize) rank = 1;
  std::vector<std::vector<Elem>> rows(draw(rng, 3), std::vector<Elem>(rank));
  for (auto& row : rows) {
    for (auto& e : row) e = static_cast<Elem>(draw(rng, ring->size()));
  }
  const ModulePtr m = finmod::FiniteModule::present(ring, rank, rows);
  if (m->size() < 2 || m->size() > cap) return std::nullopt;
  const auto x = static_cast<finmod::MElem>(draw(rng, m->size()));
  const finmod::MElem gen[] = {x};
  Submodule n = finmod::submodule_closure(m, gen);
  if (n.is_whole()) return std::nullopt;
  return ModuleCase{spec, rank, std::move(rows), {m->to_tuple(x)}, m, std::move(n)};
}

constexpr std::size_t kMaxSampleAttempts = 10000;

ModuleCase sample_case_retry(Rng& rng, const RingSpec& spec, std::size_t cap) {
  for (std::size_t attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    if (auto c = sample_case(rng, spec, cap)) return std::move(*c);
  }
  throw ConfigError("no module with 2 <= |M| <= cap found over " + spec.to_string());
}

std::vector<RingSpec> rings_within(const InstanceFamily& family) {
  std::vector<RingSpec> out;
  for (const auto& spec : family.rings) {
    if (ring_for(spec)->size() <= family.cap) out.push_back(spec);
  }
  return out;
}

std::vector<std::vector<Elem>> prime_gens(const RingPtr& ring) {
  std::vector<std::vector<Elem>> out;
  for (const auto& p : finring::primes(ring)) out.push_back(p.ideal().generators());
  return out;
}

// Exponents r in 1..4 for which p^r != p^(r-1).
std::vector<unsigned> valid_exponents(const PrimeIdealFin& p) {
  std::vector<unsigned> out;
  for (unsigned r = 1; r <= 4; ++r) {
    if (finring::ideal_power(p.ideal(), r) == finring::ideal_power(p.ideal(), r - 1)) break;
    out.push_back(r);
  }
  return out;
}

std::vector<PowerCase> self_power_cases(const InstanceFamily& family) {
  std::vector<PowerCase> out;
  for (const auto& spec : rings_within(family)) {
    for (const auto& g : prime_gens(ring_for(spec))) {
      for (unsigned r = 1; r <= 4; ++r) out.push_back(PowerCase{spec, {{g, r}}});
    }
  }
  return out;
}

std::vector<PowerCase> exist_power_cases(const InstanceFamily& family) {
  std::vector<PowerCase> out;
  for (const auto& spec : rings_within(family)) {
    const RingPtr ring = ring_for(spec);
    const auto ps = finring::primes(ring);
    const std::size_t k = ps.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> chosen;
      std::size_t size = 1;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask >> i & 1) {
          chosen.push_back(i);
          size *= ring->size();
        }
      }
      if (size > finmod::kMaxModuleSize) continue;
      std::vector<std::vector<unsigned>> exps;
      for (std::size_t i : chosen) exps.push_back(valid_exponents(ps[i]));
      std::vector<std::size_t> at(chosen.size(), 0);
      while (true) {
        PowerCase pc{spec, {}};
        for (std::size_t t = 0; t < chosen.size(); ++t) {
          pc.powers.emplace_back(ps[chosen[t]].ideal().generators(), exps[t][at[t]]);
        }
        out.push_back(std::move(pc));
        std::size_t t = chosen.size();
        while (t > 0 && ++at[t - 1] == exps[t - 1].size()) at[--t] = 0;
        if (t == 0) break;
      }
    }
  }
  return out;
}

PowerCase sample_power(Rng& rng, const std::vector<RingSpec>& rings, bool many) {
  const RingSpec& spec = rings[draw(rng, rings.size())];
  const RingPtr ring = ring_for(spec);
  const auto ps = finring::primes(ring);
  PowerCase pc{spec, {}};
  if (!many) {
    pc.powers.emplace_back(ps[draw(rng, ps.size())].ideal().generators(), static_cast<unsigned>(1 + draw(rng, 4)));
    return pc;
  }
  std::size_t size = 1;
  for (const auto& p : ps) {
    if (!pc.powers.empty() && (draw(rng, 2) == 0 || size * ring->size() > finmod::kMaxModuleSize)) continue;
    size *= ring->size();
    const auto exps = valid_exponents(p);
    pc.powers.emplace_back(p.ideal().generators(), exps[draw(rng, exps.size())]);
  }
  return pc;
}

struct FamilyCache {
  std::optional<std::vector<ModuleCase>> modules;
};

const std::vector<ModuleCase>& cached_modules(const InstanceFamily& family, FamilyCache& cache) {
  if (!cache.modules) cache.modules = module_cases(family);
  return *cache.modules;
}

std::vector<Instance> dsum_instances(const InstanceFamily& family, FamilyCache& cache) {
  std::vector<Instance> out;
  if (!family.exhaustive) {
    Rng rng(family.seed);
    const auto rings = rings_within(family);
    if (rings.empty()) return out;
    for (std::size_t s = 0; s < family.samples; ++s) {
      const RingSpec& spec = rings[draw(rng, rings.size())];
      std::vector<ModuleCase> pair;
      pair.push_back(sample_case_retry(rng, spec, family.cap));
      pair.push_back(sample_case_retry(rng, spec, family.cap));
      out.emplace_back(std::move(pair));
    }
    return out;
  }
  // summands: the cyclic modules R/I of the family, with all their N
  std::vector<ModuleCase> all;
  for (const auto& c : cached_modules(family, cache)) {
    if (c.rank == 1) all.push_back(c);
  }
  std::size_t begin = 0;
  while (begin < all.size()) {
    std::size_t end = begin;
    while (end < all.size() && all[end].ring_spec == all[begin].ring_spec) ++end;
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = a; b < end; ++b) {
        const std::size_t ab = all[a].module->size() * all[b].module->size();
        if (ab > family.cap) continue;
        out.emplace_back(std::vector<ModuleCase>{all[a], all[b]});
        for (std::size_t c = b; c < end; ++c) {
          if (ab * all[c].module->size() <= family.cap) {
            out.emplace_back(std::vector<ModuleCase>{all[a], all[b], all[c]});
          }
        }
      }
    }
    begin = end;
  }
  return out;
}

std::vector<Instance> instances_impl(PropertyId id, const InstanceFamily& family, FamilyCache& cache) {
  std::vector<Instance> out;
  auto add_modules = [&] {
    if (family.exhaustive) {
      for (const auto& c : cached_modules(family, cache)) out.emplace_back(std::vector<ModuleCase>{c});
      return;
    }
    Rng rng(family.seed ^ static_cast<std::uint64_t>(id));
    const auto rings = rings_within(family);
    if (rings.empty()) return;
    for (std::size_t s = 0; s < family.samples; ++s) {
      const RingSpec& spec = rings[draw(rng, rings.size())];
      out.emplace_back(std::vector<ModuleCase>{sample_case_retry(rng, spec, family.cap)});
    }
  };
  switch (shape_of(id)) {
    case Shape::Module:
      add_modules();
      break;
    case Shape::Dsum:
      out = dsum_instances(family, cache);
      break;
    case Shape::Power:
      if (family.exhaustive) {
        for (auto& pc : self_power_cases(family)) out.emplace_back(std::move(pc));
      } else {
        Rng rng(family.seed ^ static_cast<std::uint64_t>(id));
        const auto rings = rings_within(family);
        for (std::size_t s = 0; s < family.samples && !rings.empty(); ++s) out.emplace_back(sample_power(rng, rings, false));
      }
      break;
    case Shape::ModuleOrPower:
      if (family.exhaustive) {
        for (auto& pc : exist_power_cases(family)) out.emplace_back(std::move(pc));
        add_modules();
      } else {
        Rng rng(family.seed ^ static_cast<std::uint64_t>(id));
        const auto rings = rings_within(family);
        for (std::size_t s = 0; s < family.samples && !rings.empty(); ++s) {
          if (draw(rng, 2) == 0) {
            out.emplace_back(sample_power(rng, rings, true));
          } else {
            const RingSpec& spec = rings[draw(rng, rings.size())];
            out.emplace_back(std::vector<ModuleCase>{sample_case_retry(rng, spec, family.cap)});
          }
        }
      }
      break;
  }
  return out;
}

// ------------------------------------------------------------------ shrinking

bool same_failure(const std::optional<Failure>& f, const Failure& want) {
  if (!f || f->assertion != want.assertion) return false;
  return want.assertion != "exception" || f->detail == want.detail;
}

std::optional<ModuleCase> rebuild(const ModuleCase& c, std::vector<std::vector<Elem>> rows,
                                  std::vector<std::vector<Elem>> gens) {
  try {
    auto out = ModuleCase::make(c.ring_spec, c.rank, std::move(rows), std::move(gens));
    if (out.module->size() < 2 || out.sub.is_whole()) return std::nullopt;
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<ModuleCase> shrink(PropertyId id, std::vector<ModuleCase> cases, const Failure& want) {
  auto still_fails = [&](const std::vector<ModuleCase>& cand) {
    return same_failure(check_instance(id, Instance{cand}), want);
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    // drop relation rows
    for (std::size_t k = cases[i].relations.size(); k-- > 0;) {
      auto rows = cases[i].relations;
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(k));
      if (auto c = rebuild(cases[i], rows, cases[i].sub_gens)) {
        auto cand = cases;
        cand[i] = std::move(*c);
        if (still_fails(cand)) cases = std::move(cand);
      }
    }
    // minimize entries, relation rows first
    for (int which = 0; which < 2; ++which) {
      const std::size_t nrows = which == 0 ? cases[i].relations.size() : cases[i].sub_gens.size();
      for (std::size_t r = 0; r < nrows; ++r) {
        for (std::size_t k = 0; k < cases[i].rank; ++k) {
          const Elem current = (which == 0 ? cases[i].relations : cases[i].sub_gens)[r][k];
          for (Elem v = 0; v < current; ++v) {
            auto rows = cases[i].relations;
            auto gens = cases[i].sub_gens;
            (which == 0 ? rows : gens)[r][k] = v;
            auto c = rebuild(cases[i], std::move(rows), std::move(gens));
            if (!c) continue;
            auto cand = cases;
            cand[i] = std::move(*c);
            if (still_fails(cand)) {
              cases = std::move(cand);
              break;
            }
          }
        }
      }
    }
  }
  return cases;
}

void validate_family(const InstanceFamily& family) {
  if (family.rings.empty()) throw ConfigError("instance family lists no rings");
  if (family.cap < 1 || family.cap > finmod::kMaxModuleSize) {
    throw ConfigError("module size cap must lie in 1.." + std::to_string(finmod::kMaxModuleSize));
  }
  if (!family.exhaustive && family.samples == 0) throw ConfigError("sampled mode needs at least one sample");
  for (const auto& spec : family.rings) {
    try {
      (void)ring_for(spec);
    } catch (const Error& e) {
      throw ConfigError("ring " + spec.to_string() + ": " + e.what());
    }
  }
}

PropertyReport run_property(PropertyId id, const InstanceFamily& family, FamilyCache& cache) {
  const auto start = std::chrono::steady_clock::now();
  const auto insts = instances_impl(id, family, cache);
  std::vector<std::optional<Failure>> results(insts.size());
  const auto count = static_cast<std::int64_t>(insts.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) results[i] = check_instance(id, insts[i]);

  PropertyReport report;
  report.id = id;
  report.instances = insts.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    report.pass = false;
    Instance witness = insts[i];
    Failure why = *results[i];
    if (auto* cases = std::get_if<std::vector<ModuleCase>>(&witness)) {
      *cases = shrink(id, std::move(*cases), why);
      if (auto again = check_instance(id, witness)) why = *again;
    }
    report.assertion = why.assertion;
    report.detail = why.detail;
    report.counterexample = instance_script(id, witness);
    break;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string elems_to_string(const finring::FiniteRing& ring, const std::vector<Elem>& row) {
  std::string out = "[";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ", ";
    out += ring.element_to_string(row[i]);
  }
  return out + "]";
}

std::string rows_to_string(const finring::FiniteRing& ring, const std::vector<std::vector<Elem>>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ", ";
    out += elems_to_string(ring, rows[i]);
  }
  return out + "]";
}

}  // namespace

// ---------------------------------------------------------------- public API

const std::vector<PropertyId>& all_properties() {
  static const std::vector<PropertyId> ids = [] {
    std::vector<PropertyId> v;
    for (const auto& [id, name] : kNames) v.push_back(id);
    return v;
  }();
  return ids;
}

std::string_view property_name(PropertyId id) {
  for (const auto& [k, name] : kNames) {
    if (k == id) return name;
  }
  return "?";
}

std::optional<PropertyId> parse_property(std::string_view name) {
  for (const auto& [id, n] : kNames) {
    if (n == name) return id;
  }
  return std::nullopt;
}

RingPtr ring_for(const RingSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, RingPtr> cache;
  const std::string key = spec.to_string();
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  RingPtr ring = finring::FiniteRing::build(spec);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(ring)).first->second;
}

ModuleCase ModuleCase::make(const RingSpec& ring, std::size_t rank, std::vector<std::vector<Elem>> relations,
                            std::vector<std::vector<Elem>> sub_gens) {
  const RingPtr r = ring_for(ring);
  ModulePtr m = finmod::FiniteModule::present(r, rank, relations);
  std::vector<finmod::MElem> gens;
  for (const auto& g : sub_gens) gens.push_back(m->from_tuple(g));
  Submodule n = finmod::submodule_closure(m, gens);
  return ModuleCase{ring, rank, std::move(relations), std::move(sub_gens), std::move(m), std::move(n)};
}

std::optional<Failure> check_instance(PropertyId id, const Instance& inst) {
  try {
    if (const auto* pc = std::get_if<PowerCase>(&inst)) {
      if (id == PropertyId::SelfFactorIff) return check_self_factor(*pc);
      if (id == PropertyId::ExistIff) return check_exist_direct(*pc);
      throw DomainError(std::string(property_name(id)) + " does not take prime powers");
    }
    const auto& cases = std::get<std::vector<ModuleCase>>(inst);
    if (cases.empty()) throw DomainError("no module instance given");
    if (shape_of(id) == Shape::Dsum) {
      if (cases.size() < 2) throw DomainError(std::string(property_name(id)) + " needs at least two (N, M) pairs");
      return id == PropertyId::DsumMax ? check_dsum_max(cases) : check_dsum_regular(cases);
    }
    if (cases.size() != 1) throw DomainError(std::string(property_name(id)) + " takes exactly one (N, M) pair");
    return check_module(id, cases.front());
  } catch (const std::exception& e) {
    return Failure{"exception", e.what()};
  }
}

std::string instance_script(PropertyId id, const Instance& inst) {
  std::string out;
  std::string targets;
  if (const auto* pc = std::get_if<PowerCase>(&inst)) {
    const RingPtr ring = ring_for(pc->ring_spec);
    out += "ring " + pc->ring_spec.to_string() + "\n";
    for (std::size_t i = 0; i < pc->powers.size(); ++i) {
      const std::string name = "p" + std::to_string(i + 1);
      std::string gens;
      for (std::size_t k = 0; k < pc->powers[i].first.size(); ++k) {
        if (k) gens += ", ";
        gens += ring->element_to_string(pc->powers[i].first[k]);
      }
      out += "ideal " + name + " = (" + gens + ")\n";
      if (i) targets += ", ";
      targets += name + " ^ " + std::to_string(pc->powers[i].second);
    }
  } else {
    const auto& cases = std::get<std::vector<ModuleCase>>(inst);
    if (!cases.empty()) out += "ring " + cases.front().ring_spec.to_string() + "\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const std::string idx = std::to_string(i + 1);
      const auto& ring = *c.module->ring();
      out += "module M" + idx + " = free " + std::to_string(c.rank);
      if (!c.relations.empty()) out += " relations " + rows_to_string(ring, c.relations);
      out += "\n";
      out += "submodule N" + idx + " in M" + idx + " = span " + rows_to_string(ring, c.sub_gens) + "\n";
      if (i) targets += ", ";
      targets += "N" + idx + " in M" + idx;
    }
  }
  out += "query check " + std::string(property_name(id)) + " on " + targets + "\n";
  return out;
}

InstanceFamily InstanceFamily::default_family() {
  InstanceFamily f;
  for (unsigned n = 2; n <= 16; ++n) f.rings.push_back(RingSpec::zmod(n));
  for (unsigned n : {18u, 24u, 27u, 32u}) f.rings.push_back(RingSpec::zmod(n));
  for (unsigned p : {2u, 3u, 5u, 7u}) f.rings.push_back(RingSpec::gf(p));
  for (unsigned a = 2; a * a <= 64; ++a) {
    for (unsigned b = a; a * b <= 64; ++b) f.rings.push_back(RingSpec::product({RingSpec::zmod(a), RingSpec::zmod(b)}));
  }
  return f;
}

InstanceFamily InstanceFamily::of_rings(std::vector<RingSpec> rings) {
  InstanceFamily f;
  f.rings = std::move(rings);
  return f;
}

std::vector<ModuleCase> module_cases(const InstanceFamily& family) {
  validate_family(family);
  std::vector<ModuleCase> out;
  if (!family.exhaustive) {
    Rng rng(family.seed);
    const auto rings = rings_within(family);
    for (std::size_t s = 0; s < family.samples && !rings.empty(); ++s) {
      out.push_back(sample_case_retry(rng, rings[draw(rng, rings.size())], family.cap));
    }
    return out;
  }
  for (const auto& spec : family.rings) {
    const RingPtr ring = ring_for(spec);
    for (std::size_t rank = 1; rank <= 2; ++rank) {
      std::size_t total = 1;
      for (std::size_t k = 0; k < rank; ++k) total *= ring->size();
      if (total > finmod::kMaxModuleSize) break;
      for (auto& rows : relation_sets(ring, rank, family.cap)) append_cases(spec, rank, std::move(rows), out);
    }
  }
  return out;
}

std::vector<Instance> instances_for(PropertyId id, const InstanceFamily& family) {
  validate_family(family);
  FamilyCache cache;
  return instances_impl(id, family, cache);
}

PropertyReport check_property(PropertyId id, const InstanceFamily& family) {
  validate_family(family);
  FamilyCache cache;
  return run_property(id, family, cache);
}

std::vector<PropertyReport> run_suite(const InstanceFamily& family) {
  validate_family(family);
  FamilyCache cache;
  std::vector<PropertyReport> out;
  for (PropertyId id : all_properties()) out.push_back(run_property(id, family, cache));
  return out;
}

std::string report_json(const PropertyReport& r, bool timing) {
  nlohmann::ordered_json j;
  j["schema"] = "gpif-report/1";
  j["kind"] = "property";
  j["property"] = property_name(r.id);
  j["instances"] = r.instances;
  j["pass"] = r.pass;
  if (!r.pass) {
    j["assertion"] = r.assertion;
    j["detail"] = r.detail;
    j["counterexample"] = r.counterexample;
  }
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

std::string report_text(const PropertyReport& r, bool timing) {
  std::string out = std::string(r.pass ? "PASS  " : "FAIL  ") + std::string(property_name(r.id)) +
                    "  instances=" + std::to_string(r.instances);
  if (timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "  time=%.3fs", r.wall_seconds);
    out += buf;
  }
  if (!r.pass) {
    out += "\n  assertion: " + r.assertion + ": " + r.detail + "\n  counterexample:\n";
    std::size_t pos = 0;
    while (pos < r.counterexample.size()) {
      const auto nl = r.counterexample.find('\n', pos);
      out += "    " + r.counterexample.substr(pos, nl - pos) + "\n";
      pos = nl == std::string::npos ? r.counterexample.size() : nl + 1;
    }
    if (out.back() == '\n') out.pop_back();
  }
  return out;
}

}  // namespace gpif::props
