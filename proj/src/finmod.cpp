#include "gpif/finmod.hpp"

#include <algorithm>
#include <atomic>
#include <map>

namespace gpif::finmod {

namespace testing {

namespace {
std::atomic<int> g_colon_mutation{0};
}

ColonMutation::ColonMutation() { g_colon_mutation.fetch_add(1); }
ColonMutation::~ColonMutation() { g_colon_mutation.fetch_sub(1); }
bool colon_mutation_active() { return g_colon_mutation.load() > 0; }

}  // namespace testing

namespace {

void require_same_module(const Submodule& a, const Submodule& b) {
  if (!same_module(a.module(), b.module())) throw DomainError("submodules of different modules");
}

void require_same_ring(const ModulePtr& m, const FiniteIdeal& a) {
  if (!finring::same_ring(m->ring(), a.ring())) throw DomainError("ideal and module live over different rings");
}

std::vector<PrimeIdealFin> maximal_elements(const std::vector<PrimeIdealFin>& primes) {
  std::vector<PrimeIdealFin> out;
  for (const auto& p : primes) {
    const bool dominated = std::any_of(primes.begin(), primes.end(), [&](const PrimeIdealFin& q) {
      return !(q == p) && p.ideal().is_subset_of(q.ideal());
    });
    if (!dominated) out.push_back(p);
  }
  return out;
}

PrimeIdealFin choose_prime(const std::vector<PrimeIdealFin>& maximal, const TieBreak& tie) {
  if (tie.kind == TieBreak::Kind::Given) {
    for (const auto& want : tie.preferred) {
      for (const auto& p : maximal) {
        if (p.ideal() == want) return p;
      }
    }
  }
  return maximal.front();  // already in prime order
}

}  // namespace

ModulePtr build_module(const RingPtr& ring, std::size_t rank, std::vector<std::vector<Elem>> relations) {
  return FiniteModule::present(ring, rank, std::move(relations));
}

Submodule colon_submodule(const Submodule& n, const FiniteIdeal& a, const Submodule& top) {
  require_same_module(n, top);
  const auto& m = n.module();
  require_same_ring(m, a);
  const auto gens = a.generators();
  Submodule out(m, kernels::colon_scan(*m, top.bits(), n.bits(), gens));
  if (testing::colon_mutation_active() && top.is_whole() && !out.is_whole()) {
    const Bits missing = ~out.bits();
    auto gens_out = out.generators();
    gens_out.push_back(static_cast<MElem>(missing.find_first()));
    out = submodule_closure(m, gens_out);
  }
  return out;
}

Submodule colon_submodule(const Submodule& n, const FiniteIdeal& a) {
  return colon_submodule(n, a, Submodule::whole(n.module()));
}

FiniteIdeal annihilator_of(MElem m, const Submodule& n) {
  if (m >= n.module()->size()) throw DomainError("element is not in the module");
  return FiniteIdeal(n.module()->ring(), kernels::annihilator(*n.module(), m, n.bits()));
}

std::vector<PrimeIdealFin> associated_primes(const Submodule& top, const Submodule& n) {
  require_same_module(top, n);
  const auto& ring = top.module()->ring();
  const auto& candidates = ring->prime_bits();
  const auto hit = kernels::associated_prime_scan(*top.module(), top.bits(), n.bits(), candidates);
  std::vector<PrimeIdealFin> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (hit[i]) out.push_back(PrimeIdealFin::known_prime(FiniteIdeal(ring, candidates[i])));
  }
  return out;
}

std::vector<PrimeIdealFin> associated_primes(const ModulePtr& m, const Submodule& n) {
  return associated_primes(Submodule::whole(m), n);
}

Submodule regular_prime_extension(const Submodule& top, const Submodule& n, const PrimeIdealFin& p) {
  require_same_module(top, n);
  if (top.is_subset_of(n)) throw DomainError("regular prime extension of N inside N itself");
  const auto ass = associated_primes(top, n);
  if (std::find(ass.begin(), ass.end(), p) == ass.end()) {
    throw DomainError(p.to_string() + " is not an associated prime of M/N");
  }
  const auto maximal = maximal_elements(ass);
  if (std::find(maximal.begin(), maximal.end(), p) == maximal.end()) {
    throw DomainError(p.to_string() + " is not maximal in Ass(M/N)");
  }
  Submodule k = colon_submodule(n, p.ideal(), top);
  if (k.is_subset_of(n)) throw DomainError("regular extension did not grow (colon fault)");
  return k;
}

// ------------------------------------------------------------ RpeFiltration

RpeFiltration::RpeFiltration(Submodule top, Submodule base, std::vector<FiltrationStep> steps, TieBreak::Kind used)
    : top_(std::move(top)), base_(std::move(base)), steps_(std::move(steps)), used_(used) {}

std::vector<PrimeIdealFin> RpeFiltration::primes() const {
  std::vector<PrimeIdealFin> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back(s.prime);
  return out;
}

void RpeFiltration::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("invalid RPE filtration: " + what); };
  if (steps_.empty()) fail("no steps");
  if (!(steps_.back().sub == top_)) fail("last module is not the ambient module");
  for (std::size_t i = 1; i <= steps_.size(); ++i) {
    const Submodule& prev = at(i - 1);
    const Submodule& cur = at(i);
    if (!prev.is_subset_of(cur) || prev == cur) fail("inclusion " + std::to_string(i) + " is not strict");
    const auto maximal = maximal_elements(associated_primes(top_, prev));
    if (std::find(maximal.begin(), maximal.end(), steps_[i - 1].prime) == maximal.end()) {
      fail("prime " + std::to_string(i) + " is not maximal in Ass");
    }
    if (!(colon_submodule(prev, steps_[i - 1].prime.ideal(), top_) == cur)) {
      fail("step " + std::to_string(i) + " is not the colon of its predecessor");
    }
  }
}

std::string RpeFiltration::to_string() const {
  std::string out = base_.to_string();
  for (const auto& s : steps_) out += " -" + s.prime.to_string() + "-> " + s.sub.to_string();
  return out;
}

RpeFiltration rpe_filtration(const Submodule& top, const Submodule& n, const TieBreak& tie) {
  require_same_module(top, n);
  if (!n.is_subset_of(top)) throw DomainError("N is not contained in M");
  if (top == n) throw DomainError("N = M: the factorization is defined only for proper submodules");
  std::vector<FiltrationStep> steps;
  Submodule current = n;
  while (!(current == top)) {
    const auto ass = associated_primes(top, current);
    if (ass.empty()) throw DomainError("empty Ass(M/N) for a proper submodule");
    const PrimeIdealFin p = choose_prime(maximal_elements(ass), tie);
    Submodule next = colon_submodule(current, p.ideal(), top);
    if (next.is_subset_of(current)) throw DomainError("regular extension did not grow (colon fault)");
    steps.push_back(FiltrationStep{p, next});
    current = std::move(next);
  }
  return RpeFiltration(top, n, std::move(steps), tie.kind);
}

RpeFiltration rpe_filtration(const ModulePtr& m, const Submodule& n, const TieBreak& tie) {
  return rpe_filtration(Submodule::whole(m), n, tie);
}

// ------------------------------------------------------- PrimeFactorization

PrimeFactorization PrimeFactorization::from_primes(const std::vector<PrimeIdealFin>& primes) {
  PrimeFactorization out;
  for (const auto& p : primes) {
    auto it = std::find_if(out.factors_.begin(), out.factors_.end(), [&](const auto& f) { return f.first == p; });
    if (it == out.factors_.end()) {
      out.factors_.emplace_back(p, 1);
    } else {
      ++it->second;
    }
  }
  std::sort(out.factors_.begin(), out.factors_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

unsigned PrimeFactorization::exponent_of(const FiniteIdeal& p) const {
  for (const auto& [q, e] : factors_) {
    if (q.ideal() == p) return e;
  }
  return 0;
}

unsigned PrimeFactorization::total_degree() const {
  unsigned d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

PrimeFactorization operator*(const PrimeFactorization& a, const PrimeFactorization& b) {
  std::vector<PrimeIdealFin> all;
  for (const auto* side : {&a, &b}) {
    for (const auto& [p, e] : side->factors_) all.insert(all.end(), e, p);
  }
  return PrimeFactorization::from_primes(all);
}

FiniteIdeal PrimeFactorization::product_ideal(const RingPtr& ring) const {
  FiniteIdeal out = finring::unit_ideal(ring);
  for (const auto& [p, e] : factors_) out = finring::ideal_product(out, finring::ideal_power(p.ideal(), e));
  return out;
}

std::string PrimeFactorization::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += " * ";
    out += p.to_string() + "^" + std::to_string(e);
  }
  return out;
}

PrimeFactorization factorize(const Submodule& top, const Submodule& n) {
  return PrimeFactorization::from_primes(rpe_filtration(top, n).primes());
}

PrimeFactorization factorize(const ModulePtr& m, const Submodule& n) { return factorize(Submodule::whole(m), n); }

// ---------------------------------------------------------------- direct sum

std::pair<ModulePtr, Submodule> direct_sum(const std::vector<ModulePtr>& modules, const std::vector<Submodule>& subs) {
  if (modules.size() < 2) throw DomainError("direct sum needs at least two summands");
  if (modules.size() != subs.size()) throw DomainError("one submodule per summand is required");
  for (std::size_t i = 0; i < modules.size(); ++i) {
    if (!same_module(modules[i], subs[i].module())) throw DomainError("submodule " + std::to_string(i) + " is not in its summand");
  }
  ModulePtr sum = FiniteModule::direct_sum(modules);
  Bits bits = sum->empty_set();
  std::vector<std::vector<MElem>> parts;
  for (const auto& s : subs) parts.push_back(s.elements());
  std::vector<std::size_t> idx(parts.size(), 0);
  while (true) {
    std::size_t label = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) label = label * modules[i]->size() + parts[i][idx[i]];
    bits.set(label);
    std::size_t k = parts.size();
    while (k > 0) {
      --k;
      if (++idx[k] < parts[k].size()) break;
      idx[k] = 0;
      if (k == 0) return {sum, Submodule(sum, std::move(bits))};
    }
  }
}

// ------------------------------------------------------------- interchange

RpeFiltration interchange_step(const RpeFiltration& f, std::size_t i) {
  if (i < 1 || i >= f.length()) throw DomainError("interchange index out of range");
  const PrimeIdealFin& pi = f.steps()[i - 1].prime;
  const PrimeIdealFin& pnext = f.steps()[i].prime;
  if (pnext.ideal().is_subset_of(pi.ideal())) {
    throw DomainError("cannot interchange: " + pnext.to_string() + " is contained in " + pi.to_string());
  }
  auto steps = f.steps();
  Submodule k = colon_submodule(f.at(i - 1), pnext.ideal(), f.top());
  steps[i - 1] = FiltrationStep{pnext, std::move(k)};
  steps[i] = FiltrationStep{pi, f.steps()[i].sub};
  RpeFiltration out(f.top(), f.base(), std::move(steps), TieBreak::Kind::Given);
  out.validate();
  return out;
}

RpeFiltration reorder_filtration(const Submodule& top, const Submodule& n, const std::vector<FiniteIdeal>& order) {
  RpeFiltration f = rpe_filtration(top, n);
  const auto fact = PrimeFactorization::from_primes(f.primes());
  bool matches = order.size() == fact.factors().size();
  for (std::size_t i = 0; i < order.size() && matches; ++i) {
    matches = fact.exponent_of(order[i]) > 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (order[j] == order[i]) matches = false;
    }
  }
  if (!matches) throw DomainError("target order does not list the distinct primes of P_M(N)");
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (order[i].is_subset_of(order[j])) throw DomainError("target order must satisfy p_i ⊄ p_j for i < j");
    }
  }
  auto rank = [&](const PrimeIdealFin& p) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), p.ideal()) - order.begin());
  };
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t i = 1; i < f.length(); ++i) {
      if (rank(f.steps()[i - 1].prime) > rank(f.steps()[i].prime)) {
        f = interchange_step(f, i);
        swapped = true;
      }
    }
  }
  return f;
}

RpeFiltration reorder_filtration(const ModulePtr& m, const Submodule& n, const std::vector<FiniteIdeal>& order) {
  return reorder_filtration(Submodule::whole(m), n, order);
}

}  // namespace gpif::finmod
