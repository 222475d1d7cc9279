#pragma once

// Regular prime extensions, RPE filtrations and generalized prime ideal
// factorizations of submodules of finite modules.
//
// Every operation works relative to an ambient submodule `top` of one
// enumerated module, so that P_K(N) for an intermediate K needs no new
// module. Overloads taking a ModulePtr use the whole module as `top`.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpif/kernels.hpp"
#include "gpif/module.hpp"

namespace gpif::finmod {

using finring::FiniteIdeal;
using finring::PrimeIdealFin;

ModulePtr build_module(const RingPtr& ring, std::size_t rank, std::vector<std::vector<Elem>> relations);

/// {x ∈ top : a·x ⊆ n}. Always a submodule of top containing n ∩ top.
Submodule colon_submodule(const Submodule& n, const FiniteIdeal& a, const Submodule& top);
Submodule colon_submodule(const Submodule& n, const FiniteIdeal& a);

/// (n : m) = {r ∈ R : r·m ∈ n}
FiniteIdeal annihilator_of(MElem m, const Submodule& n);

/// Ass(top/n), sorted by the prime order; empty iff n ⊇ top.
std::vector<PrimeIdealFin> associated_primes(const Submodule& top, const Submodule& n);
std::vector<PrimeIdealFin> associated_primes(const ModulePtr& m, const Submodule& n);

/// (n : p) inside top. Requires n ⊊ top and p maximal in Ass(top/n);
/// throws DomainError otherwise.
Submodule regular_prime_extension(const Submodule& top, const Submodule& n, const PrimeIdealFin& p);

struct TieBreak {
  enum class Kind { Canonical, Given };
  Kind kind = Kind::Canonical;
  /// Preferred primes, most preferred first (Given only). Primes absent
  /// from the list fall back to the canonical choice.
  std::vector<FiniteIdeal> preferred;

  static TieBreak canonical() { return {}; }
  static TieBreak given(std::vector<FiniteIdeal> order) { return {Kind::Given, std::move(order)}; }
};

struct FiltrationStep {
  PrimeIdealFin prime;
  Submodule sub;
};

/// N = M_0 ⊊ M_1 ⊊ ... ⊊ M_n = top with M_i = (M_(i-1) : p_i).
class RpeFiltration {
 public:
  RpeFiltration(Submodule top, Submodule base, std::vector<FiltrationStep> steps, TieBreak::Kind used);

  const Submodule& top() const { return top_; }
  const Submodule& base() const { return base_; }
  const std::vector<FiltrationStep>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }
  TieBreak::Kind tie_break() const { return used_; }
  /// M_i for 0 <= i <= length (M_0 = base).
  const Submodule& at(std::size_t i) const { return i == 0 ? base_ : steps_[i - 1].sub; }
  std::vector<PrimeIdealFin> primes() const;

  /// Re-checks strict inclusions, M_i = (M_(i-1) : p_i), p_i maximal in
  /// Ass(top/M_(i-1)), and M_n = top. Throws DomainError on violation.
  void validate() const;

  std::string to_string() const;

 private:
  Submodule top_;
  Submodule base_;
  std::vector<FiltrationStep> steps_;
  TieBreak::Kind used_;
};

RpeFiltration rpe_filtration(const Submodule& top, const Submodule& n, const TieBreak& tie = TieBreak::canonical());
RpeFiltration rpe_filtration(const ModulePtr& m, const Submodule& n, const TieBreak& tie = TieBreak::canonical());

/// Product of primes as a sorted multiset.
class PrimeFactorization {
 public:
  PrimeFactorization() = default;
  static PrimeFactorization from_primes(const std::vector<PrimeIdealFin>& primes);

  const std::vector<std::pair<PrimeIdealFin, unsigned>>& factors() const { return factors_; }
  unsigned exponent_of(const FiniteIdeal& p) const;
  unsigned total_degree() const;
  bool empty() const { return factors_.empty(); }

  /// Multiset union (product of the two factorizations).
  friend PrimeFactorization operator*(const PrimeFactorization& a, const PrimeFactorization& b);
  friend bool operator==(const PrimeFactorization& a, const PrimeFactorization& b) = default;

  /// The ideal product ∏ p_i^(r_i) in R.
  FiniteIdeal product_ideal(const RingPtr& ring) const;

  /// "(2)^2 * (3)^1"
  std::string to_string() const;

 private:
  std::vector<std::pair<PrimeIdealFin, unsigned>> factors_;
};

/// P_top(n). Throws DomainError when n is not a proper submodule of top.
PrimeFactorization factorize(const Submodule& top, const Submodule& n);
PrimeFactorization factorize(const ModulePtr& m, const Submodule& n);

/// (⊕ M_i, ⊕ N_i). Needs at least two summands over one ring.
std::pair<ModulePtr, Submodule> direct_sum(const std::vector<ModulePtr>& modules, const std::vector<Submodule>& subs);

/// Swaps primes i and i+1 (1-based) by replacing M_i with
/// (M_(i-1) : p_(i+1)). Requires p_(i+1) ⊄ p_i.
RpeFiltration interchange_step(const RpeFiltration& f, std::size_t i);

/// Filtration whose primes appear grouped in `order` (distinct primes),
/// produced by bubbling interchange steps over the canonical filtration.
RpeFiltration reorder_filtration(const Submodule& top, const Submodule& n, const std::vector<FiniteIdeal>& order);
RpeFiltration reorder_filtration(const ModulePtr& m, const Submodule& n, const std::vector<FiniteIdeal>& order);

namespace testing {

/// Fault injection for mutation tests: while alive, colon submodules
/// computed inside the whole module gain one extra element.
class ColonMutation {
 public:
  ColonMutation();
  ~ColonMutation();
  ColonMutation(const ColonMutation&) = delete;
  ColonMutation& operator=(const ColonMutation&) = delete;
};

bool colon_mutation_active();

}  // namespace testing

}  // namespace gpif::finmod
