#pragma once

// Finite modules R^g / (relation rows) and their direct sums, with elements
// enumerated as indices 0..|M|-1 (0 is the zero element).

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gpif/finring.hpp"

namespace gpif::finmod {

using finring::Bits;
using finring::Elem;
using finring::RingPtr;
using MElem = std::uint32_t;

inline constexpr std::size_t kMaxModuleSize = 4096;

/// One presented summand R^g / S. Cosets are numbered by their least
/// representative tuple in lexicographic label order.
struct Presentation {
  std::size_t rank = 0;
  std::vector<std::vector<Elem>> relations;
  std::size_t size = 0;
  std::vector<std::uint32_t> class_of_code;  // |R|^g entries
  std::vector<Elem> reps;                    // size × rank, canonical representatives
};

class FiniteModule;
using ModulePtr = std::shared_ptr<const FiniteModule>;

class FiniteModule {
 public:
  /// R^rank modulo the submodule spanned by `relations`. Throws LimitError
  /// when |R|^rank exceeds kMaxModuleSize.
  static ModulePtr present(const RingPtr& ring, std::size_t rank, std::vector<std::vector<Elem>> relations);
  /// Componentwise direct sum. Throws on ring mismatch or size overflow.
  static ModulePtr direct_sum(std::span<const ModulePtr> parts);

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return size_; }
  /// Sum of component ranks: the length of element tuples.
  std::size_t rank() const { return rank_; }
  const std::vector<std::shared_ptr<const Presentation>>& components() const { return comps_; }

  MElem add(MElem a, MElem b) const;
  MElem neg(MElem a) const;
  MElem act(Elem r, MElem a) const;

  /// Image of a tuple in R^rank (entries taken modulo the ring).
  MElem from_tuple(std::span<const Elem> tuple) const;
  /// Canonical representative tuple.
  std::vector<Elem> to_tuple(MElem a) const;
  /// "[a,b]" with ring element labels.
  std::string element_to_string(MElem a) const;

  Bits empty_set() const { return Bits(size_); }
  Bits all_set() const;

 private:
  FiniteModule(RingPtr ring, std::vector<std::shared_ptr<const Presentation>> comps);

  RingPtr ring_;
  std::vector<std::shared_ptr<const Presentation>> comps_;
  std::size_t size_ = 1;
  std::size_t rank_ = 0;
  // precomputed tables when small enough, otherwise computed per call
  std::vector<MElem> add_table_;
  std::vector<MElem> act_table_;
  std::vector<MElem> neg_table_;

  MElem add_slow(MElem a, MElem b) const;
  MElem act_slow(Elem r, MElem a) const;
};

bool same_module(const ModulePtr& a, const ModulePtr& b);

/// A submodule, stored as the set of its elements.
class Submodule {
 public:
  /// Trusts that `bits` is closed; use submodule_closure otherwise.
  Submodule(ModulePtr module, Bits bits);

  static Submodule whole(const ModulePtr& m);
  static Submodule zero(const ModulePtr& m);

  const ModulePtr& module() const { return module_; }
  const Bits& bits() const { return bits_; }
  std::size_t size() const { return bits_.count(); }
  bool contains(MElem x) const { return bits_.test(x); }
  bool is_subset_of(const Submodule& o) const { return bits_.is_subset_of(o.bits_); }
  bool is_whole() const { return bits_.all(); }
  std::vector<MElem> elements() const;
  /// A small generating set: greedy over elements in index order.
  std::vector<MElem> generators() const;
  /// "{[0,0],[2,0]}" style element list for small submodules, generator
  /// span otherwise.
  std::string to_string() const;

  friend bool operator==(const Submodule& a, const Submodule& b) { return a.bits_ == b.bits_; }

 private:
  ModulePtr module_;
  Bits bits_;
};

Submodule submodule_closure(const ModulePtr& m, std::span<const MElem> gens);

}  // namespace gpif::finmod
