#pragma once

// Executable checks for the structural results about RPE filtrations and
// prime factorizations, run over enumerated or sampled instance families.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gpif/finmod.hpp"

namespace gpif::props {

using finmod::Elem;
using finmod::ModulePtr;
using finmod::Submodule;
using finring::RingPtr;
using finring::RingSpec;

enum class PropertyId {
  UniqueMultiset,
  AssChain,
  ColonChar,
  FactorProduct,
  Interchange,
  Reorder,
  PowerDistinct,
  SelfFactorIff,
  MinimalExponent,
  DsumRegular,
  DsumMax,
  ExistIff,
  ObstructionSound,
};

const std::vector<PropertyId>& all_properties();
/// "UNIQUE-MULTISET" etc.
std::string_view property_name(PropertyId id);
std::optional<PropertyId> parse_property(std::string_view name);

/// Shared, cached ring per spec (ring construction verifies all axioms).
RingPtr ring_for(const RingSpec& spec);

/// One (M, N) pair: M = R^rank / span(relations), N = span(sub_gens).
struct ModuleCase {
  RingSpec ring_spec;
  std::size_t rank = 0;
  std::vector<std::vector<Elem>> relations;
  std::vector<std::vector<Elem>> sub_gens;
  ModulePtr module;
  Submodule sub;

  /// Builds module and submodule. Throws on bad input.
  static ModuleCase make(const RingSpec& ring, std::size_t rank, std::vector<std::vector<Elem>> relations,
                         std::vector<std::vector<Elem>> sub_gens);
};

/// Prime powers p_1^(r_1), ..., p_k^(r_k) of one ring, primes given by
/// generators.
struct PowerCase {
  RingSpec ring_spec;
  std::vector<std::pair<std::vector<Elem>, unsigned>> powers;
};

/// Either one or more module cases over a shared ring, or a power case.
using Instance = std::variant<std::vector<ModuleCase>, PowerCase>;

struct Failure {
  std::string assertion;  // short tag, stable across replays
  std::string detail;
};

/// Runs one property on one instance. Engine errors count as failures
/// tagged "exception".
std::optional<Failure> check_instance(PropertyId id, const Instance& inst);

/// Standalone script that replays `inst` through `query check ... on ...`.
std::string instance_script(PropertyId id, const Instance& inst);

struct InstanceFamily {
  std::vector<RingSpec> rings;
  std::size_t cap = 64;       // largest |M| (and |R| for ring-level cases)
  std::size_t samples = 0;    // used when !exhaustive
  std::uint64_t seed = 0;
  bool exhaustive = true;

  /// Z/n for n in 2..16, 18, 24, 27, 32; GF(2,3,5,7); Z/a x Z/b with
  /// a <= b and ab <= 64.
  static InstanceFamily default_family();
  static InstanceFamily of_rings(std::vector<RingSpec> rings);
};

struct PropertyReport {
  PropertyId id{};
  std::size_t instances = 0;
  bool pass = true;
  std::string assertion;
  std::string detail;
  std::string counterexample;  // DSL script, empty when passing
  double wall_seconds = 0.0;
};

/// All (M, N) cases of the family: exhaustive mode enumerates relation
/// submodules spanned by at most two rows of R^g (g = 1, 2) with
/// 2 <= |M| <= cap, and for each M every proper cyclic submodule N.
std::vector<ModuleCase> module_cases(const InstanceFamily& family);

/// Instances a property would check on the family, in canonical order.
std::vector<Instance> instances_for(PropertyId id, const InstanceFamily& family);

/// Throws ConfigError for an empty or out-of-bounds family.
PropertyReport check_property(PropertyId id, const InstanceFamily& family);
std::vector<PropertyReport> run_suite(const InstanceFamily& family);

/// Line-delimited JSON record.
std::string report_json(const PropertyReport& r, bool timing);
std::string report_text(const PropertyReport& r, bool timing);

}  // namespace gpif::props
