#pragma once

// Element scans behind the module engine. Every kernel has a serial
// reference path and an OpenMP path; both must return identical results.

#include <span>
#include <vector>

#include "gpif/module.hpp"

namespace gpif::kernels {

using finmod::Bits;
using finmod::Elem;
using finmod::FiniteModule;
using finmod::MElem;

enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec exec);

/// {x ∈ top : g·x ∈ n for every g in ideal_gens}
Bits colon_scan(const FiniteModule& m, const Bits& top, const Bits& n, std::span<const Elem> ideal_gens,
                Exec exec = default_exec());

/// (n : x) = {r ∈ R : r·x ∈ n} for one element.
Bits annihilator(const FiniteModule& m, MElem x, const Bits& n);

/// For every candidate prime (given as ring bitsets), whether it equals
/// (n : x) for some x ∈ top \ n.
std::vector<char> associated_prime_scan(const FiniteModule& m, const Bits& top, const Bits& n,
                                        std::span<const Bits> prime_candidates, Exec exec = default_exec());

}  // namespace gpif::kernels
