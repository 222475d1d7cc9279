#include "gpif/kernels.hpp"

#include <atomic>

#include <omp.h>

namespace gpif::kernels {

namespace {

std::atomic<Exec> g_default_exec{Exec::Parallel};

// Below this many elements the fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 256;

bool in_colon(const FiniteModule& m, MElem x, const Bits& n, std::span<const Elem> gens) {
  for (Elem g : gens) {
    if (!n.test(m.act(g, x))) return false;
  }
  return true;
}

}  // namespace

Exec default_exec() { return g_default_exec.load(std::memory_order_relaxed); }
void set_default_exec(Exec exec) { g_default_exec.store(exec, std::memory_order_relaxed); }

Bits colon_scan(const FiniteModule& m, const Bits& top, const Bits& n, std::span<const Elem> ideal_gens, Exec exec) {
  const auto size = static_cast<std::int64_t>(m.size());
  Bits out = m.empty_set();
  if (exec == Exec::Serial || m.size() < kParallelThreshold) {
    for (std::int64_t x = 0; x < size; ++x) {
      if (top.test(x) && in_colon(m, static_cast<MElem>(x), n, ideal_gens)) out.set(x);
    }
    return out;
  }
  std::vector<char> flags(m.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < size; ++x) {
    flags[x] = top.test(x) && in_colon(m, static_cast<MElem>(x), n, ideal_gens);
  }
  for (std::int64_t x = 0; x < size; ++x) {
    if (flags[x]) out.set(x);
  }
  return out;
}

Bits annihilator(const FiniteModule& m, MElem x, const Bits& n) {
  const auto& ring = *m.ring();
  Bits out(ring.size());
  for (std::size_t r = 0; r < ring.size(); ++r) {
    if (n.test(m.act(static_cast<Elem>(r), x))) out.set(r);
  }
  return out;
}

std::vector<char> associated_prime_scan(const FiniteModule& m, const Bits& top, const Bits& n,
                                        std::span<const Bits> prime_candidates, Exec exec) {
  const auto size = static_cast<std::int64_t>(m.size());
  const std::size_t k = prime_candidates.size();
  std::vector<char> hit(k, 0);
  const std::size_t rsize = m.ring()->size();
  // (n : x) == candidate, compared element by element without building (n : x)
  auto matches = [&](MElem x, const Bits& cand) {
    for (std::size_t r = 0; r < rsize; ++r) {
      if (n.test(m.act(static_cast<Elem>(r), x)) != cand.test(r)) return false;
    }
    return true;
  };
  auto visit = [&](std::int64_t x, std::vector<char>& local) {
    if (!top.test(x) || n.test(x)) return;
    for (std::size_t i = 0; i < k; ++i) {
      if (matches(static_cast<MElem>(x), prime_candidates[i])) {
        local[i] = 1;
        break;
      }
    }
  };
  if (exec == Exec::Serial || m.size() < kParallelThreshold) {
    for (std::int64_t x = 0; x < size; ++x) visit(x, hit);
    return hit;
  }
#pragma omp parallel
  {
    std::vector<char> local(k, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t x = 0; x < size; ++x) visit(x, local);
#pragma omp critical(gpif_ass_merge)
    for (std::size_t i = 0; i < k; ++i) hit[i] = static_cast<char>(hit[i] | local[i]);
  }
  return hit;
}

}  // namespace gpif::kernels
