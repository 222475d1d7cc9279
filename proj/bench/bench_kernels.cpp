// Serial reference vs OpenMP paths of the element-scan kernels.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include "gpif/finmod.hpp"
#include "gpif/kernels.hpp"

namespace {

using namespace gpif;

struct Fixture {
  finmod::ModulePtr m;
  finmod::Submodule n;
  std::vector<finring::Elem> gens;  // generators of the maximal ideal
  std::vector<finring::Bits> primes;

  // (Z/n)^rank over N spanned by one mixed element
  Fixture(unsigned modulus, std::size_t rank)
      : m(finmod::build_module(finring::FiniteRing::build(finring::RingSpec::zmod(modulus)), rank, {})),
        n(finmod::Submodule::zero(m)) {
    const auto& ring = m->ring();
    std::vector<finring::Elem> t(rank, 0);
    t[0] = 2;
    const finmod::MElem g = m->from_tuple(t);
    n = finmod::submodule_closure(m, std::span<const finmod::MElem>(&g, 1));
    primes = ring->prime_bits();
    const auto p = finring::primes(ring).front();
    gens = p.ideal().generators();
  }
};

const Fixture& fixture(int which) {
  static const Fixture small(16, 2);  // 256 elements
  static const Fixture big(16, 3);    // 4096 elements
  static const Fixture mixed(12, 3);  // 1728 elements, two primes
  switch (which) {
    case 0: return small;
    case 1: return big;
    default: return mixed;
  }
}

kernels::Exec exec_of(const benchmark::State& s) {
  return s.range(1) ? kernels::Exec::Parallel : kernels::Exec::Serial;
}

void BM_ColonScan(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto top = f.m->all_set();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::colon_scan(*f.m, top, f.n.bits(), f.gens, exec_of(state)));
  }
  state.SetLabel(std::to_string(f.m->size()) + (state.range(1) ? " elems, parallel" : " elems, serial"));
}

void BM_AssScan(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto top = f.m->all_set();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::associated_prime_scan(*f.m, top, f.n.bits(), f.primes, exec_of(state)));
  }
  state.SetLabel(std::to_string(f.m->size()) + (state.range(1) ? " elems, parallel" : " elems, serial"));
}

void BM_Factorize(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto saved = kernels::default_exec();
  kernels::set_default_exec(exec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(finmod::factorize(f.m, f.n));
  kernels::set_default_exec(saved);
  state.SetLabel(std::to_string(f.m->size()) + (state.range(1) ? " elems, parallel" : " elems, serial"));
}

}  // namespace

BENCHMARK(BM_ColonScan)->ArgsProduct({{0, 1, 2}, {0, 1}});
BENCHMARK(BM_AssScan)->ArgsProduct({{0, 1, 2}, {0, 1}});
BENCHMARK(BM_Factorize)->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
